//! Immutable and declaration identifier sets.
//!
//! A full parser is not needed here: the rewrite rules only ask "may this
//! identifier be renamed?", which a token-level look at the surroundings
//! answers well enough. Each syntactic context is a named, configurable
//! entry so callers choose what counts as immutable.
//!
//! Declaration sites recognised for Java:
//! - `Type name` followed by `=`, `;`, `,`, `)`, `:`, `[` or `(` (locals,
//!   fields, parameters, for-each and catch variables, pattern bindings,
//!   method declarations). `Type` may be a primitive, an identifier, an
//!   array type or a closed generic type.
//! - class, interface, enum and record names.
//! - lambda parameters, both `x -> ..` and `(a, b) -> ..`.
//!
//! Methods annotated `@Override` are never declarations; their names go to
//! the immutable set because they are fixed by a supertype.
//!
//! Declaration sites recognised for Python:
//! - `def` and `class` names, and function parameters.
//! - assignment and augmented-assignment targets, including tuple/list
//!   unpacking and annotated assignments.
//! - `for` targets (statements and comprehensions), `as` targets outside
//!   imports, `lambda` parameters, walrus targets, `global`/`nonlocal`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{java, CodeToken, Language, TokenIndex, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown {language} immutable context `{name}`")]
    UnknownContext { language: Language, name: String },
    #[error("unknown language `{0}` in immutable types config")]
    UnknownLanguage(String),
    #[error("malformed immutable types config: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JavaContext {
    /// Every identifier in an `import ...;` statement.
    ImportDeclaration,
    /// Every identifier in a `package ...;` statement.
    PackageDeclaration,
    /// A name immediately followed by `(` that is not a declaration.
    MethodCall,
    /// A name after `.` that is not called.
    FieldAccess,
    /// A name after `@`.
    Annotation,
}

impl JavaContext {
    pub const ALL: [JavaContext; 5] = [
        JavaContext::ImportDeclaration,
        JavaContext::PackageDeclaration,
        JavaContext::MethodCall,
        JavaContext::FieldAccess,
        JavaContext::Annotation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            JavaContext::ImportDeclaration => "importDeclaration",
            JavaContext::PackageDeclaration => "packageDeclaration",
            JavaContext::MethodCall => "methodCall",
            JavaContext::FieldAccess => "fieldAccess",
            JavaContext::Annotation => "annotation",
        }
    }
}

impl FromStr for JavaContext {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        JavaContext::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::UnknownContext {
                language: Language::Java,
                name: s.to_owned(),
            })
    }
}

impl fmt::Display for JavaContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PythonContext {
    /// Every identifier in an `import` or `from ... import` statement.
    ImportAsName,
    /// A name after `.` (attribute access).
    Trailer,
    /// `name=` inside a call's argument list.
    KeywordArgument,
    /// A bare name immediately followed by `(`.
    Call,
    /// Every identifier of a decorator line.
    Decorator,
}

impl PythonContext {
    pub const ALL: [PythonContext; 5] = [
        PythonContext::ImportAsName,
        PythonContext::Trailer,
        PythonContext::KeywordArgument,
        PythonContext::Call,
        PythonContext::Decorator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PythonContext::ImportAsName => "import_as_name",
            PythonContext::Trailer => "trailer",
            PythonContext::KeywordArgument => "keyword_argument",
            PythonContext::Call => "call",
            PythonContext::Decorator => "decorator",
        }
    }
}

impl FromStr for PythonContext {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PythonContext::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::UnknownContext {
                language: Language::Python,
                name: s.to_owned(),
            })
    }
}

impl fmt::Display for PythonContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which syntactic contexts make an identifier immutable, per language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImmutableTypes {
    pub java: BTreeSet<JavaContext>,
    pub python: BTreeSet<PythonContext>,
}

/// The config shipped with the tool.
pub const DEFAULT_IMMUTABLE_TYPES: &str = include_str!("../../../../config/immutable_types.toml");

impl Default for ImmutableTypes {
    fn default() -> Self {
        ImmutableTypes::from_toml(DEFAULT_IMMUTABLE_TYPES).expect("bundled config is valid")
    }
}

impl ImmutableTypes {
    pub fn none() -> Self {
        ImmutableTypes {
            java: BTreeSet::new(),
            python: BTreeSet::new(),
        }
    }

    pub fn from_names(java: &[&str], python: &[&str]) -> Result<Self, ConfigError> {
        Ok(ImmutableTypes {
            java: java.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
            python: python.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
        })
    }

    /// Parse a config of the form
    ///
    /// ```toml
    /// java = ["importDeclaration", "methodCall"]
    /// python = ["import_as_name", "trailer"]
    /// ```
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: BTreeMap<String, Vec<String>> =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let mut out = ImmutableTypes::none();
        for (lang, names) in raw {
            let lang: Language = lang.parse().map_err(|_| ConfigError::UnknownLanguage(lang))?;
            for name in names {
                match lang {
                    Language::Java => {
                        out.java.insert(name.parse()?);
                    }
                    Language::Python => {
                        out.python.insert(name.parse()?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The two identifier sets the naming rewrite consults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentifierContext {
    pub immutable: BTreeSet<String>,
    pub declarations: BTreeSet<String>,
}

impl IdentifierContext {
    /// An identifier may be renamed unless it is immutable and not declared
    /// locally.
    pub fn is_renamable(&self, name: &str) -> bool {
        !self.immutable.contains(name) || self.declarations.contains(name)
    }
}

pub fn classify_identifiers(index: &TokenIndex, config: &ImmutableTypes) -> IdentifierContext {
    let sig: Vec<&CodeToken> = index.tokens().iter().filter(|t| !t.is_comment()).collect();
    let mut ctx = IdentifierContext::default();
    match index.language() {
        Language::Java => JavaScan::new(&sig).run(&config.java, &mut ctx),
        Language::Python => PyScan::new(&sig, index.chars()).run(&config.python, &mut ctx),
    }
    ctx
}

struct Toks<'a> {
    t: &'a [&'a CodeToken],
}

impl<'a> Toks<'a> {
    fn lx(&self, k: usize) -> &'a str {
        self.t.get(k).map_or("", |t| t.lexeme.as_str())
    }

    fn prev(&self, k: usize) -> &'a str {
        if k == 0 {
            ""
        } else {
            self.lx(k - 1)
        }
    }

    fn next(&self, k: usize) -> &'a str {
        self.lx(k + 1)
    }

    fn is_id(&self, k: usize) -> bool {
        self.t.get(k).is_some_and(|t| t.kind == TokenKind::Identifier)
    }

    fn kind(&self, k: usize) -> Option<TokenKind> {
        self.t.get(k).map(|t| t.kind)
    }

    fn len(&self) -> usize {
        self.t.len()
    }

    /// Index of the bracket matching the closer at `k`, scanning backwards.
    fn matching_open(&self, k: usize) -> Option<usize> {
        let mut depth = 0usize;
        for j in (0..=k).rev() {
            match self.lx(j) {
                ")" | "]" | "}" => depth += 1,
                "(" | "[" | "{" => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(j);
                    }
                }
                _ => {}
            }
        }
        None
    }

    /// Index of the bracket matching the opener at `k`, scanning forwards.
    fn matching_close(&self, k: usize) -> Option<usize> {
        let mut depth = 0usize;
        for j in k..self.len() {
            match self.lx(j) {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(j);
                    }
                }
                _ => {}
            }
        }
        None
    }
}

struct JavaScan<'a> {
    t: Toks<'a>,
    generic_close: Vec<bool>,
    in_import: Vec<bool>,
    in_package: Vec<bool>,
}

impl<'a> JavaScan<'a> {
    fn new(sig: &'a [&'a CodeToken]) -> Self {
        let t = Toks { t: sig };
        let n = t.len();
        let mut scan = JavaScan {
            t,
            generic_close: vec![false; n],
            in_import: vec![false; n],
            in_package: vec![false; n],
        };
        scan.mark_headers();
        scan.mark_generics();
        scan
    }

    fn mark_headers(&mut self) {
        let n = self.t.len();
        let mut k = 0;
        while k < n {
            let kw = self.t.lx(k);
            if self.t.kind(k) == Some(TokenKind::Keyword) && (kw == "import" || kw == "package") {
                let target = if kw == "import" {
                    &mut self.in_import
                } else {
                    &mut self.in_package
                };
                while k < n && self.t.lx(k) != ";" {
                    target[k] = true;
                    k += 1;
                }
            }
            k += 1;
        }
    }

    /// Mark `>`-family tokens that close a generic argument list.
    fn mark_generics(&mut self) {
        for k in 0..self.t.len() {
            if self.t.lx(k) != "<" {
                continue;
            }
            let before_ok = k > 0
                && (self.t.is_id(k - 1)
                    || self.t.prev(k) == "."
                    || matches!(
                        self.t.prev(k),
                        "public" | "private" | "protected" | "static" | "final" | "abstract"
                    ));
            if !before_ok {
                continue;
            }
            let mut depth: i32 = 1;
            let mut j = k + 1;
            while j < self.t.len() {
                let lx = self.t.lx(j);
                let allowed = self.t.is_id(j)
                    || matches!(lx, "," | "." | "?" | "&" | "[" | "]" | "extends" | "super")
                    || java::PRIMITIVE_TYPES.contains(&lx);
                match lx {
                    "<" => depth += 1,
                    ">" => depth -= 1,
                    ">>" => depth -= 2,
                    ">>>" => depth -= 3,
                    _ if allowed => {}
                    _ => break,
                }
                if depth <= 0 {
                    if depth == 0 || lx != ">" {
                        self.generic_close[j] = true;
                    }
                    break;
                }
                j += 1;
            }
        }
    }

    fn type_end(&self, k: usize) -> bool {
        let lx = self.t.lx(k);
        (self.t.is_id(k) && self.t.prev(k) != "@")
            || (self.t.kind(k) == Some(TokenKind::Keyword) && java::PRIMITIVE_TYPES.contains(&lx))
            || self.generic_close[k]
            || (lx == "]" && k > 0 && self.t.lx(k - 1) == "[")
    }

    fn is_typed_decl(&self, k: usize) -> bool {
        k > 0
            && self.t.is_id(k)
            && self.type_end(k - 1)
            && !self.in_import[k]
            && !self.in_package[k]
            && matches!(self.t.next(k), "=" | ";" | "," | ")" | ":" | "[" | "(")
    }

    fn has_override(&self, k: usize) -> bool {
        let mut j = k;
        while j > 0 {
            j -= 1;
            match self.t.lx(j) {
                ";" | "{" | "}" => return false,
                "Override" if j > 0 && self.t.lx(j - 1) == "@" => return true,
                _ => {}
            }
        }
        false
    }

    fn run(&self, contexts: &BTreeSet<JavaContext>, ctx: &mut IdentifierContext) {
        for k in 0..self.t.len() {
            if self.t.lx(k) == "->" && k > 0 {
                if self.t.is_id(k - 1) {
                    ctx.declarations.insert(self.t.lx(k - 1).to_owned());
                } else if self.t.lx(k - 1) == ")" {
                    if let Some(open) = self.t.matching_open(k - 1) {
                        for j in open + 1..k - 1 {
                            if self.t.is_id(j) && matches!(self.t.next(j), "," | ")") {
                                ctx.declarations.insert(self.t.lx(j).to_owned());
                            }
                        }
                    }
                }
            }
            if !self.t.is_id(k) {
                continue;
            }
            let name = self.t.lx(k);
            let prev = self.t.prev(k);
            let next = self.t.next(k);

            let class_like = matches!(prev, "class" | "interface" | "enum" | "record");
            let typed = self.is_typed_decl(k);
            if class_like {
                ctx.declarations.insert(name.to_owned());
            } else if typed {
                if next == "(" && self.has_override(k) {
                    ctx.immutable.insert(name.to_owned());
                } else {
                    ctx.declarations.insert(name.to_owned());
                }
            }

            let hit = |c: JavaContext| contexts.contains(&c);
            let immutable = (hit(JavaContext::ImportDeclaration) && self.in_import[k])
                || (hit(JavaContext::PackageDeclaration) && self.in_package[k])
                || (hit(JavaContext::MethodCall) && next == "(" && !typed && !class_like)
                || (hit(JavaContext::FieldAccess)
                    && prev == "."
                    && next != "("
                    && !self.in_import[k]
                    && !self.in_package[k])
                || (hit(JavaContext::Annotation) && prev == "@");
            if immutable {
                ctx.immutable.insert(name.to_owned());
            }
        }
    }
}

const PY_COMPOUND: &[&str] = &[
    "if", "elif", "else", "for", "while", "with", "try", "except", "finally", "def", "class",
    "async",
];

struct PyScan<'a> {
    t: Toks<'a>,
    /// Logical statements as half-open ranges over significant tokens.
    stmts: Vec<(usize, usize)>,
    /// Innermost open bracket enclosing each token.
    parent: Vec<Option<usize>>,
}

impl<'a> PyScan<'a> {
    fn new(sig: &'a [&'a CodeToken], chars: &[char]) -> Self {
        let t = Toks { t: sig };
        let n = t.len();
        let mut parent = vec![None; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut stmts = Vec::new();
        let mut stmt_start = 0;
        let mut lambdas = 0usize;
        let mut header = false;
        for k in 0..n {
            if k > 0 && stack.is_empty() {
                let gap_has_newline = {
                    let from = sig[k - 1].span.end;
                    let to = sig[k].span.start;
                    let mut found = false;
                    let mut i = from;
                    while i < to {
                        if chars[i] == '\\' {
                            // explicit line joining
                            i += if chars.get(i + 1) == Some(&'\r') && chars.get(i + 2) == Some(&'\n') {
                                3
                            } else {
                                2
                            };
                            continue;
                        }
                        if chars[i] == '\n' || chars[i] == '\r' {
                            found = true;
                            break;
                        }
                        i += 1;
                    }
                    found
                };
                let prev = t.lx(k - 1);
                let after_header_colon = prev == ":" && header && lambdas == 0 && k - 1 > stmt_start;
                if gap_has_newline || prev == ";" || after_header_colon {
                    if k > stmt_start {
                        stmts.push((stmt_start, k));
                    }
                    stmt_start = k;
                    lambdas = 0;
                }
            }
            if k == stmt_start {
                header = PY_COMPOUND.contains(&t.lx(k));
            }
            parent[k] = stack.last().copied();
            match t.lx(k) {
                "(" | "[" | "{" => stack.push(k),
                ")" | "]" | "}" => {
                    stack.pop();
                }
                "lambda" if stack.is_empty() => lambdas += 1,
                ":" if stack.is_empty() && lambdas > 0 => lambdas -= 1,
                _ => {}
            }
        }
        if n > stmt_start {
            stmts.push((stmt_start, n));
        }
        PyScan { t, stmts, parent }
    }

    fn is_call_paren(&self, open: usize) -> bool {
        open > 0
            && self.t.lx(open) == "("
            && (self.t.is_id(open - 1) || matches!(self.t.lx(open - 1), ")" | "]"))
    }

    /// True when every bracket enclosing `k` (up to `floor`, exclusive) is a
    /// plain tuple/list display rather than a call or subscript.
    fn only_display_brackets(&self, k: usize, floor: Option<usize>) -> bool {
        let mut p = self.parent[k];
        while p != floor {
            let Some(open) = p else { return true };
            if floor.is_some_and(|f| open < f) {
                return true;
            }
            let callish = open > 0
                && (self.t.is_id(open - 1)
                    || matches!(self.t.lx(open - 1), ")" | "]")
                    || self.t.kind(open - 1) == Some(TokenKind::Literal));
            if callish || self.t.lx(open) == "{" {
                return false;
            }
            p = self.parent[open];
        }
        true
    }

    fn binding_target(&self, j: usize, floor: Option<usize>) -> bool {
        self.t.is_id(j)
            && self.t.prev(j) != "."
            && !matches!(self.t.next(j), "." | "(" | "[")
            && self.only_display_brackets(j, floor)
    }

    fn run(&self, contexts: &BTreeSet<PythonContext>, ctx: &mut IdentifierContext) {
        let hit = |c: PythonContext| contexts.contains(&c);
        for &(s, e) in &self.stmts {
            let first = self.t.lx(s);
            let is_import = first == "import" || first == "from";
            if is_import {
                if hit(PythonContext::ImportAsName) {
                    for k in s..e {
                        if self.t.is_id(k) {
                            ctx.immutable.insert(self.t.lx(k).to_owned());
                        }
                    }
                }
                continue;
            }
            if first == "@" && hit(PythonContext::Decorator) {
                for k in s..e {
                    if self.t.is_id(k) {
                        ctx.immutable.insert(self.t.lx(k).to_owned());
                    }
                }
            }
            let def_at = if first == "def" {
                Some(s)
            } else if first == "async" && self.t.lx(s + 1) == "def" {
                Some(s + 1)
            } else {
                None
            };
            let mut param_paren = None;
            if let Some(d) = def_at {
                if self.t.is_id(d + 1) {
                    ctx.declarations.insert(self.t.lx(d + 1).to_owned());
                }
                if self.t.lx(d + 2) == "(" {
                    param_paren = Some(d + 2);
                    let close = self.t.matching_close(d + 2).unwrap_or(e);
                    for k in d + 3..close {
                        if self.t.is_id(k)
                            && self.parent[k] == Some(d + 2)
                            && matches!(self.t.prev(k), "(" | "," | "*" | "**")
                            && matches!(self.t.next(k), "," | ")" | "=" | ":")
                        {
                            ctx.declarations.insert(self.t.lx(k).to_owned());
                        }
                    }
                }
            }
            if first == "class" && self.t.is_id(s + 1) {
                ctx.declarations.insert(self.t.lx(s + 1).to_owned());
            }
            if first == "global" || first == "nonlocal" {
                for k in s + 1..e {
                    if self.t.is_id(k) {
                        ctx.declarations.insert(self.t.lx(k).to_owned());
                    }
                }
            }
            // annotated assignment `x: T = v`
            if self.t.is_id(s) && self.t.lx(s + 1) == ":" && !PY_COMPOUND.contains(&first) {
                ctx.declarations.insert(first.to_owned());
            }
            self.assignment_targets(s, e, ctx);

            for k in s..e {
                let lx = self.t.lx(k);
                match lx {
                    "for" => {
                        let depth_parent = self.parent[k];
                        let mut j = k + 1;
                        while j < e && !(self.t.lx(j) == "in" && self.parent[j] == depth_parent) {
                            if self.binding_target(j, depth_parent) {
                                ctx.declarations.insert(self.t.lx(j).to_owned());
                            }
                            j += 1;
                        }
                    }
                    "as" if self.t.is_id(k + 1) => {
                        ctx.declarations.insert(self.t.lx(k + 1).to_owned());
                    }
                    "lambda" => {
                        let lp = self.parent[k];
                        let mut j = k + 1;
                        while j < e && !(self.t.lx(j) == ":" && self.parent[j] == lp) {
                            if self.t.is_id(j)
                                && self.parent[j] == lp
                                && matches!(self.t.prev(j), "lambda" | "," | "*" | "**")
                            {
                                ctx.declarations.insert(self.t.lx(j).to_owned());
                            }
                            j += 1;
                        }
                    }
                    ":=" if k > 0 && self.t.is_id(k - 1) => {
                        ctx.declarations.insert(self.t.lx(k - 1).to_owned());
                    }
                    _ => {}
                }
                if !self.t.is_id(k) {
                    continue;
                }
                let prev = self.t.prev(k);
                let next = self.t.next(k);
                let immutable = (hit(PythonContext::Trailer) && prev == ".")
                    || (hit(PythonContext::KeywordArgument)
                        && next == "="
                        && self.parent[k].is_some_and(|p| self.is_call_paren(p))
                        && self.parent[k] != param_paren)
                    || (hit(PythonContext::Call)
                        && next == "("
                        && !matches!(prev, "def" | "class" | "."));
                if immutable {
                    ctx.immutable.insert(self.t.lx(k).to_owned());
                }
            }
        }
    }

    fn assignment_targets(&self, s: usize, e: usize, ctx: &mut IdentifierContext) {
        let top = self.parent[s];
        let is_assign_op = |lx: &str| {
            matches!(
                lx,
                "=" | "+=" | "-=" | "*=" | "/=" | "//=" | "%=" | "**=" | ">>=" | "<<=" | "&="
                    | "|=" | "^=" | "@="
            )
        };
        let eqs: Vec<usize> = (s..e)
            .filter(|&k| self.parent[k] == top && is_assign_op(self.t.lx(k)))
            .collect();
        let Some(&last) = eqs.last() else { return };
        // `x: T = v` binds only `x`, which the caller already recorded.
        if self.t.lx(s + 1) == ":" {
            return;
        }
        // Lambda defaults at statement level (`f = lambda x=1: x`) are not
        // assignment operators; stop at the first lambda.
        let limit = (s..last)
            .find(|&k| self.t.lx(k) == "lambda")
            .unwrap_or(last);
        for j in s..limit {
            if self.binding_target(j, top) {
                ctx.declarations.insert(self.t.lx(j).to_owned());
            }
        }
    }
}
