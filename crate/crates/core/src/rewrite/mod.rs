//! Semantic-preserving rewrite rules.
//!
//! Naming rules restyle identifiers (`N1`..`N6`); spacing rules insert one
//! space between two adjacent tokens of a configured bigram (`S1`..`S18`).
//! Each application returns the rewritten text together with an edit log of
//! `(pos, delta)` events expressed in original-text character offsets.

mod casing;
mod naming;
mod spacing;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lexer::{Language, LexError, TokenKind};

pub use casing::{convert_case, match_case_style, segments, CaseStyle, StyleError};
pub use naming::{apply_naming_rewrite, propagate_renames};
pub use spacing::apply_spacing_rewrite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Naming,
    Spacing,
}

/// `N1`..`N6` and `S1`..`S18`. Orders naming rules first, then by number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleId {
    pub kind: RuleKind,
    pub number: u8,
}

impl RuleId {
    pub fn new(kind: RuleKind, number: u8) -> Self {
        RuleId { kind, number }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            RuleKind::Naming => 'N',
            RuleKind::Spacing => 'S',
        };
        write!(f, "{prefix}{}", self.number)
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('N' | 'n') => RuleKind::Naming,
            Some('S' | 's') => RuleKind::Spacing,
            _ => return Err(format!("invalid rule id `{s}`")),
        };
        let number: u8 = chars
            .as_str()
            .parse()
            .map_err(|_| format!("invalid rule id `{s}`"))?;
        Ok(RuleId { kind, number })
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One side of a spacing bigram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenPattern {
    /// That exact operator or punctuation lexeme.
    Lexeme(String),
    /// Any operator- or punctuation-kind token.
    AnyOperator,
    Identifier,
    IdentifierOrOperator,
}

impl TokenPattern {
    fn parse(s: &str) -> TokenPattern {
        match s {
            "OP" => TokenPattern::AnyOperator,
            "ID" => TokenPattern::Identifier,
            "ID|OP" | "OP|ID" => TokenPattern::IdentifierOrOperator,
            other => TokenPattern::Lexeme(other.to_owned()),
        }
    }

    fn as_config_str(&self) -> &str {
        match self {
            TokenPattern::Lexeme(s) => s,
            TokenPattern::AnyOperator => "OP",
            TokenPattern::Identifier => "ID",
            TokenPattern::IdentifierOrOperator => "ID|OP",
        }
    }

    pub fn matches(&self, kind: TokenKind, lexeme: &str, exclude: &[String]) -> bool {
        let any_op = || kind.is_operator_like() && !exclude.iter().any(|e| e == lexeme);
        match self {
            TokenPattern::Lexeme(s) => kind.is_operator_like() && s == lexeme,
            TokenPattern::AnyOperator => any_op(),
            TokenPattern::Identifier => kind == TokenKind::Identifier,
            TokenPattern::IdentifierOrOperator => kind == TokenKind::Identifier || any_op(),
        }
    }
}

impl fmt::Display for TokenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_config_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleParams {
    Naming {
        source: CaseStyle,
        target: CaseStyle,
    },
    Spacing {
        first: TokenPattern,
        second: TokenPattern,
        exclude: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub id: RuleId,
    pub name: String,
    pub languages: Vec<Language>,
    pub params: RuleParams,
}

impl RewriteRule {
    pub fn kind(&self) -> RuleKind {
        self.id.kind
    }

    pub fn applies_to(&self, language: Language) -> bool {
        self.languages.contains(&language)
    }

    /// The edit type this rule's events carry.
    pub fn edit_type(&self) -> EditType {
        match self.kind() {
            RuleKind::Naming => EditType::Underscore,
            RuleKind::Spacing => EditType::Whitespace,
        }
    }

    /// Human-readable before/after surface form, e.g. `")." -> ") ."`.
    pub fn describe(&self) -> String {
        match &self.params {
            RuleParams::Naming { source, target } => format!("{source} -> {target}"),
            RuleParams::Spacing { first, second, .. } => {
                format!("{first}{second} -> {first} {second}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("malformed rule catalog: {0}")]
    Parse(String),
    #[error("rule {id}: {problem}")]
    Invalid { id: String, problem: String },
    #[error("unknown rule {0}")]
    Unknown(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    id: String,
    #[serde(default)]
    name: String,
    languages: Vec<Language>,
    source: Option<CaseStyle>,
    target: Option<CaseStyle>,
    first: Option<String>,
    second: Option<String>,
    exclude: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawCatalog {
    rule: Vec<RawRule>,
}

impl TryFrom<RawRule> for RewriteRule {
    type Error = RuleError;

    fn try_from(raw: RawRule) -> Result<Self, Self::Error> {
        let invalid = |problem: &str| RuleError::Invalid {
            id: raw.id.clone(),
            problem: problem.to_owned(),
        };
        let id: RuleId = raw.id.parse().map_err(|e: String| invalid(&e))?;
        if raw.languages.is_empty() {
            return Err(invalid("languages must be nonempty"));
        }
        let params = match id.kind {
            RuleKind::Naming => {
                if raw.first.is_some() || raw.second.is_some() || raw.exclude.is_some() {
                    return Err(invalid("naming rules take only source/target"));
                }
                match (raw.source, raw.target) {
                    (Some(source), Some(target)) if source != target => {
                        RuleParams::Naming { source, target }
                    }
                    (Some(_), Some(_)) => return Err(invalid("source and target must differ")),
                    _ => return Err(invalid("naming rules need source and target")),
                }
            }
            RuleKind::Spacing => {
                if raw.source.is_some() || raw.target.is_some() {
                    return Err(invalid("spacing rules take only first/second"));
                }
                match (&raw.first, &raw.second) {
                    (Some(f), Some(s)) => RuleParams::Spacing {
                        first: TokenPattern::parse(f),
                        second: TokenPattern::parse(s),
                        exclude: raw.exclude.clone().unwrap_or_default(),
                    },
                    _ => return Err(invalid("spacing rules need first and second")),
                }
            }
        };
        let mut languages = raw.languages;
        languages.sort();
        languages.dedup();
        Ok(RewriteRule {
            id,
            name: raw.name,
            languages,
            params,
        })
    }
}

pub const DEFAULT_RULES: &str = include_str!("../../../../config/rules.toml");

/// An ordered, validated set of rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleCatalog {
    rules: Vec<RewriteRule>,
}

impl Default for RuleCatalog {
    fn default() -> Self {
        RuleCatalog::from_toml(DEFAULT_RULES).expect("bundled rule catalog is valid")
    }
}

impl RuleCatalog {
    pub fn from_toml(text: &str) -> Result<Self, RuleError> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| RuleError::Parse(e.to_string()))?;
        let mut rules = raw
            .rule
            .into_iter()
            .map(RewriteRule::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        rules.sort_by_key(|r| r.id);
        if let Some(w) = rules.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(RuleError::Invalid {
                id: w[0].id.to_string(),
                problem: "duplicate id".into(),
            });
        }
        Ok(RuleCatalog { rules })
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn get(&self, id: RuleId) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn lookup(&self, id: &str) -> Result<&RewriteRule, RuleError> {
        let parsed: RuleId = id.parse().map_err(|_| RuleError::Unknown(id.to_owned()))?;
        self.get(parsed).ok_or_else(|| RuleError::Unknown(id.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditType {
    Underscore,
    Whitespace,
}

/// One inserted (`delta = +1`) or removed (`delta = -1`) character, at a
/// character offset of the original text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EditEvent {
    pub pos: usize,
    pub delta: i8,
    pub edit_type: EditType,
}

impl EditEvent {
    pub fn insert(pos: usize, edit_type: EditType) -> Self {
        EditEvent {
            pos,
            delta: 1,
            edit_type,
        }
    }

    pub fn delete(pos: usize, edit_type: EditType) -> Self {
        EditEvent {
            pos,
            delta: -1,
            edit_type,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteResult {
    pub rewritten: String,
    pub events: Vec<EditEvent>,
    /// Old identifier to new identifier; always empty for spacing rules.
    pub renames: BTreeMap<String, String>,
}

impl RewriteResult {
    pub fn unchanged(source: &str) -> Self {
        RewriteResult {
            rewritten: source.to_owned(),
            events: Vec::new(),
            renames: BTreeMap::new(),
        }
    }

    pub fn is_affected(&self, source: &str) -> bool {
        self.rewritten != source
    }
}

/// Replay an edit log against `original`: insert `_` or ` ` for `+1`
/// events, drop the character at `pos` for `-1` events. Casing changes are
/// not edit events, so for naming rules the replay equals the rewritten
/// text up to letter case.
pub fn replay_events(original: &str, events: &[EditEvent]) -> String {
    let chars: Vec<char> = original.chars().collect();
    let mut out = String::with_capacity(original.len() + events.len());
    let mut next = events.iter().peekable();
    for (i, &c) in chars.iter().enumerate() {
        let mut keep = true;
        while let Some(ev) = next.next_if(|ev| ev.pos == i) {
            if ev.delta > 0 {
                out.push(match ev.edit_type {
                    EditType::Underscore => '_',
                    EditType::Whitespace => ' ',
                });
            } else {
                keep = false;
            }
        }
        if keep {
            out.push(c);
        }
    }
    for ev in next {
        if ev.delta > 0 {
            out.push(match ev.edit_type {
                EditType::Underscore => '_',
                EditType::Whitespace => ' ',
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule {rule} is a {actual:?} rule, expected {expected:?}")]
    KindMismatch {
        rule: RuleId,
        expected: RuleKind,
        actual: RuleKind,
    },
    #[error("rule {rule} does not apply to {language}")]
    LanguageMismatch { rule: RuleId, language: Language },
    #[error(transparent)]
    Lex(#[from] LexError),
}

/// Apply any rule, dispatching on its kind.
pub fn apply_rule(
    index: &crate::lexer::TokenIndex,
    context: &crate::lexer::IdentifierContext,
    rule: &RewriteRule,
) -> Result<RewriteResult, RewriteError> {
    match rule.kind() {
        RuleKind::Naming => apply_naming_rewrite(index, context, rule),
        RuleKind::Spacing => apply_spacing_rewrite(index, rule),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_all_rules() {
        let cat = RuleCatalog::default();
        assert_eq!(cat.rules().len(), 24);
        let ids: Vec<String> = cat.rules().iter().map(|r| r.id.to_string()).collect();
        assert_eq!(ids[0], "N1");
        assert_eq!(ids[6], "S1");
        assert_eq!(ids[23], "S18");
        let naming = cat.rules().iter().filter(|r| r.kind() == RuleKind::Naming).count();
        assert_eq!(naming, 6);
    }

    #[test]
    fn language_markings() {
        let cat = RuleCatalog::default();
        let langs = |id: &str| cat.lookup(id).unwrap().languages.clone();
        use Language::*;
        for id in ["N1", "N2", "N3", "S3", "S6", "S8", "S9", "S11", "S12"] {
            assert_eq!(langs(id), vec![Java], "{id}");
        }
        for id in ["N4", "N5", "N6", "S1", "S2", "S4", "S5", "S7", "S10"] {
            assert_eq!(langs(id), vec![Python], "{id}");
        }
        for id in ["S13", "S14", "S15", "S16", "S17", "S18"] {
            assert_eq!(langs(id), vec![Java, Python], "{id}");
        }
    }

    #[test]
    fn rule_param_shapes_are_enforced() {
        let bad = "[[rule]]\nid = \"N1\"\nlanguages = [\"java\"]\nsource = \"camel\"\nfirst = \"OP\"\n";
        assert!(matches!(RuleCatalog::from_toml(bad), Err(RuleError::Invalid { .. })));
        let bad = "[[rule]]\nid = \"S1\"\nlanguages = []\nfirst = \"OP\"\nsecond = \"-\"\n";
        assert!(matches!(RuleCatalog::from_toml(bad), Err(RuleError::Invalid { .. })));
        let bad = "[[rule]]\nid = \"S1\"\nlanguages = [\"python\"]\nfirst = \"OP\"\n";
        assert!(matches!(RuleCatalog::from_toml(bad), Err(RuleError::Invalid { .. })));
        let dup = "[[rule]]\nid = \"S1\"\nlanguages = [\"python\"]\nfirst = \"OP\"\nsecond = \"-\"\n\
                   [[rule]]\nid = \"S1\"\nlanguages = [\"python\"]\nfirst = \"OP\"\nsecond = \"[\"\n";
        assert!(RuleCatalog::from_toml(dup).is_err());
    }

    #[test]
    fn rule_ids_order_and_parse() {
        let a: RuleId = "S2".parse().unwrap();
        let b: RuleId = "S10".parse().unwrap();
        let n: RuleId = "N6".parse().unwrap();
        assert!(n < a && a < b);
        assert!("X1".parse::<RuleId>().is_err());
        assert!("S".parse::<RuleId>().is_err());
        assert_eq!(serde_json::to_string(&b).unwrap(), "\"S10\"");
    }

    #[test]
    fn replay_inserts_and_deletes() {
        let ev = [
            EditEvent::insert(1, EditType::Whitespace),
            EditEvent::insert(3, EditType::Whitespace),
        ];
        assert_eq!(replay_events("abc", &ev), "a bc ");
        let ev = [EditEvent::delete(3, EditType::Underscore)];
        assert_eq!(replay_events("foo_bar", &ev), "foobar");
    }
}
