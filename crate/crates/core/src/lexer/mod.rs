//! Grammar-level lexing of Java and Python source.
//!
//! Every position in this module is a *character* offset (not a byte offset)
//! into the source text. Comments and string literals are opaque: each one is
//! carried as a single [`TokenKind::Literal`] token and no rewrite ever looks
//! inside it.

mod context;
mod java;
mod python;
mod scan;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use context::{
    classify_identifiers, ConfigError, IdentifierContext, ImmutableTypes, JavaContext,
    PythonContext,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Python,
}

impl Language {
    pub const ALL: [Language; 2] = [Language::Java, Language::Python];

    pub fn as_str(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Python => "python",
        }
    }

    /// Guess the language from a file extension (`java` or `py`).
    pub fn from_extension(ext: &str) -> Option<Language> {
        match ext {
            "java" => Some(Language::Java),
            "py" => Some(Language::Python),
            _ => None,
        }
    }

    pub fn is_keyword(self, word: &str) -> bool {
        match self {
            Language::Java => java::KEYWORDS.contains(&word) || java::LITERAL_WORDS.contains(&word),
            Language::Python => python::KEYWORDS.contains(&word),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "java" => Ok(Language::Java),
            "python" | "py" => Ok(Language::Python),
            other => Err(format!("unknown language `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Identifier,
    Operator,
    Keyword,
    Literal,
    Punctuation,
}

impl TokenKind {
    /// Operators and punctuation together form the "any operator" class
    /// used by the wildcard spacing rules.
    pub fn is_operator_like(self) -> bool {
        matches!(self, TokenKind::Operator | TokenKind::Punctuation)
    }
}

/// Half-open character interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeToken {
    pub lexeme: String,
    pub kind: TokenKind,
    pub span: Span,
}

impl CodeToken {
    pub fn is_identifier(&self) -> bool {
        self.kind == TokenKind::Identifier
    }

    /// True for comment tokens (`//`, `/* */`, `#`).
    pub fn is_comment(&self) -> bool {
        self.kind == TokenKind::Literal
            && (self.lexeme.starts_with("//")
                || self.lexeme.starts_with("/*")
                || self.lexeme.starts_with('#'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexErrorKind {
    #[error("unterminated string literal")]
    UnterminatedString,
    #[error("unterminated character literal")]
    UnterminatedChar,
    #[error("unterminated block comment")]
    UnterminatedComment,
    #[error("illegal character {0:?}")]
    IllegalChar(char),
    #[error("malformed numeric literal")]
    MalformedNumber,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{language} lex error at character {pos}: {kind}")]
pub struct LexError {
    pub language: Language,
    pub pos: usize,
    pub kind: LexErrorKind,
}

/// The token sequence of one source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenIndex {
    language: Language,
    source: String,
    chars: Vec<char>,
    tokens: Vec<CodeToken>,
}

impl TokenIndex {
    pub fn language(&self) -> Language {
        self.language
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// The source as a character vector; spans index into this.
    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    pub fn tokens(&self) -> &[CodeToken] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Source text between the end of token `k - 1` (or the start of the
    /// text) and the start of token `k`. `k == len()` gives the trailing gap.
    pub fn gap_before(&self, k: usize) -> String {
        let from = if k == 0 { 0 } else { self.tokens[k - 1].span.end };
        let to = self.tokens.get(k).map_or(self.chars.len(), |t| t.span.start);
        self.chars[from..to].iter().collect()
    }

    /// Rebuild the source from token lexemes and inter-token gaps.
    pub fn reconstruct(&self) -> String {
        let mut out = String::with_capacity(self.source.len());
        for (k, tok) in self.tokens.iter().enumerate() {
            out.push_str(&self.gap_before(k));
            out.push_str(&tok.lexeme);
        }
        out.push_str(&self.gap_before(self.tokens.len()));
        out
    }

    /// `(kind, lexeme)` pairs, the span-free view of the token stream.
    pub fn kinds_and_lexemes(&self) -> Vec<(TokenKind, &str)> {
        self.tokens.iter().map(|t| (t.kind, t.lexeme.as_str())).collect()
    }
}

/// Lex `source` in the given language.
pub fn lex(source: &str, language: Language) -> Result<TokenIndex, LexError> {
    let chars: Vec<char> = source.chars().collect();
    let tokens = match language {
        Language::Java => java::lex(&chars),
        Language::Python => python::lex(&chars),
    }
    .map_err(|(pos, kind)| LexError {
        language,
        pos,
        kind,
    })?;
    Ok(TokenIndex {
        language,
        source: source.to_owned(),
        chars,
        tokens,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str, lang: Language) -> Vec<(TokenKind, String)> {
        lex(src, lang)
            .unwrap()
            .tokens()
            .iter()
            .map(|t| (t.kind, t.lexeme.clone()))
            .collect()
    }

    #[test]
    fn x_plus_one_is_three_tokens() {
        let toks = kinds("x+1", Language::Python);
        assert_eq!(
            toks,
            vec![
                (TokenKind::Identifier, "x".to_string()),
                (TokenKind::Operator, "+".to_string()),
                (TokenKind::Literal, "1".to_string()),
            ]
        );
        assert_eq!(toks, kinds("x + 1", Language::Python));
        let spaced = lex("x + 1", Language::Python).unwrap();
        assert_eq!(spaced.tokens()[2].span, Span::new(4, 5));
    }

    #[test]
    fn empty_source_has_no_tokens() {
        assert!(lex("", Language::Python).unwrap().is_empty());
        assert!(lex("", Language::Java).unwrap().is_empty());
    }

    #[test]
    fn spans_are_character_offsets() {
        let idx = lex("é = 'ß'", Language::Python).unwrap();
        assert_eq!(idx.tokens()[0].span, Span::new(0, 1));
        assert_eq!(idx.tokens()[2].span, Span::new(4, 7));
        assert_eq!(idx.reconstruct(), "é = 'ß'");
    }

    #[test]
    fn language_parsing() {
        assert_eq!("Java".parse::<Language>().unwrap(), Language::Java);
        assert_eq!("py".parse::<Language>().unwrap(), Language::Python);
        assert!("rust".parse::<Language>().is_err());
    }
}
