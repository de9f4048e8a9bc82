//! Pre-tokenization: split text into pieces that BPE merges never cross.
//!
//! The split pattern is assembled from a handful of independent behaviours
//! (contraction handling, what may prefix a letter run, digit grouping,
//! punctuation runs, newline blocks), so the published GPT-2, Llama-3 and
//! Qwen2 patterns are just particular flag settings.

use fancy_regex::Regex;
use serde::{Deserialize, Serialize};

use super::TokenizerError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clitics {
    None,
    CaseSensitive,
    CaseInsensitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LetterPrefix {
    /// Letter runs stand alone.
    None,
    /// One optional leading space (` ?\p{L}+`).
    Space,
    /// One optional leading non-letter, non-digit, non-newline character.
    AnyNonAlnum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigitRule {
    /// Longest digit run kept together; 0 means unbounded.
    pub max_run: u8,
    /// Whether a single leading space attaches to the digit run.
    #[serde(default)]
    pub space_prefix: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitFlags {
    pub clitics: Clitics,
    pub letter_prefix: LetterPrefix,
    pub digits: DigitRule,
    /// Punctuation runs swallow the newlines that follow them.
    #[serde(default)]
    pub punct_trailing_newlines: bool,
    /// Whitespace ending in newlines forms its own piece.
    #[serde(default)]
    pub newline_blocks: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Gpt2,
    Llama3,
    Qwen2,
    /// No splitting: the whole text is one piece.
    None,
}

impl Preset {
    pub fn flags(self) -> Option<SplitFlags> {
        let gpt2 = SplitFlags {
            clitics: Clitics::CaseSensitive,
            letter_prefix: LetterPrefix::Space,
            digits: DigitRule {
                max_run: 0,
                space_prefix: true,
            },
            punct_trailing_newlines: false,
            newline_blocks: false,
        };
        let llama3 = SplitFlags {
            clitics: Clitics::CaseInsensitive,
            letter_prefix: LetterPrefix::AnyNonAlnum,
            digits: DigitRule {
                max_run: 3,
                space_prefix: false,
            },
            punct_trailing_newlines: true,
            newline_blocks: true,
        };
        match self {
            Preset::Gpt2 => Some(gpt2),
            Preset::Llama3 => Some(llama3),
            Preset::Qwen2 => Some(SplitFlags {
                digits: DigitRule {
                    max_run: 1,
                    space_prefix: false,
                },
                ..llama3
            }),
            Preset::None => None,
        }
    }
}

/// How a tokenizer definition describes its pre-tokenizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PretokenizerConfig {
    Preset { preset: Preset },
    Pattern { pattern: String },
    Flags(SplitFlags),
}

impl Default for PretokenizerConfig {
    fn default() -> Self {
        PretokenizerConfig::Preset {
            preset: Preset::Gpt2,
        }
    }
}

impl SplitFlags {
    /// The equivalent split regular expression.
    pub fn pattern(&self) -> String {
        const LETTER: &str = r"\p{L}";
        let mut alts: Vec<String> = Vec::new();
        let clitics = "'s|'t|'re|'ve|'m|'ll|'d";
        match self.clitics {
            Clitics::None => {}
            Clitics::CaseSensitive => alts.push(clitics.into()),
            Clitics::CaseInsensitive => alts.push(format!("(?i:{clitics})")),
        }
        alts.push(match self.letter_prefix {
            LetterPrefix::None => format!("{LETTER}+"),
            LetterPrefix::Space => format!(" ?{LETTER}+"),
            LetterPrefix::AnyNonAlnum => format!(r"[^\r\n\p{{L}}\p{{N}}]?{LETTER}+"),
        });
        let prefix = if self.digits.space_prefix { " ?" } else { "" };
        alts.push(match self.digits.max_run {
            0 => format!(r"{prefix}\p{{N}}+"),
            1 => format!(r"{prefix}\p{{N}}"),
            n => format!(r"{prefix}\p{{N}}{{1,{n}}}"),
        });
        let trailing = if self.punct_trailing_newlines { r"[\r\n]*" } else { "" };
        alts.push(format!(r" ?[^\s\p{{L}}\p{{N}}]+{trailing}"));
        if self.newline_blocks {
            alts.push(r"\s*[\r\n]+".into());
        }
        alts.push(r"\s+(?!\S)".into());
        alts.push(r"\s+".into());
        alts.join("|")
    }
}

impl PretokenizerConfig {
    /// The split pattern, or `None` when the text is not split.
    pub fn pattern(&self) -> Option<String> {
        match self {
            PretokenizerConfig::Preset { preset } => preset.flags().map(|f| f.pattern()),
            PretokenizerConfig::Pattern { pattern } => Some(pattern.clone()),
            PretokenizerConfig::Flags(flags) => Some(flags.pattern()),
        }
    }
}

/// A compiled pre-tokenizer.
#[derive(Debug, Clone)]
pub struct Pretokenizer {
    regex: Option<Regex>,
}

impl Pretokenizer {
    pub fn new(config: &PretokenizerConfig) -> Result<Self, TokenizerError> {
        let regex = config
            .pattern()
            .map(|p| Regex::new(&p).map_err(|e| TokenizerError::Format(format!("split pattern: {e}"))))
            .transpose()?;
        Ok(Pretokenizer { regex })
    }

    /// Byte ranges of the pieces, covering `text` exactly. Text between two
    /// pattern matches becomes a piece of its own.
    pub fn split(&self, text: &str) -> Vec<(usize, usize)> {
        let Some(re) = &self.regex else {
            return if text.is_empty() { vec![] } else { vec![(0, text.len())] };
        };
        let mut out = Vec::new();
        let mut last = 0;
        for m in re.find_iter(text) {
            // Matching cannot fail on in-memory text short of the backtrack
            // limit; treat that as "no more matches".
            let Ok(m) = m else { break };
            if m.start() == m.end() {
                continue;
            }
            if m.start() > last {
                out.push((last, m.start()));
            }
            out.push((m.start(), m.end()));
            last = m.end();
        }
        if last < text.len() {
            out.push((last, text.len()));
        }
        out
    }
}
