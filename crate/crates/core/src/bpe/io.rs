//! Reading tokenizer definitions.
//!
//! Three layouts are accepted:
//! - the native single-file JSON form ([`TokenizerFile`]);
//! - a directory holding `vocab.json` and `merges.txt`, with an optional
//!   `tokenizer-meta.json` for the pre-tokenizer, byte-level flag and
//!   specials;
//! - a Hugging Face `tokenizer.json` with a BPE model.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::pretokenize::{Preset, PretokenizerConfig};
use super::{TokenizerError, TokenizerSpec};

pub const FORMAT_TAG: &str = "drift-bpe/1";

/// The native on-disk form of a tokenizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TokenizerFile {
    /// Always [`FORMAT_TAG`].
    pub format: String,
    pub byte_level: bool,
    /// Emit a whole pre-token directly when it is itself in the vocab.
    #[serde(default)]
    pub ignore_merges: bool,
    #[serde(default)]
    pub pretokenizer: PretokenizerConfig,
    #[serde(default)]
    pub specials: Vec<String>,
    pub vocab: BTreeMap<String, u32>,
    /// Ordered by priority, highest first.
    pub merges: Vec<(String, String)>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Meta {
    #[serde(default)]
    pretokenizer: Option<PretokenizerConfig>,
    #[serde(default)]
    byte_level: Option<bool>,
    #[serde(default)]
    ignore_merges: bool,
    #[serde(default)]
    specials: Vec<String>,
}

fn read(path: &Path) -> Result<String, TokenizerError> {
    fs::read_to_string(path).map_err(|e| TokenizerError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn format_err(what: &str, e: impl std::fmt::Display) -> TokenizerError {
    TokenizerError::Format(format!("{what}: {e}"))
}

/// Load and validate a tokenizer from a native file, a Hugging Face
/// `tokenizer.json`, or a vocab/merges directory.
pub fn load_tokenizer(path: impl AsRef<Path>) -> Result<TokenizerSpec, TokenizerError> {
    let path = path.as_ref();
    if path.is_dir() {
        let hf = path.join("tokenizer.json");
        if !path.join("vocab.json").exists() && hf.exists() {
            return TokenizerSpec::from_json_str(&read(&hf)?);
        }
        let meta = path.join("tokenizer-meta.json");
        let meta = if meta.exists() { Some(read(&meta)?) } else { None };
        return TokenizerSpec::from_vocab_merges(
            &read(&path.join("vocab.json"))?,
            &read(&path.join("merges.txt"))?,
            meta.as_deref(),
        );
    }
    TokenizerSpec::from_json_str(&read(path)?)
}

impl TokenizerSpec {
    /// Parse either the native JSON form or a Hugging Face `tokenizer.json`.
    pub fn from_json_str(text: &str) -> Result<Self, TokenizerError> {
        let value: Value = serde_json::from_str(text).map_err(|e| format_err("JSON", e))?;
        match value.get("format").and_then(Value::as_str) {
            Some(FORMAT_TAG) => {
                let file: TokenizerFile =
                    serde_json::from_value(value).map_err(|e| format_err("tokenizer file", e))?;
                TokenizerSpec::new(file)
            }
            Some(other) => Err(TokenizerError::Format(format!("unknown format tag {other:?}"))),
            None if value.get("model").is_some() => TokenizerSpec::new(from_hf(&value)?),
            None => Err(TokenizerError::Format(
                "neither a native tokenizer file nor a tokenizer.json".into(),
            )),
        }
    }

    /// Import the common two-file layout. Without metadata the spec is
    /// byte-level with the GPT-2 pre-tokenizer.
    pub fn from_vocab_merges(
        vocab_json: &str,
        merges_txt: &str,
        meta_json: Option<&str>,
    ) -> Result<Self, TokenizerError> {
        let vocab: BTreeMap<String, u32> =
            serde_json::from_str(vocab_json).map_err(|e| format_err("vocab.json", e))?;
        let merges = parse_merges_txt(merges_txt)?;
        let meta: Meta = match meta_json {
            Some(m) => serde_json::from_str(m).map_err(|e| format_err("tokenizer-meta.json", e))?,
            None => Meta::default(),
        };
        TokenizerSpec::new(TokenizerFile {
            format: FORMAT_TAG.into(),
            byte_level: meta.byte_level.unwrap_or(true),
            ignore_merges: meta.ignore_merges,
            pretokenizer: meta.pretokenizer.unwrap_or_default(),
            specials: meta.specials,
            vocab,
            merges,
        })
    }
}

fn parse_merges_txt(text: &str) -> Result<Vec<(String, String)>, TokenizerError> {
    text.lines()
        .enumerate()
        .filter(|(i, line)| !(line.is_empty() || (*i == 0 && line.starts_with("#version"))))
        .map(|(i, line)| match line.split(' ').collect::<Vec<_>>()[..] {
            [a, b] if !a.is_empty() && !b.is_empty() => Ok((a.to_owned(), b.to_owned())),
            _ => Err(TokenizerError::Format(format!(
                "merges.txt line {}: expected two space-separated symbols",
                i + 1
            ))),
        })
        .collect()
}

/// Walk a `tokenizer.json` pre-tokenizer tree, collecting the split pattern
/// and whether a byte-level step is present.
fn scan_pretokenizer(
    node: &Value,
    pattern: &mut Option<String>,
    byte_level: &mut bool,
) -> Result<(), TokenizerError> {
    if node.is_null() {
        return Ok(());
    }
    match node.get("type").and_then(Value::as_str) {
        Some("Sequence") => {
            for child in node
                .get("pretokenizers")
                .and_then(Value::as_array)
                .into_iter()
                .flatten()
            {
                scan_pretokenizer(child, pattern, byte_level)?;
            }
        }
        Some("Split") => {
            let regex = match (
                node.pointer("/pattern/Regex").and_then(Value::as_str),
                node.pointer("/pattern/String").and_then(Value::as_str),
            ) {
                (Some(r), _) => r.to_owned(),
                (None, Some(literal)) => fancy_regex::escape(literal).into_owned(),
                (None, None) => {
                    return Err(TokenizerError::Format("Split pre-tokenizer without a pattern".into()))
                }
            };
            if pattern.replace(regex).is_some() {
                return Err(TokenizerError::Format("more than one Split pre-tokenizer".into()));
            }
        }
        Some("ByteLevel") => {
            *byte_level = true;
            if node.get("use_regex").and_then(Value::as_bool).unwrap_or(true) && pattern.is_none() {
                *pattern = Preset::Gpt2.flags().map(|f| f.pattern());
            }
        }
        other => {
            return Err(TokenizerError::Format(format!(
                "unsupported pre-tokenizer {}",
                other.unwrap_or("<untyped>")
            )))
        }
    }
    Ok(())
}

fn from_hf(value: &Value) -> Result<TokenizerFile, TokenizerError> {
    let model = &value["model"];
    if let Some(t) = model.get("type").and_then(Value::as_str) {
        if t != "BPE" {
            return Err(TokenizerError::Format(format!("model type {t} is not BPE")));
        }
    }
    let mut vocab: BTreeMap<String, u32> = serde_json::from_value(model["vocab"].clone())
        .map_err(|e| format_err("model.vocab", e))?;
    let merges = model
        .get("merges")
        .and_then(Value::as_array)
        .ok_or_else(|| TokenizerError::Format("model.merges missing".into()))?
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let pair = match m {
                Value::String(s) => s.split_once(' ').map(|(a, b)| (a.to_owned(), b.to_owned())),
                Value::Array(a) => match &a[..] {
                    [Value::String(l), Value::String(r)] => Some((l.clone(), r.clone())),
                    _ => None,
                },
                _ => None,
            };
            pair.ok_or_else(|| TokenizerError::Format(format!("model.merges[{i}] is malformed")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut specials = Vec::new();
    for added in value.get("added_tokens").and_then(Value::as_array).into_iter().flatten() {
        let (Some(content), Some(id)) = (
            added.get("content").and_then(Value::as_str),
            added.get("id").and_then(Value::as_u64),
        ) else {
            return Err(TokenizerError::Format("malformed added_tokens entry".into()));
        };
        vocab.entry(content.to_owned()).or_insert(id as u32);
        if added.get("special").and_then(Value::as_bool).unwrap_or(false) {
            specials.push(content.to_owned());
        }
    }

    let mut pattern = None;
    let mut byte_level = false;
    scan_pretokenizer(&value["pre_tokenizer"], &mut pattern, &mut byte_level)?;
    if value.pointer("/decoder/type").and_then(Value::as_str) == Some("ByteLevel") {
        byte_level = true;
    }
    let pretokenizer = match pattern {
        None => PretokenizerConfig::Preset { preset: Preset::None },
        Some(p) => [Preset::Gpt2, Preset::Llama3, Preset::Qwen2]
            .into_iter()
            .find(|preset| preset.flags().map(|f| f.pattern()).as_deref() == Some(p.as_str()))
            .map(|preset| PretokenizerConfig::Preset { preset })
            .unwrap_or(PretokenizerConfig::Pattern { pattern: p }),
    };
    Ok(TokenizerFile {
        format: FORMAT_TAG.into(),
        byte_level,
        ignore_merges: model.get("ignore_merges").and_then(Value::as_bool).unwrap_or(false),
        pretokenizer,
        specials,
        vocab,
        merges,
    })
}
