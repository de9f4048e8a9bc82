#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use drift_core::bpe::{PretokenizerConfig, Preset, TokenizerFile, TokenizerSpec, FORMAT_TAG};

pub fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn desk_corpus() -> PathBuf {
    workspace().join("data/corpus/desk.jsonl")
}

pub fn desk_tokenizer() -> PathBuf {
    workspace().join("data/tokenizers/desk-bpe.json")
}

/// A character-level spec over `alphabet` with the given merges, applied to
/// the whole text without pre-splitting.
pub fn toy_file(alphabet: &str, merges: &[(&str, &str)]) -> TokenizerFile {
    let mut tokens: Vec<String> = Vec::new();
    let mut add = |t: String| {
        if !tokens.contains(&t) {
            tokens.push(t);
        }
    };
    alphabet.chars().for_each(|c| add(c.to_string()));
    merges.iter().for_each(|(a, b)| add(format!("{a}{b}")));
    TokenizerFile {
        format: FORMAT_TAG.into(),
        byte_level: false,
        ignore_merges: false,
        pretokenizer: PretokenizerConfig::Preset { preset: Preset::None },
        specials: vec![],
        vocab: tokens.into_iter().enumerate().map(|(i, t)| (t, i as u32)).collect::<BTreeMap<_, _>>(),
        merges: merges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    }
}

pub fn toy_spec(alphabet: &str, merges: &[(&str, &str)]) -> TokenizerSpec {
    TokenizerSpec::new(toy_file(alphabet, merges)).expect("toy spec is valid")
}

/// Produces ".factor" + "ial" and ". factorial" as "." + " factorial".
pub const FACTORIAL_MERGES: &[(&str, &str)] = &[
    ("f", "a"),
    ("c", "t"),
    ("o", "r"),
    ("fa", "ct"),
    ("fact", "or"),
    (".", "factor"),
    (" ", "factor"),
    ("i", "a"),
    ("ia", "l"),
    (" factor", "ial"),
];
pub const FACTORIAL_ALPHABET: &str = "q.factorial(n) ";

/// Produces " sorted" + "L" + "st" and " sorted" + "_lst".
pub const SORTED_MERGES: &[(&str, &str)] = &[
    ("s", "o"),
    ("r", "t"),
    ("so", "rt"),
    ("e", "d"),
    ("sort", "ed"),
    (" ", "sorted"),
    ("s", "t"),
    ("l", "st"),
    ("_", "lst"),
];
pub const SORTED_ALPHABET: &str = " sortedLl_";

/// Keeps "foo_bar" whole and splits "fooBar" into "foo" + "Bar".
pub const FOO_BAR_MERGES: &[(&str, &str)] = &[
    ("f", "o"),
    ("fo", "o"),
    ("b", "a"),
    ("ba", "r"),
    ("foo", "_"),
    ("foo_", "bar"),
    ("B", "a"),
    ("Ba", "r"),
];
pub const FOO_BAR_ALPHABET: &str = "fobar_B";

pub fn drift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drift"))
        .args(args)
        .output()
        .expect("drift binary runs")
}

pub fn path_arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

pub fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

pub fn read_lines(path: &Path) -> Vec<serde_json::Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}
