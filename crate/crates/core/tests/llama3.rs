//! Checks against the published Llama-3 tokenizer. The vocabulary is not
//! shipped; run `scripts/export-llama3-tokenizer.sh` (or point
//! `LLAMA3_TOKENIZER_DIR` at an export) to enable these tests.

use std::path::PathBuf;
use std::sync::OnceLock;

use drift_core::bpe::{load_tokenizer, TokenizerSpec};
use serde::Deserialize;

fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn llama3() -> Option<&'static TokenizerSpec> {
    static SPEC: OnceLock<Option<TokenizerSpec>> = OnceLock::new();
    SPEC.get_or_init(|| {
        let dir = std::env::var_os("LLAMA3_TOKENIZER_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| workspace().join("data/llama3"));
        if !dir.join("vocab.json").exists() {
            eprintln!("skipping: no Llama-3 export at {}", dir.display());
            return None;
        }
        Some(load_tokenizer(&dir).expect("Llama-3 export loads"))
    })
    .as_ref()
}

#[derive(Deserialize)]
struct Reference {
    text: String,
    ids: Vec<u32>,
    tokens: Vec<String>,
}

#[test]
fn vocab_size_matches_model_card() {
    let Some(spec) = llama3() else { return };
    assert_eq!(spec.vocab_size(), 128_256);
    assert_eq!(spec.merges().len(), 280_147);
}

#[test]
fn matches_reference_implementation() {
    let Some(spec) = llama3() else { return };
    let path = workspace().join("data/fixtures/llama3_reference.jsonl");
    let text = std::fs::read_to_string(path).unwrap();
    let mut checked = 0;
    for line in text.lines() {
        let r: Reference = serde_json::from_str(line).unwrap();
        let enc = spec.encode(&r.text).unwrap();
        assert_eq!(enc.tokens, r.tokens, "{:?}", r.text);
        assert_eq!(enc.ids, r.ids, "{:?}", r.text);
        assert_eq!(spec.decode(&enc.tokens).unwrap(), r.text);
        checked += 1;
    }
    assert!(checked >= 30);
}

#[test]
fn sorted_lst_is_three_tokens() {
    let Some(spec) = llama3() else { return };
    let enc = spec.encode(" sortedLst").unwrap();
    let pieces: Vec<String> = enc
        .tokens
        .iter()
        .map(|t| spec.decode(&[t]).unwrap())
        .collect();
    assert_eq!(pieces, [" sorted", "L", "st"]);
    assert_eq!(enc.starts, [0, 7, 8]);
}

#[test]
fn leading_space_changes_tokenization() {
    let Some(spec) = llama3() else { return };
    assert_ne!(
        spec.encode("factorial").unwrap().ids,
        spec.encode(" factorial").unwrap().ids[..]
    );
}
