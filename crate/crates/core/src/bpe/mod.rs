//! Byte-pair-encoding tokenizers with exact character offsets.
//!
//! A [`TokenizerSpec`] is an immutable, validated vocabulary plus ranked
//! merge list and pre-tokenizer. [`TokenizerSpec::encode`] returns an
//! [`Encoding`] whose `starts` are character offsets into the input, which
//! is what the drift analysis consumes.

mod bytes;
mod io;
mod pretokenize;

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bytes::{alphabet as byte_alphabet, byte_to_char, char_to_byte};
pub use io::{load_tokenizer, TokenizerFile, FORMAT_TAG};
pub use pretokenize::{
    Clitics, DigitRule, LetterPrefix, Preset, Pretokenizer, PretokenizerConfig, SplitFlags,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenizerError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("unparsable tokenizer definition: {0}")]
    Format(String),
    #[error("invalid tokenizer definition: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("character {ch:?} at offset {pos} has no vocabulary symbol")]
    Encoding { pos: usize, ch: char },
    #[error("token {0:?} is not in the vocabulary")]
    UnknownToken(String),
}

/// A tokenized text. All three sequences are parallel.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Encoding {
    /// Vocabulary strings (byte-level symbols for byte-level specs).
    pub tokens: Vec<String>,
    pub ids: Vec<u32>,
    /// Character offset of the character containing each token's first byte.
    pub starts: Vec<usize>,
    /// Byte offset of each token's first byte; strictly increasing.
    pub byte_starts: Vec<usize>,
}

impl Encoding {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The set of character offsets at which some token starts.
    pub fn boundaries(&self) -> BTreeSet<usize> {
        self.starts.iter().copied().collect()
    }

    /// True when every token of `text` starts on a character boundary, in
    /// which case `starts` is strictly increasing.
    pub fn is_char_aligned(&self, text: &str) -> bool {
        self.byte_starts.iter().all(|&b| text.is_char_boundary(b))
    }
}

#[derive(Debug, Clone, Copy)]
struct Merge {
    rank: u32,
    product: u32,
}

/// An immutable, validated BPE tokenizer.
#[derive(Debug, Clone)]
pub struct TokenizerSpec {
    vocab: HashMap<String, u32>,
    id_to_token: HashMap<u32, String>,
    merges: Vec<(String, String)>,
    merge_table: HashMap<(u32, u32), Merge>,
    pretokenizer_config: PretokenizerConfig,
    pretokenizer: Pretokenizer,
    byte_level: bool,
    ignore_merges: bool,
    specials: BTreeSet<String>,
}

#[derive(Clone, Copy)]
struct Symbol {
    id: u32,
    byte_start: usize,
    prev: Option<usize>,
    next: Option<usize>,
    alive: bool,
}

impl TokenizerSpec {
    /// Validate the parts of a definition and build the lookup tables.
    /// Every violated invariant is reported, not only the first.
    pub fn new(file: TokenizerFile) -> Result<Self, TokenizerError> {
        let mut problems = Vec::new();
        let mut id_to_token = HashMap::with_capacity(file.vocab.len());
        for (tok, &id) in &file.vocab {
            if let Some(prev) = id_to_token.insert(id, tok.clone()) {
                problems.push(format!("id {id} assigned to both {prev:?} and {tok:?}"));
            }
        }
        let vocab: HashMap<String, u32> = file.vocab.into_iter().collect();
        let specials: BTreeSet<String> = file.specials.into_iter().collect();
        for s in &specials {
            if !vocab.contains_key(s) {
                problems.push(format!("special token {s:?} missing from vocab"));
            }
        }

        let mut merge_table = HashMap::with_capacity(file.merges.len());
        for (rank, (a, b)) in file.merges.iter().enumerate() {
            let product = format!("{a}{b}");
            let ids = (vocab.get(a), vocab.get(b), vocab.get(&product));
            for (part, present) in [(a, ids.0), (b, ids.1)] {
                if present.is_none() {
                    problems.push(format!("merge #{rank} ({a:?}, {b:?}): part {part:?} not in vocab"));
                }
            }
            if ids.2.is_none() {
                problems.push(format!("merge #{rank} ({a:?}, {b:?}): product {product:?} not in vocab"));
            }
            if specials.contains(&product) {
                problems.push(format!("merge #{rank} produces special token {product:?}"));
            }
            if let (Some(&l), Some(&r), Some(&p)) = ids {
                // A repeated pair keeps its first (highest-priority) rank.
                merge_table.entry((l, r)).or_insert(Merge {
                    rank: rank as u32,
                    product: p,
                });
            }
        }

        if file.byte_level {
            let missing: Vec<String> = bytes::alphabet()
                .filter(|c| !vocab.contains_key(&c.to_string()))
                .map(|c| format!("{:#04x}", char_to_byte(c).unwrap_or(0)))
                .collect();
            if !missing.is_empty() {
                problems.push(format!(
                    "byte-level vocab lacks {} byte symbols ({})",
                    missing.len(),
                    missing.iter().take(8).cloned().collect::<Vec<_>>().join(", ")
                ));
            }
        }

        let pretokenizer = match Pretokenizer::new(&file.pretokenizer) {
            Ok(p) => Some(p),
            Err(e) => {
                problems.push(e.to_string());
                None
            }
        };
        if !problems.is_empty() {
            return Err(TokenizerError::Validation(problems));
        }
        Ok(TokenizerSpec {
            vocab,
            id_to_token,
            merges: file.merges,
            merge_table,
            pretokenizer_config: file.pretokenizer,
            pretokenizer: pretokenizer.expect("checked above"),
            byte_level: file.byte_level,
            ignore_merges: file.ignore_merges,
            specials,
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    pub fn byte_level(&self) -> bool {
        self.byte_level
    }

    pub fn specials(&self) -> &BTreeSet<String> {
        &self.specials
    }

    pub fn pretokenizer(&self) -> &PretokenizerConfig {
        &self.pretokenizer_config
    }

    pub fn token_id(&self, token: &str) -> Option<u32> {
        self.vocab.get(token).copied()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.id_to_token.get(&id).map(String::as_str)
    }

    pub fn vocab_tokens(&self) -> impl Iterator<Item = &str> {
        self.vocab.keys().map(String::as_str)
    }

    /// The definition this spec was built from.
    pub fn to_file(&self) -> TokenizerFile {
        TokenizerFile {
            format: FORMAT_TAG.to_owned(),
            byte_level: self.byte_level,
            ignore_merges: self.ignore_merges,
            pretokenizer: self.pretokenizer_config.clone(),
            specials: self.specials.iter().cloned().collect(),
            vocab: self.vocab.iter().map(|(k, &v)| (k.clone(), v)).collect(),
            merges: self.merges.clone(),
        }
    }

    /// Raw bytes a vocabulary token stands for.
    pub fn token_bytes(&self, token: &str) -> Result<Vec<u8>, TokenizerError> {
        if !self.vocab.contains_key(token) {
            return Err(TokenizerError::UnknownToken(token.to_owned()));
        }
        if self.byte_level && !self.specials.contains(token) {
            token
                .chars()
                .map(|c| char_to_byte(c).ok_or_else(|| TokenizerError::UnknownToken(token.to_owned())))
                .collect()
        } else {
            Ok(token.as_bytes().to_vec())
        }
    }

    /// Concatenate the tokens' bytes back into text.
    pub fn decode<S: AsRef<str>>(&self, tokens: &[S]) -> Result<String, TokenizerError> {
        let mut buf = Vec::new();
        for t in tokens {
            buf.extend(self.token_bytes(t.as_ref())?);
        }
        String::from_utf8(buf).map_err(|e| TokenizerError::Format(format!("decoded bytes are not UTF-8: {e}")))
    }

    pub fn encode(&self, text: &str) -> Result<Encoding, TokenizerError> {
        let mut enc = Encoding::default();
        let char_at_byte = char_offsets(text);
        for (start, end) in self.pretokenizer.split(text) {
            self.encode_piece(text, start, end, &mut enc)?;
        }
        enc.starts = enc.byte_starts.iter().map(|&b| char_at_byte[b]).collect();
        Ok(enc)
    }

    fn encode_piece(
        &self,
        text: &str,
        start: usize,
        end: usize,
        enc: &mut Encoding,
    ) -> Result<(), TokenizerError> {
        let piece = &text[start..end];
        let mut symbols: Vec<Symbol> = Vec::with_capacity(piece.len());
        let push = |id: u32, byte_start: usize, symbols: &mut Vec<Symbol>| {
            let n = symbols.len();
            symbols.push(Symbol {
                id,
                byte_start,
                prev: n.checked_sub(1),
                next: None,
                alive: true,
            });
            if n > 0 {
                symbols[n - 1].next = Some(n);
            }
        };

        if self.byte_level {
            let mapped: String = piece.bytes().map(byte_to_char).collect();
            if self.ignore_merges {
                if let Some(&id) = self.vocab.get(&mapped) {
                    enc.tokens.push(mapped);
                    enc.ids.push(id);
                    enc.byte_starts.push(start);
                    return Ok(());
                }
            }
            for (i, b) in piece.bytes().enumerate() {
                let id = self.vocab[&byte_to_char(b).to_string()];
                push(id, start + i, &mut symbols);
            }
        } else {
            if self.ignore_merges {
                if let Some(&id) = self.vocab.get(piece) {
                    enc.tokens.push(piece.to_owned());
                    enc.ids.push(id);
                    enc.byte_starts.push(start);
                    return Ok(());
                }
            }
            let mut buf = [0u8; 4];
            for (i, c) in piece.char_indices() {
                let id = self.vocab.get(&*c.encode_utf8(&mut buf)).copied().ok_or_else(|| {
                    TokenizerError::Encoding {
                        pos: text[..start + i].chars().count(),
                        ch: c,
                    }
                })?;
                push(id, start + i, &mut symbols);
            }
        }

        self.merge_symbols(&mut symbols);
        for s in symbols.iter().filter(|s| s.alive) {
            enc.tokens.push(self.id_to_token[&s.id].clone());
            enc.ids.push(s.id);
            enc.byte_starts.push(s.byte_start);
        }
        Ok(())
    }

    /// Apply merges lowest rank first, leftmost first among equal ranks,
    /// until no adjacent pair has a merge.
    fn merge_symbols(&self, symbols: &mut [Symbol]) {
        let mut heap = BinaryHeap::new();
        let candidate = |symbols: &[Symbol], left: usize| -> Option<Reverse<(u32, usize)>> {
            let right = symbols[left].next?;
            self.merge_table
                .get(&(symbols[left].id, symbols[right].id))
                .map(|m| Reverse((m.rank, left)))
        };
        for i in 0..symbols.len() {
            heap.extend(candidate(symbols, i));
        }
        while let Some(Reverse((rank, left))) = heap.pop() {
            if !symbols[left].alive {
                continue;
            }
            let Some(right) = symbols[left].next else {
                continue;
            };
            let Some(m) = self.merge_table.get(&(symbols[left].id, symbols[right].id)) else {
                continue;
            };
            if m.rank != rank {
                continue;
            }
            symbols[left].id = m.product;
            symbols[right].alive = false;
            symbols[left].next = symbols[right].next;
            if let Some(n) = symbols[right].next {
                symbols[n].prev = Some(left);
            }
            if let Some(p) = symbols[left].prev {
                heap.extend(candidate(symbols, p));
            }
            heap.extend(candidate(symbols, left));
        }
    }
}

/// `out[b]` is the index of the character containing byte `b`; one extra
/// entry maps `text.len()` to the character count.
fn char_offsets(text: &str) -> Vec<usize> {
    let mut out = Vec::with_capacity(text.len() + 1);
    for (ci, c) in text.chars().enumerate() {
        out.extend(std::iter::repeat_n(ci, c.len_utf8()));
    }
    out.push(text.chars().count());
    out
}

/// Jaccard distance between the two vocabularies' token-string sets.
pub fn vocab_distance(a: &TokenizerSpec, b: &TokenizerSpec) -> f64 {
    let (small, large) = if a.vocab.len() <= b.vocab.len() { (a, b) } else { (b, a) };
    let inter = small.vocab.keys().filter(|k| large.vocab.contains_key(*k)).count();
    let union = a.vocab.len() + b.vocab.len() - inter;
    if union == 0 {
        0.0
    } else {
        1.0 - inter as f64 / union as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    pub(crate) fn tiny(tokens: &[&str], merges: &[(&str, &str)], byte_level: bool) -> TokenizerFile {
        let mut vocab = BTreeMap::new();
        if byte_level {
            for c in bytes::alphabet() {
                let n = vocab.len() as u32;
                vocab.insert(c.to_string(), n);
            }
        }
        for t in tokens {
            let n = vocab.len() as u32;
            vocab.entry(t.to_string()).or_insert(n);
        }
        TokenizerFile {
            format: FORMAT_TAG.into(),
            byte_level,
            ignore_merges: false,
            pretokenizer: PretokenizerConfig::Preset { preset: Preset::None },
            specials: vec![],
            vocab,
            merges: merges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }

    #[test]
    fn minimal_spec_is_valid() {
        let spec = TokenizerSpec::new(tiny(&["a", "b", "ab"], &[("a", "b")], false)).unwrap();
        assert_eq!(spec.vocab_size(), 3);
        assert_eq!(spec.encode("ab").unwrap().tokens, ["ab"]);
    }

    #[test]
    fn missing_product_is_rejected() {
        let err = TokenizerSpec::new(tiny(&["a", "b"], &[("a", "b")], false)).unwrap_err();
        let TokenizerError::Validation(problems) = err else { panic!() };
        assert_eq!(problems.len(), 1);
        assert!(problems[0].contains("product"));
    }

    #[test]
    fn all_violations_are_listed() {
        let mut file = tiny(&["a", "b", "ab"], &[("a", "b"), ("x", "y")], false);
        file.specials = vec!["ab".into(), "<s>".into()];
        let TokenizerError::Validation(problems) = TokenizerSpec::new(file).unwrap_err() else {
            panic!()
        };
        // special missing, special produced, x, y and xy missing
        assert_eq!(problems.len(), 5, "{problems:?}");
    }

    #[test]
    fn byte_level_needs_full_alphabet() {
        let mut file = tiny(&[], &[], true);
        file.vocab.remove("Ġ");
        assert!(matches!(TokenizerSpec::new(file), Err(TokenizerError::Validation(_))));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let mut file = tiny(&["a", "b"], &[], false);
        file.vocab.insert("c".into(), 0);
        assert!(TokenizerSpec::new(file).is_err());
    }

    #[test]
    fn chained_merges() {
        let spec =
            TokenizerSpec::new(tiny(&["a", "b", "c", "ab", "abc"], &[("a", "b"), ("ab", "c")], false))
                .unwrap();
        let enc = spec.encode("abc").unwrap();
        assert_eq!(enc.tokens, ["abc"]);
        assert_eq!(enc.starts, [0]);
        assert!(spec.encode("").unwrap().is_empty());
    }

    #[test]
    fn priority_beats_position() {
        // (b,c) outranks (a,b), so "abc" becomes a + bc.
        let spec = TokenizerSpec::new(tiny(&["a", "b", "c", "ab", "bc"], &[("b", "c"), ("a", "b")], false))
            .unwrap();
        assert_eq!(spec.encode("abc").unwrap().tokens, ["a", "bc"]);
    }

    #[test]
    fn leftmost_wins_on_overlap() {
        let spec = TokenizerSpec::new(tiny(&["a", "aa"], &[("a", "a")], false)).unwrap();
        let enc = spec.encode("aaa").unwrap();
        assert_eq!(enc.tokens, ["aa", "a"]);
        assert_eq!(enc.starts, [0, 2]);
    }

    #[test]
    fn out_of_alphabet_is_an_error() {
        let spec = TokenizerSpec::new(tiny(&["a"], &[], false)).unwrap();
        assert_eq!(
            spec.encode("aaz").unwrap_err(),
            TokenizerError::Encoding { pos: 2, ch: 'z' }
        );
    }

    #[test]
    fn alignment_looks_at_bytes() {
        // "aé" is 61 C3 A9; merging the first two bytes leaves A9 alone.
        let spec = TokenizerSpec::new(tiny(&["aÃ"], &[("a", "Ã")], true)).unwrap();
        let enc = spec.encode("aé").unwrap();
        assert_eq!(enc.tokens, ["aÃ", "©"]);
        assert_eq!(enc.starts, [0, 1]);
        assert!(!enc.is_char_aligned("aé"));
        assert!(spec.encode("ab").unwrap().is_char_aligned("ab"));
    }

    #[test]
    fn byte_level_offsets_are_characters() {
        let spec = TokenizerSpec::new(tiny(&[], &[], true)).unwrap();
        let enc = spec.encode("é!").unwrap();
        assert_eq!(enc.len(), 3);
        assert_eq!(enc.byte_starts, [0, 1, 2]);
        assert_eq!(enc.starts, [0, 0, 1]);
        assert!(!enc.is_char_aligned("é!"));
        assert_eq!(enc.boundaries(), BTreeSet::from([0, 1]));
        assert_eq!(spec.decode(&enc.tokens).unwrap(), "é!");
    }

    #[test]
    fn byte_level_merges_with_space_prefix() {
        let mut file = tiny(
            &["Ġs", "Ġso", "or", "Ġsor", "te", "Ġsorte", "Ġsorted", "st"],
            &[("Ġ", "s"), ("Ġs", "o"), ("o", "r"), ("Ġso", "r"), ("t", "e"), ("Ġsor", "te"), ("Ġsorte", "d"), ("s", "t")],
            true,
        );
        file.pretokenizer = PretokenizerConfig::Preset { preset: Preset::Llama3 };
        let spec = TokenizerSpec::new(file).unwrap();
        let enc = spec.encode(" sortedLst").unwrap();
        assert_eq!(enc.tokens, ["Ġsorted", "L", "st"]);
        assert_eq!(enc.starts, [0, 7, 8]);
        assert_eq!(spec.decode(&enc.tokens[..1]).unwrap(), " sorted");
    }

    #[test]
    fn ignore_merges_takes_whole_piece() {
        let mut file = tiny(&["a", "b", "c", "bc", "abc"], &[("b", "c")], false);
        assert!(TokenizerSpec::new(file.clone()).unwrap().encode("abc").unwrap().len() == 2);
        file.ignore_merges = true;
        assert_eq!(TokenizerSpec::new(file).unwrap().encode("abc").unwrap().tokens, ["abc"]);
    }

    #[test]
    fn jaccard_distance() {
        let a = TokenizerSpec::new(tiny(&["a", "b"], &[], false)).unwrap();
        let b = TokenizerSpec::new(tiny(&["c", "d"], &[], false)).unwrap();
        let c = TokenizerSpec::new(tiny(&["a", "c"], &[], false)).unwrap();
        assert_eq!(vocab_distance(&a, &a), 0.0);
        assert_eq!(vocab_distance(&a, &b), 1.0);
        assert!((vocab_distance(&a, &c) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_token_in_decode() {
        let spec = TokenizerSpec::new(tiny(&["a"], &[], false)).unwrap();
        assert!(matches!(spec.decode(&["q"]), Err(TokenizerError::UnknownToken(_))));
    }
}
