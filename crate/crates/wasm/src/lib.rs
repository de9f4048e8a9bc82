//! Browser bindings for the boundary-drift demo. Every exported method takes
//! and returns plain strings; structured results are JSON.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;
use wasm_bindgen::prelude::*;

use drift_core::bpe::{Encoding, TokenizerError, TokenizerSpec};
use drift_core::drift::{AnalysisError, DriftRecord, Label, SampleAnalyzer};
use drift_core::lexer::ImmutableTypes;
use drift_core::rewrite::{EditEvent, RuleCatalog, RuleError};
use drift_core::{lex, Language, LexError, TokenKind};

const DESK_TOKENIZER: &str = include_str!("../../../data/tokenizers/desk-bpe.json");

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("{0}")]
    Language(String),
    #[error(transparent)]
    Tokenizer(#[from] TokenizerError),
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Debug, Serialize)]
pub struct TokenView {
    pub token: String,
    pub id: u32,
    /// Character offsets; `start == end` for a token that ends inside a
    /// multi-byte character.
    pub start: usize,
    pub end: usize,
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct EncodingView {
    pub tokens: Vec<TokenView>,
    pub char_aligned: bool,
}

#[derive(Debug, Serialize)]
pub struct LexView {
    pub kind: TokenKind,
    pub lexeme: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Serialize)]
pub struct AnalysisView {
    pub rule: String,
    pub affected: bool,
    pub label: Label,
    pub rewritten: String,
    pub events: Vec<EditEvent>,
    pub renames: BTreeMap<String, String>,
    pub old: EncodingView,
    pub new: EncodingView,
    /// Boundary positions in the rewritten text.
    pub lost: BTreeSet<usize>,
    pub gained: BTreeSet<usize>,
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub rule: String,
    pub name: String,
    pub affected: bool,
    pub label: Label,
    pub lost: usize,
    pub gained: usize,
}

#[derive(Debug, Serialize)]
pub struct RuleView {
    pub id: String,
    pub name: String,
    pub languages: Vec<Language>,
    pub pattern: String,
}

fn view(text: &str, enc: &Encoding) -> EncodingView {
    let chars: Vec<char> = text.chars().collect();
    let tokens = (0..enc.len())
        .map(|k| {
            let start = enc.starts[k];
            let end = enc.starts.get(k + 1).copied().unwrap_or(chars.len());
            TokenView {
                token: enc.tokens[k].clone(),
                id: enc.ids[k],
                start,
                end,
                text: chars[start..end].iter().collect(),
            }
        })
        .collect();
    EncodingView {
        tokens,
        char_aligned: enc.is_char_aligned(text),
    }
}

fn analysis_view(rec: DriftRecord) -> AnalysisView {
    AnalysisView {
        rule: rec.rule.to_string(),
        affected: rec.affected,
        label: rec.label,
        old: view(&rec.original, &rec.old_encoding),
        new: view(&rec.rewritten, &rec.new_encoding),
        rewritten: rec.rewritten,
        events: rec.events,
        renames: rec.renames,
        lost: rec.lost,
        gained: rec.gained,
    }
}

fn language(name: &str) -> Result<Language, DemoError> {
    name.parse().map_err(DemoError::Language)
}

fn to_js<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("view types serialize")
}

fn js_err(e: DemoError) -> JsError {
    JsError::new(&e.to_string())
}

/// Tokenizer, rule catalog and identifier configuration held by the page.
#[wasm_bindgen]
pub struct Demo {
    spec: TokenizerSpec,
    catalog: RuleCatalog,
    immutable: ImmutableTypes,
}

impl Default for Demo {
    fn default() -> Self {
        Demo {
            spec: TokenizerSpec::from_json_str(DESK_TOKENIZER).expect("bundled tokenizer is valid"),
            catalog: RuleCatalog::default(),
            immutable: ImmutableTypes::default(),
        }
    }
}

impl Demo {
    pub fn spec(&self) -> &TokenizerSpec {
        &self.spec
    }

    pub fn set_tokenizer(&mut self, json: &str) -> Result<usize, DemoError> {
        self.spec = TokenizerSpec::from_json_str(json)?;
        Ok(self.spec.vocab_size())
    }

    pub fn encoding_view(&self, text: &str) -> Result<EncodingView, DemoError> {
        Ok(view(text, &self.spec.encode(text)?))
    }

    pub fn lex_view(&self, source: &str, lang: &str) -> Result<Vec<LexView>, DemoError> {
        let index = lex(source, language(lang)?)?;
        Ok(index
            .tokens()
            .iter()
            .map(|t| LexView {
                kind: t.kind,
                lexeme: t.lexeme.clone(),
                start: t.span.start,
                end: t.span.end,
            })
            .collect())
    }

    pub fn analysis(&self, source: &str, lang: &str, rule: &str) -> Result<AnalysisView, DemoError> {
        let rule = self.catalog.lookup(rule)?;
        let analyzer = SampleAnalyzer::new("input", source, language(lang)?, &self.spec, &self.immutable)?;
        Ok(analysis_view(analyzer.analyze(rule)?))
    }

    /// Every rule that applies to the language, in catalog order.
    pub fn sweep_rows(&self, source: &str, lang: &str) -> Result<Vec<SweepRow>, DemoError> {
        let lang = language(lang)?;
        let analyzer = SampleAnalyzer::new("input", source, lang, &self.spec, &self.immutable)?;
        self.catalog
            .rules()
            .iter()
            .filter(|r| r.applies_to(lang))
            .map(|rule| {
                let rec = analyzer.analyze(rule)?;
                Ok(SweepRow {
                    rule: rule.id.to_string(),
                    name: rule.name.clone(),
                    affected: rec.affected,
                    label: rec.label,
                    lost: rec.lost.len(),
                    gained: rec.gained.len(),
                })
            })
            .collect()
    }

    pub fn rule_views(&self) -> Vec<RuleView> {
        self.catalog
            .rules()
            .iter()
            .map(|r| RuleView {
                id: r.id.to_string(),
                name: r.name.clone(),
                languages: r.languages.clone(),
                pattern: r.describe(),
            })
            .collect()
    }
}

#[wasm_bindgen]
impl Demo {
    /// A demo using the bundled desk tokenizer.
    #[wasm_bindgen(constructor)]
    pub fn new() -> Demo {
        Demo::default()
    }

    /// Replace the tokenizer with a native file or a `tokenizer.json`.
    /// Returns the new vocabulary size.
    #[wasm_bindgen(js_name = loadTokenizer)]
    pub fn load_tokenizer(&mut self, json: &str) -> Result<usize, JsError> {
        self.set_tokenizer(json).map_err(js_err)
    }

    #[wasm_bindgen(js_name = vocabSize)]
    pub fn vocab_size(&self) -> usize {
        self.spec.vocab_size()
    }

    pub fn rules(&self) -> String {
        to_js(&self.rule_views())
    }

    pub fn encode(&self, text: &str) -> Result<String, JsError> {
        self.encoding_view(text).map(|v| to_js(&v)).map_err(js_err)
    }

    pub fn lex(&self, source: &str, lang: &str) -> Result<String, JsError> {
        self.lex_view(source, lang).map(|v| to_js(&v)).map_err(js_err)
    }

    pub fn analyze(&self, source: &str, lang: &str, rule: &str) -> Result<String, JsError> {
        self.analysis(source, lang, rule).map(|v| to_js(&v)).map_err(js_err)
    }

    pub fn sweep(&self, source: &str, lang: &str) -> Result<String, JsError> {
        self.sweep_rows(source, lang).map(|v| to_js(&v)).map_err(js_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_pieces_cover_the_text() {
        let demo = Demo::default();
        let text = "q.factorial(n) 日本🙂";
        let v = demo.encoding_view(text).unwrap();
        let joined: String = v.tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(joined, text);
        assert_eq!(v.tokens[1].text, ".factorial");
    }

    #[test]
    fn analysis_reports_rewrite_and_label() {
        let demo = Demo::default();
        let a = demo.analysis("int myVar = 0;", "java", "N1").unwrap();
        assert!(a.affected);
        assert_eq!(a.rewritten, "int my_var = 0;");
        assert_eq!(a.renames["myVar"], "my_var");
        let json: serde_json::Value = serde_json::from_str(&to_js(&a)).unwrap();
        assert!(json["label"].is_string());
    }

    #[test]
    fn sweep_lists_applicable_rules() {
        let demo = Demo::default();
        let rows = demo.sweep_rows("def f(x):\n    return x[0]\n", "python").unwrap();
        assert!(rows.iter().all(|r| r.rule != "N1"));
        assert!(rows.iter().any(|r| r.affected));
        assert_eq!(demo.rule_views().len(), 24);
    }

    #[test]
    fn bad_inputs_are_errors() {
        let mut demo = Demo::default();
        assert!(matches!(demo.lex_view("x", "cobol"), Err(DemoError::Language(_))));
        assert!(matches!(demo.analysis("x", "java", "S99"), Err(DemoError::Rule(_))));
        assert!(demo.set_tokenizer("{}").is_err());
        assert_eq!(demo.vocab_size(), demo.spec().vocab_size());
    }
}
