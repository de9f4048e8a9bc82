//! Measure how subword tokenization drifts when source code is rewritten
//! without changing its meaning.
//!
//! The crate is organised as a pipeline:
//!
//! - [`lexer`]: grammar-level tokens for Java and Python, plus the immutable
//!   and declaration identifier sets used to decide what may be renamed.
//! - [`rewrite`]: the naming (`N1`..`N6`) and spacing (`S1`..`S18`) rewrite
//!   rules and the edit-event log each application produces.
//! - [`bpe`]: byte-pair-encoding tokenizers with character-exact token
//!   start offsets.
//! - [`drift`]: classification of how token boundaries moved (unchanged,
//!   merged, split, mixed) and the per-sample analysis pipeline.
//! - [`metrics`]: accuracy, delta-accuracy, sensitivity, frequency ratios
//!   and the Wilcoxon signed-rank test, computed from ingested labels.

pub mod bpe;
pub mod drift;
pub mod lexer;
pub mod metrics;
pub mod rewrite;

pub use lexer::{lex, CodeToken, Language, LexError, Span, TokenIndex, TokenKind};
