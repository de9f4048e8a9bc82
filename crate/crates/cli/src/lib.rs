//! Batch harness behind the `drift` command: corpus and label ingestion,
//! parallel rewrite and analysis runs, and report emission.
//!
//! All record files are JSON Lines, sorted by `(sample_id, rule)` so that
//! output bytes do not depend on the worker count.

pub mod corpus;
pub mod labels;
pub mod pipeline;
pub mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use drift_core::bpe::TokenizerError;
use drift_core::lexer::ConfigError;
use drift_core::metrics::MetricsError;
use drift_core::rewrite::RuleError;

pub use corpus::{read_corpus, SampleRecord};
pub use labels::{read_labels, ModelLabels};
pub use pipeline::{analyze_corpus, rewrite_corpus, select_rules, ErrorRecord, RewriteRecord, RunOutput};
pub use report::{build_metrics, Comparison, DriftSummary, MetricsOutput};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}:{line}: {message}")]
    Record { path: PathBuf, line: usize, message: String },
    #[error("duplicate sample id `{0}`")]
    DuplicateId(String),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Tokenizer(#[from] TokenizerError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("model {model}, subset {subset}: {source}")]
    Metrics {
        model: String,
        subset: String,
        source: MetricsError,
    },
    #[error("{0}")]
    Usage(String),
}

pub(crate) fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Write one JSON object per line.
pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut w, item).map_err(|e| io_err(path, e))?;
        w.write_all(b"\n").map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Parse every non-blank line of a JSON Lines file.
pub fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| HarnessError::Record {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
