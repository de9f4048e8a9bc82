use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use drift_core::metrics::{parse_fraction, Assignment, LabelSet, MetricsError, SampleLabel};

use crate::{io_err, HarnessError};

/// Model name used when a label line has none.
pub const DEFAULT_MODEL: &str = "default";

/// Label sets keyed by model name.
pub type ModelLabels = BTreeMap<String, LabelSet>;

/// One line of a label file. `pass_fraction` may be a number or a
/// `"num/den"` string; `correct` may be a boolean or 0/1. At least one of
/// the two must be present, and they must agree when both are.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelLine {
    #[serde(default)]
    model: Option<String>,
    sample_id: String,
    assignment: Assignment,
    #[serde(default)]
    pass_fraction: Option<Value>,
    #[serde(default)]
    correct: Option<Value>,
}

fn to_label(line: LabelLine) -> Result<SampleLabel, String> {
    let r = match &line.pass_fraction {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(parse_fraction(s).map_err(|e| e.to_string())?),
        Some(Value::Number(n)) => Some(parse_fraction(&n.to_string()).map_err(|e| e.to_string())?),
        Some(other) => return Err(format!("pass_fraction must be a number or string, got {other}")),
    };
    let y = match &line.correct {
        None | Some(Value::Null) => None,
        Some(Value::Bool(b)) => Some(*b),
        Some(Value::Number(n)) if n.as_u64() == Some(0) => Some(false),
        Some(Value::Number(n)) if n.as_u64() == Some(1) => Some(true),
        Some(other) => return Err(format!("correct must be a boolean or 0/1, got {other}")),
    };
    let label = match (r, y) {
        (Some(r), Some(y)) => SampleLabel::from_both(&line.sample_id, line.assignment, r, y),
        (Some(r), None) => SampleLabel::from_pass_fraction(&line.sample_id, line.assignment, r),
        (None, Some(y)) => Ok(SampleLabel::from_correct(&line.sample_id, line.assignment, y)),
        (None, None) => return Err("one of pass_fraction or correct is required".into()),
    };
    label.map_err(|e: MetricsError| e.to_string())
}

/// Read a JSON Lines label file into one [`LabelSet`] per model.
pub fn read_labels(path: &Path) -> Result<ModelLabels, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = ModelLabels::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| HarnessError::Record {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let parsed: LabelLine = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let model = parsed.model.clone().unwrap_or_else(|| DEFAULT_MODEL.into());
        let label = to_label(parsed).map_err(err)?;
        out.entry(model)
            .or_default()
            .insert(label)
            .map_err(|e| err(e.to_string()))?;
    }
    Ok(out)
}
