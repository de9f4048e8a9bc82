use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use drift_core::bpe::TokenizerSpec;
use drift_core::drift::{DriftRecord, SampleAnalyzer};
use drift_core::lexer::{classify_identifiers, ImmutableTypes};
use drift_core::rewrite::{apply_rule, propagate_renames, EditEvent, RewriteRule, RuleCatalog, RuleId, RuleKind};
use drift_core::{lex, Language};

use crate::corpus::SampleRecord;
use crate::HarnessError;

pub const LANGUAGE_MISMATCH: &str = "language-mismatch";

/// One `(sample, rule)` line of `rewrites.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteRecord {
    pub sample_id: String,
    pub rule: RuleId,
    pub language: Language,
    /// Why the pair was not processed, e.g. `language-mismatch`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub affected: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewritten: Option<String>,
    #[serde(default)]
    pub events: Vec<EditEvent>,
    #[serde(default)]
    pub renames: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patches: Vec<String>,
}

/// One failure, collected instead of aborting the batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub sample_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleId>,
    pub stage: String,
    pub message: String,
}

impl ErrorRecord {
    fn new(sample_id: &str, rule: Option<RuleId>, stage: &str, message: impl ToString) -> Self {
        ErrorRecord {
            sample_id: sample_id.to_owned(),
            rule,
            stage: stage.to_owned(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput<T> {
    pub records: Vec<T>,
    pub errors: Vec<ErrorRecord>,
}

/// Resolve `all` or a comma-separated list of rule ids.
pub fn select_rules(catalog: &RuleCatalog, spec: &str) -> Result<Vec<RewriteRule>, HarnessError> {
    let spec = spec.trim();
    if spec.is_empty() || spec.eq_ignore_ascii_case("all") {
        return Ok(catalog.rules().to_vec());
    }
    let mut rules = spec
        .split(',')
        .map(|id| catalog.lookup(id.trim()).cloned())
        .collect::<Result<Vec<_>, _>>()?;
    rules.sort_by_key(|r| r.id);
    rules.dedup_by_key(|r| r.id);
    Ok(rules)
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Run `f` on every sample with `workers` threads. A panicking sample is
/// turned into an error record. Results keep the sample order.
fn fan_out<T, F>(samples: &[SampleRecord], workers: usize, f: F) -> RunOutput<T>
where
    T: Send,
    F: Fn(&SampleRecord) -> RunOutput<T> + Sync,
{
    let run = |s: &SampleRecord| {
        catch_unwind(AssertUnwindSafe(|| f(s))).unwrap_or_else(|p| RunOutput {
            records: Vec::new(),
            errors: vec![ErrorRecord::new(&s.id, None, "panic", panic_message(p))],
        })
    };
    let parts: Vec<RunOutput<T>> = match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(|| samples.par_iter().map(run).collect()),
        Err(_) => samples.iter().map(run).collect(),
    };
    let mut out = RunOutput {
        records: Vec::new(),
        errors: Vec::new(),
    };
    for p in parts {
        out.records.extend(p.records);
        out.errors.extend(p.errors);
    }
    out.errors
        .sort_by(|a, b| (&a.sample_id, a.rule).cmp(&(&b.sample_id, b.rule)));
    out
}

/// Apply each rule to each sample.
pub fn rewrite_corpus(
    samples: &[SampleRecord],
    rules: &[RewriteRule],
    immutable: &ImmutableTypes,
    workers: usize,
) -> RunOutput<RewriteRecord> {
    let mut out = fan_out(samples, workers, |s| {
        let mut res = RunOutput {
            records: Vec::new(),
            errors: Vec::new(),
        };
        let index = match lex(&s.source, s.language) {
            Ok(i) => i,
            Err(e) => {
                res.errors.push(ErrorRecord::new(&s.id, None, "lex", e));
                return res;
            }
        };
        let context = classify_identifiers(&index, immutable);
        for rule in rules {
            let mut rec = RewriteRecord {
                sample_id: s.id.clone(),
                rule: rule.id,
                language: s.language,
                skipped: None,
                affected: false,
                rewritten: None,
                events: Vec::new(),
                renames: BTreeMap::new(),
                patches: Vec::new(),
            };
            if !rule.applies_to(s.language) {
                rec.skipped = Some(LANGUAGE_MISMATCH.into());
                res.records.push(rec);
                continue;
            }
            let result = match apply_rule(&index, &context, rule) {
                Ok(r) => r,
                Err(e) => {
                    res.errors.push(ErrorRecord::new(&s.id, Some(rule.id), "rewrite", e));
                    continue;
                }
            };
            if rule.kind() == RuleKind::Naming && !s.patches.is_empty() {
                match propagate_renames(&s.patches, &result.renames, s.language) {
                    Ok(p) => rec.patches = p,
                    Err(e) => {
                        res.errors.push(ErrorRecord::new(&s.id, Some(rule.id), "patch", e));
                        continue;
                    }
                }
            }
            rec.affected = result.is_affected(&s.source);
            rec.rewritten = Some(result.rewritten);
            rec.events = result.events;
            rec.renames = result.renames;
            res.records.push(rec);
        }
        res
    });
    out.records
        .sort_by(|a, b| (&a.sample_id, a.rule).cmp(&(&b.sample_id, b.rule)));
    out
}

/// Rewrite, encode and classify every applicable `(sample, rule)` pair.
/// Pairs whose rule does not cover the sample's language are left out.
pub fn analyze_corpus(
    samples: &[SampleRecord],
    rules: &[RewriteRule],
    spec: &TokenizerSpec,
    immutable: &ImmutableTypes,
    workers: usize,
) -> RunOutput<DriftRecord> {
    let mut out = fan_out(samples, workers, |s| {
        let mut res = RunOutput {
            records: Vec::new(),
            errors: Vec::new(),
        };
        let analyzer = match SampleAnalyzer::new(&s.id, &s.source, s.language, spec, immutable) {
            Ok(a) => a,
            Err(e) => {
                res.errors.push(ErrorRecord::new(&s.id, None, "prepare", e.kind));
                return res;
            }
        };
        for rule in rules.iter().filter(|r| r.applies_to(s.language)) {
            match analyzer.analyze(rule) {
                Ok(r) => res.records.push(r),
                Err(e) => res.errors.push(ErrorRecord::new(&s.id, Some(rule.id), "analyze", e.kind)),
            }
        }
        res
    });
    out.records
        .sort_by(|a, b| (&a.sample_id, a.rule).cmp(&(&b.sample_id, b.rule)));
    out
}
