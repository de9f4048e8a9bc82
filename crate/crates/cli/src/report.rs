use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use drift_core::drift::Label;
use drift_core::metrics::{fraction_to_f64, wilcoxon_signed_rank, MetricsError, MetricsReport, RuleOutcome, WilcoxonMethod};
use drift_core::rewrite::{RuleId, RuleKind};
use drift_core::Language;

use crate::labels::ModelLabels;
use crate::HarnessError;

/// The fields of a drift record that metrics need. Extra fields in the
/// line are ignored, so `drift.jsonl` is read as is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriftSummary {
    pub sample_id: String,
    pub rule: RuleId,
    pub language: Language,
    pub affected: bool,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub a: String,
    pub b: String,
    /// `naming`, `spacing` or `all`.
    pub group: String,
    /// Rules with a defined sensitivity under both models.
    pub rules: usize,
    pub statistic: Option<f64>,
    pub p_value: f64,
    pub method: Option<WilcoxonMethod>,
    /// Every paired difference was zero; `p_value` is 1.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsOutput {
    /// Model, then subset (`java`, `python`, `all`), then report.
    pub models: BTreeMap<String, BTreeMap<String, MetricsReport>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub comparisons: Vec<Comparison>,
}

fn outcomes(records: &[&DriftSummary]) -> (BTreeSet<String>, BTreeMap<RuleId, RuleOutcome>) {
    let mut samples = BTreeSet::new();
    let mut out: BTreeMap<RuleId, RuleOutcome> = BTreeMap::new();
    for r in records {
        samples.insert(r.sample_id.clone());
        let o = out.entry(r.rule).or_default();
        if r.affected {
            o.affected.insert(r.sample_id.clone());
            o.partition.insert(r.sample_id.clone(), r.label);
        }
    }
    (samples, out)
}

fn compare(output: &MetricsOutput, a: &str, b: &str) -> Result<Vec<Comparison>, HarnessError> {
    let per_rule = |model: &str| -> Result<BTreeMap<RuleId, f64>, HarnessError> {
        let report = output
            .models
            .get(model)
            .and_then(|m| m.get("all"))
            .ok_or_else(|| HarnessError::Usage(format!("no labels for model `{model}`")))?;
        Ok(report
            .rules
            .iter()
            .filter_map(|r| r.sensitivity.map(|s| (r.rule, fraction_to_f64(s))))
            .collect())
    };
    let (sa, sb) = (per_rule(a)?, per_rule(b)?);
    let groups: [(&str, Option<RuleKind>); 3] =
        [("naming", Some(RuleKind::Naming)), ("spacing", Some(RuleKind::Spacing)), ("all", None)];
    Ok(groups
        .iter()
        .map(|&(name, kind)| {
            let pairs: Vec<(f64, f64)> = sa
                .iter()
                .filter(|(id, _)| kind.is_none_or(|k| id.kind == k))
                .filter_map(|(id, &x)| sb.get(id).map(|&y| (x, y)))
                .collect();
            let base = Comparison {
                a: a.to_owned(),
                b: b.to_owned(),
                group: name.to_owned(),
                rules: pairs.len(),
                statistic: None,
                p_value: 1.0,
                method: None,
                degenerate: true,
            };
            match wilcoxon_signed_rank(&pairs) {
                Ok(w) => Comparison {
                    statistic: Some(w.statistic),
                    p_value: w.p_value,
                    method: Some(w.method),
                    degenerate: false,
                    ..base
                },
                Err(_) => base,
            }
        })
        .collect())
}

/// Compute per-model reports for each language subset and for the whole
/// corpus, then the requested pairwise model comparisons.
pub fn build_metrics(
    drift: &[DriftSummary],
    labels: &ModelLabels,
    comparisons: &[(String, String)],
) -> Result<MetricsOutput, HarnessError> {
    let mut subsets: Vec<(String, Vec<&DriftSummary>)> = Language::ALL
        .iter()
        .map(|&l| (l.to_string(), drift.iter().filter(|r| r.language == l).collect::<Vec<_>>()))
        .filter(|(_, v)| !v.is_empty())
        .collect();
    subsets.push(("all".into(), drift.iter().collect()));

    let mut output = MetricsOutput {
        models: BTreeMap::new(),
        comparisons: Vec::new(),
    };
    for (model, set) in labels {
        let mut reports = BTreeMap::new();
        for (name, records) in &subsets {
            let (samples, outs) = outcomes(records);
            if samples.is_empty() {
                continue;
            }
            let report = MetricsReport::build(set, &samples, &outs).map_err(|source: MetricsError| {
                HarnessError::Metrics {
                    model: model.clone(),
                    subset: name.clone(),
                    source,
                }
            })?;
            reports.insert(name.clone(), report);
        }
        output.models.insert(model.clone(), reports);
    }
    for (a, b) in comparisons {
        let c = compare(&output, a, b)?;
        output.comparisons.extend(c);
    }
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use drift_core::metrics::{Assignment, Fraction, LabelSet, SampleLabel};

    fn rec(id: &str, rule: &str, affected: bool, label: Label) -> DriftSummary {
        DriftSummary {
            sample_id: id.into(),
            rule: rule.parse().unwrap(),
            language: Language::Python,
            affected,
            label,
        }
    }

    fn labels(base: &[u8], variant: &[u8], rule: &str) -> LabelSet {
        let mut l = LabelSet::new();
        for (i, (&b, &v)) in base.iter().zip(variant).enumerate() {
            let id = format!("s{i}");
            l.insert(SampleLabel::from_correct(&id, Assignment::Baseline, b == 1)).unwrap();
            l.insert(SampleLabel::from_correct(&id, Assignment::Rule(rule.parse().unwrap()), v == 1))
                .unwrap();
        }
        l
    }

    #[test]
    fn ten_sample_fixture() {
        let drift: Vec<DriftSummary> = (0..10).map(|i| rec(&format!("s{i}"), "S15", true, Label::Merged)).collect();
        let set = labels(&[1, 1, 0, 1, 0, 1, 1, 0, 1, 1], &[1, 0, 0, 1, 1, 1, 1, 0, 1, 1], "S15");
        let out = build_metrics(&drift, &ModelLabels::from([("m".into(), set)]), &[]).unwrap();
        let all = &out.models["m"]["all"];
        assert_eq!(all.rules[0].sensitivity, Some(Fraction::new(1, 5)));
        assert_eq!(all.rules[0].delta_accuracy, Fraction::from_integer(0));
        assert!(out.models["m"].contains_key("python"));
        assert!(!out.models["m"].contains_key("java"));
    }

    #[test]
    fn identical_labels_give_zeros() {
        let drift = vec![rec("s0", "S1", true, Label::Split), rec("s1", "S1", false, Label::Unchanged)];
        let set = labels(&[1, 0], &[1, 0], "S1");
        let out = build_metrics(&drift, &ModelLabels::from([("m".into(), set)]), &[]).unwrap();
        let r = &out.models["m"]["all"].rules[0];
        assert_eq!(r.sensitivity, Some(Fraction::from_integer(0)));
        assert_eq!(r.delta_accuracy, Fraction::from_integer(0));
    }

    #[test]
    fn variant_only_is_missing_baseline() {
        let drift = vec![rec("s0", "S1", true, Label::Split)];
        let mut set = LabelSet::new();
        set.insert(SampleLabel::from_correct("s0", Assignment::Rule("S1".parse().unwrap()), true))
            .unwrap();
        let err = build_metrics(&drift, &ModelLabels::from([("m".into(), set)]), &[]).unwrap_err();
        assert!(matches!(
            err,
            HarnessError::Metrics {
                source: MetricsError::MissingLabel {
                    assignment: Assignment::Baseline,
                    ..
                },
                ..
            }
        ));
    }

    #[test]
    fn comparisons() {
        let drift = vec![rec("s0", "S1", true, Label::Split), rec("s1", "S1", true, Label::Merged)];
        let models = ModelLabels::from([
            ("a".into(), labels(&[1, 1], &[0, 1], "S1")),
            ("b".into(), labels(&[1, 1], &[1, 1], "S1")),
        ]);
        let out = build_metrics(&drift, &models, &[("a".into(), "b".into())]).unwrap();
        assert_eq!(out.comparisons.len(), 3);
        let spacing = &out.comparisons[1];
        assert_eq!((spacing.group.as_str(), spacing.rules), ("spacing", 1));
        assert_eq!(spacing.p_value, 1.0);
        assert!(!spacing.degenerate);
        let naming = &out.comparisons[0];
        assert!(naming.degenerate && naming.rules == 0);
        assert!(build_metrics(&drift, &models, &[("a".into(), "zz".into())]).is_err());
    }
}
