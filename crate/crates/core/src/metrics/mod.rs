//! Robustness metrics over ingested correctness labels.
//!
//! Labels carry a test pass fraction `r` or a correctness bit `Y`
//! (`Y = 1` iff `r = 1`). Accuracy, accuracy deltas and flip-rate
//! sensitivity are computed in exact rational arithmetic; a metric whose
//! denominator would be empty is `None`, never zero.

mod frequency;
mod wilcoxon;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::drift::Label;
use crate::rewrite::RuleId;

pub use frequency::{frequency_ratio, CorpusFile, FrequencyCount, FrequencyError};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonMethod, WilcoxonResult, EXACT_LIMIT};

pub type Fraction = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("value {0} is outside [0, 1]")]
    Range(String),
    #[error("missing {assignment} labels for {} sample(s): {}", .samples.len(), .samples.join(", "))]
    MissingLabel {
        assignment: Assignment,
        samples: Vec<String>,
    },
    #[error("the evaluation subset is empty")]
    EmptySubset,
    #[error("the affected set is empty")]
    EmptyAffectedSet,
    #[error("no fragment label for affected sample(s): {}", .0.join(", "))]
    PartitionGap(Vec<String>),
    #[error("inconsistent label for {sample_id}: {reason}")]
    Inconsistent { sample_id: String, reason: String },
    #[error("all differences are zero")]
    DegenerateInput,
}

/// Which variant of the input a label was produced on: the unmodified
/// baseline, or the output of one rewrite rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assignment {
    Baseline,
    Rule(RuleId),
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assignment::Baseline => f.write_str("baseline"),
            Assignment::Rule(id) => id.fmt(f),
        }
    }
}

impl FromStr for Assignment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" | "0" => Ok(Assignment::Baseline),
            other => other.parse().map(Assignment::Rule),
        }
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(0) => Ok(Assignment::Baseline),
            Raw::Num(n) => Err(serde::de::Error::custom(format!("assignment {n} is not 0 or a rule id"))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Nearest `f64`, for display and for tests that need floating inputs.
pub fn fraction_to_f64(f: Fraction) -> f64 {
    f.to_f64().unwrap_or(f64::NAN)
}

/// The task-level correctness indicator: 1 iff every test passed.
pub fn correctness(r: Fraction) -> Result<u8, MetricsError> {
    if r < Fraction::zero() || r > Fraction::from_integer(1) {
        return Err(MetricsError::Range(r.to_string()));
    }
    Ok(u8::from(r == Fraction::from_integer(1)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleLabel {
    pub sample_id: String,
    pub assignment: Assignment,
    #[serde(with = "opt_fraction", default)]
    pub pass_fraction: Option<Fraction>,
    pub correct: u8,
}

impl SampleLabel {
    pub fn from_pass_fraction(sample_id: &str, assignment: Assignment, r: Fraction) -> Result<Self, MetricsError> {
        Ok(SampleLabel {
            sample_id: sample_id.to_owned(),
            assignment,
            pass_fraction: Some(r),
            correct: correctness(r)?,
        })
    }

    pub fn from_correct(sample_id: &str, assignment: Assignment, correct: bool) -> Self {
        SampleLabel {
            sample_id: sample_id.to_owned(),
            assignment,
            pass_fraction: None,
            correct: u8::from(correct),
        }
    }

    /// A label carrying both `r` and `Y`; they must agree.
    pub fn from_both(sample_id: &str, assignment: Assignment, r: Fraction, correct: bool) -> Result<Self, MetricsError> {
        let label = Self::from_pass_fraction(sample_id, assignment, r)?;
        if label.correct != u8::from(correct) {
            return Err(MetricsError::Inconsistent {
                sample_id: sample_id.to_owned(),
                reason: format!("pass fraction {r} but correct = {correct}"),
            });
        }
        Ok(label)
    }
}

/// Labels for one model, indexed by assignment then sample id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    by_assignment: BTreeMap<Assignment, BTreeMap<String, u8>>,
}

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a label. A repeated (assignment, sample) pair must agree.
    pub fn insert(&mut self, label: SampleLabel) -> Result<(), MetricsError> {
        let slot = self.by_assignment.entry(label.assignment).or_default();
        match slot.get(&label.sample_id) {
            Some(&y) if y != label.correct => Err(MetricsError::Inconsistent {
                sample_id: label.sample_id,
                reason: format!("conflicting {} labels", label.assignment),
            }),
            _ => {
                slot.insert(label.sample_id, label.correct);
                Ok(())
            }
        }
    }

    pub fn get(&self, assignment: Assignment, sample_id: &str) -> Option<u8> {
        self.by_assignment.get(&assignment)?.get(sample_id).copied()
    }

    pub fn has_assignment(&self, assignment: Assignment) -> bool {
        self.by_assignment.contains_key(&assignment)
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.by_assignment.keys().copied()
    }

    /// Correctness bits for `samples`, or the list of those without one.
    fn collect<'a>(
        &self,
        assignment: Assignment,
        samples: impl IntoIterator<Item = &'a String>,
    ) -> Result<Vec<u8>, MetricsError> {
        let mut ys = Vec::new();
        let mut missing = Vec::new();
        for s in samples {
            match self.get(assignment, s) {
                Some(y) => ys.push(y),
                None => missing.push(s.clone()),
            }
        }
        if missing.is_empty() {
            Ok(ys)
        } else {
            Err(MetricsError::MissingLabel {
                assignment,
                samples: missing,
            })
        }
    }
}

impl FromIterator<SampleLabel> for Result<LabelSet, MetricsError> {
    fn from_iter<I: IntoIterator<Item = SampleLabel>>(iter: I) -> Self {
        let mut set = LabelSet::new();
        for l in iter {
            set.insert(l)?;
        }
        Ok(set)
    }
}

/// Mean correctness of `assignment` over `subset`.
pub fn accuracy(labels: &LabelSet, assignment: Assignment, subset: &BTreeSet<String>) -> Result<Fraction, MetricsError> {
    if subset.is_empty() {
        return Err(MetricsError::EmptySubset);
    }
    let ys = labels.collect(assignment, subset)?;
    let correct: i64 = ys.iter().map(|&y| y as i64).sum();
    Ok(Fraction::new(correct, subset.len() as i64))
}

/// `Accuracy(variant) - Accuracy(baseline)` over the same subset.
pub fn delta_accuracy(labels: &LabelSet, variant: Assignment, subset: &BTreeSet<String>) -> Result<Fraction, MetricsError> {
    let base = accuracy(labels, Assignment::Baseline, subset)?;
    Ok(accuracy(labels, variant, subset)? - base)
}

/// Correctness flips between baseline and variant on a set of samples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flips {
    pub samples: usize,
    /// Correct at baseline, wrong on the variant.
    pub to_wrong: usize,
    /// Wrong at baseline, correct on the variant.
    pub to_right: usize,
}

impl Flips {
    pub fn total(&self) -> usize {
        self.to_wrong + self.to_right
    }

    /// Flip rate; `None` over an empty set.
    pub fn rate(&self) -> Option<Fraction> {
        (self.samples > 0).then(|| Fraction::new(self.total() as i64, self.samples as i64))
    }
}

pub fn flips(labels: &LabelSet, variant: Assignment, samples: &BTreeSet<String>) -> Result<Flips, MetricsError> {
    let base = labels.collect(Assignment::Baseline, samples)?;
    let var = labels.collect(variant, samples)?;
    let mut f = Flips {
        samples: samples.len(),
        ..Flips::default()
    };
    for (b, v) in base.into_iter().zip(var) {
        match (b, v) {
            (1, 0) => f.to_wrong += 1,
            (0, 1) => f.to_right += 1,
            _ => {}
        }
    }
    Ok(f)
}

/// Fraction of the affected samples whose correctness flips.
pub fn sensitivity(labels: &LabelSet, variant: Assignment, affected: &BTreeSet<String>) -> Result<Fraction, MetricsError> {
    flips(labels, variant, affected)?
        .rate()
        .ok_or(MetricsError::EmptyAffectedSet)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub samples: usize,
    pub flips: usize,
    #[serde(with = "opt_fraction")]
    pub sensitivity: Option<Fraction>,
}

impl From<Flips> for Stratum {
    fn from(f: Flips) -> Self {
        Stratum {
            samples: f.samples,
            flips: f.total(),
            sensitivity: f.rate(),
        }
    }
}

/// Sensitivity restricted to each fragment-change category, plus
/// `changed`, the union of merged, split and mixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifiedSensitivity {
    pub unchanged: Stratum,
    pub merged: Stratum,
    pub split: Stratum,
    pub mixed: Stratum,
    pub changed: Stratum,
}

impl StratifiedSensitivity {
    pub fn get(&self, label: Label) -> &Stratum {
        match label {
            Label::Unchanged => &self.unchanged,
            Label::Merged => &self.merged,
            Label::Split => &self.split,
            Label::Mixed => &self.mixed,
        }
    }
}

pub fn stratified_sensitivity(
    labels: &LabelSet,
    variant: Assignment,
    affected: &BTreeSet<String>,
    partition: &BTreeMap<String, Label>,
) -> Result<StratifiedSensitivity, MetricsError> {
    let gaps: Vec<String> = affected.iter().filter(|s| !partition.contains_key(*s)).cloned().collect();
    if !gaps.is_empty() {
        return Err(MetricsError::PartitionGap(gaps));
    }
    let stratum = |pred: &dyn Fn(Label) -> bool| -> Result<Stratum, MetricsError> {
        let subset: BTreeSet<String> = affected.iter().filter(|s| pred(partition[*s])).cloned().collect();
        Ok(flips(labels, variant, &subset)?.into())
    };
    Ok(StratifiedSensitivity {
        unchanged: stratum(&|l| l == Label::Unchanged)?,
        merged: stratum(&|l| l == Label::Merged)?,
        split: stratum(&|l| l == Label::Split)?,
        mixed: stratum(&|l| l == Label::Mixed)?,
        changed: stratum(&|l| l != Label::Unchanged)?,
    })
}

/// What the drift analysis says about one rule: which samples it changed
/// and their fragment-change labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleOutcome {
    pub affected: BTreeSet<String>,
    pub partition: BTreeMap<String, Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleMetrics {
    pub rule: RuleId,
    #[serde(with = "fraction")]
    pub accuracy: Fraction,
    #[serde(with = "fraction")]
    pub delta_accuracy: Fraction,
    pub affected: usize,
    pub flips_to_wrong: usize,
    pub flips_to_right: usize,
    #[serde(with = "opt_fraction")]
    pub sensitivity: Option<Fraction>,
    pub stratified: StratifiedSensitivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub subset_size: usize,
    #[serde(with = "fraction")]
    pub baseline_accuracy: Fraction,
    pub rules: Vec<RuleMetrics>,
    /// Unweighted mean of the defined per-rule sensitivities.
    #[serde(with = "opt_fraction")]
    pub mean_sensitivity: Option<Fraction>,
    /// Total flips over total affected samples.
    #[serde(with = "opt_fraction")]
    pub weighted_sensitivity: Option<Fraction>,
}

impl MetricsReport {
    /// Assemble the full report for one model. Rules without any variant
    /// labels are left out. Unaffected samples have the same input as the
    /// baseline, so for them a missing variant label falls back to the
    /// baseline one; affected samples must be labelled.
    pub fn build(
        labels: &LabelSet,
        subset: &BTreeSet<String>,
        outcomes: &BTreeMap<RuleId, RuleOutcome>,
    ) -> Result<Self, MetricsError> {
        let baseline_accuracy = accuracy(labels, Assignment::Baseline, subset)?;
        let mut rules = Vec::new();
        for (&rule, outcome) in outcomes {
            let variant = Assignment::Rule(rule);
            if !labels.has_assignment(variant) {
                continue;
            }
            let mut correct = 0i64;
            let mut missing = Vec::new();
            for s in subset {
                let y = labels.get(variant, s).or_else(|| {
                    if outcome.affected.contains(s) {
                        None
                    } else {
                        labels.get(Assignment::Baseline, s)
                    }
                });
                match y {
                    Some(y) => correct += y as i64,
                    None => missing.push(s.clone()),
                }
            }
            if !missing.is_empty() {
                return Err(MetricsError::MissingLabel {
                    assignment: variant,
                    samples: missing,
                });
            }
            let accuracy = Fraction::new(correct, subset.len() as i64);
            let affected: BTreeSet<String> = outcome.affected.intersection(subset).cloned().collect();
            let f = flips(labels, variant, &affected)?;
            rules.push(RuleMetrics {
                rule,
                accuracy,
                delta_accuracy: accuracy - baseline_accuracy,
                affected: affected.len(),
                flips_to_wrong: f.to_wrong,
                flips_to_right: f.to_right,
                sensitivity: f.rate(),
                stratified: stratified_sensitivity(labels, variant, &affected, &outcome.partition)?,
            });
        }
        let defined: Vec<Fraction> = rules.iter().filter_map(|r| r.sensitivity).collect();
        let mean_sensitivity = (!defined.is_empty())
            .then(|| defined.iter().copied().sum::<Fraction>() / Fraction::from_integer(defined.len() as i64));
        let (flipped, affected) = rules.iter().fold((0i64, 0i64), |(f, a), r| {
            (f + (r.flips_to_wrong + r.flips_to_right) as i64, a + r.affected as i64)
        });
        Ok(MetricsReport {
            subset_size: subset.len(),
            baseline_accuracy,
            rules,
            mean_sensitivity,
            weighted_sensitivity: (affected > 0).then(|| Fraction::new(flipped, affected)),
        })
    }
}

/// Parse `"3/4"`, `"1"`, or a decimal such as `"0.75"` into a fraction.
pub fn parse_fraction(s: &str) -> Result<Fraction, MetricsError> {
    let bad = || MetricsError::Range(s.to_owned());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Fraction::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let scale = 10i64.pow(frac.len() as u32);
    let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac_v: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    Ok(Fraction::new(int * scale + frac_v, scale))
}

/// Fractions appear in reports as JSON numbers.
mod fraction {
    use super::*;

    pub fn serialize<S: Serializer>(f: &Fraction, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(f.to_f64().unwrap_or(f64::NAN))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Fraction, D::Error> {
        let v = f64::deserialize(d)?;
        Fraction::approximate_float(v).ok_or_else(|| serde::de::Error::custom("fraction out of range"))
    }
}

/// Undefined fractions appear as `null`.
mod opt_fraction {
    use super::*;

    pub fn serialize<S: Serializer>(f: &Option<Fraction>, s: S) -> Result<S::Ok, S::Error> {
        match f {
            Some(f) => super::fraction::serialize(f, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Fraction>, D::Error> {
        Option::<f64>::deserialize(d)?
            .map(|v| Fraction::approximate_float(v).ok_or_else(|| serde::de::Error::custom("fraction out of range")))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> BTreeSet<String> {
        (0..n).map(|i| format!("s{i:02}")).collect()
    }

    fn set_of(assignment: Assignment, ys: &[u8], labels: &mut LabelSet) {
        for (i, &y) in ys.iter().enumerate() {
            labels
                .insert(SampleLabel::from_correct(&format!("s{i:02}"), assignment, y == 1))
                .unwrap();
        }
    }

    fn rule(id: &str) -> Assignment {
        Assignment::Rule(id.parse().unwrap())
    }

    #[test]
    fn correctness_indicator() {
        assert_eq!(correctness(Fraction::from_integer(1)), Ok(1));
        assert_eq!(correctness(Fraction::zero()), Ok(0));
        assert_eq!(correctness(Fraction::new(9, 10)), Ok(0));
        assert!(matches!(correctness(Fraction::new(11, 10)), Err(MetricsError::Range(_))));
        assert!(correctness(Fraction::new(-1, 10)).is_err());
    }

    #[test]
    fn accuracy_and_delta() {
        let mut l = LabelSet::new();
        set_of(Assignment::Baseline, &[1, 0, 1, 1], &mut l);
        set_of(rule("S1"), &[1, 0, 0, 1], &mut l);
        let s = ids(4);
        assert_eq!(accuracy(&l, Assignment::Baseline, &s), Ok(Fraction::new(3, 4)));
        assert_eq!(accuracy(&l, rule("S1"), &s), Ok(Fraction::new(1, 2)));
        assert_eq!(delta_accuracy(&l, rule("S1"), &s), Ok(Fraction::new(-1, 4)));
        assert_eq!(accuracy(&l, Assignment::Baseline, &BTreeSet::new()), Err(MetricsError::EmptySubset));
    }

    #[test]
    fn sensitivity_of_ten() {
        let mut l = LabelSet::new();
        set_of(Assignment::Baseline, &[1, 1, 0, 1, 0, 1, 1, 0, 1, 1], &mut l);
        set_of(rule("N1"), &[1, 0, 0, 1, 1, 1, 1, 0, 1, 1], &mut l);
        assert_eq!(sensitivity(&l, rule("N1"), &ids(10)), Ok(Fraction::new(1, 5)));
        assert_eq!(sensitivity(&l, rule("N1"), &BTreeSet::new()), Err(MetricsError::EmptyAffectedSet));
        let mut all = LabelSet::new();
        set_of(Assignment::Baseline, &[1; 10], &mut all);
        set_of(rule("N1"), &[0; 10], &mut all);
        assert_eq!(sensitivity(&all, rule("N1"), &ids(10)), Ok(Fraction::from_integer(1)));
    }

    #[test]
    fn missing_baseline_is_reported() {
        let mut l = LabelSet::new();
        set_of(rule("S1"), &[1, 1], &mut l);
        let err = sensitivity(&l, rule("S1"), &ids(2)).unwrap_err();
        assert_eq!(
            err,
            MetricsError::MissingLabel {
                assignment: Assignment::Baseline,
                samples: vec!["s00".into(), "s01".into()]
            }
        );
    }

    #[test]
    fn stratified() {
        let mut l = LabelSet::new();
        set_of(Assignment::Baseline, &[1, 1, 1, 1], &mut l);
        set_of(rule("S1"), &[0, 1, 1, 1], &mut l);
        let part: BTreeMap<String, Label> = ids(4).into_iter().map(|s| (s, Label::Unchanged)).collect();
        let st = stratified_sensitivity(&l, rule("S1"), &ids(4), &part).unwrap();
        assert_eq!(st.unchanged.sensitivity, Some(Fraction::new(1, 4)));
        assert_eq!(st.changed.sensitivity, None);

        let part = BTreeMap::from([("s00".to_string(), Label::Merged), ("s01".to_string(), Label::Split)]);
        let st = stratified_sensitivity(&l, rule("S1"), &ids(2), &part).unwrap();
        assert_eq!(st.merged.sensitivity, Some(Fraction::from_integer(1)));
        assert_eq!(st.split.sensitivity, Some(Fraction::zero()));
        assert_eq!(st.changed.sensitivity, Some(Fraction::new(1, 2)));

        let st = stratified_sensitivity(&l, rule("S1"), &BTreeSet::new(), &BTreeMap::new()).unwrap();
        assert!(Label::ALL.iter().all(|&c| st.get(c).sensitivity.is_none()));

        assert_eq!(
            stratified_sensitivity(&l, rule("S1"), &ids(3), &part),
            Err(MetricsError::PartitionGap(vec!["s02".into()]))
        );
    }

    #[test]
    fn inconsistent_labels() {
        assert!(SampleLabel::from_both("a", Assignment::Baseline, Fraction::new(1, 2), true).is_err());
        assert!(SampleLabel::from_both("a", Assignment::Baseline, Fraction::from_integer(1), true).is_ok());
        let mut l = LabelSet::new();
        l.insert(SampleLabel::from_correct("a", Assignment::Baseline, true)).unwrap();
        l.insert(SampleLabel::from_correct("a", Assignment::Baseline, true)).unwrap();
        assert!(l.insert(SampleLabel::from_correct("a", Assignment::Baseline, false)).is_err());
    }

    #[test]
    fn report_fallback_and_averages() {
        let mut l = LabelSet::new();
        set_of(Assignment::Baseline, &[1, 1, 0, 1], &mut l);
        // Variant labels only for the affected samples s00 and s01.
        l.insert(SampleLabel::from_correct("s00", rule("S1"), false)).unwrap();
        l.insert(SampleLabel::from_correct("s01", rule("S1"), true)).unwrap();
        let outcome = RuleOutcome {
            affected: ["s00", "s01"].iter().map(|s| s.to_string()).collect(),
            partition: BTreeMap::from([("s00".into(), Label::Merged), ("s01".into(), Label::Unchanged)]),
        };
        let outcomes = BTreeMap::from([("S1".parse().unwrap(), outcome), ("S2".parse().unwrap(), RuleOutcome::default())]);
        let r = MetricsReport::build(&l, &ids(4), &outcomes).unwrap();
        assert_eq!(r.rules.len(), 1, "S2 has no labels");
        let m = &r.rules[0];
        assert_eq!(m.accuracy, Fraction::new(1, 2));
        assert_eq!(m.delta_accuracy, Fraction::new(-1, 4));
        assert_eq!(m.sensitivity, Some(Fraction::new(1, 2)));
        assert_eq!(m.stratified.merged.sensitivity, Some(Fraction::from_integer(1)));
        assert_eq!(r.mean_sensitivity, Some(Fraction::new(1, 2)));
        assert_eq!(r.weighted_sensitivity, Some(Fraction::new(1, 2)));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["rules"][0]["stratified"]["split"]["sensitivity"], serde_json::Value::Null);
        assert_eq!(json["rules"][0]["delta_accuracy"], serde_json::json!(-0.25));
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(parse_fraction("3/4"), Ok(Fraction::new(3, 4)));
        assert_eq!(parse_fraction("0.75"), Ok(Fraction::new(3, 4)));
        assert_eq!(parse_fraction("1"), Ok(Fraction::from_integer(1)));
        assert_eq!(parse_fraction(".5"), Ok(Fraction::new(1, 2)));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("abc").is_err());
    }

    #[test]
    fn assignment_serde() {
        let a: Assignment = serde_json::from_str("0").unwrap();
        assert_eq!(a, Assignment::Baseline);
        let a: Assignment = serde_json::from_str("\"S10\"").unwrap();
        assert_eq!(a, rule("S10"));
        assert_eq!(serde_json::to_string(&Assignment::Baseline).unwrap(), "\"baseline\"");
        assert!(serde_json::from_str::<Assignment>("3").is_err());
    }
}
