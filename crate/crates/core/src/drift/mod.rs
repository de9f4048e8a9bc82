//! Fragment-change classification: how a rewrite moved subword token
//! boundaries, after discounting the boundaries the edit itself creates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bpe::{Encoding, TokenizerError, TokenizerSpec};
use crate::lexer::{classify_identifiers, lex, IdentifierContext, ImmutableTypes, Language, LexError, TokenIndex};
use crate::rewrite::{apply_rule, EditEvent, EditType, RewriteError, RewriteRule, RuleId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Unchanged,
    Merged,
    Split,
    Mixed,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::Unchanged, Label::Merged, Label::Split, Label::Mixed];

    /// The label implied by whether boundaries were lost and/or gained.
    pub fn from_changes(lost_any: bool, gained_any: bool) -> Label {
        match (lost_any, gained_any) {
            (false, false) => Label::Unchanged,
            (true, false) => Label::Merged,
            (false, true) => Label::Split,
            (true, true) => Label::Mixed,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Unchanged => "unchanged",
            Label::Merged => "merged",
            Label::Split => "split",
            Label::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentChange {
    pub label: Label,
    /// Boundaries present before the rewrite and gone after it.
    pub lost: BTreeSet<usize>,
    /// Boundaries present only after the rewrite.
    pub gained: BTreeSet<usize>,
}

impl FragmentChange {
    pub fn unchanged() -> Self {
        FragmentChange {
            label: Label::Unchanged,
            lost: BTreeSet::new(),
            gained: BTreeSet::new(),
        }
    }

    pub fn from_sets(lost: BTreeSet<usize>, gained: BTreeSet<usize>) -> Self {
        FragmentChange {
            label: Label::from_changes(!lost.is_empty(), !gained.is_empty()),
            lost,
            gained,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("edit events out of order: position {next} follows {prev}")]
    Unsorted { prev: usize, next: usize },
    #[error("edit delta {0} is not +1 or -1")]
    BadDelta(i8),
    #[error("{found:?} edit in a {expected:?} log")]
    MixedEditTypes { expected: EditType, found: EditType },
}

/// Working sets of the classification, all in rewritten-text coordinates
/// once every event has been processed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundaryState {
    pub old: BTreeSet<usize>,
    pub new: BTreeSet<usize>,
    pub edits: BTreeSet<usize>,
    pub edits_plus: BTreeSet<usize>,
    pub offset: i64,
}

fn shift_above(set: &BTreeSet<usize>, a: usize, delta: i8) -> BTreeSet<usize> {
    set.iter()
        .map(|&p| if p > a { (p as i64 + delta as i64) as usize } else { p })
        .collect()
}

impl BoundaryState {
    pub fn new(old: &Encoding, new: &Encoding, events: &[EditEvent]) -> Self {
        BoundaryState {
            old: old.boundaries(),
            new: new.boundaries(),
            edits: events.iter().map(|e| e.pos).collect(),
            edits_plus: BTreeSet::new(),
            offset: 0,
        }
    }

    /// Move the old boundaries and edit sites past one edit.
    pub fn apply(&mut self, ev: &EditEvent) {
        let a = (ev.pos as i64 + self.offset) as usize;
        self.old = shift_above(&self.old, a, ev.delta);
        self.edits = shift_above(&self.edits, a, ev.delta);
        self.edits_plus.insert(a + ev.delta.max(0) as usize);
        self.offset += ev.delta as i64;
    }

    /// Drop new boundaries that exist only because of the edit itself.
    pub fn mask(&mut self, edit_type: EditType) {
        let ignored: BTreeSet<usize> = match edit_type {
            EditType::Underscore => self.edits_plus.difference(&self.edits).copied().collect(),
            EditType::Whitespace => self.edits.difference(&self.old).copied().collect(),
        };
        self.new.retain(|p| !ignored.contains(p));
    }

    pub fn change(&self) -> FragmentChange {
        FragmentChange::from_sets(
            self.old.difference(&self.new).copied().collect(),
            self.new.difference(&self.old).copied().collect(),
        )
    }
}

fn check_events(events: &[EditEvent], edit_type: EditType) -> Result<(), ContractError> {
    for ev in events {
        if ev.delta != 1 && ev.delta != -1 {
            return Err(ContractError::BadDelta(ev.delta));
        }
        if ev.edit_type != edit_type {
            return Err(ContractError::MixedEditTypes {
                expected: edit_type,
                found: ev.edit_type,
            });
        }
    }
    if let Some(w) = events.windows(2).find(|w| w[0].pos >= w[1].pos) {
        return Err(ContractError::Unsorted {
            prev: w[0].pos,
            next: w[1].pos,
        });
    }
    Ok(())
}

/// Compare the token boundaries of the original and rewritten encodings.
/// `events` must be strictly ascending by position.
pub fn classify_fragment_change(
    old: &Encoding,
    new: &Encoding,
    events: &[EditEvent],
    edit_type: EditType,
) -> Result<FragmentChange, ContractError> {
    check_events(events, edit_type)?;
    if events.is_empty() {
        return Ok(FragmentChange::unchanged());
    }
    let mut state = BoundaryState::new(old, new, events);
    for ev in events {
        state.apply(ev);
    }
    state.mask(edit_type);
    Ok(state.change())
}

/// Result of analysing one rule on one sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriftRecord {
    pub sample_id: String,
    pub rule: RuleId,
    pub language: Language,
    pub original: String,
    pub rewritten: String,
    pub affected: bool,
    pub label: Label,
    pub lost: BTreeSet<usize>,
    pub gained: BTreeSet<usize>,
    pub events: Vec<EditEvent>,
    pub renames: BTreeMap<String, String>,
    pub old_encoding: Encoding,
    pub new_encoding: Encoding,
}

impl DriftRecord {
    pub fn change(&self) -> FragmentChange {
        FragmentChange {
            label: self.label,
            lost: self.lost.clone(),
            gained: self.gained.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisErrorKind {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Encoding(#[from] TokenizerError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Contract(#[from] ContractError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sample {sample_id}: {kind}")]
pub struct AnalysisError {
    pub sample_id: String,
    pub kind: AnalysisErrorKind,
}

/// One sample prepared for analysis under many rules: lexed, classified
/// and encoded once.
#[derive(Debug)]
pub struct SampleAnalyzer<'s> {
    sample_id: String,
    index: TokenIndex,
    context: IdentifierContext,
    spec: &'s TokenizerSpec,
    encoding: Encoding,
}

impl<'s> SampleAnalyzer<'s> {
    pub fn new(
        sample_id: &str,
        source: &str,
        language: Language,
        spec: &'s TokenizerSpec,
        immutable: &ImmutableTypes,
    ) -> Result<Self, AnalysisError> {
        let err = |kind: AnalysisErrorKind| AnalysisError {
            sample_id: sample_id.to_owned(),
            kind,
        };
        let index = lex(source, language).map_err(|e| err(e.into()))?;
        let context = classify_identifiers(&index, immutable);
        let encoding = spec.encode(source).map_err(|e| err(e.into()))?;
        Ok(SampleAnalyzer {
            sample_id: sample_id.to_owned(),
            index,
            context,
            spec,
            encoding,
        })
    }

    pub fn index(&self) -> &TokenIndex {
        &self.index
    }

    pub fn context(&self) -> &IdentifierContext {
        &self.context
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    /// Rewrite, re-encode and classify under one rule.
    pub fn analyze(&self, rule: &RewriteRule) -> Result<DriftRecord, AnalysisError> {
        let err = |kind: AnalysisErrorKind| AnalysisError {
            sample_id: self.sample_id.clone(),
            kind,
        };
        let result = apply_rule(&self.index, &self.context, rule).map_err(|e| err(e.into()))?;
        let source = self.index.source();
        let affected = result.is_affected(source);
        let (new_encoding, change) = if affected {
            let enc = self.spec.encode(&result.rewritten).map_err(|e| err(e.into()))?;
            let change = classify_fragment_change(&self.encoding, &enc, &result.events, rule.edit_type())
                .map_err(|e| err(e.into()))?;
            (enc, change)
        } else {
            (self.encoding.clone(), FragmentChange::unchanged())
        };
        Ok(DriftRecord {
            sample_id: self.sample_id.clone(),
            rule: rule.id,
            language: self.index.language(),
            original: source.to_owned(),
            rewritten: result.rewritten,
            affected,
            label: change.label,
            lost: change.lost,
            gained: change.gained,
            events: result.events,
            renames: result.renames,
            old_encoding: self.encoding.clone(),
            new_encoding,
        })
    }
}

/// Rewrite one sample with one rule and classify the boundary drift.
pub fn analyze_sample(
    sample_id: &str,
    source: &str,
    language: Language,
    rule: &RewriteRule,
    spec: &TokenizerSpec,
    immutable: &ImmutableTypes,
) -> Result<DriftRecord, AnalysisError> {
    SampleAnalyzer::new(sample_id, source, language, spec, immutable)?.analyze(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc(starts: &[usize]) -> Encoding {
        Encoding {
            tokens: starts.iter().map(|s| s.to_string()).collect(),
            ids: starts.iter().map(|&s| s as u32).collect(),
            starts: starts.to_vec(),
            byte_starts: starts.to_vec(),
        }
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn no_events_is_unchanged() {
        let c = classify_fragment_change(&enc(&[0, 3]), &enc(&[0, 1, 2]), &[], EditType::Whitespace).unwrap();
        assert_eq!(c, FragmentChange::unchanged());
    }

    #[test]
    fn sorted_lst_merges() {
        let ev = [EditEvent::insert(7, EditType::Underscore)];
        let c = classify_fragment_change(&enc(&[0, 7, 8]), &enc(&[0, 7]), &ev, EditType::Underscore).unwrap();
        assert_eq!(c.label, Label::Merged);
        assert_eq!(c.lost, set(&[9]));
        assert!(c.gained.is_empty());
    }

    #[test]
    fn factorial_merges() {
        let ev = [EditEvent::insert(1, EditType::Whitespace)];
        let c = classify_fragment_change(&enc(&[0, 7]), &enc(&[0, 1]), &ev, EditType::Whitespace).unwrap();
        assert_eq!(c.label, Label::Merged);
        assert_eq!(c.lost, set(&[8]));
        assert!(c.gained.is_empty());
    }

    #[test]
    fn foo_bar_splits() {
        let ev = [EditEvent::delete(3, EditType::Underscore)];
        let mut state = BoundaryState::new(&enc(&[0]), &enc(&[0, 3]), &ev);
        state.apply(&ev[0]);
        assert_eq!(state.edits_plus, set(&[3]));
        assert_eq!(state.offset, -1);
        state.mask(EditType::Underscore);
        let c = state.change();
        assert_eq!(c.label, Label::Split);
        assert_eq!(c.gained, set(&[3]));
    }

    #[test]
    fn space_at_edit_site_is_masked() {
        // "print(x)" as ["print", "(x", ")"] becomes "print( x)" as
        // ["print", "(", " x", ")"]. The only new boundary sits on the
        // inserted space, so nothing counts as drift.
        let ev = [EditEvent::insert(6, EditType::Whitespace)];
        let c = classify_fragment_change(&enc(&[0, 5, 7]), &enc(&[0, 5, 6, 8]), &ev, EditType::Whitespace)
            .unwrap();
        assert_eq!(c.label, Label::Unchanged);
    }

    #[test]
    fn label_algebra() {
        assert_eq!(Label::from_changes(false, false), Label::Unchanged);
        assert_eq!(Label::from_changes(true, false), Label::Merged);
        assert_eq!(Label::from_changes(false, true), Label::Split);
        assert_eq!(Label::from_changes(true, true), Label::Mixed);
    }

    #[test]
    fn contract_violations() {
        let w = EditType::Whitespace;
        let two = [EditEvent::insert(4, w), EditEvent::insert(4, w)];
        assert!(matches!(
            classify_fragment_change(&enc(&[0]), &enc(&[0]), &two, w),
            Err(ContractError::Unsorted { prev: 4, next: 4 })
        ));
        let back = [EditEvent::insert(5, w), EditEvent::insert(2, w)];
        assert!(classify_fragment_change(&enc(&[0]), &enc(&[0]), &back, w).is_err());
        let bad = [EditEvent { pos: 1, delta: 2, edit_type: w }];
        assert_eq!(
            classify_fragment_change(&enc(&[0]), &enc(&[0]), &bad, w),
            Err(ContractError::BadDelta(2))
        );
        let mixed = [EditEvent::insert(1, EditType::Underscore)];
        assert!(classify_fragment_change(&enc(&[0]), &enc(&[0]), &mixed, w).is_err());
    }

    #[test]
    fn multiple_events_accumulate_offset() {
        // "aB cD" -> "a_b c_d": insertions at 1 and 4.
        let u = EditType::Underscore;
        let ev = [EditEvent::insert(1, u), EditEvent::insert(4, u)];
        let mut state = BoundaryState::new(&enc(&[0, 1, 2, 3, 4]), &enc(&[0]), &ev);
        for e in &ev {
            state.apply(e);
        }
        // A boundary at an insertion point stays on the inserted character.
        assert_eq!(state.old, set(&[0, 1, 3, 4, 5]));
        assert_eq!(state.edits, set(&[1, 5]));
        assert_eq!(state.edits_plus, set(&[2, 6]));
        assert_eq!(state.offset, 2);
    }
}
