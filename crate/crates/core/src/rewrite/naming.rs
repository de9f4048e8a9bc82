use std::collections::{BTreeMap, BTreeSet};

use super::casing::convert_case;
use super::{EditEvent, EditType, RewriteError, RewriteResult, RewriteRule, RuleKind, RuleParams};
use crate::lexer::{lex, IdentifierContext, Language, LexError, TokenIndex};

pub(super) fn check_rule(rule: &RewriteRule, expected: RuleKind, language: Language) -> Result<(), RewriteError> {
    if rule.kind() != expected {
        return Err(RewriteError::KindMismatch {
            rule: rule.id,
            expected,
            actual: rule.kind(),
        });
    }
    if !rule.applies_to(language) {
        return Err(RewriteError::LanguageMismatch {
            rule: rule.id,
            language,
        });
    }
    Ok(())
}

/// Underscore insertions and deletions turning `old` into `new`, which
/// differ only in letter case and underscores. Positions are offset by
/// `base`, the identifier's start in the original text.
fn underscore_events(old: &str, new: &str, base: usize, out: &mut Vec<EditEvent>) {
    let old: Vec<char> = old.chars().collect();
    let new: Vec<char> = new.chars().collect();
    let (mut i, mut j) = (0, 0);
    while i < old.len() || j < new.len() {
        match (old.get(i), new.get(j)) {
            (Some(a), Some(b)) if a.eq_ignore_ascii_case(b) => {
                i += 1;
                j += 1;
            }
            (_, Some('_')) => {
                out.push(EditEvent::insert(base + i, EditType::Underscore));
                j += 1;
            }
            (Some('_'), _) => {
                out.push(EditEvent::delete(base + i, EditType::Underscore));
                i += 1;
            }
            _ => unreachable!("case conversion only edits underscores"),
        }
    }
}

/// Candidate renames with every collision removed: a target that already
/// names an identifier in the sample, is a reserved word, or is shared by
/// two sources would change the program's meaning.
fn injective_renames(
    index: &TokenIndex,
    mut candidates: BTreeMap<String, String>,
) -> BTreeMap<String, String> {
    let existing: BTreeSet<&str> = index
        .tokens()
        .iter()
        .filter(|t| t.is_identifier())
        .map(|t| t.lexeme.as_str())
        .collect();
    let mut target_count: BTreeMap<String, usize> = BTreeMap::new();
    for new in candidates.values() {
        *target_count.entry(new.clone()).or_default() += 1;
    }
    let language = index.language();
    candidates.retain(|_, new| {
        !existing.contains(new.as_str())
            && !language.is_keyword(new)
            && target_count[new.as_str()] == 1
    });
    candidates
}

/// Restyle every eligible identifier. An identifier is eligible when it is
/// renamable in `context` and matches the rule's source style.
pub fn apply_naming_rewrite(
    index: &TokenIndex,
    context: &IdentifierContext,
    rule: &RewriteRule,
) -> Result<RewriteResult, RewriteError> {
    check_rule(rule, RuleKind::Naming, index.language())?;
    let RuleParams::Naming { source, target } = rule.params else {
        unreachable!("naming rule with spacing params")
    };

    let mut candidates = BTreeMap::new();
    for tok in index.tokens().iter().filter(|t| t.is_identifier()) {
        if candidates.contains_key(&tok.lexeme) || !context.is_renamable(&tok.lexeme) {
            continue;
        }
        if let Ok(new) = convert_case(&tok.lexeme, source, target) {
            candidates.insert(tok.lexeme.clone(), new);
        }
    }
    let renames = injective_renames(index, candidates);
    if renames.is_empty() {
        return Ok(RewriteResult::unchanged(index.source()));
    }

    let chars = index.chars();
    let mut rewritten = String::with_capacity(index.source().len() + 16);
    let mut events = Vec::new();
    let mut cursor = 0;
    for tok in index.tokens().iter().filter(|t| t.is_identifier()) {
        let Some(new) = renames.get(&tok.lexeme) else {
            continue;
        };
        rewritten.extend(&chars[cursor..tok.span.start]);
        rewritten.push_str(new);
        underscore_events(&tok.lexeme, new, tok.span.start, &mut events);
        cursor = tok.span.end;
    }
    rewritten.extend(&chars[cursor..]);
    Ok(RewriteResult {
        rewritten,
        events,
        renames,
    })
}

/// Apply a rename map to auxiliary texts (tests, patches) of the same
/// sample, replacing whole identifier tokens only.
pub fn propagate_renames(
    patches: &[String],
    renames: &BTreeMap<String, String>,
    language: Language,
) -> Result<Vec<String>, LexError> {
    if renames.is_empty() {
        return Ok(patches.to_vec());
    }
    patches
        .iter()
        .map(|patch| {
            let index = lex(patch, language)?;
            let chars = index.chars();
            let mut out = String::with_capacity(patch.len());
            let mut cursor = 0;
            for tok in index.tokens().iter().filter(|t| t.is_identifier()) {
                if let Some(new) = renames.get(&tok.lexeme) {
                    out.extend(&chars[cursor..tok.span.start]);
                    out.push_str(new);
                    cursor = tok.span.end;
                }
            }
            out.extend(&chars[cursor..]);
            Ok(out)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::{classify_identifiers, ImmutableTypes};
    use crate::rewrite::{replay_events, RuleCatalog};

    fn run(src: &str, lang: Language, rule: &str) -> RewriteResult {
        let idx = lex(src, lang).unwrap();
        let ctx = classify_identifiers(&idx, &ImmutableTypes::default());
        let cat = RuleCatalog::default();
        apply_naming_rewrite(&idx, &ctx, cat.lookup(rule).unwrap()).unwrap()
    }

    #[test]
    fn java_camel_to_snake() {
        let src = "int myVar = 0; use(myVar);";
        let res = run(src, Language::Java, "N1");
        assert_eq!(res.rewritten, "int my_var = 0; use(my_var);");
        assert_eq!(
            res.events,
            vec![
                EditEvent::insert(6, EditType::Underscore),
                EditEvent::insert(21, EditType::Underscore)
            ]
        );
        assert_eq!(res.renames.len(), 1);
        assert_eq!(res.renames["myVar"], "my_var");
    }

    #[test]
    fn no_eligible_identifier_is_identity() {
        let src = "int x = 0; return x;";
        let res = run(src, Language::Java, "N1");
        assert_eq!(res, RewriteResult::unchanged(src));
    }

    #[test]
    fn override_methods_are_kept() {
        let res = run("@Override void fooBar(){}", Language::Java, "N1");
        assert_eq!(res.rewritten, "@Override void fooBar(){}");
        assert!(res.events.is_empty());
    }

    #[test]
    fn python_snake_to_camel_deletes_underscores() {
        let src = "foo_bar = 1\nprint(foo_bar)";
        let res = run(src, Language::Python, "N4");
        assert_eq!(res.rewritten, "fooBar = 1\nprint(fooBar)");
        assert_eq!(
            res.events,
            vec![
                EditEvent::delete(3, EditType::Underscore),
                EditEvent::delete(21, EditType::Underscore)
            ]
        );
        assert_eq!(replay_events(src, &res.events).to_lowercase(), res.rewritten.to_lowercase());
    }

    #[test]
    fn case_only_rules_produce_no_events() {
        let res = run("int myVar = 1;", Language::Java, "N2");
        assert_eq!(res.rewritten, "int MyVar = 1;");
        assert!(res.events.is_empty());
        let res = run("max_value = 1", Language::Python, "N6");
        assert_eq!(res.rewritten, "MAX_VALUE = 1");
        assert!(res.events.is_empty());
    }

    #[test]
    fn multi_underscore_positions() {
        let res = run("int aBC = 0; int oneTwoThree = 1;", Language::Java, "N1");
        assert_eq!(res.rewritten, "int a_bc = 0; int one_two_three = 1;");
        let pos: Vec<usize> = res.events.iter().map(|e| e.pos).collect();
        assert_eq!(pos, vec![5, 20, 23]);
    }

    #[test]
    fn colliding_targets_are_dropped() {
        // `foo_bar` already exists, so renaming `fooBar` would merge them.
        let res = run("int fooBar = 1; int foo_bar = 2;", Language::Java, "N1");
        assert!(res.renames.is_empty());
        // Two sources with one target.
        let res = run("a_b = 1\na_B = 2\nc_d = 3", Language::Python, "N4");
        assert_eq!(res.renames.len(), 1);
        assert_eq!(res.renames["c_d"], "cD");
    }

    #[test]
    fn immutable_names_are_kept_unless_declared() {
        let src = "import os_path\nos_path.join_all(x)\ndef join_all(a_b):\n    return a_b";
        let res = run(src, Language::Python, "N4");
        assert!(!res.renames.contains_key("os_path"));
        assert_eq!(res.renames["join_all"], "joinAll");
        assert_eq!(res.renames["a_b"], "aB");
    }

    #[test]
    fn wrong_kind_or_language_is_rejected() {
        let idx = lex("x", Language::Java).unwrap();
        let ctx = classify_identifiers(&idx, &ImmutableTypes::default());
        let cat = RuleCatalog::default();
        assert!(matches!(
            apply_naming_rewrite(&idx, &ctx, cat.lookup("N4").unwrap()),
            Err(RewriteError::LanguageMismatch { .. })
        ));
        assert!(matches!(
            apply_naming_rewrite(&idx, &ctx, cat.lookup("S15").unwrap()),
            Err(RewriteError::KindMismatch { .. })
        ));
    }

    #[test]
    fn propagation_is_token_level() {
        let renames = BTreeMap::from([("myVar".to_string(), "my_var".to_string())]);
        let out = propagate_renames(
            &["assert myVar == 1".into(), "myVariable = \"myVar\"".into()],
            &renames,
            Language::Python,
        )
        .unwrap();
        assert_eq!(out, vec!["assert my_var == 1", "myVariable = \"myVar\""]);
        let same = propagate_renames(&["a b".into()], &BTreeMap::new(), Language::Python).unwrap();
        assert_eq!(same, vec!["a b"]);
        assert!(propagate_renames(&["'open".into()], &renames, Language::Python).is_err());
    }
}
