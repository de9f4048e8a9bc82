use std::collections::BTreeMap;

use super::naming::check_rule;
use super::{EditEvent, EditType, RewriteError, RewriteResult, RewriteRule, RuleKind, RuleParams};
use crate::lexer::TokenIndex;

/// Insert one space between every strictly adjacent token pair matching
/// the rule's bigram.
pub fn apply_spacing_rewrite(
    index: &TokenIndex,
    rule: &RewriteRule,
) -> Result<RewriteResult, RewriteError> {
    check_rule(rule, RuleKind::Spacing, index.language())?;
    let RuleParams::Spacing {
        first,
        second,
        exclude,
    } = &rule.params
    else {
        unreachable!("spacing rule with naming params")
    };

    let events: Vec<EditEvent> = index
        .tokens()
        .windows(2)
        .filter(|w| {
            let (f, l) = (&w[0], &w[1]);
            f.span.end == l.span.start
                && first.matches(f.kind, &f.lexeme, exclude)
                && second.matches(l.kind, &l.lexeme, exclude)
        })
        .map(|w| EditEvent::insert(w[1].span.start, EditType::Whitespace))
        .collect();

    if events.is_empty() {
        return Ok(RewriteResult::unchanged(index.source()));
    }
    let chars = index.chars();
    let mut rewritten = String::with_capacity(index.source().len() + events.len());
    let mut cursor = 0;
    for ev in &events {
        rewritten.extend(&chars[cursor..ev.pos]);
        rewritten.push(' ');
        cursor = ev.pos;
    }
    rewritten.extend(&chars[cursor..]);
    Ok(RewriteResult {
        rewritten,
        events,
        renames: BTreeMap::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::{lex, Language};
    use crate::rewrite::RuleCatalog;

    fn run(src: &str, lang: Language, rule: &str) -> RewriteResult {
        let idx = lex(src, lang).unwrap();
        apply_spacing_rewrite(&idx, RuleCatalog::default().lookup(rule).unwrap()).unwrap()
    }

    #[test]
    fn dot_identifier() {
        let res = run("q.factorial(n)", Language::Java, "S15");
        assert_eq!(res.rewritten, "q. factorial(n)");
        assert_eq!(res.events, vec![EditEvent::insert(2, EditType::Whitespace)]);
        assert!(res.renames.is_empty());
    }

    #[test]
    fn lparen_identifier() {
        let res = run("f(x)", Language::Python, "S16");
        assert_eq!(res.rewritten, "f( x)");
        assert_eq!(res.events[0].pos, 2);
    }

    #[test]
    fn no_match_is_identity() {
        let src = "a = b";
        assert_eq!(run(src, Language::Python, "S15"), RewriteResult::unchanged(src));
    }

    #[test]
    fn spaced_pairs_are_not_matched() {
        let res = run("f( x) + g(y)", Language::Python, "S16");
        assert_eq!(res.rewritten, "f( x) + g( y)");
        assert_eq!(res.events.len(), 1);
    }

    #[test]
    fn table_examples() {
        use Language::*;
        let cases = [
            ("S1", Python, "x=-1", "x= -1"),
            ("S2", Python, "y=[1]", "y= [1]"),
            ("S3", Java, "a().b()", "a() .b()"),
            ("S4", Python, "f(x[0])", "f(x[0] )"),
            ("S5", Python, "x[a[0]]", "x[a[0] ]"),
            ("S6", Java, "x=(a);", "x= (a);"),
            ("S7", Python, "x[i]", "x[ i]"),
            ("S8", Java, "for(;;i++)", "for(;;i++ )"),
            ("S9", Java, "import a.*;", "import a. *;"),
            ("S10", Python, "def f():", "def f() :"),
            ("S11", Java, "f();", "f() ;"),
            ("S12", Java, "i++;", "i++ ;"),
            ("S13", Java, "f(g())", "f(g() )"),
            ("S14", Python, "((a))", "( (a))"),
            ("S17", Python, "a=b", "a= b"),
        ];
        for (rule, lang, src, want) in cases {
            assert_eq!(run(src, lang, rule).rewritten, want, "{rule}");
        }
    }

    #[test]
    fn operator_wildcard_second() {
        let res = run("a=b+c", Language::Python, "S18");
        assert_eq!(res.rewritten, "a= b+ c");
    }

    #[test]
    fn non_ascii_offsets_are_characters() {
        let res = run("é=(x)", Language::Python, "S16");
        assert_eq!(res.events[0].pos, 3);
        assert_eq!(res.rewritten, "é=( x)");
    }
}
