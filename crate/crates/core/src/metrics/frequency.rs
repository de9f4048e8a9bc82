use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexer::{lex, Language, LexError};
use crate::rewrite::{match_case_style, RewriteRule, RuleId, RuleParams};

/// One source file of a frequency corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFile {
    pub name: String,
    pub language: Language,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyCount {
    pub rule: RuleId,
    /// Occurrences of the form the rule rewrites from.
    pub lhs: u64,
    /// Occurrences of the form it rewrites to.
    pub rhs: u64,
    /// `100 * rhs / lhs`; `None` when `lhs` is zero.
    pub ratio_percent: Option<f64>,
    pub files: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{file}: {source}")]
pub struct FrequencyError {
    pub file: String,
    pub source: LexError,
}

/// Count how often a rule's left-hand form and right-hand form occur in a
/// corpus. Only files in the rule's languages are read.
///
/// Spacing rules count the bigram with no gap (left) against the same
/// bigram separated by exactly one space (right), scanning pairs left to
/// right without overlap. Naming rules count identifier tokens in the
/// source style against identifier tokens in the target style.
pub fn frequency_ratio(corpus: &[CorpusFile], rule: &RewriteRule) -> Result<FrequencyCount, FrequencyError> {
    let (mut lhs, mut rhs, mut files) = (0u64, 0u64, 0usize);
    for file in corpus.iter().filter(|f| rule.applies_to(f.language)) {
        files += 1;
        let index = lex(&file.text, file.language).map_err(|source| FrequencyError {
            file: file.name.clone(),
            source,
        })?;
        let toks = index.tokens();
        match &rule.params {
            RuleParams::Naming { source, target } => {
                for t in toks.iter().filter(|t| t.is_identifier()) {
                    lhs += match_case_style(&t.lexeme, *source) as u64;
                    rhs += match_case_style(&t.lexeme, *target) as u64;
                }
            }
            RuleParams::Spacing { first, second, exclude } => {
                let chars = index.chars();
                let mut k = 0;
                while k + 1 < toks.len() {
                    let (f, l) = (&toks[k], &toks[k + 1]);
                    if first.matches(f.kind, &f.lexeme, exclude) && second.matches(l.kind, &l.lexeme, exclude) {
                        let gap = &chars[f.span.end..l.span.start];
                        if gap.is_empty() {
                            lhs += 1;
                            k += 2;
                            continue;
                        }
                        if gap == [' '] {
                            rhs += 1;
                            k += 2;
                            continue;
                        }
                    }
                    k += 1;
                }
            }
        }
    }
    Ok(FrequencyCount {
        rule: rule.id,
        lhs,
        rhs,
        ratio_percent: (lhs > 0).then(|| 100.0 * rhs as f64 / lhs as f64),
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::RuleCatalog;

    fn file(name: &str, lang: Language, text: &str) -> CorpusFile {
        CorpusFile {
            name: name.into(),
            language: lang,
            text: text.into(),
        }
    }

    #[test]
    fn eight_to_two() {
        let cat = RuleCatalog::default();
        let s15 = cat.lookup("S15").unwrap();
        let corpus = [
            file("a.py", Language::Python, "a.b.c.d\nq.r.s\n"),
            file("b.py", Language::Python, "x.y\nz. w\n"),
            file("c.java", Language::Java, "p.q(r.s); t. u;"),
        ];
        let c = frequency_ratio(&corpus, s15).unwrap();
        assert_eq!((c.lhs, c.rhs), (8, 2));
        assert_eq!(c.ratio_percent, Some(25.0));
        assert_eq!(c.files, 3);
    }

    #[test]
    fn no_rhs_and_no_lhs() {
        let cat = RuleCatalog::default();
        let s16 = cat.lookup("S16").unwrap();
        let c = frequency_ratio(&[file("a.py", Language::Python, "f(x)")], s16).unwrap();
        assert_eq!(c.ratio_percent, Some(0.0));
        let c = frequency_ratio(&[file("a.py", Language::Python, "x = 1")], s16).unwrap();
        assert_eq!(c.ratio_percent, None);
    }

    #[test]
    fn other_languages_are_ignored() {
        let cat = RuleCatalog::default();
        let s3 = cat.lookup("S3").unwrap();
        let c = frequency_ratio(&[file("a.py", Language::Python, "f().x")], s3).unwrap();
        assert_eq!((c.lhs, c.files), (0, 0));
    }

    #[test]
    fn naming_counts_styles() {
        let cat = RuleCatalog::default();
        let n1 = cat.lookup("N1").unwrap();
        let c = frequency_ratio(
            &[file("A.java", Language::Java, "int myVar = my_var + otherVar + x;")],
            n1,
        )
        .unwrap();
        assert_eq!((c.lhs, c.rhs), (2, 1));
    }

    #[test]
    fn lex_errors_name_the_file() {
        let cat = RuleCatalog::default();
        let err = frequency_ratio(&[file("bad.py", Language::Python, "'open")], cat.lookup("S15").unwrap())
            .unwrap_err();
        assert_eq!(err.file, "bad.py");
    }
}
