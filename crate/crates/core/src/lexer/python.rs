use super::scan::{Cursor, LexResult};
use super::{CodeToken, LexErrorKind, TokenKind};

pub(crate) const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue",
    "def", "del", "elif", "else", "except", "finally", "for", "from", "global", "if", "import",
    "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try", "while",
    "with", "yield",
];

const OPERATORS: &[&str] = &[
    "**=", "//=", ">>=", "<<=", "->", ":=", "**", "//", "<<", ">>", "<=", ">=", "==", "!=", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", "+", "-", "*", "/", "%", "@", "&", "|", "^",
    "~", "<", ">", "=",
];

const DELIMITERS: &[&str] = &["...", "(", ")", "[", "]", "{", "}", ",", ":", ";", "."];

const STRING_PREFIXES: &[&str] = &["rb", "br", "fr", "rf", "r", "u", "b", "f"];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Length of a string prefix (possibly empty) followed by a quote at the
/// cursor, or `None` when no string literal starts here.
fn string_prefix_len(cur: &Cursor<'_>) -> Option<usize> {
    let quote_at = |n: usize| matches!(cur.peek(n), Some('"' | '\''));
    if quote_at(0) {
        return Some(0);
    }
    for p in STRING_PREFIXES {
        let n = p.len();
        let matches = p
            .chars()
            .enumerate()
            .all(|(i, pc)| cur.peek(i).is_some_and(|c| c.to_ascii_lowercase() == pc));
        if matches && quote_at(n) {
            return Some(n);
        }
    }
    None
}

pub(super) fn lex(chars: &[char]) -> LexResult<Vec<CodeToken>> {
    let mut cur = Cursor::new(chars);
    while let Some(c) = cur.peek(0) {
        let start = cur.pos;
        if matches!(c, ' ' | '\t' | '\n' | '\r' | '\x0c') {
            cur.pos += 1;
            continue;
        }
        // Explicit line joining is whitespace, not a token.
        if c == '\\' {
            match (cur.peek(1), cur.peek(2)) {
                (Some('\n'), _) => cur.pos += 2,
                (Some('\r'), Some('\n')) => cur.pos += 3,
                (Some('\r'), _) => cur.pos += 2,
                _ => return Err((start, LexErrorKind::IllegalChar('\\'))),
            }
            continue;
        }
        if c == '#' {
            cur.eat_while(|c| c != '\n' && c != '\r');
            cur.push(start, TokenKind::Literal);
        } else if let Some(plen) = string_prefix_len(&cur) {
            cur.pos += plen;
            let q = cur.peek(0).unwrap_or('"');
            let triple: String = [q, q, q].iter().collect();
            if cur.starts_with(&triple) {
                cur.quoted(&triple, true, LexErrorKind::UnterminatedString)?;
            } else {
                cur.quoted(&q.to_string(), false, LexErrorKind::UnterminatedString)?;
            }
            cur.push(start, TokenKind::Literal);
        } else if c.is_ascii_digit() || (c == '.' && cur.peek(1).is_some_and(|d| d.is_ascii_digit()))
        {
            cur.number(&['j', 'J'])?;
            cur.push(start, TokenKind::Literal);
        } else if is_ident_start(c) {
            cur.eat_while(is_ident_continue);
            let word: String = chars[start..cur.pos].iter().collect();
            let kind = if KEYWORDS.contains(&word.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            cur.push(start, kind);
        } else {
            let op = cur.longest_match(OPERATORS).unwrap_or(0);
            let delim = cur.longest_match(DELIMITERS).unwrap_or(0);
            if op == 0 && delim == 0 {
                return Err((start, LexErrorKind::IllegalChar(c)));
            }
            if delim >= op {
                cur.pos += delim;
                cur.push(start, TokenKind::Punctuation);
            } else {
                cur.pos += op;
                cur.push(start, TokenKind::Operator);
            }
        }
    }
    Ok(cur.tokens)
}

#[cfg(test)]
mod tests {
    use crate::lexer::{lex, Language, LexErrorKind, TokenKind};

    fn lexemes(src: &str) -> Vec<String> {
        lex(src, Language::Python)
            .unwrap()
            .tokens()
            .iter()
            .map(|t| t.lexeme.clone())
            .collect()
    }

    #[test]
    fn operators_longest_match() {
        assert_eq!(lexemes("a**=2"), ["a", "**=", "2"]);
        assert_eq!(lexemes("def f()->int:"), ["def", "f", "(", ")", "->", "int", ":"]);
        assert_eq!(lexemes("(n:=10)"), ["(", "n", ":=", "10", ")"]);
        assert_eq!(lexemes("x[::-1]"), ["x", "[", ":", ":", "-", "1", "]"]);
    }

    #[test]
    fn string_prefixes_and_triple_quotes() {
        assert_eq!(
            lexemes("f'{x}' rb\"\\d\" '''a\n'b''' u\"\""),
            ["f'{x}'", "rb\"\\d\"", "'''a\n'b'''", "u\"\""]
        );
    }

    #[test]
    fn comments_are_literals() {
        let idx = lex("x = 1  # set x\n", Language::Python).unwrap();
        let last = idx.tokens().last().unwrap();
        assert_eq!(last.lexeme, "# set x");
        assert_eq!(last.kind, TokenKind::Literal);
    }

    #[test]
    fn indentation_is_not_tokenized() {
        let src = "def f(a):\n    return a\n";
        let idx = lex(src, Language::Python).unwrap();
        assert_eq!(idx.tokens()[6].lexeme, "return");
        assert_eq!(idx.tokens()[6].span.start, 14);
        assert_eq!(idx.reconstruct(), src);
    }

    #[test]
    fn line_continuation() {
        let src = "x = 1 + \\\n    2";
        assert_eq!(lexemes(src), ["x", "=", "1", "+", "2"]);
    }

    #[test]
    fn errors() {
        assert_eq!(
            lex("s = 'abc\n'", Language::Python).unwrap_err().kind,
            LexErrorKind::UnterminatedString
        );
        assert_eq!(
            lex("a ? b", Language::Python).unwrap_err().kind,
            LexErrorKind::IllegalChar('?')
        );
        assert_eq!(
            lex("x = '''never closed", Language::Python).unwrap_err().pos,
            4
        );
    }

    #[test]
    fn numbers() {
        assert_eq!(lexemes("0xFF 1_000 3.5e-2 2j .25"), ["0xFF", "1_000", "3.5e-2", "2j", ".25"]);
    }
}
