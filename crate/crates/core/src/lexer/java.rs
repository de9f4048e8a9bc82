use super::scan::{Cursor, LexResult};
use super::{CodeToken, LexErrorKind, TokenKind};

pub(crate) const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
    "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while", "var", "record", "yield",
];

/// Reserved words that are literals rather than keywords.
pub(crate) const LITERAL_WORDS: &[&str] = &["true", "false", "null"];

pub(crate) const PRIMITIVE_TYPES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void", "var",
];

const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "->", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "+", "-", "*", "/", "%", "=", "<", ">", "!",
    "~", "?", ":", "&", "|", "^",
];

const SEPARATORS: &[&str] = &["...", "::", "(", ")", "[", "]", "{", "}", ";", ",", ".", "@"];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

pub(super) fn lex(chars: &[char]) -> LexResult<Vec<CodeToken>> {
    let mut cur = Cursor::new(chars);
    while let Some(c) = cur.peek(0) {
        let start = cur.pos;
        if matches!(c, ' ' | '\t' | '\n' | '\r' | '\x0c') {
            cur.pos += 1;
            continue;
        }
        if cur.starts_with("//") {
            cur.eat_while(|c| c != '\n' && c != '\r');
            cur.push(start, TokenKind::Literal);
        } else if cur.starts_with("/*") {
            cur.pos += 2;
            loop {
                if cur.at_end() {
                    return Err((start, LexErrorKind::UnterminatedComment));
                }
                if cur.starts_with("*/") {
                    cur.pos += 2;
                    break;
                }
                cur.pos += 1;
            }
            cur.push(start, TokenKind::Literal);
        } else if cur.starts_with("\"\"\"") {
            cur.quoted("\"\"\"", true, LexErrorKind::UnterminatedString)?;
            cur.push(start, TokenKind::Literal);
        } else if c == '"' {
            cur.quoted("\"", false, LexErrorKind::UnterminatedString)?;
            cur.push(start, TokenKind::Literal);
        } else if c == '\'' {
            cur.quoted("'", false, LexErrorKind::UnterminatedChar)?;
            cur.push(start, TokenKind::Literal);
        } else if c.is_ascii_digit() || (c == '.' && cur.peek(1).is_some_and(|d| d.is_ascii_digit()))
        {
            cur.number(&['l', 'L', 'f', 'F', 'd', 'D'])?;
            cur.push(start, TokenKind::Literal);
        } else if is_ident_start(c) {
            cur.eat_while(is_ident_continue);
            let word: String = chars[start..cur.pos].iter().collect();
            let kind = if LITERAL_WORDS.contains(&word.as_str()) {
                TokenKind::Literal
            } else if KEYWORDS.contains(&word.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            cur.push(start, kind);
        } else {
            let op = cur.longest_match(OPERATORS).unwrap_or(0);
            let sep = cur.longest_match(SEPARATORS).unwrap_or(0);
            if op == 0 && sep == 0 {
                return Err((start, LexErrorKind::IllegalChar(c)));
            }
            if sep >= op {
                cur.pos += sep;
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
        lex(src, Language::Java)
            .unwrap()
            .tokens()
            .iter()
            .map(|t| t.lexeme.clone())
            .collect()
    }

    #[test]
    fn longest_match_operators() {
        assert_eq!(lexemes("i++;a>>>=2"), ["i", "++", ";", "a", ">>>=", "2"]);
        assert_eq!(lexemes("a==b!=c"), ["a", "==", "b", "!=", "c"]);
        assert_eq!(lexemes("x->y"), ["x", "->", "y"]);
        assert_eq!(lexemes("String::valueOf"), ["String", "::", "valueOf"]);
    }

    #[test]
    fn literals_and_comments_are_single_tokens() {
        let idx = lex(
            "String s = \"a b\\\"c\"; // trailing comment\n/* block\n comment */ char c = 'x';",
            Language::Java,
        )
        .unwrap();
        let lits: Vec<_> = idx
            .tokens()
            .iter()
            .filter(|t| t.kind == TokenKind::Literal)
            .map(|t| t.lexeme.as_str())
            .collect();
        assert_eq!(
            lits,
            ["\"a b\\\"c\"", "// trailing comment", "/* block\n comment */", "'x'"]
        );
    }

    #[test]
    fn numbers() {
        assert_eq!(
            lexemes("1_000L 0x1F 3.14f .5 1e10 2.0e-3d 7. 1.f 1.e5"),
            ["1_000L", "0x1F", "3.14f", ".5", "1e10", "2.0e-3d", "7.", "1.f", "1.e5"]
        );
        assert!(lex("0.x", Language::Java).is_err());
        assert_eq!(lexemes("0. x"), ["0.", "x"]);
    }

    #[test]
    fn text_block() {
        let toks = lexemes("String t = \"\"\"\n  hi \"there\"\n  \"\"\";");
        assert_eq!(toks[3], "\"\"\"\n  hi \"there\"\n  \"\"\"");
    }

    #[test]
    fn keywords_and_literal_words() {
        let idx = lex("return null;", Language::Java).unwrap();
        assert_eq!(idx.tokens()[0].kind, TokenKind::Keyword);
        assert_eq!(idx.tokens()[1].kind, TokenKind::Literal);
    }

    #[test]
    fn errors_carry_positions() {
        let err = lex("int a = \"abc;", Language::Java).unwrap_err();
        assert_eq!(err.pos, 8);
        assert_eq!(err.kind, LexErrorKind::UnterminatedString);
        let err = lex("x /* open", Language::Java).unwrap_err();
        assert_eq!(err.kind, LexErrorKind::UnterminatedComment);
        let err = lex("a # b", Language::Java).unwrap_err();
        assert_eq!(err.kind, LexErrorKind::IllegalChar('#'));
        assert_eq!(err.pos, 2);
    }

    #[test]
    fn annotations() {
        let idx = lex("@Override void f(){}", Language::Java).unwrap();
        assert_eq!(idx.tokens()[0].kind, TokenKind::Punctuation);
        assert_eq!(idx.tokens()[1].lexeme, "Override");
        assert_eq!(idx.tokens()[1].kind, TokenKind::Identifier);
    }
}
