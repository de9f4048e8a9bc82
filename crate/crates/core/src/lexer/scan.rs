use super::{CodeToken, LexErrorKind, Span, TokenKind};

pub(super) type LexResult<T> = Result<T, (usize, LexErrorKind)>;

pub(super) struct Cursor<'a> {
    pub chars: &'a [char],
    pub pos: usize,
    pub tokens: Vec<CodeToken>,
}

impl<'a> Cursor<'a> {
    pub fn new(chars: &'a [char]) -> Self {
        Cursor {
            chars,
            pos: 0,
            tokens: Vec::new(),
        }
    }

    pub fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub fn starts_with(&self, pat: &str) -> bool {
        let mut i = self.pos;
        for c in pat.chars() {
            if self.chars.get(i) != Some(&c) {
                return false;
            }
            i += 1;
        }
        true
    }

    pub fn push(&mut self, start: usize, kind: TokenKind) {
        let lexeme: String = self.chars[start..self.pos].iter().collect();
        self.tokens.push(CodeToken {
            lexeme,
            kind,
            span: Span::new(start, self.pos),
        });
    }

    /// Longest entry of `table` that matches at the cursor.
    pub fn longest_match(&self, table: &[&str]) -> Option<usize> {
        table
            .iter()
            .filter(|pat| self.starts_with(pat))
            .map(|pat| pat.chars().count())
            .max()
    }

    pub fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        while let Some(c) = self.peek(0) {
            if !pred(c) {
                break;
            }
            self.pos += 1;
        }
    }

    /// Consume a quoted literal whose opening delimiter starts at the
    /// cursor. Backslash escapes the following character. Single-line
    /// literals may not contain an unescaped newline.
    pub fn quoted(&mut self, delim: &str, multiline: bool, err: LexErrorKind) -> LexResult<()> {
        let start = self.pos;
        let dlen = delim.chars().count();
        self.pos += dlen;
        loop {
            match self.peek(0) {
                None => return Err((start, err)),
                Some('\\') => {
                    if self.peek(1).is_none() {
                        return Err((start, err));
                    }
                    self.pos += 2;
                }
                Some('\n') if !multiline => return Err((start, err)),
                Some(_) if self.starts_with(delim) => {
                    self.pos += dlen;
                    return Ok(());
                }
                Some(_) => self.pos += 1,
            }
        }
    }

    /// Scan a numeric literal starting at the cursor (a digit, or `.`
    /// followed by a digit). `suffixes` lists the characters allowed to
    /// trail the literal (`L`, `f`, `j`, ...).
    pub fn number(&mut self, suffixes: &[char]) -> LexResult<()> {
        let start = self.pos;
        let is_digit_or_sep = |c: char| c.is_ascii_digit() || c == '_';
        if self.peek(0) == Some('0') && matches!(self.peek(1), Some('x' | 'X' | 'b' | 'B' | 'o' | 'O'))
        {
            self.pos += 2;
            let before = self.pos;
            self.eat_while(|c| c.is_ascii_hexdigit() || c == '_');
            if self.pos == before {
                return Err((start, LexErrorKind::MalformedNumber));
            }
        } else {
            self.eat_while(is_digit_or_sep);
            if self.peek(0) == Some('.') && self.peek(1).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
                self.eat_while(is_digit_or_sep);
            } else if self.peek(0) == Some('.') && self.pos > start {
                // `1.` is a complete floating literal in both languages, and
                // longest match takes it whatever follows.
                self.pos += 1;
            }
            if matches!(self.peek(0), Some('e' | 'E')) {
                let save = self.pos;
                self.pos += 1;
                if matches!(self.peek(0), Some('+' | '-')) {
                    self.pos += 1;
                }
                if self.peek(0).is_some_and(|c| c.is_ascii_digit()) {
                    self.eat_while(is_digit_or_sep);
                } else {
                    self.pos = save;
                }
            }
        }
        if let Some(c) = self.peek(0) {
            if suffixes.contains(&c) {
                self.pos += 1;
            }
        }
        // A literal running straight into an identifier character is not a
        // number the grammar accepts (`1abc`).
        if self
            .peek(0)
            .is_some_and(|c| c.is_alphanumeric() || c == '_')
        {
            return Err((start, LexErrorKind::MalformedNumber));
        }
        Ok(())
    }
}
