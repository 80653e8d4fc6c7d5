//! Byte-at-a-time token scanner.
//!
//! This is the reference tokenizer: one forward pass, no lookup tables, no
//! block masks.  It produces exactly the same token boundaries, line numbers,
//! and tokenization errors as the production lexer, but derives them from
//! first principles (a simple state walk over the bytes).

use zonefast_types::ErrorKind;

/// Token classes delivered to the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokKind {
    /// Unquoted run of non-delimiter bytes (escapes keep the run going).
    Text,
    /// Quoted string; `start` is the opening quote, `end` the closing quote.
    Quoted,
    /// Structural newline (entry terminator outside groups).
    Newline,
    /// `(` outside quotes/comments.
    Open,
    /// `)` outside quotes/comments.
    Close,
    /// End of input; `start == data.len()`, idempotent.
    Eof,
}

/// A scanned token.  `line` is the 1-based line of the token's first byte.
#[derive(Debug, Clone, Copy)]
pub struct Tok {
    pub kind: TokKind,
    pub start: usize,
    pub end: usize,
    pub line: u32,
}

impl Tok {
    /// Raw bytes of a `Text` token.
    pub fn text<'a>(&self, data: &'a [u8]) -> &'a [u8] {
        &data[self.start..self.end]
    }

    /// Payload bytes of a `Quoted` token (between the quotes, escapes intact).
    pub fn quoted_content<'a>(&self, data: &'a [u8]) -> &'a [u8] {
        &data[self.start + 1..self.end]
    }

    /// Token payload regardless of kind: quoted content or raw text.
    pub fn content<'a>(&self, data: &'a [u8]) -> &'a [u8] {
        match self.kind {
            TokKind::Quoted => self.quoted_content(data),
            _ => self.text(data),
        }
    }
}

/// Scanner-level error, positioned at an absolute byte offset.
#[derive(Debug)]
pub struct ScanErr {
    pub kind: ErrorKind,
    pub msg: String,
    pub offset: usize,
    pub line: u32,
}

/// Forward-only scalar scanner over one file's bytes.
pub struct Scanner {
    pub data: Vec<u8>,
    pub pos: usize,
    pub line: u32,
    cap: usize,
}

impl Scanner {
    pub fn new(data: Vec<u8>, cap: usize) -> Self {
        assert!(
            cap.is_power_of_two() && cap >= 4096,
            "token size cap must be a power of two of at least 4096"
        );
        Scanner { data, pos: 0, line: 1, cap }
    }

    fn cap_err(&self, start: usize, line: u32) -> ScanErr {
        ScanErr {
            kind: ErrorKind::LimitExceeded,
            msg: format!("token exceeds the {} byte window limit", self.cap),
            offset: start,
            line,
        }
    }

    /// Next token.  Skips blanks and comments; newlines are tokens.
    pub fn next(&mut self) -> Result<Tok, ScanErr> {
        let data = &self.data;
        let len = data.len();
        loop {
            if self.pos >= len {
                return Ok(Tok { kind: TokKind::Eof, start: len, end: len, line: self.line });
            }
            let b = data[self.pos];
            match b {
                b' ' | b'\t' | b'\r' => {
                    self.pos += 1;
                }
                b';' => {
                    // Comment: runs to (but not including) the newline.
                    while self.pos < len && data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b'\n' => {
                    let t = Tok {
                        kind: TokKind::Newline,
                        start: self.pos,
                        end: self.pos + 1,
                        line: self.line,
                    };
                    self.pos += 1;
                    self.line += 1;
                    return Ok(t);
                }
                b'(' | b')' => {
                    let kind = if b == b'(' { TokKind::Open } else { TokKind::Close };
                    let t = Tok { kind, start: self.pos, end: self.pos + 1, line: self.line };
                    self.pos += 1;
                    return Ok(t);
                }
                0 => {
                    // A bare NUL is never part of the syntax.  Leave `pos` on
                    // it; error recovery skips the rest of the line.
                    return Err(ScanErr {
                        kind: ErrorKind::Syntax,
                        msg: "stray null byte".to_string(),
                        offset: self.pos,
                        line: self.line,
                    });
                }
                b'"' => return self.scan_quoted(),
                _ => return self.scan_text(),
            }
        }
    }

    /// Unquoted token starting at `self.pos`.  A backslash always escapes the
    /// next byte (even newlines and structural characters); the token ends at
    /// the first unescaped delimiter or at end of input.
    fn scan_text(&mut self) -> Result<Tok, ScanErr> {
        let data = &self.data;
        let len = data.len();
        let start = self.pos;
        let start_line = self.line;
        let mut p = start;
        let mut nl = 0u32;
        loop {
            if p >= len {
                break;
            }
            let b = data[p];
            if b == b'\\' {
                if p + 1 >= len {
                    // Trailing backslash: kept in the token, escape decoding
                    // rejects it later.
                    p = len;
                    break;
                }
                if data[p + 1] == b'\n' {
                    nl += 1;
                }
                p += 2;
                continue;
            }
            match b {
                b' ' | b'\t' | b'\r' | b'\n' | b';' | b'(' | b')' | b'"' | 0 => break,
                _ => p += 1,
            }
        }
        self.pos = p;
        self.line += nl;
        if p - start >= self.cap {
            return Err(self.cap_err(start, start_line));
        }
        Ok(Tok { kind: TokKind::Text, start, end: p, line: start_line })
    }

    /// Quoted token; `self.pos` is on the opening quote.
    fn scan_quoted(&mut self) -> Result<Tok, ScanErr> {
        let data = &self.data;
        let len = data.len();
        let start = self.pos;
        let start_line = self.line;
        let mut p = start + 1;
        let mut nl = 0u32;
        loop {
            if p >= len {
                // Unterminated.  An over-long open string still reports the
                // size cap (the alternative reading would need one more byte
                // than the cap allows); otherwise it is a plain syntax error.
                self.pos = len;
                self.line += nl;
                if len + 1 - start > self.cap {
                    return Err(self.cap_err(start, start_line));
                }
                return Err(ScanErr {
                    kind: ErrorKind::Syntax,
                    msg: "unterminated quoted string".to_string(),
                    offset: start,
                    line: start_line,
                });
            }
            let b = data[p];
            if b == b'\\' {
                if p + 1 >= len {
                    p = len;
                    continue;
                }
                if data[p + 1] == b'\n' {
                    nl += 1;
                }
                p += 2;
                continue;
            }
            if b == b'"' {
                break;
            }
            if b == b'\n' {
                nl += 1;
            }
            p += 1;
        }
        self.pos = p + 1;
        self.line += nl;
        if p - start >= self.cap {
            return Err(self.cap_err(start, start_line));
        }
        Ok(Tok { kind: TokKind::Quoted, start, end: p, line: start_line })
    }

    /// Next token at entry granularity: resolves parentheses so that grouped
    /// newlines disappear and group errors surface here.
    pub fn next_entry_tok(&mut self, grouped: &mut bool) -> Result<Tok, ScanErr> {
        loop {
            let t = self.next()?;
            match t.kind {
                TokKind::Open => {
                    if *grouped {
                        return Err(ScanErr {
                            kind: ErrorKind::Syntax,
                            msg: "nested opening parenthesis".to_string(),
                            offset: t.start,
                            line: t.line,
                        });
                    }
                    *grouped = true;
                }
                TokKind::Close => {
                    if !*grouped {
                        return Err(ScanErr {
                            kind: ErrorKind::Syntax,
                            msg: "closing parenthesis without a group".to_string(),
                            offset: t.start,
                            line: t.line,
                        });
                    }
                    *grouped = false;
                }
                TokKind::Newline if *grouped => {}
                TokKind::Eof if *grouped => {
                    return Err(ScanErr {
                        kind: ErrorKind::Syntax,
                        msg: "unterminated parenthesized group".to_string(),
                        offset: t.start,
                        line: t.line,
                    });
                }
                _ => return Ok(t),
            }
        }
    }

    /// Error recovery: drop everything up to and including the next newline.
    pub fn skip_to_next_line(&mut self) {
        let len = self.data.len();
        while self.pos < len {
            let b = self.data[self.pos];
            self.pos += 1;
            if b == b'\n' {
                self.line += 1;
                return;
            }
        }
    }
}

/// 1-based column of `offset` within `data` (bytes, not characters).
pub fn column(data: &[u8], offset: usize) -> u32 {
    match data[..offset.min(data.len())].iter().rposition(|&b| b == b'\n') {
        Some(nl) => (offset - nl) as u32,
        None => offset as u32 + 1,
    }
}
