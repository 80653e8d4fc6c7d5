//! Stage-two item stream: turns index tapes into tokens, newlines and
//! parentheses, managing the window machinery underneath.
//!
//! The input is kept in one padded buffer but indexed in windows (64 KiB to
//! start, growing on demand up to a cap) so the tapes and the text being
//! parsed stay cache-resident. When a window ends in the middle of a token,
//! the truncated token is dropped from the tape and the next window starts
//! over at the token's first byte with a fresh carry — re-indexing at most
//! one token's worth of bytes. A token that fills a whole window doubles the
//! window, and the doubled size sticks for the rest of the file; hitting the
//! cap is an error attributed to the token.

use crate::indexer::{index_window, Carry, WindowIndex};
use crate::kernel::Kernel;
use zonefast_types::{ErrorKind, ParseError};

/// Smallest supported window; also the floor for the configured cap.
pub const MIN_WINDOW: usize = 4096;
/// Fresh files start with this window unless the cap is smaller.
pub const INITIAL_WINDOW: usize = 64 * 1024;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ItemKind {
    /// A run of unquoted token bytes (escapes included, undecoded).
    Contiguous,
    /// A quoted string; the item starts at the opening quote and the length
    /// counts the opening quote but not the closing one.
    Quoted,
    Newline,
    OpenParen,
    CloseParen,
    Eof,
}

#[derive(Clone, Copy, Debug)]
pub struct Item {
    pub kind: ItemKind,
    /// Absolute byte offset into the file buffer.
    pub start: usize,
    pub len: u32,
    /// 1-based line of the item's first byte.
    pub line: u32,
}

impl Item {
    pub fn end(&self) -> usize {
        self.start + self.len as usize
    }

    pub fn is_token(&self) -> bool {
        matches!(self.kind, ItemKind::Contiguous | ItemKind::Quoted)
    }
}

/// Token source for one input (a top-level file or an include).
pub struct Lexer {
    name: String,
    buf: Vec<u8>,
    data_len: usize,
    kernel: Kernel,
    /// Current window size; grows by doubling, never shrinks.
    window_len: usize,
    max_window: usize,
    window_start: usize,
    window_end: usize,
    final_window: bool,
    index: WindowIndex,
    fi: usize,
    di: usize,
    carry: Carry,
    cur_line: u32,
}

impl Lexer {
    /// Wraps input bytes, appending the padding the indexer and the 16-byte
    /// type loads rely on. `max_window` must be a power of two ≥ 4 KiB.
    pub fn new(name: impl Into<String>, mut data: Vec<u8>, kernel: Kernel, max_window: usize) -> Lexer {
        assert!(
            max_window >= MIN_WINDOW && max_window.is_power_of_two(),
            "window cap must be a power of two of at least {MIN_WINDOW}"
        );
        let data_len = data.len();
        data.reserve_exact(64);
        data.resize(data_len + 64, 0);
        let mut lexer = Lexer {
            name: name.into(),
            buf: data,
            data_len,
            kernel,
            window_len: INITIAL_WINDOW.min(max_window),
            max_window,
            window_start: 0,
            window_end: 0,
            final_window: false,
            index: WindowIndex::default(),
            fi: 0,
            di: 0,
            carry: Carry::default(),
            cur_line: 1,
        };
        lexer.index_window_at(0);
        lexer
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn buf(&self) -> &[u8] {
        &self.buf
    }

    pub fn data_len(&self) -> usize {
        self.data_len
    }

    /// The text of a token item, escapes still intact.
    #[inline]
    pub fn text(&self, item: &Item) -> &[u8] {
        &self.buf[item.start..item.end()]
    }

    /// 1-based column of an offset: distance to the preceding raw newline.
    /// Only used on error paths, so the backward scan is fine.
    pub fn column(&self, offset: usize) -> u32 {
        match self.buf[..offset].iter().rposition(|&b| b == b'\n') {
            Some(nl) => (offset - nl) as u32,
            None => offset as u32 + 1,
        }
    }

    /// Builds a positioned error; `line` should be the line of `offset`.
    pub fn err(&self, kind: ErrorKind, line: u32, offset: usize, msg: impl Into<String>) -> ParseError {
        ParseError::new(kind, self.name.clone(), line, self.column(offset), msg)
    }

    fn index_window_at(&mut self, start: usize) {
        let limit = self.data_len + 1; // one 0x00 sentinel past the data
        let end = (start + self.window_len).min(limit);
        self.final_window = end == limit;
        index_window(&self.buf, start, end, self.kernel, &mut self.carry, &mut self.index);
        self.window_start = start;
        self.window_end = end;
        self.fi = 0;
        self.di = 0;
    }

    /// Restarts indexing at the first byte of a token the window cut off.
    /// Carries are discarded: a dangling token implies no open comment, and
    /// quote/escape state belongs to the token being re-lexed from scratch.
    fn rewind_to(&mut self, resume: usize, line: u32) -> Result<(), ParseError> {
        if resume == self.window_start {
            // The token occupies the entire window: double it. If the cap is
            // already reached the token can never fit.
            if self.window_len >= self.max_window {
                return Err(self.err(
                    ErrorKind::LimitExceeded,
                    line,
                    resume,
                    format!("token exceeds the {} byte window limit", self.max_window),
                ));
            }
            self.window_len = (self.window_len * 2).min(self.max_window);
        }
        self.carry = Carry::default();
        self.index_window_at(resume);
        Ok(())
    }

    /// Counts 0x0A inside a token span; only called when the window flagged
    /// hidden newlines, so the scan almost never runs.
    fn newlines_in(&self, start: usize, end: usize) -> u32 {
        self.buf[start..end].iter().filter(|&&b| b == b'\n').count() as u32
    }

    /// Produces the next item. Transparently advances and grows windows;
    /// the only errors are lexical (stray 0x00, unterminated quote) and the
    /// window cap. Inline so the per-item cost stays visible to downstream
    /// optimization; callers sit in other crates.
    #[inline]
    pub fn take(&mut self) -> Result<Item, ParseError> {
        loop {
            if self.fi >= self.index.fields.len() {
                if self.final_window {
                    return Ok(Item {
                        kind: ItemKind::Eof,
                        start: self.data_len,
                        len: 0,
                        line: self.cur_line,
                    });
                }
                // Clean window boundary: keep the carry (only a comment can
                // be live here) and continue where the window ended.
                let next = self.window_end;
                self.index_window_at(next);
                continue;
            }

            let abs = self.window_start + self.index.fields[self.fi] as usize;
            if abs >= self.data_len {
                // The 0x00 sentinel: end of data.
                return Ok(Item { kind: ItemKind::Eof, start: self.data_len, len: 0, line: self.cur_line });
            }

            let line = self.cur_line;
            match self.buf[abs] {
                b'\n' => {
                    self.fi += 1;
                    self.cur_line += 1;
                    return Ok(Item { kind: ItemKind::Newline, start: abs, len: 1, line });
                }
                b'(' => {
                    self.fi += 1;
                    return Ok(Item { kind: ItemKind::OpenParen, start: abs, len: 1, line });
                }
                b')' => {
                    self.fi += 1;
                    return Ok(Item { kind: ItemKind::CloseParen, start: abs, len: 1, line });
                }
                0 => {
                    return Err(self.err(ErrorKind::Syntax, line, abs, "stray null byte"));
                }
                b'"' => {
                    if self.di < self.index.delims.len() {
                        let close = self.window_start + self.index.delims[self.di] as usize;
                        self.di += 1;
                        self.fi += 1;
                        if self.index.hidden_newlines {
                            self.cur_line += self.newlines_in(abs, close);
                        }
                        return Ok(Item {
                            kind: ItemKind::Quoted,
                            start: abs,
                            len: (close - abs) as u32,
                            line,
                        });
                    }
                    if self.final_window {
                        return Err(self.err(ErrorKind::Syntax, line, abs, "unterminated quoted string"));
                    }
                    self.rewind_to(abs, line)?;
                }
                _ => {
                    if self.di < self.index.delims.len() {
                        let delim = self.window_start + self.index.delims[self.di] as usize;
                        self.di += 1;
                        self.fi += 1;
                        if self.index.hidden_newlines {
                            self.cur_line += self.newlines_in(abs, delim);
                        }
                        return Ok(Item {
                            kind: ItemKind::Contiguous,
                            start: abs,
                            len: (delim - abs) as u32,
                            line,
                        });
                    }
                    if self.final_window {
                        // Only reachable when a trailing backslash escaped
                        // the sentinel; hand out the rest of the data and
                        // let escape decoding report it.
                        self.fi += 1;
                        return Ok(Item {
                            kind: ItemKind::Contiguous,
                            start: abs,
                            len: (self.data_len - abs) as u32,
                            line,
                        });
                    }
                    self.rewind_to(abs, line)?;
                }
            }
        }
    }

    /// Entry-level item stream: resolves parentheses into grouping state,
    /// swallowing newlines inside a group. Returns only tokens, the newline
    /// that ends the entry, or EOF.
    #[inline]
    pub fn take_entry_item(&mut self, grouped: &mut bool) -> Result<Item, ParseError> {
        loop {
            let item = self.take()?;
            match item.kind {
                ItemKind::OpenParen => {
                    if *grouped {
                        return Err(self.err(
                            ErrorKind::Syntax,
                            item.line,
                            item.start,
                            "nested opening parenthesis",
                        ));
                    }
                    *grouped = true;
                }
                ItemKind::CloseParen => {
                    if !*grouped {
                        return Err(self.err(
                            ErrorKind::Syntax,
                            item.line,
                            item.start,
                            "closing parenthesis without a group",
                        ));
                    }
                    *grouped = false;
                }
                ItemKind::Newline if *grouped => {}
                ItemKind::Eof if *grouped => {
                    return Err(self.err(
                        ErrorKind::Syntax,
                        item.line,
                        item.start,
                        "unterminated parenthesized group",
                    ));
                }
                _ => return Ok(item),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lexer(data: &[u8]) -> Lexer {
        Lexer::new("test.zone", data.to_vec(), Kernel::Scalar, 1 << 20)
    }

    fn drain(lx: &mut Lexer) -> Vec<(ItemKind, usize, u32, u32)> {
        let mut out = Vec::new();
        loop {
            let item = lx.take().expect("lexical error");
            let done = item.kind == ItemKind::Eof;
            out.push((item.kind, item.start, item.len, item.line));
            if done {
                break;
            }
        }
        out
    }

    #[test]
    fn items_from_simple_line() {
        use ItemKind::*;
        let mut lx = lexer(b"www 3600 IN A 192.0.2.1\n");
        assert_eq!(
            drain(&mut lx),
            vec![
                (Contiguous, 0, 3, 1),
                (Contiguous, 4, 4, 1),
                (Contiguous, 9, 2, 1),
                (Contiguous, 12, 1, 1),
                (Contiguous, 14, 9, 1),
                (Newline, 23, 1, 1),
                (Eof, 24, 0, 2),
            ]
        );
    }

    #[test]
    fn quoted_item_spans_quote_to_close() {
        use ItemKind::*;
        // Length includes the opening quote, not the closing one.
        let mut lx = lexer(b"\"ab cd\" x\n");
        let items = drain(&mut lx);
        assert_eq!(items[0], (Quoted, 0, 6, 1));
        assert_eq!(items[1], (Contiguous, 8, 1, 1));
    }

    #[test]
    fn token_at_eof_without_newline() {
        use ItemKind::*;
        let mut lx = lexer(b"a b");
        assert_eq!(
            drain(&mut lx),
            vec![(Contiguous, 0, 1, 1), (Contiguous, 2, 1, 1), (Eof, 3, 0, 1)]
        );
    }

    #[test]
    fn trailing_backslash_is_handed_to_stage_two() {
        use ItemKind::*;
        let mut lx = lexer(b"abc\\");
        assert_eq!(
            drain(&mut lx),
            vec![(Contiguous, 0, 4, 1), (Eof, 4, 0, 1)]
        );
    }

    #[test]
    fn unterminated_quote_reports_opening_position() {
        let mut lx = lexer(b"ok \"no end");
        lx.take().unwrap();
        let err = lx.take().unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        assert_eq!((err.line, err.column), (1, 4));
        assert!(err.message.contains("unterminated"));
    }

    #[test]
    fn stray_null_byte_is_an_error() {
        let mut lx = lexer(b"a \x00 b\n");
        lx.take().unwrap();
        let err = lx.take().unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        assert_eq!((err.line, err.column), (1, 3));
    }

    #[test]
    fn line_numbers_track_hidden_newlines() {
        use ItemKind::*;
        let mut lx = lexer(b"\"l1\nl2\nl3\" tail\nnext\n");
        let items = drain(&mut lx);
        assert_eq!(items[0], (Quoted, 0, 9, 1));
        // `tail` sits on line 3: the string swallowed two newlines.
        assert_eq!(items[1], (Contiguous, 11, 4, 3));
        assert_eq!(items[2], (Newline, 15, 1, 3));
        assert_eq!(items[3], (Contiguous, 16, 4, 4));
    }

    #[test]
    fn escaped_newline_joins_token_and_counts() {
        use ItemKind::*;
        let mut lx = lexer(b"to\\\nken rest\n");
        let items = drain(&mut lx);
        assert_eq!(items[0], (Contiguous, 0, 7, 1));
        assert_eq!(items[1], (Contiguous, 8, 4, 2));
    }

    #[test]
    fn comments_vanish_between_items() {
        use ItemKind::*;
        let mut lx = lexer(b"a ; rest of line\nb\n");
        let items = drain(&mut lx);
        assert_eq!(items[0], (Contiguous, 0, 1, 1));
        assert_eq!(items[1], (Newline, 16, 1, 1));
        assert_eq!(items[2], (Contiguous, 17, 1, 2));
    }

    #[test]
    fn entry_items_group_parens() {
        use ItemKind::*;
        let mut lx = lexer(b"a ( b\n c ) d\ne\n");
        let mut grouped = false;
        let mut kinds = Vec::new();
        loop {
            let item = lx.take_entry_item(&mut grouped).unwrap();
            kinds.push((item.kind, item.line));
            if item.kind == Eof {
                break;
            }
        }
        // Newlines inside the group disappear; the entry ends after `d`.
        assert_eq!(
            kinds,
            vec![
                (Contiguous, 1),
                (Contiguous, 1),
                (Contiguous, 2),
                (Contiguous, 2),
                (Newline, 2),
                (Contiguous, 3),
                (Newline, 3),
                (Eof, 4),
            ]
        );
    }

    #[test]
    fn paren_errors() {
        let mut grouped = false;
        let mut lx = lexer(b"( ( x\n");
        let err = lx.take_entry_item(&mut grouped).unwrap_err();
        assert!(err.message.contains("nested"));

        let mut grouped = false;
        let mut lx = lexer(b") x\n");
        let err = lx.take_entry_item(&mut grouped).unwrap_err();
        assert!(err.message.contains("without a group"));

        let mut grouped = false;
        let mut lx = lexer(b"( x y\n z");
        loop {
            match lx.take_entry_item(&mut grouped) {
                Ok(item) => assert_ne!(item.kind, ItemKind::Eof, "group never closed"),
                Err(err) => {
                    assert!(err.message.contains("unterminated parenthesized"));
                    break;
                }
            }
        }
    }

    #[test]
    fn windows_are_invisible_to_the_item_stream() {
        // A file larger than the minimum window, lexed with the smallest cap
        // and with a huge one, must produce identical items. Includes long
        // tokens, quotes and comments straddling boundaries.
        let mut data = Vec::new();
        for i in 0..2000 {
            match i % 5 {
                0 => data.extend_from_slice(format!("name{i} 3600 IN A 192.0.2.{}\n", i % 250).as_bytes()),
                1 => data.extend_from_slice(format!("t{i} TXT \"some quoted {i} text\" ; note\n").as_bytes()),
                2 => data.extend_from_slice(b"long \"multi\nline\nstring value\" end\n"),
                3 => {
                    data.extend_from_slice(b"big ");
                    data.extend_from_slice(&vec![b'x'; 700]);
                    data.push(b'\n');
                }
                _ => data.extend_from_slice(b"esc to\\ ken \\; more\n"),
            }
        }
        let reference: Vec<_> = {
            let mut lx = Lexer::new("w", data.clone(), Kernel::Scalar, 1 << 24);
            drain(&mut lx)
        };
        for max in [4096usize, 8192, 1 << 20] {
            let mut lx = Lexer::new("w", data.clone(), Kernel::Scalar, max);
            assert_eq!(drain(&mut lx), reference, "cap {max}");
        }
    }

    #[test]
    fn window_grows_for_oversized_tokens() {
        // One token larger than the initial 4 KiB window but under the cap.
        let mut data = b"start ".to_vec();
        data.extend_from_slice(&vec![b'q'; 6000]);
        data.extend_from_slice(b" end\n");
        let mut lx = Lexer::new("g", data, Kernel::Scalar, 1 << 20);
        let items = drain(&mut lx);
        assert_eq!(items[1].2, 6000);
        assert_eq!(items[2].0, ItemKind::Contiguous);
    }

    #[test]
    fn token_over_the_cap_is_a_limit_error() {
        let mut data = b"start ".to_vec();
        data.extend_from_slice(&vec![b'q'; 5000]);
        data.push(b'\n');
        let mut lx = Lexer::new("g", data, Kernel::Scalar, 4096);
        lx.take().unwrap();
        let err = lx.take().unwrap_err();
        assert_eq!(err.kind, ErrorKind::LimitExceeded);
        assert_eq!(err.line, 1);
        assert!(err.message.contains("window limit"));
    }

    #[test]
    fn comment_across_window_boundary_carries() {
        // A comment longer than the window: boundary falls inside it, no
        // token dangles, and the comment state must carry.
        let mut data = b"tok ;".to_vec();
        data.extend_from_slice(&vec![b'c'; 8000]);
        data.extend_from_slice(b"\nafter\n");
        let mut lx = Lexer::new("c", data, Kernel::Scalar, 4096);
        let items = drain(&mut lx);
        use ItemKind::*;
        assert_eq!(items[0].0, Contiguous);
        assert_eq!(items[1].0, Newline);
        assert_eq!(items[2], (Contiguous, 8006, 5, 2));
    }

    #[test]
    fn empty_input_yields_eof() {
        let mut lx = lexer(b"");
        assert_eq!(lx.take().unwrap().kind, ItemKind::Eof);
        assert_eq!(lx.take().unwrap().kind, ItemKind::Eof);
    }
}
