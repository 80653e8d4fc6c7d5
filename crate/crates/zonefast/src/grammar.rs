//! Stage-2 entry parsing: directives, record headers with owner/TTL/class
//! defaulting, and dispatch into the RDATA drivers.
//!
//! Entries are collected one at a time from the current lexer (the top of
//! the include stack). A `$` directive mutates parser state; anything else
//! is a record: an owner (explicit at column zero, otherwise inherited), an
//! optional TTL and class in either order, a type, and the type's rdata.

use std::path::{Path, PathBuf};

use crate::kernel::Kernel;
use crate::lexer::{Item, ItemKind, Lexer};
use crate::rdata::{self, name::parse_name, name::NAME_SLACK, text::unescape_into, RdataBuf};
use crate::rrtype;
use zonefast_types::{
    ClassCode, ErrorKind, ParseError, ParserOptions, RecordSink, SinkFlow, Ttl, TypeCode,
};

/// Totals from one parse.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseStats {
    pub records: u64,
    /// Zone text processed, included files counted too.
    pub bytes: u64,
    /// True when the sink stopped the parse early.
    pub aborted: bool,
}

/// Recognizes a class token: IN, CS, CH, HS or `CLASS<n>`, case-insensitive.
/// `None` tells the header loop to try the other interpretations.
pub fn class_from_mnemonic(text: &[u8]) -> Option<u16> {
    if let &[a, b] = text {
        // Setting bit 5 lowercases letters; only letters can fold onto the
        // lowercase mnemonics, so this matches case-insensitively.
        return match [a | 0x20, b | 0x20] {
            [b'i', b'n'] => Some(1),
            [b'c', b's'] => Some(2),
            [b'c', b'h'] => Some(3),
            [b'h', b's'] => Some(4),
            _ => None,
        };
    }
    let digits = match text.split_at_checked(5) {
        Some((head, rest)) if head.eq_ignore_ascii_case(b"CLASS") && !rest.is_empty() => rest,
        _ => return None,
    };
    let mut value = 0u32;
    for &d in digits {
        if !d.is_ascii_digit() {
            return None;
        }
        value = value * 10 + (d - b'0') as u32;
        if value > u16::MAX as u32 {
            return None;
        }
    }
    Some(value as u16)
}

/// One input on the include stack.
struct Frame {
    lx: Lexer,
    /// Canonical path, for cycle detection. `None` for in-memory input.
    canon: Option<PathBuf>,
    /// Directory that nested `$INCLUDE` paths resolve against.
    dir: Option<PathBuf>,
    /// Origin to reinstate when this frame pops — origin (and only origin)
    /// is scoped to an included file. `None` for the top-level frame.
    restore_origin: Option<Option<Vec<u8>>>,
    /// Parenthesized-group flag for this file's entry collection.
    grouped: bool,
}

struct Parser<'e, S: RecordSink> {
    options: &'e ParserOptions,
    kernel: Kernel,
    sink: &'e mut S,
    stack: Vec<Frame>,
    /// Current origin in wire form.
    origin: Option<Vec<u8>>,
    /// Wire name of the most recent owner; inherited by blank-led entries.
    owner: Vec<u8>,
    have_owner: bool,
    /// TTL of the most recently emitted record.
    last_ttl: Option<u32>,
    /// Value of the last $TTL directive; once set it wins over last_ttl.
    directive_ttl: Option<u32>,
    last_class: u16,
    items: Vec<Item>,
    name_buf: Box<[u8]>,
    rdata: RdataBuf,
    join: Vec<u8>,
    blob: Vec<u8>,
    types: Vec<u16>,
    records: u64,
    bytes_done: u64,
    aborted: bool,
}

/// Parses zone text from memory. `name` is used in error positions; include
/// directives resolve against the process working directory.
pub fn parse_bytes<S: RecordSink>(
    name: &str,
    data: &[u8],
    options: &ParserOptions,
    kernel: Kernel,
    sink: &mut S,
) -> Result<ParseStats, ParseError> {
    parse_vec(name, data.to_vec(), options, kernel, sink)
}

/// Like [`parse_bytes`] but takes ownership of the buffer, avoiding a copy.
pub fn parse_vec<S: RecordSink>(
    name: &str,
    data: Vec<u8>,
    options: &ParserOptions,
    kernel: Kernel,
    sink: &mut S,
) -> Result<ParseStats, ParseError> {
    let frame = Frame {
        lx: Lexer::new(name, data, kernel, options.max_window_bytes),
        canon: None,
        dir: None,
        restore_origin: None,
        grouped: false,
    };
    Parser::new(options, kernel, sink).run(frame)
}

/// Parses a zone file from disk.
pub fn parse_file<S: RecordSink>(
    path: &Path,
    options: &ParserOptions,
    kernel: Kernel,
    sink: &mut S,
) -> Result<ParseStats, ParseError> {
    let display = path.display().to_string();
    let data = std::fs::read(path).map_err(|e| {
        ParseError::io(display.clone(), 1, 1, format!("cannot open: {e}"))
    })?;
    let frame = Frame {
        lx: Lexer::new(display, data, kernel, options.max_window_bytes),
        canon: std::fs::canonicalize(path).ok(),
        dir: path.parent().map(Path::to_path_buf),
        restore_origin: None,
        grouped: false,
    };
    Parser::new(options, kernel, sink).run(frame)
}

impl<'e, S: RecordSink> Parser<'e, S> {
    fn new(options: &'e ParserOptions, kernel: Kernel, sink: &'e mut S) -> Self {
        Parser {
            options,
            kernel,
            sink,
            stack: Vec::new(),
            origin: options.origin.as_ref().map(|o| o.as_bytes().to_vec()),
            owner: Vec::new(),
            have_owner: false,
            last_ttl: None,
            directive_ttl: None,
            last_class: options.default_class.0,
            items: Vec::new(),
            name_buf: vec![0; NAME_SLACK].into_boxed_slice(),
            rdata: RdataBuf::default(),
            join: Vec::new(),
            blob: Vec::new(),
            types: Vec::new(),
            records: 0,
            bytes_done: 0,
            aborted: false,
        }
    }

    fn run(mut self, first: Frame) -> Result<ParseStats, ParseError> {
        self.stack.push(first);
        while !self.stack.is_empty() {
            // Collect one entry's items from the current file.
            self.items.clear();
            let end: (usize, u32);
            let mut at_eof = false;
            {
                let top = self.stack.last_mut().unwrap();
                loop {
                    let item = top.lx.take_entry_item(&mut top.grouped)?;
                    match item.kind {
                        ItemKind::Newline => {
                            if self.items.is_empty() {
                                continue; // blank line
                            }
                            end = (item.start, item.line);
                            break;
                        }
                        ItemKind::Eof => {
                            at_eof = self.items.is_empty();
                            end = (item.start, item.line);
                            break;
                        }
                        _ => self.items.push(item),
                    }
                }
            }
            if at_eof {
                let frame = self.stack.pop().unwrap();
                self.bytes_done += frame.lx.data_len() as u64;
                if let Some(previous) = frame.restore_origin {
                    self.origin = previous;
                }
                continue;
            }
            self.process_entry(end.0, end.1)?;
            if self.aborted {
                break;
            }
        }
        Ok(ParseStats {
            records: self.records,
            bytes: self.bytes_done,
            aborted: self.aborted,
        })
    }

    fn process_entry(&mut self, end_offset: usize, end_line: u32) -> Result<(), ParseError> {
        let first = self.items[0];
        {
            let lx = &self.stack.last().unwrap().lx;
            if first.kind == ItemKind::Contiguous && lx.text(&first).starts_with(b"$") {
                return self.process_directive(end_offset, end_line);
            }
        }

        let lx = &self.stack.last().unwrap().lx;
        // Explicit owner at column zero; anything indented inherits.
        let explicit_owner = first.start == 0 || lx.buf()[first.start - 1] == b'\n';
        let mut k = 0usize;
        if explicit_owner {
            if first.kind == ItemKind::Quoted {
                return Err(lx.err(
                    ErrorKind::Syntax,
                    first.line,
                    first.start,
                    "owner name cannot be a quoted string",
                ));
            }
            let n = parse_name(lx.text(&first), self.origin.as_deref(), &mut self.name_buf)
                .map_err(|e| rdata::name_error(lx, &first, e, "owner name"))?;
            self.owner.clear();
            self.owner.extend_from_slice(&self.name_buf[..n]);
            self.have_owner = true;
            k = 1;
        } else if !self.have_owner {
            return Err(lx.err(
                ErrorKind::Semantic,
                first.line,
                first.start,
                "no previous owner name to inherit",
            ));
        }

        // Header: optional TTL and class in either order, then the type.
        let mut ttl: Option<u32> = None;
        let mut class: Option<u16> = None;
        let rtype: u16;
        loop {
            let Some(&item) = self.items.get(k) else {
                return Err(lx.err(
                    ErrorKind::Syntax,
                    end_line,
                    end_offset,
                    "missing record type",
                ));
            };
            k += 1;
            if item.kind == ItemKind::Quoted {
                return Err(lx.err(
                    ErrorKind::Syntax,
                    item.line,
                    item.start,
                    "record header fields cannot be quoted",
                ));
            }
            let text = lx.text(&item);
            // One pass decides digits-only and accumulates the value;
            // all digits is always a TTL, never a type.
            let mut all_digits = true;
            let mut value = 0u64;
            for &b in text {
                let d = b.wrapping_sub(b'0');
                if d > 9 {
                    all_digits = false;
                    break;
                }
                // Clamp so arbitrarily long digit runs cannot wrap; anything
                // past the TTL range only needs to stay past it.
                value = (value * 10 + d as u64).min(1 << 32);
            }
            if all_digits {
                if ttl.is_some() {
                    return Err(lx.err(
                        ErrorKind::Syntax,
                        item.line,
                        item.start,
                        "duplicate TTL in record header",
                    ));
                }
                if text.is_empty() || value > u32::MAX as u64 || !Ttl(value as u32).is_valid() {
                    return Err(lx.err(
                        ErrorKind::Semantic,
                        item.line,
                        item.start,
                        "TTL out of range",
                    ));
                }
                ttl = Some(value as u32);
            } else if let Some(c) = class_from_mnemonic(text) {
                if class.is_some() {
                    return Err(lx.err(
                        ErrorKind::Syntax,
                        item.line,
                        item.start,
                        "duplicate class in record header",
                    ));
                }
                class = Some(c);
            } else if let Some(t) = rrtype::recognize(text) {
                rtype = t;
                break;
            } else {
                return Err(lx.err(
                    ErrorKind::Syntax,
                    item.line,
                    item.start,
                    "unknown record type",
                ));
            }
        }
        let ttl = ttl
            .or(self.directive_ttl)
            .or(self.last_ttl)
            .unwrap_or(self.options.default_ttl.0);
        let class = class.unwrap_or(self.last_class);

        let mut f = rdata::Fields {
            lx,
            items: &self.items[k..],
            idx: 0,
            end_offset,
            end_line,
            origin: self.origin.as_deref(),
            join: &mut self.join,
            bytes: &mut self.blob,
            types: &mut self.types,
            out: &mut self.rdata,
        };
        rdata::parse_rdata(&mut f, rtype)?;

        self.last_ttl = Some(ttl);
        self.last_class = class;
        self.records += 1;
        let flow = self.sink.record(
            &self.owner,
            TypeCode(rtype),
            ClassCode(class),
            Ttl(ttl),
            self.rdata.as_slice(),
        );
        if flow == SinkFlow::Abort {
            self.aborted = true;
        }
        Ok(())
    }

    fn process_directive(&mut self, end_offset: usize, end_line: u32) -> Result<(), ParseError> {
        let lx = &self.stack.last().unwrap().lx;
        let first = self.items[0];
        let name = lx.text(&first);

        // A token item at position k, or a wrong-arity error.
        let arg = |k: usize, usage: &str| -> Result<Item, ParseError> {
            match self.items.get(k) {
                Some(&item) => Ok(item),
                None => Err(lx.err(ErrorKind::Syntax, end_line, end_offset, usage)),
            }
        };
        let no_more = |k: usize, usage: &str| -> Result<(), ParseError> {
            match self.items.get(k) {
                Some(item) => Err(lx.err(ErrorKind::Syntax, item.line, item.start, usage)),
                None => Ok(()),
            }
        };
        let contiguous = |item: &Item, what: &str| -> Result<(), ParseError> {
            if item.kind == ItemKind::Quoted {
                return Err(lx.err(
                    ErrorKind::Syntax,
                    item.line,
                    item.start,
                    format!("{what} cannot be a quoted string"),
                ));
            }
            Ok(())
        };

        if name.eq_ignore_ascii_case(b"$ORIGIN") {
            const USAGE: &str = "$ORIGIN takes exactly one domain name";
            let item = arg(1, USAGE)?;
            no_more(2, USAGE)?;
            contiguous(&item, "origin name")?;
            let n = parse_name(lx.text(&item), self.origin.as_deref(), &mut self.name_buf)
                .map_err(|e| rdata::name_error(lx, &item, e, "origin name"))?;
            self.origin = Some(self.name_buf[..n].to_vec());
            Ok(())
        } else if name.eq_ignore_ascii_case(b"$TTL") {
            const USAGE: &str = "$TTL takes exactly one value";
            let item = arg(1, USAGE)?;
            no_more(2, USAGE)?;
            contiguous(&item, "TTL")?;
            let text = lx.text(&item);
            let value = rdata::num::parse_u32(text).map_err(|e| match e {
                rdata::num::NumError::NotANumber => {
                    lx.err(ErrorKind::Syntax, item.line, item.start, "invalid TTL")
                }
                rdata::num::NumError::Overflow => {
                    lx.err(ErrorKind::Semantic, item.line, item.start, "TTL out of range")
                }
            })?;
            if !Ttl(value).is_valid() {
                return Err(lx.err(
                    ErrorKind::Semantic,
                    item.line,
                    item.start,
                    "TTL out of range",
                ));
            }
            self.directive_ttl = Some(value);
            Ok(())
        } else if name.eq_ignore_ascii_case(b"$INCLUDE") {
            const USAGE: &str = "$INCLUDE takes a file name and an optional origin";
            let path_item = arg(1, USAGE)?;
            let origin_item = self.items.get(2).copied();
            no_more(3, USAGE)?;

            // The path may be quoted; escapes apply either way.
            let raw = lx.text(&path_item);
            let raw = match path_item.kind {
                ItemKind::Quoted => &raw[1..],
                _ => raw,
            };
            self.blob.clear();
            unescape_into(raw, &mut self.blob).map_err(|_| {
                lx.err(
                    ErrorKind::Syntax,
                    path_item.line,
                    path_item.start,
                    "invalid escape sequence in file name",
                )
            })?;
            let path = path_from_bytes(&self.blob).ok_or_else(|| {
                lx.err(
                    ErrorKind::Io,
                    path_item.line,
                    path_item.start,
                    "file name is not valid for this platform",
                )
            })?;

            let new_origin = match origin_item {
                Some(item) => {
                    contiguous(&item, "origin name")?;
                    let n =
                        parse_name(lx.text(&item), self.origin.as_deref(), &mut self.name_buf)
                            .map_err(|e| rdata::name_error(lx, &item, e, "origin name"))?;
                    Some(self.name_buf[..n].to_vec())
                }
                None => None,
            };
            self.push_include(path, new_origin, &path_item)
        } else {
            Err(lx.err(
                ErrorKind::Syntax,
                first.line,
                first.start,
                "unknown directive",
            ))
        }
    }

    fn push_include(
        &mut self,
        path: PathBuf,
        origin_override: Option<Vec<u8>>,
        at: &Item,
    ) -> Result<(), ParseError> {
        let top = self.stack.last().unwrap();
        let lx = &top.lx;
        if self.stack.len() - 1 >= self.options.max_include_depth {
            return Err(lx.err(
                ErrorKind::LimitExceeded,
                at.line,
                at.start,
                format!(
                    "include depth exceeds the limit of {}",
                    self.options.max_include_depth
                ),
            ));
        }
        let resolved = match (&top.dir, path.is_relative()) {
            (Some(dir), true) => dir.join(&path),
            _ => path,
        };
        let display = resolved.display().to_string();
        let data = std::fs::read(&resolved).map_err(|e| {
            lx.err(
                ErrorKind::Io,
                at.line,
                at.start,
                format!("cannot open {display}: {e}"),
            )
        })?;
        let canon = std::fs::canonicalize(&resolved).map_err(|e| {
            lx.err(
                ErrorKind::Io,
                at.line,
                at.start,
                format!("cannot resolve {display}: {e}"),
            )
        })?;
        if self.stack.iter().any(|f| f.canon.as_deref() == Some(&canon)) {
            return Err(lx.err(
                ErrorKind::Semantic,
                at.line,
                at.start,
                format!("include cycle through {display}"),
            ));
        }
        let frame = Frame {
            lx: Lexer::new(display, data, self.kernel, self.options.max_window_bytes),
            canon: Some(canon),
            dir: resolved.parent().map(Path::to_path_buf),
            restore_origin: Some(self.origin.clone()),
            grouped: false,
        };
        if let Some(origin) = origin_override {
            self.origin = Some(origin);
        }
        self.stack.push(frame);
        Ok(())
    }
}

#[cfg(unix)]
fn path_from_bytes(bytes: &[u8]) -> Option<PathBuf> {
    use std::os::unix::ffi::OsStrExt;
    Some(PathBuf::from(std::ffi::OsStr::from_bytes(bytes)))
}

#[cfg(not(unix))]
fn path_from_bytes(bytes: &[u8]) -> Option<PathBuf> {
    std::str::from_utf8(bytes).ok().map(PathBuf::from)
}
