//! Reference zone-file parser used as differential ground truth.
//!
//! This crate re-implements the whole zone-file semantics — tokenization,
//! directives, owner/TTL/class defaulting, every rdata driver — as a plain
//! single-pass, byte-at-a-time state machine.  It shares only the public
//! record/option/error types with the production parser and none of its code,
//! so agreement between the two on arbitrary input is meaningful evidence
//! rather than a tautology.  Speed is a non-goal.
//!
//! Unlike the production parser, which stops at the first error, the
//! reference parser records the error, skips to the next line, and keeps
//! going.  [`OracleRecordList::clean_records`] marks how many records parsed
//! before the first error; that prefix plus the first error is the part a
//! stop-on-error parser can be compared against.

mod prim;
mod rdata;
mod scan;

use std::path::{Path, PathBuf};

use zonefast_types::{
    ClassCode, ErrorKind, ParseError, ParserOptions, Ttl, TypeCode, WireName, ZoneRecord,
};

use rdata::{name_error, parse_rdata, perr, Rd, NAME_BUDGET};
use scan::{column, ScanErr, Scanner, Tok, TokKind};

/// Everything the reference parser produced for one input: records and
/// errors, both in input order.
#[derive(Debug, Default)]
pub struct OracleRecordList {
    pub records: Vec<ZoneRecord>,
    pub errors: Vec<ParseError>,
    /// Number of `records` emitted before the first error.  Equal to
    /// `records.len()` when the input parsed cleanly.
    pub clean_records: usize,
}

impl OracleRecordList {
    /// The records emitted before the first error (all of them when clean).
    pub fn clean(&self) -> &[ZoneRecord] {
        &self.records[..self.clean_records]
    }

    pub fn first_error(&self) -> Option<&ParseError> {
        self.errors.first()
    }
}

/// Parses zone text from memory.  `name` is used in error positions; include
/// directives resolve against the process working directory.
pub fn oracle_parse(name: &str, data: &[u8], options: &ParserOptions) -> OracleRecordList {
    let frame = Frame {
        sc: Scanner::new(data.to_vec(), options.max_window_bytes),
        file: name.to_string(),
        canon: None,
        dir: None,
        restore_origin: None,
        grouped: false,
    };
    run_frames(options, frame)
}

/// Parses a zone file from disk.
pub fn oracle_parse_file(path: &Path, options: &ParserOptions) -> OracleRecordList {
    let display = path.display().to_string();
    let data = match std::fs::read(path) {
        Ok(data) => data,
        Err(e) => {
            return OracleRecordList {
                records: Vec::new(),
                errors: vec![ParseError::io(display, 1, 1, format!("cannot open: {e}"))],
                clean_records: 0,
            };
        }
    };
    let frame = Frame {
        sc: Scanner::new(data, options.max_window_bytes),
        file: display,
        canon: std::fs::canonicalize(path).ok(),
        dir: path.parent().map(Path::to_path_buf),
        restore_origin: None,
        grouped: false,
    };
    run_frames(options, frame)
}

/// One input on the include stack.
struct Frame {
    sc: Scanner,
    file: String,
    /// Canonical path, for cycle detection.  `None` for in-memory input.
    canon: Option<PathBuf>,
    /// Directory that nested include paths resolve against.
    dir: Option<PathBuf>,
    /// Origin to reinstate when this frame pops — origin (and only origin)
    /// is scoped to an included file.  `None` for the top-level frame.
    restore_origin: Option<Option<Vec<u8>>>,
    grouped: bool,
}

struct Oracle<'o> {
    options: &'o ParserOptions,
    stack: Vec<Frame>,
    /// Current origin in wire form.
    origin: Option<Vec<u8>>,
    /// Wire name of the most recent owner; inherited by indented entries.
    owner: Vec<u8>,
    have_owner: bool,
    /// TTL of the most recently emitted record.
    last_ttl: Option<u32>,
    /// Value of the last $TTL directive; once set it wins over `last_ttl`.
    directive_ttl: Option<u32>,
    last_class: u16,
    out: OracleRecordList,
}

fn run_frames(options: &ParserOptions, first: Frame) -> OracleRecordList {
    let mut oracle = Oracle {
        options,
        stack: vec![first],
        origin: options.origin.as_ref().map(|n| n.as_bytes().to_vec()),
        owner: Vec::new(),
        have_owner: false,
        last_ttl: None,
        directive_ttl: None,
        last_class: options.default_class.0,
        out: OracleRecordList::default(),
    };
    oracle.run();
    let mut out = oracle.out;
    if out.errors.is_empty() {
        out.clean_records = out.records.len();
    }
    out
}

/// One collected entry (tokens plus the terminator position) or end of file.
enum Collected {
    Entry(Vec<Tok>, usize, u32),
    Eof,
}

/// Gathers one entry's tokens from the frame, folding groups and blank lines.
fn collect(frame: &mut Frame) -> Result<Collected, ScanErr> {
    let mut toks = Vec::new();
    loop {
        let t = frame.sc.next_entry_tok(&mut frame.grouped)?;
        match t.kind {
            TokKind::Newline => {
                if toks.is_empty() {
                    continue; // blank line
                }
                return Ok(Collected::Entry(toks, t.start, t.line));
            }
            TokKind::Eof => {
                if toks.is_empty() {
                    return Ok(Collected::Eof);
                }
                return Ok(Collected::Entry(toks, t.start, t.line));
            }
            _ => toks.push(t),
        }
    }
}

impl<'o> Oracle<'o> {
    fn report(&mut self, e: ParseError) {
        if self.out.errors.is_empty() {
            self.out.clean_records = self.out.records.len();
        }
        self.out.errors.push(e);
    }

    fn run(&mut self) {
        loop {
            let Some(top) = self.stack.last_mut() else { break };
            match collect(top) {
                Err(e) => {
                    let err = ParseError {
                        kind: e.kind,
                        file: top.file.clone(),
                        line: e.line,
                        column: column(&top.sc.data, e.offset),
                        message: e.msg,
                    };
                    // Tokenizer-level failure: drop the rest of the line and
                    // resume outside any group.
                    top.grouped = false;
                    top.sc.skip_to_next_line();
                    self.report(err);
                }
                Ok(Collected::Eof) => {
                    let frame = self.stack.pop().unwrap();
                    if let Some(previous) = frame.restore_origin {
                        self.origin = previous;
                    }
                }
                Ok(Collected::Entry(toks, end_offset, end_line)) => {
                    if let Err(e) = self.process_entry(&toks, end_offset, end_line) {
                        // The entry was fully collected, so the scanner is
                        // already positioned at the next one.
                        self.report(e);
                    }
                }
            }
        }
    }

    fn process_entry(
        &mut self,
        toks: &[Tok],
        end_offset: usize,
        end_line: u32,
    ) -> Result<(), ParseError> {
        let first = toks[0];
        let is_directive = {
            let top = self.stack.last().unwrap();
            first.kind == TokKind::Text && first.text(&top.sc.data).starts_with(b"$")
        };
        if is_directive {
            return self.process_directive(toks, end_offset, end_line);
        }

        let top = self.stack.last().unwrap();
        let file = top.file.as_str();
        let data: &[u8] = &top.sc.data;

        // Explicit owner at column zero; anything indented inherits.
        let explicit_owner = first.start == 0 || data[first.start - 1] == b'\n';
        let mut k = 0usize;
        if explicit_owner {
            if first.kind == TokKind::Quoted {
                return Err(perr(
                    file,
                    data,
                    ErrorKind::Syntax,
                    first.start,
                    first.line,
                    "owner name cannot be a quoted string",
                ));
            }
            let wire = prim::encode_name(first.text(data), self.origin.as_deref(), NAME_BUDGET)
                .map_err(|e| name_error(file, data, &first, e, "owner name"))?;
            self.owner = wire;
            self.have_owner = true;
            k = 1;
        } else if !self.have_owner {
            return Err(perr(
                file,
                data,
                ErrorKind::Semantic,
                first.start,
                first.line,
                "no previous owner name to inherit",
            ));
        }

        // Header: optional TTL and class in either order, then the type.
        let mut ttl: Option<u32> = None;
        let mut class: Option<u16> = None;
        let rtype: u16;
        loop {
            let Some(&t) = toks.get(k) else {
                return Err(perr(
                    file,
                    data,
                    ErrorKind::Syntax,
                    end_offset,
                    end_line,
                    "missing record type",
                ));
            };
            k += 1;
            if t.kind == TokKind::Quoted {
                return Err(perr(
                    file,
                    data,
                    ErrorKind::Syntax,
                    t.start,
                    t.line,
                    "record header fields cannot be quoted",
                ));
            }
            let text = t.text(data);
            if text.iter().all(u8::is_ascii_digit) {
                // All digits is always a TTL, never a type.
                if ttl.is_some() {
                    return Err(perr(
                        file,
                        data,
                        ErrorKind::Syntax,
                        t.start,
                        t.line,
                        "duplicate TTL in record header",
                    ));
                }
                let value = match prim::dec_u32(text) {
                    Ok(v) if Ttl(v).is_valid() => v,
                    _ => {
                        return Err(perr(
                            file,
                            data,
                            ErrorKind::Semantic,
                            t.start,
                            t.line,
                            "TTL out of range",
                        ));
                    }
                };
                ttl = Some(value);
            } else if let Some(c) = prim::class_code(text) {
                if class.is_some() {
                    return Err(perr(
                        file,
                        data,
                        ErrorKind::Syntax,
                        t.start,
                        t.line,
                        "duplicate class in record header",
                    ));
                }
                class = Some(c);
            } else if let Some(ty) = prim::type_code(text) {
                rtype = ty;
                break;
            } else {
                return Err(perr(
                    file,
                    data,
                    ErrorKind::Syntax,
                    t.start,
                    t.line,
                    "unknown record type",
                ));
            }
        }
        let ttl = ttl
            .or(self.directive_ttl)
            .or(self.last_ttl)
            .unwrap_or(self.options.default_ttl.0);
        let class = class.unwrap_or(self.last_class);

        let mut rd = Rd {
            file,
            data,
            toks: &toks[k..],
            idx: 0,
            end: (end_offset, end_line),
            origin: self.origin.as_deref(),
            out: Vec::new(),
        };
        parse_rdata(&mut rd, rtype)?;
        let rdata = rd.out;

        self.last_ttl = Some(ttl);
        self.last_class = class;
        self.out.records.push(ZoneRecord {
            owner: WireName::from_wire(self.owner.clone())
                .expect("owner came from the name encoder"),
            rtype: TypeCode(rtype),
            rclass: ClassCode(class),
            ttl: Ttl(ttl),
            rdata,
        });
        Ok(())
    }

    fn process_directive(
        &mut self,
        toks: &[Tok],
        end_offset: usize,
        end_line: u32,
    ) -> Result<(), ParseError> {
        /// Deferred state change, applied once the frame borrows are done.
        enum Action {
            SetOrigin(Vec<u8>),
            SetTtl(u32),
            Include {
                path: PathBuf,
                origin: Option<Vec<u8>>,
                at_start: usize,
                at_line: u32,
            },
        }

        let action = {
            let top = self.stack.last().unwrap();
            let file = top.file.as_str();
            let data: &[u8] = &top.sc.data;
            let first = toks[0];
            let name = first.text(data);

            // A token at position k, or a wrong-arity error.
            let arg = |k: usize, usage: &str| -> Result<Tok, ParseError> {
                match toks.get(k) {
                    Some(&t) => Ok(t),
                    None => Err(perr(
                        file,
                        data,
                        ErrorKind::Syntax,
                        end_offset,
                        end_line,
                        usage,
                    )),
                }
            };
            let no_more = |k: usize, usage: &str| -> Result<(), ParseError> {
                match toks.get(k) {
                    Some(t) => Err(perr(
                        file,
                        data,
                        ErrorKind::Syntax,
                        t.start,
                        t.line,
                        usage,
                    )),
                    None => Ok(()),
                }
            };
            let contiguous = |t: &Tok, what: &str| -> Result<(), ParseError> {
                if t.kind == TokKind::Quoted {
                    return Err(perr(
                        file,
                        data,
                        ErrorKind::Syntax,
                        t.start,
                        t.line,
                        format!("{what} cannot be a quoted string"),
                    ));
                }
                Ok(())
            };

            if name.eq_ignore_ascii_case(b"$ORIGIN") {
                const USAGE: &str = "$ORIGIN takes exactly one domain name";
                let t = arg(1, USAGE)?;
                no_more(2, USAGE)?;
                contiguous(&t, "origin name")?;
                let wire =
                    prim::encode_name(t.text(data), self.origin.as_deref(), NAME_BUDGET)
                        .map_err(|e| name_error(file, data, &t, e, "origin name"))?;
                Action::SetOrigin(wire)
            } else if name.eq_ignore_ascii_case(b"$TTL") {
                const USAGE: &str = "$TTL takes exactly one value";
                let t = arg(1, USAGE)?;
                no_more(2, USAGE)?;
                contiguous(&t, "TTL")?;
                let value = prim::dec_u32(t.text(data)).map_err(|e| match e {
                    prim::NumErr::NotANumber => perr(
                        file,
                        data,
                        ErrorKind::Syntax,
                        t.start,
                        t.line,
                        "invalid TTL",
                    ),
                    prim::NumErr::Overflow => perr(
                        file,
                        data,
                        ErrorKind::Semantic,
                        t.start,
                        t.line,
                        "TTL out of range",
                    ),
                })?;
                if !Ttl(value).is_valid() {
                    return Err(perr(
                        file,
                        data,
                        ErrorKind::Semantic,
                        t.start,
                        t.line,
                        "TTL out of range",
                    ));
                }
                Action::SetTtl(value)
            } else if name.eq_ignore_ascii_case(b"$INCLUDE") {
                const USAGE: &str = "$INCLUDE takes a file name and an optional origin";
                let path_item = arg(1, USAGE)?;
                let origin_item = toks.get(2).copied();
                no_more(3, USAGE)?;

                // The path may be quoted; escapes apply either way.
                let raw = path_item.content(data);
                let path_bytes = prim::unescape(raw).map_err(|_| {
                    perr(
                        file,
                        data,
                        ErrorKind::Syntax,
                        path_item.start,
                        path_item.line,
                        "invalid escape sequence in file name",
                    )
                })?;
                let path = path_from_bytes(&path_bytes).ok_or_else(|| {
                    perr(
                        file,
                        data,
                        ErrorKind::Io,
                        path_item.start,
                        path_item.line,
                        "file name is not valid for this platform",
                    )
                })?;

                let new_origin = match origin_item {
                    Some(t) => {
                        contiguous(&t, "origin name")?;
                        let wire = prim::encode_name(
                            t.text(data),
                            self.origin.as_deref(),
                            NAME_BUDGET,
                        )
                        .map_err(|e| name_error(file, data, &t, e, "origin name"))?;
                        Some(wire)
                    }
                    None => None,
                };
                Action::Include {
                    path,
                    origin: new_origin,
                    at_start: path_item.start,
                    at_line: path_item.line,
                }
            } else {
                return Err(perr(
                    file,
                    data,
                    ErrorKind::Syntax,
                    first.start,
                    first.line,
                    "unknown directive",
                ));
            }
        };

        match action {
            Action::SetOrigin(wire) => {
                self.origin = Some(wire);
                Ok(())
            }
            Action::SetTtl(value) => {
                self.directive_ttl = Some(value);
                Ok(())
            }
            Action::Include { path, origin, at_start, at_line } => {
                self.push_include(path, origin, at_start, at_line)
            }
        }
    }

    fn push_include(
        &mut self,
        path: PathBuf,
        origin_override: Option<Vec<u8>>,
        at_start: usize,
        at_line: u32,
    ) -> Result<(), ParseError> {
        let top = self.stack.last().unwrap();
        let at_err = |kind: ErrorKind, msg: String| -> ParseError {
            perr(&top.file, &top.sc.data, kind, at_start, at_line, msg)
        };
        if self.stack.len() - 1 >= self.options.max_include_depth {
            return Err(at_err(
                ErrorKind::LimitExceeded,
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
        let data = std::fs::read(&resolved)
            .map_err(|e| at_err(ErrorKind::Io, format!("cannot open {display}: {e}")))?;
        let canon = std::fs::canonicalize(&resolved)
            .map_err(|e| at_err(ErrorKind::Io, format!("cannot resolve {display}: {e}")))?;
        if self.stack.iter().any(|f| f.canon.as_deref() == Some(&canon)) {
            return Err(at_err(
                ErrorKind::Semantic,
                format!("include cycle through {display}"),
            ));
        }
        let frame = Frame {
            sc: Scanner::new(data, self.options.max_window_bytes),
            file: display,
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
