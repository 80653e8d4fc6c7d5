//! Shared domain types for the zonefast parser family.
//!
//! Everything that the fast parser, the reference parser and the command-line
//! tools must agree on lives here: wire-format names, record/type/class/TTL
//! wrappers, the error taxonomy, parser options, the record sink contract and
//! the canonical generic-notation rendering used for dumps and diffing.

use std::fmt;

/// Maximum length of a domain name in wire format, in octets.
pub const MAX_NAME_LEN: usize = 255;
/// Maximum length of a single label, in octets.
pub const MAX_LABEL_LEN: usize = 63;
/// Maximum RDATA size on the wire.
pub const MAX_RDATA_LEN: usize = 65535;

//------------ WireName ------------------------------------------------------

/// A domain name in wire format: length-prefixed labels terminated by a
/// zero-length root label. Original spelling (case) is preserved.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WireName {
    octets: Vec<u8>,
}

impl WireName {
    /// The root name: a single zero octet.
    pub fn root() -> Self {
        WireName { octets: vec![0] }
    }

    /// Wraps wire-format octets, validating the label structure.
    pub fn from_wire(octets: Vec<u8>) -> Result<Self, WireNameError> {
        validate_wire_name(&octets)?;
        Ok(WireName { octets })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.octets
    }

    pub fn len(&self) -> usize {
        self.octets.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid wire name is never empty; the root is one octet
    }

    pub fn is_root(&self) -> bool {
        self.octets.len() == 1
    }

    /// Iterates over the labels, excluding the terminal root label.
    pub fn labels(&self) -> impl Iterator<Item = &[u8]> {
        LabelIter { rest: &self.octets }
    }

    /// Renders the name in presentation form: labels joined by dots, always
    /// with a trailing dot, non-printable octets as `\DDD` and structural
    /// printables backslash-escaped. The root name renders as `.`.
    pub fn to_presentation(&self) -> String {
        let mut out = String::new();
        if self.is_root() {
            out.push('.');
            return out;
        }
        for label in self.labels() {
            push_escaped_label(&mut out, label);
            out.push('.');
        }
        out
    }
}

struct LabelIter<'a> {
    rest: &'a [u8],
}

impl<'a> Iterator for LabelIter<'a> {
    type Item = &'a [u8];

    fn next(&mut self) -> Option<&'a [u8]> {
        let len = *self.rest.first()? as usize;
        if len == 0 {
            return None;
        }
        let label = &self.rest[1..1 + len];
        self.rest = &self.rest[1 + len..];
        Some(label)
    }
}

fn validate_wire_name(octets: &[u8]) -> Result<(), WireNameError> {
    if octets.is_empty() || octets.len() > MAX_NAME_LEN {
        return Err(WireNameError);
    }
    let mut pos = 0;
    loop {
        let len = octets[pos] as usize;
        if len == 0 {
            // The root label must be the final octet, exactly once.
            return if pos + 1 == octets.len() {
                Ok(())
            } else {
                Err(WireNameError)
            };
        }
        if len > MAX_LABEL_LEN || pos + 1 + len >= octets.len() {
            return Err(WireNameError);
        }
        pos += 1 + len;
    }
}

/// Writes one label with generic-dump escaping into `out`.
fn push_escaped_label(out: &mut String, label: &[u8]) {
    for &b in label {
        if !(0x21..=0x7e).contains(&b) {
            // Non-printable (or space): three-digit decimal escape.
            out.push('\\');
            out.push((b'0' + b / 100) as char);
            out.push((b'0' + b / 10 % 10) as char);
            out.push((b'0' + b % 10) as char);
        } else if matches!(b, b'.' | b'\\' | b'"' | b';' | b'(' | b')' | b'@' | b'$') {
            // Printable but structurally meaningful: escape so the rendered
            // line re-parses to the same name.
            out.push('\\');
            out.push(b as char);
        } else {
            out.push(b as char);
        }
    }
}

impl fmt::Debug for WireName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WireName({})", self.to_presentation())
    }
}

impl fmt::Display for WireName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_presentation())
    }
}

/// The octets do not form a valid wire-format name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireNameError;

impl fmt::Display for WireNameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid wire-format domain name")
    }
}

impl std::error::Error for WireNameError {}

//------------ Record field wrappers ----------------------------------------

/// An RRTYPE code.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TypeCode(pub u16);

/// A CLASS code (IN=1, CS=2, CH=3, HS=4, or any generic value).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClassCode(pub u16);

impl ClassCode {
    pub const IN: ClassCode = ClassCode(1);
}

/// A time-to-live in seconds. Values with the high bit set are rejected by
/// the parsers; the wrapper itself stores any u32.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Ttl(pub u32);

impl Ttl {
    /// Largest TTL the parsers accept (2^31 − 1).
    pub const MAX: Ttl = Ttl(0x7fff_ffff);

    pub fn is_valid(self) -> bool {
        self.0 <= Ttl::MAX.0
    }
}

//------------ ZoneRecord ----------------------------------------------------

/// One parsed resource record, owned form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZoneRecord {
    pub owner: WireName,
    pub rtype: TypeCode,
    pub rclass: ClassCode,
    pub ttl: Ttl,
    pub rdata: Vec<u8>,
}

//------------ ParserOptions -------------------------------------------------

/// Knobs shared by the fast parser and the reference parser.
#[derive(Clone, Debug)]
pub struct ParserOptions {
    /// TTL used when no record before the first explicit TTL provides one.
    pub default_ttl: Ttl,
    /// Class assumed before the first explicit class.
    pub default_class: ClassCode,
    /// Initial origin; when `None`, relative names are errors until $ORIGIN.
    pub origin: Option<WireName>,
    /// Maximum $INCLUDE nesting depth (≥ 1).
    pub max_include_depth: usize,
    /// Reserved for future lint-style checks; currently no effect.
    pub strict_mode: bool,
    /// Upper bound for the indexing window, and therefore for a single
    /// token's length. Must be a power of two ≥ 4096.
    pub max_window_bytes: usize,
}

impl Default for ParserOptions {
    fn default() -> Self {
        ParserOptions {
            default_ttl: Ttl(36000),
            default_class: ClassCode::IN,
            origin: None,
            max_include_depth: 10,
            strict_mode: false,
            max_window_bytes: 1 << 20,
        }
    }
}

//------------ Errors --------------------------------------------------------

/// Coarse classification of parse failures.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ErrorKind {
    /// Token- or grammar-level violation.
    Syntax,
    /// DNS value-range violation (TTL range, label/name/string lengths, ...).
    Semantic,
    /// File could not be opened or read.
    Io,
    /// A fixed resource bound was exceeded (rdata size, include depth, ...).
    LimitExceeded,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Syntax => "syntax",
            ErrorKind::Semantic => "semantic",
            ErrorKind::Io => "io",
            ErrorKind::LimitExceeded => "limit-exceeded",
        }
    }
}

/// A positioned parse error. `line` is 1-based; `column` is the 1-based byte
/// offset within that line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl ParseError {
    pub fn new(
        kind: ErrorKind,
        file: impl Into<String>,
        line: u32,
        column: u32,
        message: impl Into<String>,
    ) -> Self {
        ParseError { kind, file: file.into(), line, column, message: message.into() }
    }

    pub fn syntax(file: impl Into<String>, line: u32, column: u32, msg: impl Into<String>) -> Self {
        Self::new(ErrorKind::Syntax, file, line, column, msg)
    }

    pub fn semantic(file: impl Into<String>, line: u32, column: u32, msg: impl Into<String>) -> Self {
        Self::new(ErrorKind::Semantic, file, line, column, msg)
    }

    pub fn io(file: impl Into<String>, line: u32, column: u32, msg: impl Into<String>) -> Self {
        Self::new(ErrorKind::Io, file, line, column, msg)
    }

    pub fn limit(file: impl Into<String>, line: u32, column: u32, msg: impl Into<String>) -> Self {
        Self::new(ErrorKind::LimitExceeded, file, line, column, msg)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}: {}",
            self.file,
            self.line,
            self.column,
            self.kind.as_str(),
            self.message
        )
    }
}

impl std::error::Error for ParseError {}

/// Renders an error as the canonical single line `file:line:column: kind: message`.
pub fn format_error(err: &ParseError) -> String {
    err.to_string()
}

//------------ RecordSink ----------------------------------------------------

/// Flow control returned by a sink: keep parsing or stop cleanly.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SinkFlow {
    Continue,
    Abort,
}

/// Receives each well-formed record exactly once, in file order. The borrowed
/// views are only valid for the duration of the call.
pub trait RecordSink {
    fn record(
        &mut self,
        owner: &[u8],
        rtype: TypeCode,
        rclass: ClassCode,
        ttl: Ttl,
        rdata: &[u8],
    ) -> SinkFlow;
}

/// Convenience sink that counts records.
#[derive(Default, Debug)]
pub struct CountingSink {
    pub records: u64,
}

impl RecordSink for CountingSink {
    fn record(&mut self, _: &[u8], _: TypeCode, _: ClassCode, _: Ttl, _: &[u8]) -> SinkFlow {
        self.records += 1;
        SinkFlow::Continue
    }
}

/// Sink that collects owned records, mainly for tests and small dumps.
#[derive(Default, Debug)]
pub struct CollectingSink {
    pub records: Vec<ZoneRecord>,
}

impl RecordSink for CollectingSink {
    fn record(
        &mut self,
        owner: &[u8],
        rtype: TypeCode,
        rclass: ClassCode,
        ttl: Ttl,
        rdata: &[u8],
    ) -> SinkFlow {
        let owner = WireName::from_wire(owner.to_vec()).expect("parser emitted invalid owner");
        self.records.push(ZoneRecord { owner, rtype, rclass, ttl, rdata: rdata.to_vec() });
        SinkFlow::Continue
    }
}

//------------ Generic-notation rendering ------------------------------------

/// Appends one generic-notation line (no trailing newline) for a record given
/// as borrowed fields. This is the canonical dump format:
/// `<owner> <ttl> CLASS<n> TYPE<n> \# <len> <HEX>`.
pub fn generic_line_into(
    out: &mut String,
    owner_wire: &[u8],
    rtype: TypeCode,
    rclass: ClassCode,
    ttl: Ttl,
    rdata: &[u8],
) {
    if owner_wire == [0] {
        out.push('.');
    } else {
        let mut rest = owner_wire;
        while let Some((&len, tail)) = rest.split_first() {
            if len == 0 {
                break;
            }
            push_escaped_label(out, &tail[..len as usize]);
            out.push('.');
            rest = &tail[len as usize..];
        }
    }
    use fmt::Write;
    write!(out, " {} CLASS{} TYPE{} \\# {}", ttl.0, rclass.0, rtype.0, rdata.len()).unwrap();
    if !rdata.is_empty() {
        out.push(' ');
        for &b in rdata {
            const HEX: &[u8; 16] = b"0123456789ABCDEF";
            out.push(HEX[(b >> 4) as usize] as char);
            out.push(HEX[(b & 15) as usize] as char);
        }
    }
}

/// Renders a record in generic notation (RFC 3597 style) as a single line.
pub fn record_to_generic_text(record: &ZoneRecord) -> String {
    let mut out = String::new();
    generic_line_into(
        &mut out,
        record.owner.as_bytes(),
        record.rtype,
        record.rclass,
        record.ttl,
        &record.rdata,
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(pres_labels: &[&[u8]]) -> WireName {
        let mut octets = Vec::new();
        for label in pres_labels {
            octets.push(label.len() as u8);
            octets.extend_from_slice(label);
        }
        octets.push(0);
        WireName::from_wire(octets).unwrap()
    }

    #[test]
    fn wire_name_validation() {
        assert!(WireName::from_wire(vec![0]).is_ok());
        assert!(WireName::from_wire(vec![]).is_err());
        assert!(WireName::from_wire(vec![1, b'a']).is_err()); // missing root
        assert!(WireName::from_wire(vec![0, 0]).is_err()); // root not last
        assert!(WireName::from_wire(vec![2, b'a', 0]).is_err()); // truncated label

        // 63-byte label is fine, 64 is not representable without lying about
        // the length octet, but an alleged 64 must be rejected.
        let mut ok = vec![63];
        ok.extend_from_slice(&[b'a'; 63]);
        ok.push(0);
        assert!(WireName::from_wire(ok).is_ok());
        let mut bad = vec![64];
        bad.extend_from_slice(&[b'a'; 64]);
        bad.push(0);
        assert!(WireName::from_wire(bad).is_err());

        // 255 total octets is the ceiling.
        let mut long = Vec::new();
        for _ in 0..42 {
            long.push(5);
            long.extend_from_slice(b"abcde");
        }
        long.push(1);
        long.push(b'a');
        long.push(0);
        assert_eq!(long.len(), 255);
        assert!(WireName::from_wire(long.clone()).is_ok());
        long.insert(long.len() - 1, 0); // now 256 and malformed
        assert!(WireName::from_wire(long).is_err());
    }

    #[test]
    fn presentation_basics() {
        assert_eq!(WireName::root().to_presentation(), ".");
        assert_eq!(name(&[b"www", b"example", b"com"]).to_presentation(), "www.example.com.");
        // Case is preserved verbatim.
        assert_eq!(name(&[b"WwW", b"Example"]).to_presentation(), "WwW.Example.");
    }

    #[test]
    fn presentation_escapes() {
        // Non-printable bytes use three-digit decimal escapes.
        assert_eq!(name(&[&[0x08][..]]).to_presentation(), "\\008.");
        assert_eq!(name(&[&[0x20][..]]).to_presentation(), "\\032.");
        assert_eq!(name(&[&[0xff][..]]).to_presentation(), "\\255.");
        // Structural printables are backslash-escaped.
        assert_eq!(name(&[b"a.b"]).to_presentation(), "a\\.b.");
        assert_eq!(name(&[b"a\\b"]).to_presentation(), "a\\\\b.");
        assert_eq!(name(&[b"@"]).to_presentation(), "\\@.");
    }

    #[test]
    fn generic_text_examples() {
        let rec = ZoneRecord {
            owner: name(&[b"www", b"example", b"com"]),
            rtype: TypeCode(1),
            rclass: ClassCode(1),
            ttl: Ttl(3600),
            rdata: vec![0xc0, 0x00, 0x02, 0x01],
        };
        assert_eq!(
            record_to_generic_text(&rec),
            "www.example.com. 3600 CLASS1 TYPE1 \\# 4 C0000201"
        );

        let root = ZoneRecord {
            owner: WireName::root(),
            rtype: TypeCode(1),
            rclass: ClassCode(1),
            ttl: Ttl(0),
            rdata: vec![0; 4],
        };
        assert_eq!(record_to_generic_text(&root), ". 0 CLASS1 TYPE1 \\# 4 00000000");

        let empty = ZoneRecord {
            owner: name(&[b"e"]),
            rtype: TypeCode(10),
            rclass: ClassCode(1),
            ttl: Ttl(1),
            rdata: vec![],
        };
        assert_eq!(record_to_generic_text(&empty), "e. 1 CLASS1 TYPE10 \\# 0");
    }

    #[test]
    fn error_formatting() {
        let e = ParseError::syntax("z.zone", 3, 7, "unterminated quote");
        assert_eq!(format_error(&e), "z.zone:3:7: syntax: unterminated quote");
        let e = ParseError::limit("z.zone", 1, 1, "rdata exceeds 65535 octets");
        assert_eq!(format_error(&e), "z.zone:1:1: limit-exceeded: rdata exceeds 65535 octets");
        let e = ParseError::io("missing.zone", 1, 1, "cannot open");
        assert_eq!(format_error(&e), "missing.zone:1:1: io: cannot open");
    }

    #[test]
    fn ttl_bounds() {
        assert!(Ttl(0).is_valid());
        assert!(Ttl::MAX.is_valid());
        assert!(!Ttl(1 << 31).is_valid());
    }
}
