//! RDATA assembly: typed drivers that turn token items into wire octets.
//!
//! Each record type with first-class support has a driver that pulls fields
//! off the entry's item list and appends wire form to an [`RdataBuf`]. Any
//! type — driver or not — also accepts the generic `\# <len> <hex>` form,
//! and types without a driver accept nothing else. The buffer holds the
//! 65535-octet RDATA maximum plus write slack so name and string encoders
//! can store chunks unconditionally; the size limit is enforced after every
//! field append.

pub mod name;
pub mod num;
pub mod svcb;
pub mod text;

use crate::codecs::{self, CodecError};
use crate::lexer::{Item, ItemKind, Lexer};
use crate::rrtype;
use zonefast_types::{ErrorKind, ParseError};

pub const RDATA_MAX: usize = 65535;
const REGION: usize = RDATA_MAX + name::NAME_SLACK + 64;

/// Wire-format RDATA under construction.
pub struct RdataBuf {
    buf: Box<[u8]>,
    len: usize,
}

impl Default for RdataBuf {
    fn default() -> Self {
        RdataBuf { buf: vec![0; REGION].into_boxed_slice(), len: 0 }
    }
}

impl RdataBuf {
    pub fn clear(&mut self) {
        self.len = 0;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.buf[..self.len]
    }

    /// Everything past the write head. Field encoders write here and then
    /// [`advance`](Self::advance); the region's slack keeps them in bounds
    /// as long as the caller enforces the size cap between fields.
    fn tail(&mut self) -> &mut [u8] {
        &mut self.buf[self.len..]
    }

    fn advance(&mut self, n: usize) {
        self.len += n;
    }

    fn push(&mut self, b: u8) {
        self.buf[self.len] = b;
        self.len += 1;
    }

    fn push_u16(&mut self, v: u16) {
        self.tail()[..2].copy_from_slice(&v.to_be_bytes());
        self.len += 2;
    }

    fn push_u32(&mut self, v: u32) {
        self.tail()[..4].copy_from_slice(&v.to_be_bytes());
        self.len += 4;
    }

    /// Bounded append for decoded blobs of arbitrary size. False when the
    /// bytes don't fit under the RDATA maximum.
    fn write(&mut self, bytes: &[u8]) -> bool {
        if self.len + bytes.len() > RDATA_MAX {
            return false;
        }
        self.buf[self.len..self.len + bytes.len()].copy_from_slice(bytes);
        self.len += bytes.len();
        true
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Enc {
    Hex,
    Base32Hex,
    Base64,
}

impl Enc {
    fn label(self) -> &'static str {
        match self {
            Enc::Hex => "hexadecimal",
            Enc::Base32Hex => "base32hex",
            Enc::Base64 => "base64",
        }
    }

    fn decode(self, input: &[u8], out: &mut Vec<u8>) -> Result<(), CodecError> {
        match self {
            Enc::Hex => codecs::decode_base16(input, out),
            Enc::Base32Hex => codecs::decode_base32hex(input, out),
            Enc::Base64 => codecs::decode_base64(input, out),
        }
    }

    /// Upper bound on the decoded size, covering each core's slack demand.
    fn bound(self, input_len: usize) -> usize {
        match self {
            Enc::Hex => input_len / 2,
            Enc::Base32Hex => input_len / 8 * 5 + 4,
            Enc::Base64 => input_len / 4 * 3 + 2,
        }
    }

    fn decode_into(self, input: &[u8], out: &mut [u8]) -> Result<usize, CodecError> {
        match self {
            Enc::Hex => codecs::decode_base16_into(input, out),
            Enc::Base32Hex => codecs::decode_base32hex_into(input, out),
            Enc::Base64 => codecs::decode_base64_into(input, out),
        }
    }
}

/// One entry's rdata items plus the scratch space drivers share. Field
/// accessors advance `idx`; error constructors position on the offending
/// item, or on the entry terminator for missing fields.
pub(crate) struct Fields<'a> {
    pub lx: &'a Lexer,
    pub items: &'a [Item],
    pub idx: usize,
    /// Offset and line of the newline or EOF that ended the entry.
    pub end_offset: usize,
    pub end_line: u32,
    pub origin: Option<&'a [u8]>,
    /// Concatenated text of multi-item encoded fields.
    pub join: &'a mut Vec<u8>,
    /// Decoded octets before the bounded copy into `out`.
    pub bytes: &'a mut Vec<u8>,
    /// Type codes collected for bitmap fields.
    pub types: &'a mut Vec<u16>,
    pub out: &'a mut RdataBuf,
}

impl<'a> Fields<'a> {
    fn err_at(&self, item: &Item, kind: ErrorKind, msg: String) -> ParseError {
        self.lx.err(kind, item.line, item.start, msg)
    }

    fn missing(&self, what: &str) -> ParseError {
        self.lx.err(
            ErrorKind::Syntax,
            self.end_line,
            self.end_offset,
            format!("missing {what}"),
        )
    }

    fn next(&mut self, what: &str) -> Result<Item, ParseError> {
        match self.items.get(self.idx) {
            Some(&item) => {
                self.idx += 1;
                Ok(item)
            }
            None => Err(self.missing(what)),
        }
    }

    fn next_contiguous(&mut self, what: &str) -> Result<Item, ParseError> {
        let item = self.next(what)?;
        if item.kind == ItemKind::Quoted {
            return Err(self.err_at(
                &item,
                ErrorKind::Syntax,
                format!("{what} cannot be a quoted string"),
            ));
        }
        Ok(item)
    }

    /// Item text with the opening quote stripped for quoted items.
    fn content(&self, item: &Item) -> &'a [u8] {
        let text = self.lx.text(item);
        match item.kind {
            ItemKind::Quoted => &text[1..],
            _ => text,
        }
    }

    fn fits(&self, item: &Item) -> Result<(), ParseError> {
        if self.out.len() > RDATA_MAX {
            return Err(self.err_at(
                item,
                ErrorKind::LimitExceeded,
                "record data exceeds 65535 octets".into(),
            ));
        }
        Ok(())
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.items.get(self.idx) {
            Some(item) => Err(self.err_at(
                item,
                ErrorKind::Syntax,
                "unexpected extra rdata field".into(),
            )),
            None => Ok(()),
        }
    }

    fn u8_field(&mut self, what: &str) -> Result<u8, ParseError> {
        let item = self.next_contiguous(what)?;
        num::parse_u8(self.lx.text(&item)).map_err(|e| self.num_err(&item, e, what))
    }

    fn u16_field(&mut self, what: &str) -> Result<u16, ParseError> {
        let item = self.next_contiguous(what)?;
        num::parse_u16(self.lx.text(&item)).map_err(|e| self.num_err(&item, e, what))
    }

    fn u32_field(&mut self, what: &str) -> Result<u32, ParseError> {
        let item = self.next_contiguous(what)?;
        num::parse_u32(self.lx.text(&item)).map_err(|e| self.num_err(&item, e, what))
    }

    fn num_err(&self, item: &Item, e: num::NumError, what: &str) -> ParseError {
        match e {
            num::NumError::NotANumber => {
                self.err_at(item, ErrorKind::Syntax, format!("invalid {what}"))
            }
            num::NumError::Overflow => {
                self.err_at(item, ErrorKind::Semantic, format!("{what} out of range"))
            }
        }
    }

    fn name_field(&mut self, what: &str) -> Result<(), ParseError> {
        let item = self.next_contiguous(what)?;
        let text = self.lx.text(&item);
        match name::parse_name(text, self.origin, self.out.tail()) {
            Ok(n) => {
                self.out.advance(n);
                self.fits(&item)
            }
            Err(e) => Err(self.name_err(&item, e, what)),
        }
    }

    fn name_err(&self, item: &Item, e: name::NameError, what: &str) -> ParseError {
        name_error(self.lx, item, e, what)
    }

    fn string_field(&mut self, what: &str) -> Result<(), ParseError> {
        let item = self.next(what)?;
        let content = self.content(&item);
        match text::parse_string(content, self.out.tail()) {
            Ok(n) => {
                self.out.advance(n);
                self.fits(&item)
            }
            Err(text::StringError::TooLong) => Err(self.err_at(
                &item,
                ErrorKind::Semantic,
                format!("{what} exceeds 255 octets"),
            )),
            Err(text::StringError::BadEscape) => Err(self.err_at(
                &item,
                ErrorKind::Syntax,
                format!("invalid escape sequence in {what}"),
            )),
            Err(text::StringError::NulByte) => Err(self.err_at(
                &item,
                ErrorKind::Syntax,
                format!("stray null byte in {what}"),
            )),
        }
    }

    fn timestamp_field(&mut self, what: &str) -> Result<u32, ParseError> {
        let item = self.next_contiguous(what)?;
        num::parse_timestamp(self.lx.text(&item)).map_err(|e| match e {
            num::TimeError::NotANumber => {
                self.err_at(&item, ErrorKind::Syntax, format!("invalid {what}"))
            }
            num::TimeError::Overflow => {
                self.err_at(&item, ErrorKind::Semantic, format!("{what} out of range"))
            }
            num::TimeError::BadDate => {
                self.err_at(&item, ErrorKind::Semantic, format!("invalid {what}"))
            }
        })
    }

    fn type_field(&mut self, what: &str) -> Result<u16, ParseError> {
        let item = self.next_contiguous(what)?;
        rrtype::recognize(self.lx.text(&item))
            .ok_or_else(|| self.err_at(&item, ErrorKind::Syntax, format!("invalid {what}")))
    }

    fn codec_err(&self, item: &Item, e: CodecError, enc: Enc) -> ParseError {
        let msg = match e {
            CodecError::BadChar => format!("invalid {} digit", enc.label()),
            CodecError::BadLength => format!("invalid {} length", enc.label()),
            CodecError::TrailingBits => format!("invalid {} trailing bits", enc.label()),
        };
        self.err_at(item, ErrorKind::Syntax, msg)
    }

    /// Decodes one encoded item into `self.bytes`.
    fn decode_item(&mut self, what: &str, enc: Enc) -> Result<Item, ParseError> {
        let item = self.next_contiguous(what)?;
        self.bytes.clear();
        enc.decode(self.lx.text(&item), self.bytes)
            .map_err(|e| self.codec_err(&item, e, enc))?;
        Ok(item)
    }

    /// Concatenates all remaining items (at least one) and decodes them as
    /// the record's trailing blob. Errors point at the first item.
    fn decode_rest(&mut self, what: &str, enc: Enc) -> Result<(), ParseError> {
        if self.idx >= self.items.len() {
            return Err(self.missing(what));
        }
        let first = self.items[self.idx];
        // The usual case is a single unquoted item whose decoded form fits
        // in the buffer's remaining space: decode straight into the buffer,
        // skipping the concatenation and bounce-buffer copies. The size
        // check still runs only after a successful decode, so decode errors
        // keep precedence over the size limit.
        if self.idx + 1 == self.items.len() && first.kind != ItemKind::Quoted {
            let text = self.lx.text(&first);
            if enc.bound(text.len()) <= self.out.tail().len() {
                self.idx += 1;
                return match enc.decode_into(text, self.out.tail()) {
                    Ok(n) => {
                        self.out.advance(n);
                        self.fits(&first)
                    }
                    Err(e) => Err(self.codec_err(&first, e, enc)),
                };
            }
        }
        self.join.clear();
        while self.idx < self.items.len() {
            let item = self.next_contiguous(what)?;
            self.join.extend_from_slice(self.lx.text(&item));
        }
        self.bytes.clear();
        enc.decode(self.join, self.bytes)
            .map_err(|e| self.codec_err(&first, e, enc))?;
        if !self.out.write(self.bytes) {
            return Err(self.err_at(
                &first,
                ErrorKind::LimitExceeded,
                "record data exceeds 65535 octets".into(),
            ));
        }
        Ok(())
    }

    /// Collects the remaining items as a type bitmap (possibly empty) in
    /// the window-block wire form.
    fn bitmap_rest(&mut self) -> Result<(), ParseError> {
        let last = self.items.last().copied();
        self.types.clear();
        while self.idx < self.items.len() {
            let item = self.next_contiguous("type bitmap entry")?;
            let code = rrtype::recognize(self.lx.text(&item)).ok_or_else(|| {
                self.err_at(&item, ErrorKind::Syntax, "invalid type bitmap entry".into())
            })?;
            self.types.push(code);
        }
        self.types.sort_unstable();
        self.types.dedup();
        let mut i = 0;
        while i < self.types.len() {
            // The size check between window blocks keeps the unconditional
            // header pushes inside the buffer's slack.
            self.fits(&last.unwrap())?;
            let window = self.types[i] >> 8;
            let mut bits = [0u8; 32];
            let mut top = 0usize;
            while i < self.types.len() && self.types[i] >> 8 == window {
                let low = (self.types[i] & 0xff) as usize;
                bits[low >> 3] |= 0x80 >> (low & 7);
                top = low >> 3;
                i += 1;
            }
            self.out.push(window as u8);
            self.out.push(top as u8 + 1);
            if !self.out.write(&bits[..=top]) {
                return Err(self.err_at(
                    &last.unwrap(),
                    ErrorKind::LimitExceeded,
                    "record data exceeds 65535 octets".into(),
                ));
            }
        }
        if let Some(item) = last {
            self.fits(&item)?;
        }
        Ok(())
    }
}

/// Positioned error for a failed name encode; shared with the grammar's
/// owner and directive handling.
pub(crate) fn name_error(lx: &Lexer, item: &Item, e: name::NameError, what: &str) -> ParseError {
    let (kind, msg) = match e {
        name::NameError::Empty => (ErrorKind::Syntax, format!("invalid {what}")),
        name::NameError::EmptyLabel => (ErrorKind::Syntax, format!("empty label in {what}")),
        name::NameError::LabelTooLong => (
            ErrorKind::Semantic,
            format!("label exceeds 63 octets in {what}"),
        ),
        name::NameError::NameTooLong => {
            (ErrorKind::Semantic, format!("{what} exceeds 255 octets"))
        }
        name::NameError::BadEscape => (
            ErrorKind::Syntax,
            format!("invalid escape sequence in {what}"),
        ),
        name::NameError::Relative => (
            ErrorKind::Semantic,
            format!("relative {what} without an origin"),
        ),
    };
    lx.err(kind, item.line, item.start, msg)
}

/// Parses the rdata for `rtype` from the entry's remaining items into
/// `f.out`. The generic `\# <len> <hex>` form is honored for every type;
/// types without a typed driver accept nothing else.
pub(crate) fn parse_rdata(f: &mut Fields, rtype: u16) -> Result<(), ParseError> {
    f.out.clear();
    if let Some(first) = f.items.first() {
        if first.kind == ItemKind::Contiguous && f.lx.text(first) == b"\\#" {
            parse_generic(f)?;
            return f.done();
        }
    }
    match rtype {
        1 => parse_a(f)?,
        2 => f.name_field("name server name")?,
        5 => f.name_field("canonical name")?,
        6 => parse_soa(f)?,
        12 => f.name_field("pointer name")?,
        15 => parse_mx(f)?,
        16 => parse_txt(f)?,
        28 => parse_aaaa(f)?,
        43 => parse_ds(f)?,
        46 => parse_rrsig(f)?,
        47 => parse_nsec(f)?,
        48 => parse_dnskey(f)?,
        50 => parse_nsec3(f)?,
        64 | 65 => svcb::parse_svcb(f)?,
        _ => {
            let msg = "this record type accepts only the generic rdata form";
            return Err(match f.items.first() {
                Some(item) => f.err_at(item, ErrorKind::Syntax, msg.into()),
                None => f.lx.err(ErrorKind::Syntax, f.end_line, f.end_offset, msg),
            });
        }
    }
    f.done()
}

fn parse_generic(f: &mut Fields) -> Result<(), ParseError> {
    f.next("generic rdata marker")?; // the \# marker itself
    let len_item = f.next_contiguous("rdata length")?;
    let expected = num::parse_u16(f.lx.text(&len_item))
        .map_err(|e| f.num_err(&len_item, e, "rdata length"))? as usize;
    f.join.clear();
    let first = f.items.get(f.idx).copied();
    while f.idx < f.items.len() {
        let item = f.next_contiguous("rdata octets")?;
        f.join.extend_from_slice(f.lx.text(&item));
    }
    f.bytes.clear();
    if !f.join.is_empty() {
        codecs::decode_base16(f.join, f.bytes)
            .map_err(|e| f.codec_err(&first.unwrap(), e, Enc::Hex))?;
    }
    if f.bytes.len() != expected {
        return Err(f.err_at(
            &len_item,
            ErrorKind::Semantic,
            "generic rdata length mismatch".into(),
        ));
    }
    let ok = f.out.write(f.bytes);
    debug_assert!(ok); // expected <= 65535 and the buffer was empty
    Ok(())
}

fn parse_a(f: &mut Fields) -> Result<(), ParseError> {
    let item = f.next_contiguous("IPv4 address")?;
    let quad = num::parse_ipv4(f.lx.text(&item)).map_err(|_| {
        f.err_at(&item, ErrorKind::Syntax, "invalid IPv4 address".into())
    })?;
    f.out.write(&quad);
    f.fits(&item)
}

fn parse_aaaa(f: &mut Fields) -> Result<(), ParseError> {
    let item = f.next_contiguous("IPv6 address")?;
    let addr = num::parse_ipv6(f.lx.text(&item)).map_err(|_| {
        f.err_at(&item, ErrorKind::Syntax, "invalid IPv6 address".into())
    })?;
    f.out.write(&addr);
    f.fits(&item)
}

fn parse_mx(f: &mut Fields) -> Result<(), ParseError> {
    let preference = f.u16_field("preference")?;
    f.out.push_u16(preference);
    f.name_field("exchange name")
}

fn parse_soa(f: &mut Fields) -> Result<(), ParseError> {
    f.name_field("primary server name")?;
    f.name_field("responsible mailbox")?;
    for what in ["serial number", "refresh interval", "retry interval", "expire interval", "minimum TTL"] {
        let v = f.u32_field(what)?;
        f.out.push_u32(v);
    }
    Ok(())
}

fn parse_txt(f: &mut Fields) -> Result<(), ParseError> {
    if f.items.is_empty() {
        return Err(f.missing("text string"));
    }
    while f.idx < f.items.len() {
        f.string_field("text string")?;
    }
    Ok(())
}

fn parse_ds(f: &mut Fields) -> Result<(), ParseError> {
    let key_tag = f.u16_field("key tag")?;
    f.out.push_u16(key_tag);
    let algorithm = f.u8_field("algorithm")?;
    f.out.push(algorithm);
    let digest_type = f.u8_field("digest type")?;
    f.out.push(digest_type);
    f.decode_rest("digest", Enc::Hex)
}

fn parse_dnskey(f: &mut Fields) -> Result<(), ParseError> {
    let flags = f.u16_field("flags")?;
    f.out.push_u16(flags);
    let protocol = f.u8_field("protocol")?;
    f.out.push(protocol);
    let algorithm = f.u8_field("algorithm")?;
    f.out.push(algorithm);
    f.decode_rest("key data", Enc::Base64)
}

fn parse_rrsig(f: &mut Fields) -> Result<(), ParseError> {
    let covered = f.type_field("type covered")?;
    f.out.push_u16(covered);
    let algorithm = f.u8_field("algorithm")?;
    f.out.push(algorithm);
    let labels = f.u8_field("label count")?;
    f.out.push(labels);
    let original_ttl = f.u32_field("original TTL")?;
    f.out.push_u32(original_ttl);
    let expiration = f.timestamp_field("signature expiration")?;
    f.out.push_u32(expiration);
    let inception = f.timestamp_field("signature inception")?;
    f.out.push_u32(inception);
    let key_tag = f.u16_field("key tag")?;
    f.out.push_u16(key_tag);
    f.name_field("signer name")?;
    f.decode_rest("signature", Enc::Base64)
}

fn parse_nsec(f: &mut Fields) -> Result<(), ParseError> {
    f.name_field("next domain name")?;
    f.bitmap_rest()
}

fn parse_nsec3(f: &mut Fields) -> Result<(), ParseError> {
    let hash_algorithm = f.u8_field("hash algorithm")?;
    f.out.push(hash_algorithm);
    let flags = f.u8_field("flags")?;
    f.out.push(flags);
    let iterations = f.u16_field("iterations")?;
    f.out.push_u16(iterations);

    let salt = f.next_contiguous("salt")?;
    if f.lx.text(&salt) == b"-" {
        f.out.push(0);
    } else {
        f.bytes.clear();
        let salt_text = f.lx.text(&salt);
        Enc::Hex
            .decode(salt_text, f.bytes)
            .map_err(|e| f.codec_err(&salt, e, Enc::Hex))?;
        if f.bytes.len() > 255 {
            return Err(f.err_at(&salt, ErrorKind::Semantic, "salt exceeds 255 octets".into()));
        }
        f.out.push(f.bytes.len() as u8);
        f.out.write(f.bytes);
    }
    f.fits(&salt)?;

    let hash = f.decode_item("next hashed owner", Enc::Base32Hex)?;
    if f.bytes.len() > 255 {
        return Err(f.err_at(
            &hash,
            ErrorKind::Semantic,
            "next hashed owner exceeds 255 octets".into(),
        ));
    }
    f.out.push(f.bytes.len() as u8);
    f.out.write(f.bytes);
    f.fits(&hash)?;

    f.bitmap_rest()
}
