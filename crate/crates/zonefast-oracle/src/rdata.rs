//! Reference RDATA assembly: one driver per supported record type.
//!
//! The cursor (`Rd`) walks the entry's remaining tokens and appends wire
//! octets to a plain `Vec<u8>`.  Field order, error wording, error positions,
//! and the points where the 65535-octet ceiling is enforced all match the
//! production drivers; the differential tests depend on that.

use zonefast_types::{ErrorKind, ParseError};

use crate::prim::{self, CodecErr, NameErr, NumErr, StrErr, TsErr};
use crate::scan::{column, Tok, TokKind};

pub const RDATA_MAX: usize = 65535;
pub const NAME_BUDGET: usize = 640;
/// Scratch ceiling for names encoded behind existing rdata.  Mirrors the
/// production write region so oversized names fail at the same byte.
pub const REGION: usize = RDATA_MAX + NAME_BUDGET + 64;

/// Positioned error builder shared by the grammar and the drivers.
pub fn perr(
    file: &str,
    data: &[u8],
    kind: ErrorKind,
    offset: usize,
    line: u32,
    msg: impl Into<String>,
) -> ParseError {
    ParseError {
        kind,
        file: file.to_string(),
        line,
        column: column(data, offset),
        message: msg.into(),
    }
}

/// Maps a name-encoding failure onto the shared error wording.
pub fn name_error(file: &str, data: &[u8], t: &Tok, e: NameErr, what: &str) -> ParseError {
    let (kind, msg) = match e {
        NameErr::Empty => (ErrorKind::Syntax, format!("invalid {what}")),
        NameErr::EmptyLabel => (ErrorKind::Syntax, format!("empty label in {what}")),
        NameErr::LabelTooLong => {
            (ErrorKind::Semantic, format!("label exceeds 63 octets in {what}"))
        }
        NameErr::NameTooLong => (ErrorKind::Semantic, format!("{what} exceeds 255 octets")),
        NameErr::BadEscape => {
            (ErrorKind::Syntax, format!("invalid escape sequence in {what}"))
        }
        NameErr::Relative => {
            (ErrorKind::Semantic, format!("relative {what} without an origin"))
        }
    };
    perr(file, data, kind, t.start, t.line, msg)
}

/// Text codecs used by rdata blobs.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Enc {
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

    fn decode(self, input: &[u8]) -> Result<Vec<u8>, CodecErr> {
        match self {
            Enc::Hex => prim::base16(input),
            Enc::Base32Hex => prim::base32hex(input),
            Enc::Base64 => prim::base64(input),
        }
    }
}

/// Token cursor over one entry's rdata with the output buffer.
pub struct Rd<'a> {
    pub file: &'a str,
    pub data: &'a [u8],
    pub toks: &'a [Tok],
    pub idx: usize,
    /// Entry terminator (offset, line); `missing` errors point here.
    pub end: (usize, u32),
    pub origin: Option<&'a [u8]>,
    pub out: Vec<u8>,
}

impl<'a> Rd<'a> {
    fn err_at(&self, t: &Tok, kind: ErrorKind, msg: String) -> ParseError {
        perr(self.file, self.data, kind, t.start, t.line, msg)
    }

    fn missing(&self, what: &str) -> ParseError {
        perr(
            self.file,
            self.data,
            ErrorKind::Syntax,
            self.end.0,
            self.end.1,
            format!("missing {what}"),
        )
    }

    fn next(&mut self, what: &str) -> Result<Tok, ParseError> {
        match self.toks.get(self.idx) {
            Some(&t) => {
                self.idx += 1;
                Ok(t)
            }
            None => Err(self.missing(what)),
        }
    }

    fn next_contiguous(&mut self, what: &str) -> Result<Tok, ParseError> {
        let t = self.next(what)?;
        if t.kind == TokKind::Quoted {
            return Err(self.err_at(
                &t,
                ErrorKind::Syntax,
                format!("{what} cannot be a quoted string"),
            ));
        }
        Ok(t)
    }

    fn fits(&self, t: &Tok) -> Result<(), ParseError> {
        if self.out.len() > RDATA_MAX {
            return Err(self.err_at(
                t,
                ErrorKind::LimitExceeded,
                "record data exceeds 65535 octets".into(),
            ));
        }
        Ok(())
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.toks.get(self.idx) {
            Some(t) => Err(self.err_at(
                t,
                ErrorKind::Syntax,
                "unexpected extra rdata field".into(),
            )),
            None => Ok(()),
        }
    }

    fn num_err(&self, t: &Tok, e: NumErr, what: &str) -> ParseError {
        match e {
            NumErr::NotANumber => {
                self.err_at(t, ErrorKind::Syntax, format!("invalid {what}"))
            }
            NumErr::Overflow => {
                self.err_at(t, ErrorKind::Semantic, format!("{what} out of range"))
            }
        }
    }

    fn u8_field(&mut self, what: &str) -> Result<u8, ParseError> {
        let t = self.next_contiguous(what)?;
        prim::dec_u8(t.text(self.data)).map_err(|e| self.num_err(&t, e, what))
    }

    fn u16_field(&mut self, what: &str) -> Result<u16, ParseError> {
        let t = self.next_contiguous(what)?;
        prim::dec_u16(t.text(self.data)).map_err(|e| self.num_err(&t, e, what))
    }

    fn u32_field(&mut self, what: &str) -> Result<u32, ParseError> {
        let t = self.next_contiguous(what)?;
        prim::dec_u32(t.text(self.data)).map_err(|e| self.num_err(&t, e, what))
    }

    fn name_field(&mut self, what: &str) -> Result<(), ParseError> {
        let t = self.next_contiguous(what)?;
        let budget = REGION - self.out.len();
        match prim::encode_name(t.text(self.data), self.origin, budget) {
            Ok(wire) => {
                self.out.extend_from_slice(&wire);
                self.fits(&t)
            }
            Err(e) => Err(name_error(self.file, self.data, &t, e, what)),
        }
    }

    fn string_field(&mut self, what: &str) -> Result<(), ParseError> {
        let t = self.next(what)?;
        match prim::string_octets(t.content(self.data)) {
            Ok(octets) => {
                self.out.push(octets.len() as u8);
                self.out.extend_from_slice(&octets);
                self.fits(&t)
            }
            Err(StrErr::TooLong) => Err(self.err_at(
                &t,
                ErrorKind::Semantic,
                format!("{what} exceeds 255 octets"),
            )),
            Err(StrErr::BadEscape) => Err(self.err_at(
                &t,
                ErrorKind::Syntax,
                format!("invalid escape sequence in {what}"),
            )),
            Err(StrErr::Nul) => Err(self.err_at(
                &t,
                ErrorKind::Syntax,
                format!("stray null byte in {what}"),
            )),
        }
    }

    fn timestamp_field(&mut self, what: &str) -> Result<u32, ParseError> {
        let t = self.next_contiguous(what)?;
        prim::timestamp(t.text(self.data)).map_err(|e| match e {
            TsErr::NotANumber => self.err_at(&t, ErrorKind::Syntax, format!("invalid {what}")),
            TsErr::Overflow => {
                self.err_at(&t, ErrorKind::Semantic, format!("{what} out of range"))
            }
            TsErr::BadDate => self.err_at(&t, ErrorKind::Semantic, format!("invalid {what}")),
        })
    }

    fn type_field(&mut self, what: &str) -> Result<u16, ParseError> {
        let t = self.next_contiguous(what)?;
        prim::type_code(t.text(self.data))
            .ok_or_else(|| self.err_at(&t, ErrorKind::Syntax, format!("invalid {what}")))
    }

    fn codec_err(&self, t: &Tok, e: CodecErr, enc: Enc) -> ParseError {
        let msg = match e {
            CodecErr::BadChar => format!("invalid {} digit", enc.label()),
            CodecErr::BadLength => format!("invalid {} length", enc.label()),
            CodecErr::TrailingBits => format!("invalid {} trailing bits", enc.label()),
        };
        self.err_at(t, ErrorKind::Syntax, msg)
    }

    /// One encoded token, decoded.
    fn decode_item(&mut self, what: &str, enc: Enc) -> Result<(Tok, Vec<u8>), ParseError> {
        let t = self.next_contiguous(what)?;
        let bytes = enc
            .decode(t.text(self.data))
            .map_err(|e| self.codec_err(&t, e, enc))?;
        Ok((t, bytes))
    }

    /// All remaining tokens (at least one), concatenated and decoded as the
    /// record's trailing blob.  Errors point at the first of them.
    fn decode_rest(&mut self, what: &str, enc: Enc) -> Result<(), ParseError> {
        if self.idx >= self.toks.len() {
            return Err(self.missing(what));
        }
        let first = self.toks[self.idx];
        let mut join = Vec::new();
        while self.idx < self.toks.len() {
            let t = self.next_contiguous(what)?;
            join.extend_from_slice(t.text(self.data));
        }
        let bytes = enc
            .decode(&join)
            .map_err(|e| self.codec_err(&first, e, enc))?;
        if self.out.len() + bytes.len() > RDATA_MAX {
            return Err(self.err_at(
                &first,
                ErrorKind::LimitExceeded,
                "record data exceeds 65535 octets".into(),
            ));
        }
        self.out.extend_from_slice(&bytes);
        Ok(())
    }

    /// Remaining tokens as a type bitmap (possibly empty), window-block wire
    /// form: codes sorted and deduplicated, one block per high byte.
    fn bitmap_rest(&mut self) -> Result<(), ParseError> {
        let last = self.toks.last().copied();
        let mut types: Vec<u16> = Vec::new();
        while self.idx < self.toks.len() {
            let t = self.next_contiguous("type bitmap entry")?;
            let code = prim::type_code(t.text(self.data)).ok_or_else(|| {
                self.err_at(&t, ErrorKind::Syntax, "invalid type bitmap entry".into())
            })?;
            types.push(code);
        }
        types.sort_unstable();
        types.dedup();
        let mut i = 0;
        while i < types.len() {
            // Checking between blocks bounds how far the unconditional
            // header pushes can run past the ceiling.
            self.fits(&last.unwrap())?;
            let window = types[i] >> 8;
            let mut bits = [0u8; 32];
            let mut top = 0usize;
            while i < types.len() && types[i] >> 8 == window {
                let low = (types[i] & 0xff) as usize;
                bits[low >> 3] |= 0x80 >> (low & 7);
                top = low >> 3;
                i += 1;
            }
            self.out.push(window as u8);
            self.out.push(top as u8 + 1);
            if self.out.len() + top + 1 > RDATA_MAX {
                return Err(self.err_at(
                    &last.unwrap(),
                    ErrorKind::LimitExceeded,
                    "record data exceeds 65535 octets".into(),
                ));
            }
            self.out.extend_from_slice(&bits[..=top]);
        }
        if let Some(t) = last {
            self.fits(&t)?;
        }
        Ok(())
    }
}

/// Builds the rdata for `rtype` from the entry's remaining tokens.  The
/// generic `\# <len> <hex>` form is honored for every type; types without a
/// typed driver accept nothing else.
pub fn parse_rdata(rd: &mut Rd, rtype: u16) -> Result<(), ParseError> {
    rd.out.clear();
    if let Some(first) = rd.toks.first() {
        if first.kind == TokKind::Text && first.text(rd.data) == b"\\#" {
            parse_generic(rd)?;
            return rd.done();
        }
    }
    match rtype {
        1 => parse_a(rd)?,
        2 => rd.name_field("name server name")?,
        5 => rd.name_field("canonical name")?,
        6 => parse_soa(rd)?,
        12 => rd.name_field("pointer name")?,
        15 => parse_mx(rd)?,
        16 => parse_txt(rd)?,
        28 => parse_aaaa(rd)?,
        43 => parse_ds(rd)?,
        46 => parse_rrsig(rd)?,
        47 => parse_nsec(rd)?,
        48 => parse_dnskey(rd)?,
        50 => parse_nsec3(rd)?,
        64 | 65 => parse_svcb(rd)?,
        _ => {
            let msg = "this record type accepts only the generic rdata form";
            return Err(match rd.toks.first() {
                Some(t) => rd.err_at(t, ErrorKind::Syntax, msg.into()),
                None => perr(
                    rd.file,
                    rd.data,
                    ErrorKind::Syntax,
                    rd.end.0,
                    rd.end.1,
                    msg,
                ),
            });
        }
    }
    rd.done()
}

fn parse_generic(rd: &mut Rd) -> Result<(), ParseError> {
    rd.next("generic rdata marker")?; // the \# marker itself
    let len_item = rd.next_contiguous("rdata length")?;
    let expected = prim::dec_u16(len_item.text(rd.data))
        .map_err(|e| rd.num_err(&len_item, e, "rdata length"))? as usize;
    let mut join = Vec::new();
    let first = rd.toks.get(rd.idx).copied();
    while rd.idx < rd.toks.len() {
        let t = rd.next_contiguous("rdata octets")?;
        join.extend_from_slice(t.text(rd.data));
    }
    let bytes = if join.is_empty() {
        Vec::new()
    } else {
        prim::base16(&join).map_err(|e| rd.codec_err(&first.unwrap(), e, Enc::Hex))?
    };
    if bytes.len() != expected {
        return Err(rd.err_at(
            &len_item,
            ErrorKind::Semantic,
            "generic rdata length mismatch".into(),
        ));
    }
    rd.out.extend_from_slice(&bytes);
    Ok(())
}

fn parse_a(rd: &mut Rd) -> Result<(), ParseError> {
    let t = rd.next_contiguous("IPv4 address")?;
    let quad = prim::ipv4(t.text(rd.data))
        .map_err(|_| rd.err_at(&t, ErrorKind::Syntax, "invalid IPv4 address".into()))?;
    rd.out.extend_from_slice(&quad);
    rd.fits(&t)
}

fn parse_aaaa(rd: &mut Rd) -> Result<(), ParseError> {
    let t = rd.next_contiguous("IPv6 address")?;
    let addr = prim::ipv6(t.text(rd.data))
        .map_err(|_| rd.err_at(&t, ErrorKind::Syntax, "invalid IPv6 address".into()))?;
    rd.out.extend_from_slice(&addr);
    rd.fits(&t)
}

fn parse_mx(rd: &mut Rd) -> Result<(), ParseError> {
    let preference = rd.u16_field("preference")?;
    rd.out.extend_from_slice(&preference.to_be_bytes());
    rd.name_field("exchange name")
}

fn parse_soa(rd: &mut Rd) -> Result<(), ParseError> {
    rd.name_field("primary server name")?;
    rd.name_field("responsible mailbox")?;
    for what in [
        "serial number",
        "refresh interval",
        "retry interval",
        "expire interval",
        "minimum TTL",
    ] {
        let v = rd.u32_field(what)?;
        rd.out.extend_from_slice(&v.to_be_bytes());
    }
    Ok(())
}

fn parse_txt(rd: &mut Rd) -> Result<(), ParseError> {
    if rd.toks.is_empty() {
        return Err(rd.missing("text string"));
    }
    while rd.idx < rd.toks.len() {
        rd.string_field("text string")?;
    }
    Ok(())
}

fn parse_ds(rd: &mut Rd) -> Result<(), ParseError> {
    let key_tag = rd.u16_field("key tag")?;
    rd.out.extend_from_slice(&key_tag.to_be_bytes());
    let algorithm = rd.u8_field("algorithm")?;
    rd.out.push(algorithm);
    let digest_type = rd.u8_field("digest type")?;
    rd.out.push(digest_type);
    rd.decode_rest("digest", Enc::Hex)
}

fn parse_dnskey(rd: &mut Rd) -> Result<(), ParseError> {
    let flags = rd.u16_field("flags")?;
    rd.out.extend_from_slice(&flags.to_be_bytes());
    let protocol = rd.u8_field("protocol")?;
    rd.out.push(protocol);
    let algorithm = rd.u8_field("algorithm")?;
    rd.out.push(algorithm);
    rd.decode_rest("key data", Enc::Base64)
}

fn parse_rrsig(rd: &mut Rd) -> Result<(), ParseError> {
    let covered = rd.type_field("type covered")?;
    rd.out.extend_from_slice(&covered.to_be_bytes());
    let algorithm = rd.u8_field("algorithm")?;
    rd.out.push(algorithm);
    let labels = rd.u8_field("label count")?;
    rd.out.push(labels);
    let original_ttl = rd.u32_field("original TTL")?;
    rd.out.extend_from_slice(&original_ttl.to_be_bytes());
    let expiration = rd.timestamp_field("signature expiration")?;
    rd.out.extend_from_slice(&expiration.to_be_bytes());
    let inception = rd.timestamp_field("signature inception")?;
    rd.out.extend_from_slice(&inception.to_be_bytes());
    let key_tag = rd.u16_field("key tag")?;
    rd.out.extend_from_slice(&key_tag.to_be_bytes());
    rd.name_field("signer name")?;
    rd.decode_rest("signature", Enc::Base64)
}

fn parse_nsec(rd: &mut Rd) -> Result<(), ParseError> {
    rd.name_field("next domain name")?;
    rd.bitmap_rest()
}

fn parse_nsec3(rd: &mut Rd) -> Result<(), ParseError> {
    let hash_algorithm = rd.u8_field("hash algorithm")?;
    rd.out.push(hash_algorithm);
    let flags = rd.u8_field("flags")?;
    rd.out.push(flags);
    let iterations = rd.u16_field("iterations")?;
    rd.out.extend_from_slice(&iterations.to_be_bytes());

    let salt = rd.next_contiguous("salt")?;
    if salt.text(rd.data) == b"-" {
        rd.out.push(0);
    } else {
        let bytes = prim::base16(salt.text(rd.data))
            .map_err(|e| rd.codec_err(&salt, e, Enc::Hex))?;
        if bytes.len() > 255 {
            return Err(rd.err_at(
                &salt,
                ErrorKind::Semantic,
                "salt exceeds 255 octets".into(),
            ));
        }
        rd.out.push(bytes.len() as u8);
        rd.out.extend_from_slice(&bytes);
    }
    rd.fits(&salt)?;

    let (hash, bytes) = rd.decode_item("next hashed owner", Enc::Base32Hex)?;
    if bytes.len() > 255 {
        return Err(rd.err_at(
            &hash,
            ErrorKind::Semantic,
            "next hashed owner exceeds 255 octets".into(),
        ));
    }
    rd.out.push(bytes.len() as u8);
    rd.out.extend_from_slice(&bytes);
    rd.fits(&hash)?;

    rd.bitmap_rest()
}

const KEY_MANDATORY: u16 = 0;
const KEY_ALPN: u16 = 1;
const KEY_NO_DEFAULT_ALPN: u16 = 2;
const KEY_PORT: u16 = 3;
const KEY_IPV4HINT: u16 = 4;
const KEY_ECH: u16 = 5;
const KEY_IPV6HINT: u16 = 6;

/// Service-parameter key mnemonic or the generic `keyNNNNN` spelling,
/// case-insensitive.  The generic spelling always takes the escaped-blob
/// value form, even for codes that have a mnemonic.
fn key_code(name: &[u8]) -> Option<(u16, bool)> {
    const KEYS: [(&[u8], u16); 7] = [
        (b"mandatory", KEY_MANDATORY),
        (b"alpn", KEY_ALPN),
        (b"no-default-alpn", KEY_NO_DEFAULT_ALPN),
        (b"port", KEY_PORT),
        (b"ipv4hint", KEY_IPV4HINT),
        (b"ech", KEY_ECH),
        (b"ipv6hint", KEY_IPV6HINT),
    ];
    for (mnemonic, code) in KEYS {
        if name.eq_ignore_ascii_case(mnemonic) {
            return Some((code, false));
        }
    }
    if name.len() <= 3 || !name[..3].eq_ignore_ascii_case(b"key") {
        return None;
    }
    let mut value = 0u32;
    for &d in &name[3..] {
        if !d.is_ascii_digit() {
            return None;
        }
        value = value * 10 + (d - b'0') as u32;
        if value > u16::MAX as u32 {
            return None;
        }
    }
    Some((value as u16, true))
}

/// SVCB/HTTPS: priority, target name, then `key=value` service parameters in
/// any presentation order, emitted sorted by key code.
fn parse_svcb(rd: &mut Rd) -> Result<(), ParseError> {
    let priority = rd.u16_field("priority")?;
    rd.out.extend_from_slice(&priority.to_be_bytes());
    rd.name_field("target name")?;

    let mut pool: Vec<u8> = Vec::new();
    let mut params: Vec<(u16, Tok, core::ops::Range<usize>)> = Vec::new();

    while rd.idx < rd.toks.len() {
        let t = rd.next_contiguous("service parameter")?;
        let raw = t.text(rd.data);
        let eq = raw.iter().position(|&b| b == b'=');
        let key_text = &raw[..eq.unwrap_or(raw.len())];
        let value: Option<&[u8]> = match eq {
            None => None,
            // `key=` followed by a quoted token: the quoted content is the
            // value.  A bare trailing `=` is an empty value.
            Some(p) if p + 1 == raw.len() => match rd.toks.get(rd.idx) {
                Some(next) if next.kind == TokKind::Quoted => {
                    let next = *next;
                    rd.idx += 1;
                    Some(next.quoted_content(rd.data))
                }
                _ => Some(b""),
            },
            Some(p) => Some(&raw[p + 1..]),
        };
        let (code, generic) = key_code(key_text).ok_or_else(|| {
            rd.err_at(&t, ErrorKind::Syntax, "unknown service parameter key".into())
        })?;
        if params.iter().any(|&(c, _, _)| c == code) {
            return Err(rd.err_at(
                &t,
                ErrorKind::Syntax,
                "duplicate service parameter key".into(),
            ));
        }
        let start = pool.len();
        encode_value(rd, &t, code, generic, value, &mut pool)?;
        params.push((code, t, start..pool.len()));
    }

    params.sort_by_key(|&(code, _, _)| code);
    for (code, t, range) in params {
        let value = &pool[range];
        if value.len() > u16::MAX as usize {
            return Err(rd.err_at(
                &t,
                ErrorKind::Semantic,
                "parameter value exceeds 65535 octets".into(),
            ));
        }
        rd.out.extend_from_slice(&code.to_be_bytes());
        rd.out.extend_from_slice(&(value.len() as u16).to_be_bytes());
        if rd.out.len() + value.len() > RDATA_MAX {
            return Err(rd.err_at(
                &t,
                ErrorKind::LimitExceeded,
                "record data exceeds 65535 octets".into(),
            ));
        }
        rd.out.extend_from_slice(value);
        rd.fits(&t)?;
    }
    Ok(())
}

fn encode_value(
    rd: &Rd,
    t: &Tok,
    code: u16,
    generic: bool,
    value: Option<&[u8]>,
    pool: &mut Vec<u8>,
) -> Result<(), ParseError> {
    // The keyNNNNN spelling takes a raw escaped blob regardless of code.
    if generic {
        let blob = value.unwrap_or(b"");
        let bytes = prim::unescape(blob).map_err(|_| {
            rd.err_at(
                t,
                ErrorKind::Syntax,
                "invalid escape sequence in parameter value".into(),
            )
        })?;
        pool.extend_from_slice(&bytes);
        return Ok(());
    }
    match code {
        KEY_MANDATORY => {
            let list = required(rd, t, value)?;
            let mut codes: Vec<u16> = Vec::new();
            for part in list.split(|&b| b == b',') {
                let (c, _) = key_code(part).ok_or_else(|| {
                    rd.err_at(t, ErrorKind::Syntax, "invalid key in mandatory list".into())
                })?;
                codes.push(c);
            }
            codes.sort_unstable();
            codes.dedup();
            for c in codes {
                pool.extend_from_slice(&c.to_be_bytes());
            }
        }
        KEY_ALPN => {
            let raw = required(rd, t, value)?;
            // First level: ordinary zone-file escapes.  Second level: within
            // the decoded value, backslash protects commas and backslashes.
            let decoded = prim::unescape(raw).map_err(|_| {
                rd.err_at(
                    t,
                    ErrorKind::Syntax,
                    "invalid escape sequence in parameter value".into(),
                )
            })?;
            let close = |pool: &mut Vec<u8>, len_pos: usize| -> Result<(), ParseError> {
                let id_len = pool.len() - len_pos - 1;
                if id_len == 0 {
                    return Err(rd.err_at(
                        t,
                        ErrorKind::Syntax,
                        "empty alpn protocol id".into(),
                    ));
                }
                if id_len > 255 {
                    return Err(rd.err_at(
                        t,
                        ErrorKind::Semantic,
                        "alpn protocol id exceeds 255 octets".into(),
                    ));
                }
                pool[len_pos] = id_len as u8;
                Ok(())
            };
            let mut len_pos = pool.len();
            pool.push(0);
            let mut k = 0;
            while k < decoded.len() {
                match decoded[k] {
                    b'\\' => {
                        let &escaped = decoded.get(k + 1).ok_or_else(|| {
                            rd.err_at(
                                t,
                                ErrorKind::Syntax,
                                "invalid escape sequence in parameter value".into(),
                            )
                        })?;
                        pool.push(escaped);
                        k += 2;
                    }
                    b',' => {
                        close(pool, len_pos)?;
                        len_pos = pool.len();
                        pool.push(0);
                        k += 1;
                    }
                    b => {
                        pool.push(b);
                        k += 1;
                    }
                }
            }
            close(pool, len_pos)?;
        }
        KEY_NO_DEFAULT_ALPN => {
            if value.is_some() {
                return Err(rd.err_at(
                    t,
                    ErrorKind::Syntax,
                    "service parameter does not take a value".into(),
                ));
            }
        }
        KEY_PORT => {
            let raw = no_escapes(rd, t, required(rd, t, value)?)?;
            let port = prim::dec_u16(raw).map_err(|e| rd.num_err(t, e, "port"))?;
            pool.extend_from_slice(&port.to_be_bytes());
        }
        KEY_IPV4HINT => {
            let raw = no_escapes(rd, t, required(rd, t, value)?)?;
            for part in raw.split(|&b| b == b',') {
                let quad = prim::ipv4(part).map_err(|_| {
                    rd.err_at(t, ErrorKind::Syntax, "invalid IPv4 address".into())
                })?;
                pool.extend_from_slice(&quad);
            }
        }
        KEY_ECH => {
            let raw = required(rd, t, value)?;
            let bytes = prim::base64(raw).map_err(|e| rd.codec_err(t, e, Enc::Base64))?;
            pool.extend_from_slice(&bytes);
        }
        KEY_IPV6HINT => {
            let raw = no_escapes(rd, t, required(rd, t, value)?)?;
            for part in raw.split(|&b| b == b',') {
                let addr = prim::ipv6(part).map_err(|_| {
                    rd.err_at(t, ErrorKind::Syntax, "invalid IPv6 address".into())
                })?;
                pool.extend_from_slice(&addr);
            }
        }
        _ => unreachable!("mnemonic keys all have arms"),
    }
    Ok(())
}

fn required<'v>(rd: &Rd, t: &Tok, value: Option<&'v [u8]>) -> Result<&'v [u8], ParseError> {
    value.ok_or_else(|| {
        rd.err_at(t, ErrorKind::Syntax, "service parameter requires a value".into())
    })
}

fn no_escapes<'v>(rd: &Rd, t: &Tok, value: &'v [u8]) -> Result<&'v [u8], ParseError> {
    if value.contains(&b'\\') {
        return Err(rd.err_at(
            t,
            ErrorKind::Syntax,
            "escapes are not allowed in this parameter".into(),
        ));
    }
    Ok(value)
}
