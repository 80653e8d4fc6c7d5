//! Scalar field decoders for the reference parser.
//!
//! Every routine here is written as a plain forward walk over the bytes.  The
//! observable results (accepted inputs, produced octets, and the first error
//! classification) must match the production decoders bit for bit, because the
//! differential tests compare both parsers on arbitrary inputs.

/// `\X` and `\DDD` escape decoding.  Returns the decoded byte and how many
/// source bytes were consumed (2 or 4).  `text[i]` must be the backslash.
pub fn decode_esc(text: &[u8], i: usize) -> Result<(u8, usize), ()> {
    debug_assert_eq!(text[i], b'\\');
    let first = *text.get(i + 1).ok_or(())?;
    if !first.is_ascii_digit() {
        return Ok((first, 2));
    }
    let d2 = *text.get(i + 2).ok_or(())?;
    let d3 = *text.get(i + 3).ok_or(())?;
    if !d2.is_ascii_digit() || !d3.is_ascii_digit() {
        return Err(());
    }
    let value =
        (first - b'0') as u32 * 100 + (d2 - b'0') as u32 * 10 + (d3 - b'0') as u32;
    if value > 255 {
        return Err(());
    }
    Ok((value as u8, 4))
}

/// Resolve all escapes in `text`; errors on malformed escapes.
pub fn unescape(text: &[u8]) -> Result<Vec<u8>, ()> {
    let mut out = Vec::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        if text[i] == b'\\' {
            let (b, step) = decode_esc(text, i)?;
            out.push(b);
            i += step;
        } else {
            out.push(text[i]);
            i += 1;
        }
    }
    Ok(out)
}

/// Character-string decode failures, in the order they are detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrErr {
    TooLong,
    BadEscape,
    Nul,
}

/// Decode one character-string payload (escapes resolved, no length byte).
/// A raw 0x00 is banned but an escaped `\000` is an ordinary octet; the
/// 255-octet ceiling is checked as each decoded byte lands.
pub fn string_octets(text: &[u8]) -> Result<Vec<u8>, StrErr> {
    let mut out = Vec::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        let b = text[i];
        let (value, step) = if b == b'\\' {
            decode_esc(text, i).map_err(|_| StrErr::BadEscape)?
        } else if b == 0 {
            return Err(StrErr::Nul);
        } else {
            (b, 1)
        };
        if out.len() >= 255 {
            return Err(StrErr::TooLong);
        }
        out.push(value);
        i += step;
    }
    Ok(out)
}

/// Decimal parse failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumErr {
    NotANumber,
    Overflow,
}

/// Unsigned decimal with an inclusive ceiling.  The ceiling is enforced as
/// soon as the running value crosses it, so an over-long string of digits
/// reports `Overflow` even when a later byte is not a digit.
pub fn decimal(text: &[u8], max: u64) -> Result<u64, NumErr> {
    if text.is_empty() {
        return Err(NumErr::NotANumber);
    }
    let mut value = 0u64;
    for &b in text {
        if !b.is_ascii_digit() {
            return Err(NumErr::NotANumber);
        }
        value = value * 10 + (b - b'0') as u64;
        if value > max {
            return Err(NumErr::Overflow);
        }
    }
    Ok(value)
}

pub fn dec_u8(text: &[u8]) -> Result<u8, NumErr> {
    decimal(text, u8::MAX as u64).map(|v| v as u8)
}

pub fn dec_u16(text: &[u8]) -> Result<u16, NumErr> {
    decimal(text, u16::MAX as u64).map(|v| v as u16)
}

pub fn dec_u32(text: &[u8]) -> Result<u32, NumErr> {
    decimal(text, u32::MAX as u64).map(|v| v as u32)
}

/// Dotted-quad IPv4 literal: exactly four decimal fields of one to three
/// digits, each at most 255.
pub fn ipv4(text: &[u8]) -> Result<[u8; 4], ()> {
    let mut out = [0u8; 4];
    let mut n = 0;
    for field in text.split(|&b| b == b'.') {
        if n == 4 || field.is_empty() || field.len() > 3 {
            return Err(());
        }
        out[n] = dec_u8(field).map_err(|_| ())?;
        n += 1;
    }
    if n != 4 {
        return Err(());
    }
    Ok(out)
}

fn hexval(b: u8) -> Result<u16, ()> {
    match b {
        b'0'..=b'9' => Ok((b - b'0') as u16),
        b'a'..=b'f' => Ok((b - b'a') as u16 + 10),
        b'A'..=b'F' => Ok((b - b'A') as u16 + 10),
        _ => Err(()),
    }
}

/// IPv6 literal with `::` compression and an optional trailing embedded
/// dotted quad.
pub fn ipv6(text: &[u8]) -> Result<[u8; 16], ()> {
    let len = text.len();
    let mut groups = [0u16; 8];
    let mut count = 0usize;
    let mut gap: Option<usize> = None;
    let mut i = 0usize;
    if text.starts_with(b"::") {
        gap = Some(0);
        i = 2;
    } else if text.first() == Some(&b':') {
        return Err(());
    }
    while i < len {
        let fs = i;
        while i < len && text[i] != b':' {
            i += 1;
        }
        let field = &text[fs..i];
        if field.contains(&b'.') {
            // Embedded IPv4 tail: must be the final field and leave room for
            // two groups.
            if i != len || count > 6 {
                return Err(());
            }
            let q = ipv4(field)?;
            groups[count] = u16::from_be_bytes([q[0], q[1]]);
            groups[count + 1] = u16::from_be_bytes([q[2], q[3]]);
            count += 2;
            break;
        }
        if field.is_empty() || field.len() > 4 || count == 8 {
            return Err(());
        }
        let mut v = 0u16;
        for &c in field {
            v = v * 16 + hexval(c)?;
        }
        groups[count] = v;
        count += 1;
        if i == len {
            break;
        }
        i += 1; // the ':'
        if i < len && text[i] == b':' {
            if gap.is_some() {
                return Err(());
            }
            gap = Some(count);
            i += 1;
            if i == len {
                break;
            }
        } else if i == len {
            // A single trailing colon is not a field.
            return Err(());
        }
    }
    let full = match gap {
        None => {
            if count != 8 {
                return Err(());
            }
            groups
        }
        Some(g) => {
            if count > 7 {
                return Err(());
            }
            let mut full = [0u16; 8];
            full[..g].copy_from_slice(&groups[..g]);
            for k in g..count {
                full[8 - count + k] = groups[k];
            }
            full
        }
    };
    let mut out = [0u8; 16];
    for (k, v) in full.iter().enumerate() {
        out[2 * k..2 * k + 2].copy_from_slice(&v.to_be_bytes());
    }
    Ok(out)
}

/// Timestamp parse failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsErr {
    NotANumber,
    Overflow,
    BadDate,
}

fn leap(y: u32) -> bool {
    y % 4 == 0 && (y % 100 != 0 || y % 400 == 0)
}

fn days_in_month(y: u32, m: u32) -> u32 {
    match m {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            if leap(y) {
                29
            } else {
                28
            }
        }
        _ => 0,
    }
}

/// Signature timestamp: either a bare second count (up to ten digits) or a
/// fourteen-digit `YYYYMMDDHHmmSS` calendar date, reduced modulo 2^32.
pub fn timestamp(text: &[u8]) -> Result<u32, TsErr> {
    if !text.iter().all(|b| b.is_ascii_digit()) {
        return Err(TsErr::NotANumber);
    }
    if text.len() <= 10 {
        return dec_u32(text).map_err(|e| match e {
            NumErr::NotANumber => TsErr::NotANumber,
            NumErr::Overflow => TsErr::Overflow,
        });
    }
    if text.len() != 14 {
        return Err(TsErr::BadDate);
    }
    let field = |a: usize, b: usize| -> u32 {
        text[a..b].iter().fold(0u32, |v, &c| v * 10 + (c - b'0') as u32)
    };
    let (y, mo, d) = (field(0, 4), field(4, 6), field(6, 8));
    let (h, mi, s) = (field(8, 10), field(10, 12), field(12, 14));
    if y < 1970
        || !(1..=12).contains(&mo)
        || d < 1
        || d > days_in_month(y, mo)
        || h > 23
        || mi > 59
        || s > 59
    {
        return Err(TsErr::BadDate);
    }
    let mut days: u64 = 0;
    for year in 1970..y {
        days += if leap(year) { 366 } else { 365 };
    }
    for month in 1..mo {
        days += days_in_month(y, month) as u64;
    }
    days += (d - 1) as u64;
    let secs = days * 86400 + (h * 3600 + mi * 60 + s) as u64;
    Ok(secs as u32)
}

/// Text-codec failures, matching the production decoder's detection order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodecErr {
    BadChar,
    BadLength,
    TrailingBits,
}

/// Hexadecimal: even length first, then per-pair digit validity.
pub fn base16(input: &[u8]) -> Result<Vec<u8>, CodecErr> {
    if input.len() % 2 != 0 {
        return Err(CodecErr::BadLength);
    }
    let mut out = Vec::with_capacity(input.len() / 2);
    for pair in input.chunks_exact(2) {
        let hi = hexval(pair[0]).map_err(|_| CodecErr::BadChar)?;
        let lo = hexval(pair[1]).map_err(|_| CodecErr::BadChar)?;
        out.push(((hi << 4) | lo) as u8);
    }
    Ok(out)
}

/// Shared bit-packing decode for base32hex and base64.  `valid_rem` lists the
/// data lengths modulo `quantum` that decode to a whole number of bytes.
fn decode_packed(
    input: &[u8],
    quantum: usize,
    bits: u32,
    valid_rem: &[usize],
    value_of: impl Fn(u8) -> Option<u32>,
) -> Result<Vec<u8>, CodecErr> {
    let split = input.iter().position(|&b| b == b'=').unwrap_or(input.len());
    let (data, pad) = input.split_at(split);
    if !pad.is_empty() {
        if pad.iter().any(|&b| b != b'=') {
            return Err(CodecErr::BadChar);
        }
        let rem = data.len() % quantum;
        if rem == 0 || pad.len() != quantum - rem {
            return Err(CodecErr::BadChar);
        }
    }
    if !valid_rem.contains(&(data.len() % quantum)) {
        return Err(CodecErr::BadLength);
    }
    let mut out = Vec::with_capacity(data.len() * bits as usize / 8);
    let mut acc = 0u32;
    let mut have = 0u32;
    for &b in data {
        let v = value_of(b).ok_or(CodecErr::BadChar)?;
        acc = (acc << bits) | v;
        have += bits;
        while have >= 8 {
            have -= 8;
            out.push((acc >> have) as u8);
        }
    }
    if have > 0 && acc & ((1 << have) - 1) != 0 {
        return Err(CodecErr::TrailingBits);
    }
    Ok(out)
}

/// Base32 with the extended-hex alphabet, case-insensitive.
pub fn base32hex(input: &[u8]) -> Result<Vec<u8>, CodecErr> {
    decode_packed(input, 8, 5, &[0, 2, 4, 5, 7], |b| match b {
        b'0'..=b'9' => Some((b - b'0') as u32),
        b'A'..=b'V' => Some((b - b'A') as u32 + 10),
        b'a'..=b'v' => Some((b - b'a') as u32 + 10),
        _ => None,
    })
}

/// Standard base64 (case-sensitive, `+` and `/`).
pub fn base64(input: &[u8]) -> Result<Vec<u8>, CodecErr> {
    decode_packed(input, 4, 6, &[0, 2, 3], |b| match b {
        b'A'..=b'Z' => Some((b - b'A') as u32),
        b'a'..=b'z' => Some((b - b'a') as u32 + 26),
        b'0'..=b'9' => Some((b - b'0') as u32 + 52),
        b'+' => Some(62),
        b'/' => Some(63),
        _ => None,
    })
}

/// Every record-type mnemonic the parser understands, with its code.
pub const TYPES: &[(&str, u16)] = &[
    ("A", 1),
    ("NS", 2),
    ("MD", 3),
    ("MF", 4),
    ("CNAME", 5),
    ("SOA", 6),
    ("MB", 7),
    ("MG", 8),
    ("MR", 9),
    ("NULL", 10),
    ("WKS", 11),
    ("PTR", 12),
    ("HINFO", 13),
    ("MINFO", 14),
    ("MX", 15),
    ("TXT", 16),
    ("RP", 17),
    ("AFSDB", 18),
    ("X25", 19),
    ("ISDN", 20),
    ("RT", 21),
    ("NSAP", 22),
    ("NSAP-PTR", 23),
    ("SIG", 24),
    ("KEY", 25),
    ("PX", 26),
    ("GPOS", 27),
    ("AAAA", 28),
    ("LOC", 29),
    ("NXT", 30),
    ("SRV", 33),
    ("NAPTR", 35),
    ("KX", 36),
    ("CERT", 37),
    ("DNAME", 39),
    ("APL", 42),
    ("DS", 43),
    ("SSHFP", 44),
    ("IPSECKEY", 45),
    ("RRSIG", 46),
    ("NSEC", 47),
    ("DNSKEY", 48),
    ("DHCID", 49),
    ("NSEC3", 50),
    ("NSEC3PARAM", 51),
    ("TLSA", 52),
    ("SMIMEA", 53),
    ("HIP", 55),
    ("NINFO", 56),
    ("CDS", 59),
    ("CDNSKEY", 60),
    ("OPENPGPKEY", 61),
    ("CSYNC", 62),
    ("ZONEMD", 63),
    ("SVCB", 64),
    ("HTTPS", 65),
    ("SPF", 99),
    ("NID", 104),
    ("L32", 105),
    ("L64", 106),
    ("LP", 107),
    ("EUI48", 108),
    ("EUI64", 109),
    ("URI", 256),
    ("CAA", 257),
    ("TA", 32768),
    ("DLV", 32769),
];

/// Case-insensitive `PREFIX<decimal>` form, e.g. `TYPE262` or `CLASS4`.
/// Leading zeros are fine; values above 65535 are rejected.
fn numbered(text: &[u8], prefix: &[u8]) -> Option<u16> {
    if text.len() <= prefix.len() || !text[..prefix.len()].eq_ignore_ascii_case(prefix) {
        return None;
    }
    let digits = &text[prefix.len()..];
    let mut value = 0u32;
    for &b in digits {
        if !b.is_ascii_digit() {
            return None;
        }
        value = value * 10 + (b - b'0') as u32;
        if value > 65535 {
            return None;
        }
    }
    Some(value as u16)
}

/// Record-type lookup: mnemonic (case-insensitive) or `TYPE<n>`.
pub fn type_code(text: &[u8]) -> Option<u16> {
    for &(name, code) in TYPES {
        if text.eq_ignore_ascii_case(name.as_bytes()) {
            return Some(code);
        }
    }
    numbered(text, b"TYPE")
}

/// Class lookup: IN/CS/CH/HS (case-insensitive) or `CLASS<n>`.
pub fn class_code(text: &[u8]) -> Option<u16> {
    match text {
        t if t.eq_ignore_ascii_case(b"IN") => Some(1),
        t if t.eq_ignore_ascii_case(b"CS") => Some(2),
        t if t.eq_ignore_ascii_case(b"CH") => Some(3),
        t if t.eq_ignore_ascii_case(b"HS") => Some(4),
        t => numbered(t, b"CLASS"),
    }
}

/// Name encoding failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameErr {
    Empty,
    EmptyLabel,
    LabelTooLong,
    NameTooLong,
    BadEscape,
    Relative,
}

/// Wire-encode a textual domain name.
///
/// `origin` is the current origin in wire form (appended to relative names,
/// substituted for `@`).  `budget` bounds the scratch space exactly like the
/// production encoder's write region does: the input is consumed in spans of
/// up to 32 bytes, and a span is only entered if 32 output bytes still fit.
/// Which limit error an oversized name reports depends on where that check
/// lands, so the span cadence here must not be "simplified" to a per-byte
/// check.
pub fn encode_name(
    text: &[u8],
    origin: Option<&[u8]>,
    budget: usize,
) -> Result<Vec<u8>, NameErr> {
    if text.is_empty() {
        return Err(NameErr::Empty);
    }
    if text == b"@" {
        return match origin {
            Some(o) => Ok(o.to_vec()),
            None => Err(NameErr::Relative),
        };
    }
    if text == b"." {
        return Ok(vec![0]);
    }

    let mut dst = vec![0u8; budget];
    let mut len_pos = 0usize;
    let mut w = 1usize;

    // Close the label whose content ends just before `p`: write its length
    // into the reserved slot and reserve `p` for the next one.
    fn close(dst: &mut [u8], len_pos: &mut usize, p: usize) -> Result<(), NameErr> {
        let len = p - *len_pos - 1;
        if len == 0 {
            return Err(NameErr::EmptyLabel);
        }
        if len > 63 {
            return Err(NameErr::LabelTooLong);
        }
        dst[*len_pos] = len as u8;
        *len_pos = p;
        Ok(())
    }

    // When the scratch budget runs out, the pending partial label decides
    // whether this looked like a label or a whole-name overflow.
    let over = |w: usize, len_pos: usize| -> NameErr {
        if w - len_pos - 1 > 63 {
            NameErr::LabelTooLong
        } else {
            NameErr::NameTooLong
        }
    };

    let mut i = 0usize;
    while text.len() - i >= 32 {
        if w + 32 > dst.len() {
            return Err(over(w, len_pos));
        }
        let chunk = &text[i..i + 32];
        match chunk.iter().position(|&b| b == b'\\') {
            None => {
                dst[w..w + 32].copy_from_slice(chunk);
                for (rel, &b) in chunk.iter().enumerate() {
                    if b == b'.' {
                        close(&mut dst, &mut len_pos, w + rel)?;
                    }
                }
                w += 32;
                i += 32;
            }
            Some(k) => {
                dst[w..w + k].copy_from_slice(&chunk[..k]);
                for (rel, &b) in chunk[..k].iter().enumerate() {
                    if b == b'.' {
                        close(&mut dst, &mut len_pos, w + rel)?;
                    }
                }
                let (v, step) = decode_esc(text, i + k).map_err(|_| NameErr::BadEscape)?;
                dst[w + k] = v;
                w += k + 1;
                i += k + step;
            }
        }
    }
    while i < text.len() {
        if w >= dst.len() {
            return Err(over(w, len_pos));
        }
        let b = text[i];
        if b == b'.' {
            close(&mut dst, &mut len_pos, w)?;
            w += 1;
            i += 1;
        } else if b == b'\\' {
            let (v, step) = decode_esc(text, i).map_err(|_| NameErr::BadEscape)?;
            dst[w] = v;
            w += 1;
            i += step;
        } else {
            dst[w] = b;
            w += 1;
            i += 1;
        }
    }

    let last_len = w - len_pos - 1;
    if last_len == 0 {
        // Ended on a dot: the name is absolute.
        let total = len_pos + 1;
        if total > 255 {
            return Err(NameErr::NameTooLong);
        }
        dst[len_pos] = 0;
        dst.truncate(total);
        return Ok(dst);
    }
    if last_len > 63 {
        return Err(NameErr::LabelTooLong);
    }
    close(&mut dst, &mut len_pos, w)?;
    let o = origin.ok_or(NameErr::Relative)?;
    if w + o.len() > 255 {
        return Err(NameErr::NameTooLong);
    }
    dst[w..w + o.len()].copy_from_slice(o);
    dst.truncate(w + o.len());
    Ok(dst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamp_vectors() {
        assert_eq!(timestamp(b"20240101000000"), Ok(1704067200));
        assert_eq!(timestamp(b"20231201000000"), Ok(1701388800));
        assert_eq!(timestamp(b"19700101000000"), Ok(0));
        assert_eq!(timestamp(b"20380119031407"), Ok(2147483647));
        assert_eq!(timestamp(b"21060207062816"), Ok(0));
        assert_eq!(timestamp(b"1704067200"), Ok(1704067200));
        assert_eq!(timestamp(b"99999999999"), Err(TsErr::BadDate));
        assert_eq!(timestamp(b"4294967296"), Err(TsErr::Overflow));
        assert_eq!(timestamp(b"20240230000000"), Err(TsErr::BadDate));
        assert_eq!(timestamp(b"x"), Err(TsErr::NotANumber));
    }

    #[test]
    fn codec_edges() {
        assert_eq!(base16(b"abc"), Err(CodecErr::BadLength));
        assert_eq!(base16(b"aG"), Err(CodecErr::BadChar));
        assert_eq!(base16(b"ab"), Ok(vec![0xab]));
        assert_eq!(base64(b"AQ=="), Ok(vec![1]));
        assert_eq!(base64(b"AB=="), Err(CodecErr::TrailingBits));
        assert_eq!(base64(b"A==="), Err(CodecErr::BadLength));
        assert_eq!(base64(b"="), Err(CodecErr::BadChar));
        assert_eq!(base32hex(b"CPNMUOJ1E8"), base32hex(b"cpnmuoj1e8"));
    }

    #[test]
    fn name_basics() {
        assert_eq!(encode_name(b"a.b.", None, 640), Ok(vec![1, b'a', 1, b'b', 0]));
        assert_eq!(encode_name(b"a", Some(&[0]), 640), Ok(vec![1, b'a', 0]));
        assert_eq!(encode_name(b"a", None, 640), Err(NameErr::Relative));
        assert_eq!(encode_name(b"a..b.", None, 640), Err(NameErr::EmptyLabel));
        assert_eq!(encode_name(b".", None, 640), Ok(vec![0]));
        let long = [b'x'; 64];
        let mut t = long.to_vec();
        t.push(b'.');
        assert_eq!(encode_name(&t, None, 640), Err(NameErr::LabelTooLong));
    }
}
