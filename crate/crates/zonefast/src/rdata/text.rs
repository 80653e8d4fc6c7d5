//! Escape decoding and character-strings.
//!
//! Zone file text knows two escape forms: `\X` for a literal X and `\DDD`
//! for an arbitrary octet in decimal. When the first character after the
//! backslash is a digit, exactly three digits are required and the value
//! must fit a byte.

/// The escape at the end of input, with too few digits, or above 255.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EscapeError;

/// Decodes the escape starting at `text[i]` (which must be a backslash).
/// Returns the decoded byte and the total bytes consumed including the
/// backslash (2 or 4).
#[inline]
pub fn decode_escape(text: &[u8], i: usize) -> Result<(u8, usize), EscapeError> {
    let first = *text.get(i + 1).ok_or(EscapeError)?;
    if !first.is_ascii_digit() {
        return Ok((first, 2));
    }
    let (d2, d3) = match (text.get(i + 2), text.get(i + 3)) {
        (Some(&a), Some(&b)) if a.is_ascii_digit() && b.is_ascii_digit() => (a, b),
        _ => return Err(EscapeError),
    };
    let value =
        (first - b'0') as u16 * 100 + (d2 - b'0') as u16 * 10 + (d3 - b'0') as u16;
    if value > 255 {
        return Err(EscapeError);
    }
    Ok((value as u8, 4))
}

/// Expands all escapes in `text`, appending to `out`. Used where a value is
/// arbitrary bytes without a length cap of its own (include paths, unknown
/// SVCB parameter values).
pub fn unescape_into(text: &[u8], out: &mut Vec<u8>) -> Result<(), EscapeError> {
    let mut i = 0;
    while i < text.len() {
        let b = text[i];
        if b == b'\\' {
            let (v, n) = decode_escape(text, i)?;
            out.push(v);
            i += n;
        } else {
            out.push(b);
            i += 1;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StringError {
    /// More than 255 octets after escape expansion.
    TooLong,
    BadEscape,
    /// A raw 0x00 inside a quoted string (escaped `\000` is fine).
    NulByte,
}

/// Decodes one character-string into `dst` as a length byte plus contents.
/// `content` excludes the quotes for quoted items. `dst` needs 256 bytes of
/// space; the return value is the bytes written (1 + string length).
pub fn parse_string(content: &[u8], dst: &mut [u8]) -> Result<usize, StringError> {
    let mut w = 1usize; // slot 0 is the length byte
    let mut i = 0;
    while i < content.len() {
        let b = content[i];
        let (value, step) = if b == b'\\' {
            decode_escape(content, i).map_err(|_| StringError::BadEscape)?
        } else if b == 0 {
            return Err(StringError::NulByte);
        } else {
            (b, 1)
        };
        if w > 255 {
            return Err(StringError::TooLong);
        }
        dst[w] = value;
        w += 1;
        i += step;
    }
    dst[0] = (w - 1) as u8;
    Ok(w)
}
