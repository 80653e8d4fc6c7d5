//! Decimal integers, IP addresses, and signature timestamps.

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NumError {
    /// Empty, or a byte that is not an ASCII digit.
    NotANumber,
    /// Well-formed digits, but the value exceeds the field's range.
    Overflow,
}

#[inline]
fn parse_decimal(text: &[u8], max: u64) -> Result<u64, NumError> {
    if text.is_empty() {
        return Err(NumError::NotANumber);
    }
    let mut value = 0u64;
    for &b in text {
        if !b.is_ascii_digit() {
            return Err(NumError::NotANumber);
        }
        value = value * 10 + (b - b'0') as u64;
        if value > max {
            return Err(NumError::Overflow);
        }
    }
    Ok(value)
}

pub fn parse_u8(text: &[u8]) -> Result<u8, NumError> {
    parse_decimal(text, u8::MAX as u64).map(|v| v as u8)
}

pub fn parse_u16(text: &[u8]) -> Result<u16, NumError> {
    parse_decimal(text, u16::MAX as u64).map(|v| v as u16)
}

pub fn parse_u32(text: &[u8]) -> Result<u32, NumError> {
    parse_decimal(text, u32::MAX as u64).map(|v| v as u32)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AddrError;

/// Strict dotted quad: four decimal octets, one to three digits each.
pub fn parse_ipv4(text: &[u8]) -> Result<[u8; 4], AddrError> {
    let mut out = [0u8; 4];
    let mut fields = text.split(|&b| b == b'.');
    for slot in &mut out {
        let field = fields.next().ok_or(AddrError)?;
        if field.is_empty() || field.len() > 3 {
            return Err(AddrError);
        }
        *slot = parse_u8(field).map_err(|_| AddrError)?;
    }
    if fields.next().is_some() {
        return Err(AddrError);
    }
    Ok(out)
}

/// Colon-separated hex groups with at most one `::` gap and an optional
/// embedded dotted quad in the last position.
pub fn parse_ipv6(text: &[u8]) -> Result<[u8; 16], AddrError> {
    let mut groups = [0u16; 8];
    let mut count = 0usize;
    let mut gap: Option<usize> = None;
    let mut i = 0usize;

    if text.starts_with(b"::") {
        gap = Some(0);
        i = 2;
    } else if text.first() == Some(&b':') {
        return Err(AddrError);
    }

    while i < text.len() {
        let end = text[i..]
            .iter()
            .position(|&b| b == b':')
            .map_or(text.len(), |p| i + p);
        let field = &text[i..end];
        if field.contains(&b'.') {
            // Embedded IPv4 tail; must be the final field.
            if end != text.len() || count > 6 {
                return Err(AddrError);
            }
            let quad = parse_ipv4(field)?;
            groups[count] = u16::from_be_bytes([quad[0], quad[1]]);
            groups[count + 1] = u16::from_be_bytes([quad[2], quad[3]]);
            count += 2;
            break;
        }
        if field.is_empty() || field.len() > 4 || count == 8 {
            return Err(AddrError);
        }
        let mut value = 0u16;
        for &b in field {
            let digit = match b {
                b'0'..=b'9' => b - b'0',
                b'a'..=b'f' => b - b'a' + 10,
                b'A'..=b'F' => b - b'A' + 10,
                _ => return Err(AddrError),
            };
            value = value << 4 | digit as u16;
        }
        groups[count] = value;
        count += 1;
        i = end;
        if i == text.len() {
            break;
        }
        i += 1; // the ':' separator
        if text.get(i) == Some(&b':') {
            if gap.is_some() {
                return Err(AddrError);
            }
            gap = Some(count);
            i += 1;
        } else if i == text.len() {
            // A single trailing colon.
            return Err(AddrError);
        }
    }

    let mut out = [0u8; 16];
    match gap {
        None => {
            if count != 8 {
                return Err(AddrError);
            }
            for (k, g) in groups.iter().enumerate() {
                out[2 * k..2 * k + 2].copy_from_slice(&g.to_be_bytes());
            }
        }
        Some(at) => {
            if count > 7 {
                return Err(AddrError);
            }
            for k in 0..at {
                out[2 * k..2 * k + 2].copy_from_slice(&groups[k].to_be_bytes());
            }
            for k in at..count {
                let pos = 8 - count + k;
                out[2 * pos..2 * pos + 2].copy_from_slice(&groups[k].to_be_bytes());
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TimeError {
    /// Empty or non-digit bytes.
    NotANumber,
    /// A plain seconds count that does not fit 32 bits.
    Overflow,
    /// Fourteen digits that do not name a valid UTC instant, or a digit
    /// count that is neither a plain count (<= 10) nor a full date (14).
    BadDate,
}

/// Days since 1970-01-01 for a proleptic-Gregorian civil date.
fn days_from_civil(y: i64, m: u32, d: u32) -> i64 {
    let y = if m <= 2 { y - 1 } else { y };
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let mp = if m > 2 { m - 3 } else { m + 9 };
    let doy = (153 * mp + 2) / 5 + d - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy as i64;
    era * 146097 + doe - 719468
}

fn days_in_month(y: i64, m: u32) -> u32 {
    match m {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            if y % 4 == 0 && (y % 100 != 0 || y % 400 == 0) {
                29
            } else {
                28
            }
        }
        _ => 0,
    }
}

/// RRSIG inception/expiration: either a plain 32-bit seconds count (up to
/// ten digits) or a fourteen-digit YYYYMMDDHHmmSS UTC timestamp from 1970
/// on, reduced modulo 2^32.
pub fn parse_timestamp(text: &[u8]) -> Result<u32, TimeError> {
    if text.is_empty() {
        return Err(TimeError::NotANumber);
    }
    if text.len() <= 10 {
        // Ten digits cannot overflow u64; one pass validates and folds.
        let mut value = 0u64;
        for &b in text {
            let d = b.wrapping_sub(b'0');
            if d > 9 {
                return Err(TimeError::NotANumber);
            }
            value = value * 10 + d as u64;
        }
        return if value > u32::MAX as u64 {
            Err(TimeError::Overflow)
        } else {
            Ok(value as u32)
        };
    }
    if !text.iter().all(u8::is_ascii_digit) {
        return Err(TimeError::NotANumber);
    }
    if text.len() != 14 {
        return Err(TimeError::BadDate);
    }
    let field = |range: core::ops::Range<usize>| -> u32 {
        text[range].iter().fold(0, |acc, &b| acc * 10 + (b - b'0') as u32)
    };
    let (y, mo, d) = (field(0..4) as i64, field(4..6), field(6..8));
    let (h, mi, s) = (field(8..10), field(10..12), field(12..14));
    if y < 1970
        || mo < 1
        || mo > 12
        || d < 1
        || d > days_in_month(y, mo)
        || h > 23
        || mi > 59
        || s > 59
    {
        return Err(TimeError::BadDate);
    }
    let secs = days_from_civil(y, mo, d) * 86400 + (h * 3600 + mi * 60 + s) as i64;
    Ok(secs as u64 as u32)
}
