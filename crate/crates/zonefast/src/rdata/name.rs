//! Presentation-form domain names to wire format.
//!
//! The encoder copies chunks of the input into the output unconditionally
//! and rewrites dot positions into label length bytes afterwards: the byte
//! where a separator dot lands becomes the length slot for the following
//! label. Chunks are scanned 32 bytes at a time for dots and backslashes;
//! only chunks containing an escape fall back to byte-wise handling, and
//! only up to the escape.

use super::text::decode_escape;

/// Destination regions passed to [`parse_name`] must be at least this big.
/// Covers the 255-octet wire maximum, an appended origin, and the 32-byte
/// chunk overhang from unconditional copies.
pub const NAME_SLACK: usize = 640;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NameError {
    Empty,
    /// Two adjacent dots, or a leading dot in anything but the root name.
    EmptyLabel,
    /// A label longer than 63 octets.
    LabelTooLong,
    /// More than 255 octets of wire form, origin included.
    NameTooLong,
    BadEscape,
    /// The name does not end in a dot and no origin is in effect.
    Relative,
}

const CHUNK: usize = 32;

/// Dot and backslash masks over `text[..32]`. Callers guarantee the length.
#[inline]
fn scan_chunk(text: &[u8]) -> (u32, u32) {
    #[cfg(target_arch = "x86_64")]
    // Sound: two unaligned 16-byte loads inside the caller-checked range.
    unsafe {
        use core::arch::x86_64::*;
        let lo = _mm_loadu_si128(text.as_ptr() as *const __m128i);
        let hi = _mm_loadu_si128(text.as_ptr().add(16) as *const __m128i);
        let mask = |lo_v: __m128i, hi_v: __m128i, byte: u8| -> u32 {
            let needle = _mm_set1_epi8(byte as i8);
            (_mm_movemask_epi8(_mm_cmpeq_epi8(lo_v, needle)) as u32 & 0xffff)
                | ((_mm_movemask_epi8(_mm_cmpeq_epi8(hi_v, needle)) as u32) << 16)
        };
        (mask(lo, hi, b'.'), mask(lo, hi, b'\\'))
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        let mut dots = 0u32;
        let mut backslashes = 0u32;
        for (k, &b) in text[..CHUNK].iter().enumerate() {
            dots |= ((b == b'.') as u32) << k;
            backslashes |= ((b == b'\\') as u32) << k;
        }
        (dots, backslashes)
    }
}

/// Encodes `text` into `dst` and returns the wire length. Relative names
/// get `origin` (already in wire form) appended; `@` stands for the origin
/// itself. `dst.len()` must be at least [`NAME_SLACK`].
pub fn parse_name(
    text: &[u8],
    origin: Option<&[u8]>,
    dst: &mut [u8],
) -> Result<usize, NameError> {
    debug_assert!(dst.len() >= NAME_SLACK);
    if text.is_empty() {
        return Err(NameError::Empty);
    }
    if text == b"@" {
        let o = origin.ok_or(NameError::Relative)?;
        dst[..o.len()].copy_from_slice(o);
        return Ok(o.len());
    }
    if text == b"." {
        dst[0] = 0;
        return Ok(1);
    }

    let mut len_pos = 0usize; // slot awaiting its label length
    let mut w = 1usize; // write head; text bytes land from dst[1]
    let mut i = 0usize;

    // Rewrites the length slot for a label ending just before output
    // position `p` (where a dot sits or the name ends).
    macro_rules! close_label {
        ($p:expr) => {{
            let label_len = $p - len_pos - 1;
            if label_len == 0 {
                return Err(NameError::EmptyLabel);
            }
            if label_len > 63 {
                return Err(NameError::LabelTooLong);
            }
            dst[len_pos] = label_len as u8;
            len_pos = $p;
        }};
    }

    'chunks: while i < text.len() {
        let rem = text.len() - i;
        if w + CHUNK > dst.len() {
            if rem >= CHUNK {
                // Far past any legal name; pick the error a byte-wise
                // reading would hit first.
                return Err(if w - len_pos - 1 > 63 {
                    NameError::LabelTooLong
                } else {
                    NameError::NameTooLong
                });
            }
            // A short tail with the budget nearly spent: fall back to
            // byte-wise writes so the budget check lands on the exact byte.
            break 'chunks;
        }
        let (dots, backslashes, take) = if rem >= CHUNK {
            let (d, b) = scan_chunk(&text[i..]);
            dst[w..w + CHUNK].copy_from_slice(&text[i..i + CHUNK]);
            (d, b, CHUNK)
        } else {
            // Short tail, plenty of budget: pad a stack copy to a full
            // chunk. The copy into dst writes the padding too; it sits in
            // the slack past `w + rem` and is never part of the name.
            let mut tmp = [0u8; CHUNK];
            tmp[..rem].copy_from_slice(&text[i..]);
            let (d, b) = scan_chunk(&tmp);
            dst[w..w + CHUNK].copy_from_slice(&tmp);
            let live = (1u32 << rem) - 1;
            (d & live, b & live, rem)
        };
        if backslashes == 0 {
            let mut m = dots;
            while m != 0 {
                close_label!(w + m.trailing_zeros() as usize);
                m &= m - 1;
            }
            w += take;
            i += take;
        } else {
            // Consume up to the first escape, then decode it and rescan.
            let k = backslashes.trailing_zeros() as usize;
            let mut m = if k == 0 { 0 } else { dots & (u32::MAX >> (32 - k)) };
            while m != 0 {
                close_label!(w + m.trailing_zeros() as usize);
                m &= m - 1;
            }
            w += k;
            i += k;
            let (value, step) = decode_escape(text, i).map_err(|_| NameError::BadEscape)?;
            dst[w] = value;
            w += 1;
            i += step;
        }
    }

    while i < text.len() {
        if w >= dst.len() {
            return Err(if w - len_pos - 1 > 63 {
                NameError::LabelTooLong
            } else {
                NameError::NameTooLong
            });
        }
        let b = text[i];
        if b == b'\\' {
            let (value, step) = decode_escape(text, i).map_err(|_| NameError::BadEscape)?;
            dst[w] = value;
            w += 1;
            i += step;
        } else if b == b'.' {
            close_label!(w);
            w += 1;
            i += 1;
        } else {
            dst[w] = b;
            w += 1;
            i += 1;
        }
    }

    let last_len = w - len_pos - 1;
    if last_len == 0 {
        // Ended on a dot: absolute. (Adjacent dots already errored above.)
        let total = len_pos + 1;
        if total > 255 {
            return Err(NameError::NameTooLong);
        }
        dst[len_pos] = 0;
        Ok(total)
    } else {
        if last_len > 63 {
            return Err(NameError::LabelTooLong);
        }
        dst[len_pos] = last_len as u8;
        let o = origin.ok_or(NameError::Relative)?;
        if w + o.len() > 255 {
            return Err(NameError::NameTooLong);
        }
        dst[w..w + o.len()].copy_from_slice(o);
        Ok(w + o.len())
    }
}
