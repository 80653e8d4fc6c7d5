//! Stage one: structural indexing.
//!
//! A window of input is cut into 64-byte blocks. Each block is classified
//! into raw bitmasks (one bit per byte), the masks are flattened into
//! context-aware `fields` and `delimiters` masks by resolving escapes,
//! quoting and comments, and the set bits are written out as offset tapes.
//! Stage two (the lexer and grammar) then walks the tapes without ever
//! rescanning the bulk of the input.
//!
//! Blocks are independent except for a tiny carry: an escape crossing the
//! block edge, the in-quote and in-comment states, and whether the last byte
//! continued a token. Comment state forces a serial fallback because quote
//! and comment openers suppress each other in input order; everything else
//! stays branch-free.

mod classify;

pub use classify::{classify, classify_scalar, RawMasks};

use crate::kernel::Kernel;

/// Bits 0, 2, 4, ... Used by the escape and parity tricks below.
const EVEN_BITS: u64 = 0x5555_5555_5555_5555;
const ODD_BITS: u64 = !EVEN_BITS;

/// Cross-block classification state. All zero at a fresh start.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct Carry {
    /// The previous block ended in an unescaped backslash; the next byte is
    /// escaped whatever it is.
    pub escape_pending: bool,
    /// The previous block ended inside a quoted string.
    pub in_quoted: bool,
    /// The previous block ended inside a comment.
    pub in_comment: bool,
    /// Bit 0 set if the previous block's last byte was token content, so a
    /// token continuing across the edge does not restart.
    pub follows: u64,
}

/// Context-resolved masks for one block.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub(crate) struct FlatMasks {
    /// Bytes preceded by an unescaped backslash.
    pub escaped: u64,
    /// Bytes inside a quoted string: the opening quote and the contents, but
    /// not the closing quote. This asymmetry is what lets a single AND pick
    /// opening quotes into `fields` and closing quotes into `delims`.
    pub in_quoted: u64,
    /// Comment bytes: the semicolon through the last byte before the newline.
    pub in_comment: u64,
    /// Token and structure starts: first byte of every contiguous run,
    /// opening quotes, newlines, parentheses and the 0x00 sentinel.
    pub fields: u64,
    /// Token terminators: the byte after every contiguous run and every
    /// closing quote.
    pub delims: u64,
    /// Newlines hidden inside tokens (quoted or escaped); they produce no
    /// structural field but still count for line numbers.
    pub hidden_newlines: u64,
}

/// Marks escaped bytes given the backslash mask, carrying an odd trailing
/// run into the next block. Branch-free except for the all-clear fast exit.
#[inline]
fn find_escaped(backslash: u64, pending: &mut bool) -> u64 {
    let carried = *pending as u64;
    if backslash == 0 {
        *pending = false;
        return carried;
    }
    // A backslash that is itself escaped by the carry cannot escape anything.
    let backslash = backslash & !carried;
    let follows_escape = backslash << 1 | carried;
    // Runs are located by where addition carries out of them: a run starting
    // on an odd bit whose length is odd carries into an even bit, and vice
    // versa, so the parity flip below finds exactly the bytes after
    // odd-length runs.
    let odd_starts = backslash & ODD_BITS & !follows_escape;
    let (carries, overflow) = odd_starts.overflowing_add(backslash);
    *pending = overflow;
    (EVEN_BITS ^ (carries << 1)) & follows_escape
}

/// Prefix XOR: bit i of the result is the XOR of bits 0..=i of the input.
/// Turns a mask of quote positions into a mask of quoted regions.
#[inline]
fn prefix_xor(mut x: u64) -> u64 {
    x ^= x << 1;
    x ^= x << 2;
    x ^= x << 4;
    x ^= x << 8;
    x ^= x << 16;
    x ^= x << 32;
    x
}

/// Serial fallback: resolves escapes, quotes and comments in input order.
/// Only runs for blocks that contain a semicolon or start inside a comment.
/// Returns (escaped, in_quoted, in_comment) with the same conventions as the
/// fast path: opening quotes marked quoted, closing quotes not; the comment
/// mask covers the semicolon but not the terminating newline.
fn sweep(raw: &RawMasks, carry: &mut Carry) -> (u64, u64, u64) {
    let mut escaped = 0u64;
    let mut quoted = 0u64;
    let mut comment = 0u64;
    let mut pending = carry.escape_pending;
    let mut in_q = carry.in_quoted;
    let mut in_c = carry.in_comment;
    for i in 0..64 {
        let bit = 1u64 << i;
        if in_c {
            // Escapes mean nothing inside comments; only a newline ends one,
            // and the newline itself stays structural.
            if raw.newline & bit != 0 {
                in_c = false;
            } else {
                comment |= bit;
            }
        } else if pending {
            pending = false;
            escaped |= bit;
            if in_q {
                quoted |= bit;
            }
        } else if raw.backslash & bit != 0 {
            pending = true;
            if in_q {
                quoted |= bit;
            }
        } else if in_q {
            if raw.quote & bit != 0 {
                in_q = false;
            } else {
                quoted |= bit;
            }
        } else if raw.quote & bit != 0 {
            in_q = true;
            quoted |= bit;
        } else if raw.semicolon & bit != 0 {
            in_c = true;
            comment |= bit;
        }
    }
    carry.escape_pending = pending;
    carry.in_quoted = in_q;
    carry.in_comment = in_c;
    (escaped, quoted, comment)
}

/// Resolves one block's raw masks into fields and delimiters, threading the
/// carry.
pub(crate) fn flatten(raw: &RawMasks, carry: &mut Carry) -> FlatMasks {
    let (escaped, in_quoted, in_comment);
    if raw.semicolon != 0 || carry.in_comment {
        (escaped, in_quoted, in_comment) = sweep(raw, carry);
    } else {
        escaped = find_escaped(raw.backslash, &mut carry.escape_pending);
        let quotes = raw.quote & !escaped;
        let region = prefix_xor(quotes) ^ if carry.in_quoted { !0 } else { 0 };
        carry.in_quoted = region >> 63 != 0;
        in_quoted = region;
        in_comment = 0;
    }

    let masked_out = escaped | in_quoted | in_comment;
    let quote_eff = raw.quote & !escaped & !in_comment;
    let blank = raw.blank & !masked_out;
    let special = raw.special & !masked_out;
    // Token content: anything that is not a separator, not structural and
    // not swallowed by a quote or comment. Escaped bytes of any value
    // qualify, which is how escaped spaces and newlines join a token.
    let contiguous = !(blank | special | quote_eff | in_quoted | in_comment);
    let follows = contiguous << 1 | carry.follows;
    carry.follows = contiguous >> 63;

    FlatMasks {
        escaped,
        in_quoted,
        in_comment,
        fields: (contiguous & !follows) | (quote_eff & in_quoted) | special,
        delims: (follows & !contiguous) | (quote_eff & !in_quoted),
        hidden_newlines: raw.newline & (in_quoted | escaped),
    }
}

/// Offset tapes for one window. Offsets are relative to the window start.
#[derive(Default, Debug)]
pub struct WindowIndex {
    pub fields: Vec<u32>,
    pub delims: Vec<u32>,
    /// Set when some token in this window contains a hidden newline; the
    /// lexer then counts newlines inside token spans for line numbers.
    pub hidden_newlines: bool,
}

/// Appends the offsets of all set bits. Writes eight slots per round
/// unconditionally and fixes the length afterwards — cheaper than a
/// conditional per bit for the dense masks zone data produces.
#[inline]
fn extract(mut mask: u64, base: u32, tape: &mut Vec<u32>) {
    if mask == 0 {
        return;
    }
    let count = mask.count_ones() as usize;
    let len = tape.len();
    tape.reserve(count + 8);
    // SAFETY: space for count+8 entries was reserved; each round writes at
    // most 8 slots and the final set_len covers exactly the counted bits.
    unsafe {
        let mut p = tape.as_mut_ptr().add(len);
        let mut remaining = count;
        loop {
            for k in 0..8 {
                *p.add(k) = base + mask.trailing_zeros();
                mask &= mask.wrapping_sub(1);
            }
            if remaining <= 8 {
                break;
            }
            remaining -= 8;
            p = p.add(8);
        }
        tape.set_len(len + count);
    }
}

/// Indexes `buf[start..end]`, appending window-relative offsets to `out`
/// (which is cleared first). The caller guarantees at least 63 readable
/// bytes past `end` (the file buffer is always over-allocated) and that the
/// window is at most `u32::MAX` long.
pub fn index_window(
    buf: &[u8],
    start: usize,
    end: usize,
    kernel: Kernel,
    carry: &mut Carry,
    out: &mut WindowIndex,
) {
    let len = end - start;
    assert!(buf.len() >= end + 63, "window buffer lacks padding");
    assert!(len <= u32::MAX as usize);
    out.fields.clear();
    out.delims.clear();
    let mut hidden = 0u64;
    let mut offset = 0usize;
    while offset < len {
        let block: &[u8; 64] = buf[start + offset..start + offset + 64].try_into().unwrap();
        let mut raw = classify(block, kernel);
        let rem = len - offset;
        let keep = if rem < 64 { !0u64 >> (64 - rem) } else { !0 };
        if rem < 64 {
            // Partial final block: bytes past the window belong to the next
            // window (or the padding) and must behave exactly like the 0x00
            // sentinel — inert separators. Reclassifying them as `special`
            // keeps the carry honest (a token touching the edge does not
            // look continued, comments and quotes stay open); the tape
            // clip below keeps their offsets out of the index.
            raw.newline &= keep;
            raw.backslash &= keep;
            raw.quote &= keep;
            raw.semicolon &= keep;
            raw.blank &= keep;
            raw.special = raw.special & keep | !keep;
        }
        let flat = flatten(&raw, carry);
        hidden |= flat.hidden_newlines;
        extract(flat.fields & keep, offset as u32, &mut out.fields);
        extract(flat.delims & keep, offset as u32, &mut out.delims);
        offset += 64;
    }
    out.hidden_newlines = hidden != 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(positions: &[u32]) -> u64 {
        positions.iter().fold(0u64, |m, &p| m | 1u64 << p)
    }

    struct XorShift(u64);
    impl XorShift {
        fn next(&mut self) -> u64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            self.0
        }
    }

    /// Bit-serial reference for escape marking.
    fn escaped_reference(backslash: u64, pending: &mut bool) -> u64 {
        let mut escaped = 0u64;
        for i in 0..64 {
            if *pending {
                escaped |= 1 << i;
                *pending = false;
            } else if backslash >> i & 1 == 1 {
                *pending = true;
            }
        }
        escaped
    }

    #[test]
    fn escape_marking_matches_bit_serial_reference() {
        // All 16-bit patterns in the low bits and again shifted to the top
        // edge, both carry states.
        for pat in 0..=0xffffu64 {
            for carry_in in [false, true] {
                for mask in [pat, pat << 48, pat | pat << 48] {
                    let (mut a, mut b) = (carry_in, carry_in);
                    let got = find_escaped(mask, &mut a);
                    let want = escaped_reference(mask, &mut b);
                    assert_eq!(got, want, "mask {mask:#x} carry {carry_in}");
                    assert_eq!(a, b, "carry out for {mask:#x} carry {carry_in}");
                }
            }
        }
        // Random dense masks.
        let mut rng = XorShift(0x9e37_79b9_7f4a_7c15);
        for _ in 0..100_000 {
            let mask = rng.next() & rng.next();
            for carry_in in [false, true] {
                let (mut a, mut b) = (carry_in, carry_in);
                assert_eq!(find_escaped(mask, &mut a), escaped_reference(mask, &mut b));
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn prefix_xor_matches_serial_scan() {
        let serial = |x: u64| -> u64 {
            let mut out = 0u64;
            let mut parity = 0u64;
            for i in 0..64 {
                parity ^= x >> i & 1;
                out |= parity << i;
            }
            out
        };
        for x in [0, 1, !0u64, 1 << 63, 0x8000_0000_0000_0001] {
            assert_eq!(prefix_xor(x), serial(x));
        }
        let mut rng = XorShift(42);
        for _ in 0..100_000 {
            let x = rng.next();
            assert_eq!(prefix_xor(x), serial(x));
        }
    }

    #[test]
    fn fast_and_serial_paths_agree_without_comments() {
        // On semicolon-free blocks flatten takes the branch-free path; the
        // serial sweep must produce identical results from any carry. Masks
        // come from simulated bytes so the disjointness the kernels
        // guarantee holds here too.
        let mut rng = XorShift(0xdead_beef_cafe_f00d);
        let alphabet: &[u8] = b"\\\\\\\"\"\"\n a.x";
        for _ in 0..50_000 {
            let mut block = [0u8; 64];
            for b in block.iter_mut() {
                *b = alphabet[(rng.next() % alphabet.len() as u64) as usize];
            }
            let raw = classify_scalar(&block);
            for pend in [false, true] {
                for quo in [false, true] {
                    let carry_in = Carry {
                        escape_pending: pend,
                        in_quoted: quo,
                        in_comment: false,
                        follows: 0,
                    };
                    let mut fast_carry = carry_in;
                    let fast = flatten(&raw, &mut fast_carry);
                    let mut slow_carry = carry_in;
                    let (escaped, in_quoted, in_comment) = sweep(&raw, &mut slow_carry);
                    assert_eq!(fast.escaped, escaped, "raw {raw:?} carry {carry_in:?}");
                    assert_eq!(fast.in_quoted, in_quoted, "raw {raw:?} carry {carry_in:?}");
                    assert_eq!(fast.in_comment, in_comment);
                    // The sweep does not manage `follows`; flatten updates it
                    // after either path, so compare only the sweep's share.
                    assert_eq!(fast_carry.escape_pending, slow_carry.escape_pending);
                    assert_eq!(fast_carry.in_quoted, slow_carry.in_quoted);
                    assert_eq!(fast_carry.in_comment, slow_carry.in_comment);
                }
            }
        }
    }

    /// The worked 64-byte example: a TXT record with a quoted string
    /// containing spaces, a trailing comment, and a newline in the last byte.
    fn txt_block() -> [u8; 64] {
        let line = b"example.com.  3600  IN  TXT  \"v=spf1 ip4:192.0.2.1 -all\"  ; SPF\n";
        assert_eq!(line.len(), 64);
        let mut block = [0u8; 64];
        block.copy_from_slice(line);
        block
    }

    #[test]
    fn txt_example_masks() {
        let raw = classify_scalar(&txt_block());
        assert_eq!(raw.quote, bits(&[29, 55]));
        assert_eq!(raw.semicolon, bits(&[58]));
        assert_eq!(raw.newline, bits(&[63]));
        // The raw blank mask sees the spaces inside the quoted string (36 and
        // 50) and inside the comment (59); flattening removes them.
        assert_eq!(
            raw.blank,
            bits(&[12, 13, 18, 19, 22, 23, 27, 28, 36, 50, 56, 57, 59])
        );

        let mut carry = Carry::default();
        let flat = flatten(&raw, &mut carry);
        assert_eq!(flat.escaped, 0);
        // Opening quote through the last content byte; the closing quote at
        // 55 stays outside so it lands on the delimiter tape.
        assert_eq!(flat.in_quoted, bits(&(29..=54).collect::<Vec<_>>()));
        // Semicolon through 'F'; the newline stays structural.
        assert_eq!(flat.in_comment, bits(&[58, 59, 60, 61, 62]));
        assert_eq!(flat.fields, bits(&[0, 14, 20, 24, 29, 63]));
        assert_eq!(flat.delims, bits(&[12, 18, 22, 27, 55]));
        assert_eq!(flat.hidden_newlines, 0);
        assert_eq!(carry, Carry::default());
    }

    #[test]
    fn txt_example_tapes_on_every_kernel() {
        let block = txt_block();
        let mut buf = block.to_vec();
        buf.extend_from_slice(&[0u8; 64]);
        for kernel in [Kernel::Scalar, Kernel::V128, Kernel::V256] {
            if !kernel.is_available() {
                continue;
            }
            let mut carry = Carry::default();
            let mut out = WindowIndex::default();
            index_window(&buf, 0, 64, kernel, &mut carry, &mut out);
            assert_eq!(out.fields, [0, 14, 20, 24, 29, 63], "{kernel:?}");
            assert_eq!(out.delims, [12, 18, 22, 27, 55], "{kernel:?}");
            assert!(!out.hidden_newlines);
        }
    }

    #[test]
    fn extract_writes_all_offsets() {
        let mut tape = Vec::new();
        extract(0, 10, &mut tape);
        assert!(tape.is_empty());
        extract(bits(&[0, 1, 63]), 100, &mut tape);
        assert_eq!(tape, [100, 101, 163]);
        extract(!0u64, 0, &mut tape);
        assert_eq!(tape.len(), 3 + 64);
        assert_eq!(tape[3..], (0..64).collect::<Vec<u32>>()[..]);
        // Bit counts around the unrolled write width.
        for n in [7, 8, 9, 15, 16, 17] {
            let mut t = Vec::new();
            extract((1u64 << n) - 1, 5, &mut t);
            assert_eq!(t, (5..5 + n as u32).collect::<Vec<u32>>());
        }
    }

    #[test]
    fn escaped_quote_does_not_toggle_quoting() {
        // a\"b is one contiguous token; the quote is escaped.
        let mut block = [b' '; 64];
        block[..5].copy_from_slice(b"a\\\"b\n");
        let raw = classify_scalar(&block);
        let mut carry = Carry::default();
        let flat = flatten(&raw, &mut carry);
        assert_eq!(flat.in_quoted, 0);
        assert_eq!(flat.escaped, bits(&[2]));
        // Token start and the newline; the newline offset also appears as the
        // token's delimiter — one offset on both tapes is legitimate.
        assert_eq!(flat.fields & 0x3f, bits(&[0, 4]));
        assert_eq!(flat.delims & 0x3f, bits(&[4]));
    }

    #[test]
    fn comment_state_carries_across_blocks() {
        // Block 1 opens a comment that only ends in block 2.
        let mut b1 = [b'x'; 64];
        b1[10] = b';';
        let mut b2 = [b'y'; 64];
        b2[5] = b'\n';
        b2[6] = b'z';

        let mut carry = Carry::default();
        let f1 = flatten(&classify_scalar(&b1), &mut carry);
        assert!(carry.in_comment);
        assert_eq!(f1.in_comment, !0u64 << 10);
        let f2 = flatten(&classify_scalar(&b2), &mut carry);
        assert!(!carry.in_comment);
        assert_eq!(f2.in_comment, bits(&[0, 1, 2, 3, 4]));
        // The newline is structural and 'z' starts a fresh token.
        assert_eq!(f2.fields & 0x7f, bits(&[5, 6]));
    }

    #[test]
    fn quote_state_carries_across_blocks() {
        let mut b1 = [b'x'; 64];
        b1[60] = b'"';
        let mut b2 = [b'y'; 64];
        b2[3] = b'"';
        b2[4] = b' ';

        let mut carry = Carry::default();
        let f1 = flatten(&classify_scalar(&b1), &mut carry);
        assert!(carry.in_quoted);
        // The opening quote is a field; the quoted tail of the block is not.
        assert_eq!(f1.fields & (0xfu64 << 60), bits(&[60]));
        let f2 = flatten(&classify_scalar(&b2), &mut carry);
        assert!(!carry.in_quoted);
        // Closing quote is a delimiter, not a field; the next token starts
        // after the space.
        assert_eq!(f2.delims & 0x3f, bits(&[3]));
        assert_eq!(f2.fields & 0x3f, bits(&[5]));
    }
}
