//! Byte classification kernels: 64 input bytes in, six raw bitmasks out.
//!
//! The masks are *raw* in the sense that they ignore all context; escaping,
//! quoting and comments are resolved later from these masks alone, so the
//! kernels stay pure SIMD with no cross-byte dependencies and every kernel is
//! interchangeable bit for bit.

use crate::kernel::Kernel;

/// Context-free classification of one 64-byte block. Bit i describes byte i.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct RawMasks {
    /// 0x0A.
    pub newline: u64,
    /// 0x5C.
    pub backslash: u64,
    /// 0x22.
    pub quote: u64,
    /// 0x3B.
    pub semicolon: u64,
    /// Token separators inside a line: 0x20, 0x09, 0x0D.
    pub blank: u64,
    /// Structural bytes: 0x0A, 0x28, 0x29 and 0x00 (the end-of-data
    /// sentinel; a 0x00 inside actual data is reported by the lexer).
    pub special: u64,
}

/// Bit assignments for the scalar classification table. `special` shares the
/// newline bit by including it in both masks at extraction time.
const C_NEWLINE: u8 = 1 << 0;
const C_BACKSLASH: u8 = 1 << 1;
const C_QUOTE: u8 = 1 << 2;
const C_SEMICOLON: u8 = 1 << 3;
const C_BLANK: u8 = 1 << 4;
const C_SPECIAL: u8 = 1 << 5;

const fn class_table() -> [u8; 256] {
    let mut t = [0u8; 256];
    t[0x0a] = C_NEWLINE | C_SPECIAL;
    t[0x5c] = C_BACKSLASH;
    t[0x22] = C_QUOTE;
    t[0x3b] = C_SEMICOLON;
    t[0x20] = C_BLANK;
    t[0x09] = C_BLANK;
    t[0x0d] = C_BLANK;
    t[0x28] = C_SPECIAL;
    t[0x29] = C_SPECIAL;
    t[0x00] = C_SPECIAL;
    t
}

static CLASS: [u8; 256] = class_table();

pub fn classify_scalar(block: &[u8; 64]) -> RawMasks {
    let mut m = RawMasks::default();
    for (i, &b) in block.iter().enumerate() {
        let c = CLASS[b as usize];
        let bit = 1u64 << i;
        if c & C_NEWLINE != 0 {
            m.newline |= bit;
        }
        if c & C_BACKSLASH != 0 {
            m.backslash |= bit;
        }
        if c & C_QUOTE != 0 {
            m.quote |= bit;
        }
        if c & C_SEMICOLON != 0 {
            m.semicolon |= bit;
        }
        if c & C_BLANK != 0 {
            m.blank |= bit;
        }
        if c & C_SPECIAL != 0 {
            m.special |= bit;
        }
    }
    m
}

#[cfg(target_arch = "x86_64")]
mod x86 {
    use super::RawMasks;
    use std::arch::x86_64::*;

    /// SSE2 kernel: four 16-byte lanes, one compare per target byte. SSE2 is
    /// part of the x86-64 baseline so this path needs no feature detection.
    pub fn classify_v128(block: &[u8; 64]) -> RawMasks {
        // SAFETY: SSE2 is statically available on x86_64; loads read 64
        // in-bounds bytes.
        unsafe {
            let mut m = RawMasks::default();
            for lane in 0..4 {
                let v = _mm_loadu_si128(block.as_ptr().add(lane * 16) as *const __m128i);
                let shift = lane * 16;
                let eq = |byte: u8| -> u64 {
                    let hits = _mm_cmpeq_epi8(v, _mm_set1_epi8(byte as i8));
                    (_mm_movemask_epi8(hits) as u16 as u64) << shift
                };
                let newline = eq(0x0a);
                m.newline |= newline;
                m.backslash |= eq(0x5c);
                m.quote |= eq(0x22);
                m.semicolon |= eq(0x3b);
                m.blank |= eq(0x20) | eq(0x09) | eq(0x0d);
                m.special |= newline | eq(0x28) | eq(0x29) | eq(0x00);
            }
            m
        }
    }

    /// Lookup table for the AVX2 shuffle trick: `table[b & 15]` is compared
    /// for equality against `b` itself, so a 16-entry table recognizes any
    /// byte set whose members have distinct low nibbles. Unclaimed slots get
    /// a filler whose low nibble differs from the slot index, which can never
    /// compare equal. Bytes with the high bit set make VPSHUFB produce 0x00,
    /// which only matches the byte 0x00 — fine, since 0x00 is only ever a
    /// target in the special table, where it legitimately occupies slot 0.
    const fn nibble_table(targets: &[u8]) -> [u8; 16] {
        let mut t = [0u8; 16];
        let mut slot = 0;
        while slot < 16 {
            // Filler: low nibble differs from the slot, high bit clear.
            t[slot] = if slot == 0 { 0x01 } else { 0x00 };
            slot += 1;
        }
        let mut i = 0;
        while i < targets.len() {
            let b = targets[i];
            t[(b & 15) as usize] = b;
            i += 1;
        }
        t
    }

    const BLANK_TABLE: [u8; 16] = nibble_table(&[0x20, 0x09, 0x0d]);
    const SPECIAL_TABLE: [u8; 16] = nibble_table(&[0x0a, 0x28, 0x29, 0x00]);

    /// AVX2 kernel: two 32-byte lanes. Single-byte classes use broadcast
    /// compares; the blank and special sets each collapse into one
    /// shuffle-and-compare through the nibble tables above.
    #[target_feature(enable = "avx2")]
    pub unsafe fn classify_v256(block: &[u8; 64]) -> RawMasks {
        let mut m = RawMasks::default();
        let lo_nibbles = _mm256_set1_epi8(0x0f);
        let blank_tbl = _mm256_broadcastsi128_si256(_mm_loadu_si128(
            BLANK_TABLE.as_ptr() as *const __m128i,
        ));
        let special_tbl = _mm256_broadcastsi128_si256(_mm_loadu_si128(
            SPECIAL_TABLE.as_ptr() as *const __m128i,
        ));
        for lane in 0..2 {
            let v = _mm256_loadu_si256(block.as_ptr().add(lane * 32) as *const __m256i);
            let shift = lane * 32;
            let eq = |byte: u8| -> u64 {
                let hits = _mm256_cmpeq_epi8(v, _mm256_set1_epi8(byte as i8));
                (_mm256_movemask_epi8(hits) as u32 as u64) << shift
            };
            m.newline |= eq(0x0a);
            m.backslash |= eq(0x5c);
            m.quote |= eq(0x22);
            m.semicolon |= eq(0x3b);
            let keyed = |tbl: __m256i| -> u64 {
                let key = _mm256_shuffle_epi8(tbl, _mm256_and_si256(v, lo_nibbles));
                let hits = _mm256_cmpeq_epi8(key, v);
                (_mm256_movemask_epi8(hits) as u32 as u64) << shift
            };
            m.blank |= keyed(blank_tbl);
            m.special |= keyed(special_tbl);
        }
        m
    }
}

/// Classifies one block with the requested kernel. The caller guarantees the
/// kernel is available (checked once per file, not per block).
#[inline]
pub fn classify(block: &[u8; 64], kernel: Kernel) -> RawMasks {
    match kernel {
        Kernel::Scalar => classify_scalar(block),
        #[cfg(target_arch = "x86_64")]
        Kernel::V128 => x86::classify_v128(block),
        #[cfg(target_arch = "x86_64")]
        // SAFETY: availability was verified by the caller via Kernel::is_available.
        Kernel::V256 => unsafe { x86::classify_v256(block) },
        #[cfg(not(target_arch = "x86_64"))]
        Kernel::V128 | Kernel::V256 => classify_scalar(block),
    }
}
