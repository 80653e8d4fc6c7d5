//! Record-type mnemonic recognition.
//!
//! Type names are matched with one hash and one wide compare instead of a
//! string search: load 16 bytes at the token start (the input buffer is
//! always padded, so the load cannot run off the end), zero everything past
//! the token length through a mask table, hash the first 8 bytes into a
//! 256-slot table, then confirm the hit with a single masked 128-bit
//! equality. Verification is exact: every table entry carries its canonical
//! spelling plus a mask with 0x20 set at alphabetic positions, so case is
//! ignored only where an ASCII letter actually sits. Folding the input with
//! 0xDF happens solely for hashing — comparing folded bytes would confuse
//! e.g. 0x12 with '2'.

/// Every recognized mnemonic with its RRTYPE code.
pub const MNEMONICS: [(&str, u16); 67] = [
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

/// Multiplier that hashes all 67 mnemonics into distinct slots. Found by the
/// `typehash-search` binary in this crate; rerun it if the mnemonic list
/// changes. The table construction below fails the build on any collision.
pub const MAGIC: u64 = 0x9331_d328_81d5_d50d;

const FOLD: u64 = 0xdfdf_dfdf_dfdf_dfdf;

/// Hash slot for the masked first 8 token bytes under a given multiplier.
/// Exposed so the multiplier search can try candidates.
#[inline]
pub const fn slot_with(first8: u64, magic: u64) -> usize {
    let k = first8 & FOLD;
    let x = ((k >> 32) ^ k) as u32 as u64;
    (x.wrapping_mul(magic) >> 32) as u8 as usize
}

/// Hash slot for the masked first 8 token bytes (little-endian).
#[inline]
pub const fn slot(first8: u64) -> usize {
    slot_with(first8, MAGIC)
}

/// Masks keeping the first `len` bytes of a 16-byte load, 0 ≤ len ≤ 16.
const fn length_masks() -> [u128; 17] {
    let mut m = [0u128; 17];
    let mut len = 1;
    while len <= 16 {
        m[len] = if len == 16 { !0 } else { (1u128 << (len * 8)) - 1 };
        len += 1;
    }
    m
}

static LENGTH_MASK: [u128; 17] = length_masks();

#[derive(Clone, Copy)]
struct Entry {
    /// Canonical (upper-case) spelling, zero padded to 16 bytes.
    canon: u128,
    /// 0x20 at positions holding an ASCII letter; case folds only there.
    alpha: u128,
    code: u16,
}

/// A canon no masked input can equal: token lengths are capped at 15, so a
/// masked load always contains at least one zero byte.
const EMPTY: Entry = Entry { canon: !0, alpha: 0, code: 0 };

const fn make_entry(name: &str, code: u16) -> Entry {
    let bytes = name.as_bytes();
    assert!(bytes.len() <= 15);
    let mut canon = [0u8; 16];
    let mut alpha = [0u8; 16];
    let mut i = 0;
    while i < bytes.len() {
        canon[i] = bytes[i];
        if bytes[i].is_ascii_uppercase() {
            alpha[i] = 0x20;
        }
        // The list is upper-case; anything else here is a digit or hyphen.
        assert!(!bytes[i].is_ascii_lowercase());
        i += 1;
    }
    Entry {
        canon: u128::from_le_bytes(canon),
        alpha: u128::from_le_bytes(alpha),
        code,
    }
}

const fn build_table() -> [Entry; 256] {
    let mut table = [EMPTY; 256];
    let mut i = 0;
    while i < MNEMONICS.len() {
        let (name, code) = MNEMONICS[i];
        let entry = make_entry(name, code);
        let s = slot(entry.canon as u64);
        // A collision here means MAGIC no longer works for the list; the
        // build stops rather than producing a table that misses types.
        assert!(table[s].code == 0 && table[s].canon == !0, "hash collision");
        table[s] = entry;
        i += 1;
    }
    table
}

static TABLE: [Entry; 256] = build_table();

/// Loads 16 bytes starting at `pos`. The caller guarantees padding.
#[inline]
pub fn load16(buf: &[u8], pos: usize) -> u128 {
    u128::from_le_bytes(buf[pos..pos + 16].try_into().unwrap())
}

/// Looks up a type mnemonic given its raw 16-byte load and length.
/// Case-insensitive on letters, exact everywhere else. Escaped spellings
/// don't match — the raw token bytes are compared as they appear.
#[inline]
pub fn find(first16: u128, len: usize) -> Option<u16> {
    if len == 0 || len > 15 {
        return None;
    }
    let masked = first16 & LENGTH_MASK[len];
    let e = &TABLE[slot(masked as u64)];
    if (masked ^ e.canon) & !e.alpha == 0 {
        Some(e.code)
    } else {
        None
    }
}

/// Recognizes a type token in either spelling: a known mnemonic or the
/// `TYPE<n>` form (case-insensitive, `n` in 0..=65535, leading zeros fine).
pub fn recognize(token: &[u8]) -> Option<u16> {
    if let Some(code) = find_bytes(token) {
        return Some(code);
    }
    let digits = match token.split_at_checked(4) {
        Some((head, rest)) if head.eq_ignore_ascii_case(b"TYPE") && !rest.is_empty() => rest,
        _ => return None,
    };
    let mut value = 0u32;
    for &d in digits {
        if !d.is_ascii_digit() {
            return None;
        }
        value = value * 10 + (d - b'0') as u32;
        if value > u16::MAX as u32 {
            return None;
        }
    }
    Some(value as u16)
}

/// Slice-based lookup for callers without a padded buffer (tests, the
/// reference parser); copies into a zeroed 16-byte scratch first.
pub fn find_bytes(token: &[u8]) -> Option<u16> {
    if token.is_empty() || token.len() > 15 {
        return None;
    }
    let mut padded = [0u8; 16];
    padded[..token.len()].copy_from_slice(token);
    find(u128::from_le_bytes(padded), token.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_mnemonics_resolve() {
        for (name, code) in MNEMONICS {
            assert_eq!(find_bytes(name.as_bytes()), Some(code), "{name}");
            assert_eq!(
                find_bytes(name.to_ascii_lowercase().as_bytes()),
                Some(code),
                "{name} lower"
            );
        }
    }

    #[test]
    fn mixed_case_and_misses() {
        assert_eq!(find_bytes(b"NsEc3pArAm"), Some(51));
        assert_eq!(find_bytes(b"Nsap-Ptr"), Some(23));
        assert_eq!(find_bytes(b""), None);
        assert_eq!(find_bytes(b"AA"), None);
        assert_eq!(find_bytes(b"AAAAA"), None);
        assert_eq!(find_bytes(b"NSEC3PARAMS"), None);
        assert_eq!(find_bytes(b"TXTX"), None);
        assert_eq!(find_bytes(b"MXMXMXMXMXMXMXMX"), None); // over length gate
    }

    #[test]
    fn prefixes_do_not_match() {
        // Shorter or longer cuts of real mnemonics must miss even when they
        // hash into an occupied slot — unless the cut is itself a mnemonic,
        // as with NSEC3 → NSEC.
        let is_known = |t: &[u8]| MNEMONICS.iter().any(|(n, _)| n.as_bytes() == t);
        for (name, _) in MNEMONICS {
            if name.len() > 1 {
                let cut = &name.as_bytes()[..name.len() - 1];
                if !is_known(cut) {
                    assert_eq!(find_bytes(cut), None, "{name} cut");
                }
            }
            let mut longer = name.as_bytes().to_vec();
            longer.push(b'X');
            if !is_known(&longer) {
                assert_eq!(find_bytes(&longer), None, "{name}X");
            }
        }
    }

    #[test]
    fn generic_type_spelling() {
        assert_eq!(recognize(b"A"), Some(1));
        assert_eq!(recognize(b"TYPE1"), Some(1));
        assert_eq!(recognize(b"type62"), Some(62));
        assert_eq!(recognize(b"TyPe0062"), Some(62));
        assert_eq!(recognize(b"TYPE65535"), Some(65535));
        assert_eq!(recognize(b"TYPE65536"), None);
        assert_eq!(recognize(b"TYPE000000000001"), Some(1));
        assert_eq!(recognize(b"TYPE"), None);
        assert_eq!(recognize(b"TYPE1x"), None);
        assert_eq!(recognize(b"TYPE-1"), None);
        assert_eq!(recognize(b"TYP1"), None);
        assert_eq!(recognize(b"bogus"), None);
    }

    #[test]
    fn fold_confusables_rejected() {
        // 0x12 folds to the same value as '2' under & 0xDF; verification
        // must still reject it. "X25" is the natural victim.
        assert_eq!(find_bytes(b"X25"), Some(19));
        assert_eq!(find_bytes(&[b'X', 0x12, b'5']), None);
        assert_eq!(find_bytes(&[b'X', b'2', 0x15]), None);
        // NSAP-PTR's hyphen must not fold either: 0x0D folds like '-'.
        let mut t = b"NSAP-PTR".to_vec();
        t[4] = 0x0d;
        assert_eq!(find_bytes(&t), None);
    }

    #[test]
    fn non_ascii_bytes_never_match() {
        assert_eq!(find_bytes(&[0xff; 15]), None);
        assert_eq!(find_bytes(&[0x80, 0x81]), None);
        assert_eq!(find_bytes(&[b'A' | 0x80]), None);
    }
}
