//! Finds and checks multipliers for the record-type hash.
//!
//! Run with no arguments to verify the pinned `MAGIC` still hashes every
//! mnemonic into a distinct slot and to print a few fresh candidates (useful
//! when the mnemonic list grows and the pinned value stops working). The
//! search is seeded, so it prints the same candidates every run.

use zonefast::rrtype::{slot_with, MAGIC, MNEMONICS};

fn keys() -> Vec<u64> {
    MNEMONICS
        .iter()
        .map(|(name, _)| {
            let mut first8 = [0u8; 8];
            let n = name.len().min(8);
            first8[..n].copy_from_slice(&name.as_bytes()[..n]);
            u64::from_le_bytes(first8)
        })
        .collect()
}

fn is_perfect(magic: u64, keys: &[u64]) -> bool {
    let mut seen = [false; 256];
    for &k in keys {
        let s = slot_with(k, magic);
        if seen[s] {
            return false;
        }
        seen[s] = true;
    }
    true
}

fn main() {
    let keys = keys();

    {
        let mut folded: Vec<u64> = keys
            .iter()
            .map(|&k| {
                let k = k & 0xdfdf_dfdf_dfdf_dfdf;
                (k >> 32) ^ k & 0xffff_ffff
            })
            .collect();
        folded.sort_unstable();
        folded.dedup();
        if folded.len() != keys.len() {
            eprintln!("folded 8-byte keys collide; no multiplier can help");
            std::process::exit(1);
        }
    }

    if is_perfect(MAGIC, &keys) {
        println!("pinned {MAGIC:#018x}: perfect over {} mnemonics", keys.len());
    } else {
        println!("pinned {MAGIC:#018x}: COLLIDES — pick a candidate below");
    }

    // Plain xorshift so the candidate list is reproducible.
    let mut state: u64 = 0x5eed_0bad_f00d_cafe;
    let mut tries: u64 = 0;
    let mut found = 0;
    while found < 5 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        tries += 1;
        let candidate = state | 1;
        if is_perfect(candidate, &keys) {
            found += 1;
            println!("candidate {candidate:#018x} (after {tries} tries)");
        }
    }
}
