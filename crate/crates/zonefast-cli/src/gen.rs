//! Deterministic synthetic zone generation.
//!
//! Output is a pure function of (record count, profile, seed). Profiles
//! imitate the record-type mix of real TLD zones: `com` is roughly half NS
//! records plus DS/RRSIG, `se` is DNSSEC-dense with RRSIG dominating, and
//! `mixed` spreads records across every typed driver for coverage-style
//! workloads. Owner names use random labels of at most 32 octets.

use std::io::{self, Write};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum Profile {
    /// ~50% NS, remainder split between DS and RRSIG.
    Com,
    /// ~44% RRSIG with NSEC3/DS/NS making up the rest.
    Se,
    /// A broad spread across all typed record drivers.
    Mixed,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Com => "com",
            Profile::Se => "se",
            Profile::Mixed => "mixed",
        }
    }
}

const HEX: &[u8; 16] = b"0123456789ABCDEF";
const B32HEX: &[u8; 32] = b"0123456789ABCDEFGHIJKLMNOPQRSTUV";
const B64: &[u8; 64] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

/// Uppercase hexadecimal.
pub fn encode_base16(data: &[u8]) -> String {
    let mut out = String::with_capacity(data.len() * 2);
    for &b in data {
        out.push(HEX[(b >> 4) as usize] as char);
        out.push(HEX[(b & 15) as usize] as char);
    }
    out
}

/// RFC 4648 base32hex with padding.
pub fn encode_base32hex(data: &[u8]) -> String {
    let mut out = String::with_capacity(data.len().div_ceil(5) * 8);
    for group in data.chunks(5) {
        let mut block = [0u8; 5];
        block[..group.len()].copy_from_slice(group);
        let v = u64::from(block[0]) << 32
            | u64::from(block[1]) << 24
            | u64::from(block[2]) << 16
            | u64::from(block[3]) << 8
            | u64::from(block[4]);
        // Bits used by the input bytes, rounded up to 5-bit symbols.
        let symbols = (group.len() * 8).div_ceil(5);
        for s in 0..8 {
            if s < symbols {
                out.push(B32HEX[((v >> (35 - 5 * s)) & 31) as usize] as char);
            } else {
                out.push('=');
            }
        }
    }
    out
}

/// RFC 4648 base64 with padding.
pub fn encode_base64(data: &[u8]) -> String {
    let mut out = String::with_capacity(data.len().div_ceil(3) * 4);
    for group in data.chunks(3) {
        let mut block = [0u8; 3];
        block[..group.len()].copy_from_slice(group);
        let v = u32::from(block[0]) << 16 | u32::from(block[1]) << 8 | u32::from(block[2]);
        let symbols = (group.len() * 8).div_ceil(6);
        for s in 0..4 {
            if s < symbols {
                out.push(B64[((v >> (18 - 6 * s)) & 63) as usize] as char);
            } else {
                out.push('=');
            }
        }
    }
    out
}

fn push_label(line: &mut String, rng: &mut ChaCha8Rng) {
    const ALPHA: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789";
    let len = rng.gen_range(4..=32usize);
    line.push(ALPHA[rng.gen_range(0..26)] as char); // letter first, looks real
    for _ in 1..len {
        line.push(ALPHA[rng.gen_range(0..ALPHA.len())] as char);
    }
}

fn push_hex(line: &mut String, rng: &mut ChaCha8Rng, bytes: usize) {
    for _ in 0..bytes {
        let b: u8 = rng.gen();
        line.push(HEX[(b >> 4) as usize] as char);
        line.push(HEX[(b & 15) as usize] as char);
    }
}

fn push_b32hex_20(line: &mut String, rng: &mut ChaCha8Rng) {
    // 20 bytes encode to exactly 32 symbols, no padding needed.
    let mut raw = [0u8; 20];
    rng.fill(&mut raw);
    line.push_str(&encode_base32hex(&raw));
}

fn push_b64(line: &mut String, rng: &mut ChaCha8Rng, bytes: usize) {
    let mut raw = vec![0u8; bytes];
    rng.fill(raw.as_mut_slice());
    line.push_str(&encode_base64(&raw));
}

fn push_ttl(line: &mut String, rng: &mut ChaCha8Rng) {
    line.push_str(["300", "3600", "86400", "172800"][rng.gen_range(0..4)]);
}

/// Two epoch timestamps (expiration, inception) a month or so apart.
fn push_validity(line: &mut String, rng: &mut ChaCha8Rng) {
    use std::fmt::Write;
    let inception = 1_750_000_000u32 + rng.gen_range(0..50_000_000);
    let expiration = inception + 2_600_000 + rng.gen_range(0..500_000);
    write!(line, "{expiration} {inception}").unwrap();
}

fn push_rrsig(line: &mut String, rng: &mut ChaCha8Rng, covered: &str, zone: &str) {
    use std::fmt::Write;
    write!(line, "RRSIG {covered} 8 2 86400 ").unwrap();
    push_validity(line, rng);
    write!(line, " {} {zone} ", rng.gen::<u16>()).unwrap();
    push_b64(line, rng, 96);
}

fn push_record(line: &mut String, rng: &mut ChaCha8Rng, profile: Profile) {
    use std::fmt::Write;
    match profile {
        Profile::Com => {
            push_label(line, rng);
            line.push_str(".com. ");
            let roll: f64 = rng.gen();
            if roll < 0.50 {
                line.push_str("172800 IN NS ns");
                write!(line, "{}", rng.gen_range(1..=4u8)).unwrap();
                line.push('.');
                push_label(line, rng);
                line.push_str(".net.");
            } else if roll < 0.75 {
                write!(line, "86400 IN DS {} 13 2 ", rng.gen::<u16>()).unwrap();
                push_hex(line, rng, 32);
            } else {
                line.push_str("86400 IN ");
                push_rrsig(line, rng, "DS", "com.");
            }
        }
        Profile::Se => {
            let roll: f64 = rng.gen();
            if roll < 0.44 {
                push_label(line, rng);
                line.push_str(".se. 86400 IN ");
                let covered = ["NSEC3", "DS", "NS", "SOA", "DNSKEY"][rng.gen_range(0..5)];
                push_rrsig(line, rng, covered, "se.");
            } else if roll < 0.66 {
                push_b32hex_20(line, rng);
                line.push_str(".se. 3600 IN NSEC3 1 1 ");
                write!(line, "{} ", rng.gen_range(0..=20u8)).unwrap();
                if rng.gen_bool(0.2) {
                    line.push('-');
                } else {
                    push_hex(line, rng, 8);
                }
                line.push(' ');
                push_b32hex_20(line, rng);
                line.push_str(" NS DS RRSIG");
            } else if roll < 0.83 {
                push_label(line, rng);
                write!(line, ".se. 86400 IN DS {} 8 2 ", rng.gen::<u16>()).unwrap();
                push_hex(line, rng, 32);
            } else {
                push_label(line, rng);
                line.push_str(".se. 172800 IN NS ns");
                write!(line, "{}", rng.gen_range(1..=4u8)).unwrap();
                line.push('.');
                push_label(line, rng);
                line.push_str(".se.");
            }
        }
        Profile::Mixed => {
            push_label(line, rng);
            line.push_str(".example. ");
            push_ttl(line, rng);
            line.push_str(" IN ");
            let roll: f64 = rng.gen();
            if roll < 0.18 {
                write!(
                    line,
                    "A {}.{}.{}.{}",
                    rng.gen::<u8>(),
                    rng.gen::<u8>(),
                    rng.gen::<u8>(),
                    rng.gen::<u8>()
                )
                .unwrap();
            } else if roll < 0.30 {
                write!(
                    line,
                    "AAAA 2001:db8:{:x}:{:x}::{:x}",
                    rng.gen::<u16>(),
                    rng.gen::<u16>(),
                    rng.gen::<u16>()
                )
                .unwrap();
            } else if roll < 0.42 {
                line.push_str("NS ns1.");
                push_label(line, rng);
                line.push_str(".example.");
            } else if roll < 0.50 {
                write!(line, "MX {} mail.", rng.gen_range(0..=100u8)).unwrap();
                push_label(line, rng);
                line.push_str(".example.");
            } else if roll < 0.62 {
                line.push_str("TXT \"");
                const SAFE: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789=:um";
                for _ in 0..rng.gen_range(10..=40) {
                    line.push(SAFE[rng.gen_range(0..SAFE.len())] as char);
                }
                line.push('"');
            } else if roll < 0.70 {
                write!(line, "DS {} 8 2 ", rng.gen::<u16>()).unwrap();
                push_hex(line, rng, 32);
            } else if roll < 0.78 {
                push_rrsig(line, rng, "A", "example.");
            } else if roll < 0.84 {
                line.push_str("NSEC ");
                push_label(line, rng);
                line.push_str(".example. A AAAA RRSIG NSEC");
            } else if roll < 0.90 {
                line.push_str("NSEC3 1 0 ");
                write!(line, "{} ", rng.gen_range(0..=20u8)).unwrap();
                push_hex(line, rng, 4);
                line.push(' ');
                push_b32hex_20(line, rng);
                line.push_str(" A RRSIG");
            } else if roll < 0.95 {
                line.push_str("CNAME ");
                push_label(line, rng);
                line.push_str(".example.");
            } else {
                line.push_str("SVCB 1 svc.");
                push_label(line, rng);
                write!(line, ".example. alpn=h2,h3 port={}", rng.gen_range(1..=65535u32)).unwrap();
            }
        }
    }
    line.push('\n');
}

fn apex(profile: Profile) -> &'static str {
    match profile {
        Profile::Com => "com.",
        Profile::Se => "se.",
        Profile::Mixed => "example.",
    }
}

/// Writes `records` records for `profile` under `seed`. The first record is
/// always the zone's SOA; the rest follow the profile's type mix.
pub fn generate(records: u64, profile: Profile, seed: u64, out: &mut impl Write) -> io::Result<()> {
    use std::fmt::Write as _;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut line = String::with_capacity(256);
    let zone = apex(profile);
    write!(
        line,
        "{zone} 900 IN SOA a.ns.{zone} hostmaster.{zone} {} 1800 900 604800 86400\n",
        1_700_000_000u32 + rng.gen_range(0..100_000_000)
    )
    .unwrap();
    out.write_all(line.as_bytes())?;
    for _ in 1..records {
        line.clear();
        push_record(&mut line, &mut rng, profile);
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// In-memory convenience wrapper around [`generate`].
pub fn generate_vec(records: u64, profile: Profile, seed: u64) -> Vec<u8> {
    let mut out = Vec::new();
    generate(records, profile, seed, &mut out).expect("writing to a Vec cannot fail");
    out
}
