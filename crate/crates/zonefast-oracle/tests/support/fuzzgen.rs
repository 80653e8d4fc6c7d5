//! Deterministic input generator for the differential fuzz runs.
//!
//! Three families: structured (syntactically plausible zones with deliberate
//! fault injection), token soup (valid vocabulary in random order), and
//! near-arbitrary bytes, plus a rare giant-token mode.  Every case derives
//! its own seed from (base seed, case index), so any failure reproduces in
//! isolation.  The pinned `CASES`/`BASE_SEED` pair is the configuration the
//! acceptance gate runs.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use zonefast_types::{ParserOptions, Ttl, WireName};

pub const CASES: usize = 100_000;
pub const BASE_SEED: u64 = 0x5A0E_D1FF_2026_0825;

fn pick<'a>(rng: &mut ChaCha8Rng, options: &[&'a str]) -> &'a str {
    options[rng.gen_range(0..options.len())]
}

fn ws(rng: &mut ChaCha8Rng) -> &'static str {
    pick(rng, &[" ", " ", " ", "  ", "\t", " \t"])
}

/// Owner and rdata names, valid and broken, plus precomputed monsters that
/// stress the label/name length limits and the encoder's scratch budget.
fn name(rng: &mut ChaCha8Rng, monsters: &[String]) -> String {
    if rng.gen_bool(0.04) {
        return monsters[rng.gen_range(0..monsters.len())].clone();
    }
    pick(
        rng,
        &[
            "example.com.",
            "a.example.com.",
            "www",
            "mail.sub",
            "@",
            ".",
            "*.wild.example.",
            "_service._tcp",
            "a\\.b.example.",
            "\\064odd",
            "x..y.",
            "a..",
            ".hidden",
            "label-with-dash",
            "123",
            "a\\999b",
            "end\\",
            "CaSe.MiXeD.",
            "xn--nxasmq6b.example.",
            "a.b.c.d.e.f.g.h.",
        ],
    )
    .to_string()
}

fn ttl_text(rng: &mut ChaCha8Rng) -> &'static str {
    pick(
        rng,
        &[
            "0",
            "1",
            "300",
            "3600",
            "86400",
            "007",
            "2147483647",
            "2147483648",
            "4294967295",
            "99999999999",
        ],
    )
}

fn class_text(rng: &mut ChaCha8Rng) -> &'static str {
    pick(
        rng,
        &[
            "IN", "IN", "IN", "in", "Cs", "CH", "HS", "CLASS0", "CLASS1", "CLASS255",
            "CLASS65535", "CLASS65536", "CLASSx",
        ],
    )
}

fn rdata_for(rng: &mut ChaCha8Rng, ty: &str, monsters: &[String]) -> String {
    match ty {
        "A" => pick(
            rng,
            &[
                "192.0.2.1",
                "0.0.0.0",
                "255.255.255.255",
                "256.1.1.1",
                "1.2.3",
                "1.2.3.4.5",
                "01.02.003.004",
                "1..2.3",
                "a.b.c.d",
                "1.2.3.4x",
                "\"192.0.2.1\"",
                "",
            ],
        )
        .to_string(),
        "AAAA" => pick(
            rng,
            &[
                "2001:db8::1",
                "::",
                "::1",
                "1:2:3:4:5:6:7:8",
                "1:2:3:4:5:6:7:8:9",
                "::ffff:1.2.3.4",
                "1::2::3",
                "fe80:",
                ":fe80",
                "12345::",
                "g::1",
                "1:2:3:4:5:6:1.2.3.4",
                "1:2:3:4:5:6:7:1.2.3.4",
                "2001:DB8::A",
                "",
            ],
        )
        .to_string(),
        "NS" | "CNAME" | "PTR" => name(rng, monsters),
        "MX" => format!(
            "{}{}{}",
            pick(rng, &["10", "0", "65535", "65536", "-1", "ten"]),
            ws(rng),
            name(rng, monsters)
        ),
        "SOA" => format!(
            "{} {} {} {} {} {} {}",
            name(rng, monsters),
            pick(rng, &["hostmaster.example.com.", "root", "@", "\\@.example."]),
            pick(rng, &["1", "2024010101", "4294967295", "4294967296", "x"]),
            pick(rng, &["7200", "1h"]),
            pick(rng, &["3600", "900"]),
            pick(rng, &["1209600", "604800"]),
            pick(rng, &["300", "86400"]),
        ),
        "TXT" => pick(
            rng,
            &[
                "\"hello\"",
                "\"a b\" \"c\"",
                "unquoted",
                "\"esc\\\\ape\\034quote\"",
                "\"nul\\000byte\"",
                "\"tab\\009ok\"",
                "\"\"",
                "\"two\nlines\"",
                "one two three",
                "\"v=spf1 include:_spf.example.com ~all\"",
                "",
            ],
        )
        .to_string(),
        "DS" => pick(
            rng,
            &[
                "12345 8 2 deadbeef",
                "12345 8 2 DEADBEEF",
                "0 0 0 00",
                "70000 8 2 aa",
                "12345 256 2 aa",
                "12345 8 2 xyz",
                "12345 8 2 abc",
                "12345 8 2",
                "12345 8 2 dead beef",
                "12345 8 2 dead beef ee",
            ],
        )
        .to_string(),
        "DNSKEY" => pick(
            rng,
            &[
                "256 3 8 AQPJ////4Q==",
                "257 3 8 AQ==",
                "256 3 8 A",
                "256 3 8 ====",
                "256 3 8 AB==",
                "256 3 8 AQ = =",
                "256 3 8 aGVsbG8h",
                "256 3 8",
            ],
        )
        .to_string(),
        "RRSIG" => pick(
            rng,
            &[
                "A 8 2 3600 20240101000000 20231201000000 12345 example.com. AQ==",
                "MX 8 2 3600 1704067200 1701388800 12345 example.com. aGVsbG8h",
                "TYPE65535 8 2 3600 20380119031407 19700101000000 0 . AA==",
                "A 8 2 3600 20241301000000 20231201000000 12345 example.com. AQ==",
                "A 8 2 3600 123456789012 20231201000000 12345 example.com. AQ==",
                "BOGUS 8 2 3600 20240101000000 20231201000000 12345 example.com. AQ==",
                "A 256 2 3600 20240101000000 20231201000000 12345 example.com. AQ==",
                "A 8 2 3600 20240101000000 20231201000000 12345 relative AQ==",
                "A 8 2 3600 20240101000000 20231201000000 12345 example.com.",
            ],
        )
        .to_string(),
        "NSEC" => pick(
            rng,
            &[
                "host.example.com. A MX RRSIG NSEC",
                "host.example.com.",
                "host.example.com. A A A",
                "host.example.com. TYPE1 TYPE256 TYPE32769",
                "host.example.com. BOGUS",
                "host.example.com. A \"MX\"",
                "",
            ],
        )
        .to_string(),
        "NSEC3" => pick(
            rng,
            &[
                "1 0 12 aabbccdd CPNMUOJ1E8CQ A MX",
                "1 1 0 - 00",
                "1 0 12 - CPNMUOJ1E8 SOA RRSIG",
                "1 0 12 xyz CPNMUOJ1E8",
                "1 0 12 aabb xyz!",
                "2 0 65536 - 00",
                "1 0 12 aabbccdd -",
                "1 0 12 - CPNMUOJ1E8",
            ],
        )
        .to_string(),
        "SVCB" | "HTTPS" => pick(
            rng,
            &[
                "1 .",
                "0 foo.example.com.",
                "1 . alpn=h2,h3",
                "1 . alpn=h2 port=443",
                "1 . port=443 port=80",
                "1 . mandatory=alpn,port alpn=h2 port=1",
                "1 . mandatory=port,port port=53",
                "1 . unknown=x",
                "1 . alpn=",
                "1 . alpn=\"h2,h3\"",
                "1 . alpn=\"part1\\\\,part2,h2\"",
                "1 . key7=blob",
                "1 . key7=\"quoted blob\"",
                "1 . key65535=x",
                "1 . key65536=x",
                "1 . key1=generic-alpn",
                "1 . no-default-alpn",
                "1 . no-default-alpn=x",
                "1 . ipv4hint=192.0.2.1,192.0.2.2",
                "1 . ipv4hint=192.0.2.300",
                "1 . ipv6hint=::1,2001:db8::2",
                "1 . ipv6hint=gg::1",
                "1 . ech=AEX+DQBBmgAgACA",
                "1 . ech=!!",
                "1 . port=\\053",
                "1 . port",
                "1 . alpn=h2,,h3",
                "65535 . port=65535",
                "65536 . port=1",
            ],
        )
        .to_string(),
        // Types without a typed driver: generic rdata or deliberate misuse.
        _ => pick(
            rng,
            &[
                "\\# 4 c0000201",
                "\\# 0",
                "\\# 4 c000 0201",
                "\\# 3 c0000201",
                "\\# 2 xyzw",
                "\\# 1",
                "plain text",
                "",
            ],
        )
        .to_string(),
    }
}

fn type_text(rng: &mut ChaCha8Rng) -> &'static str {
    pick(
        rng,
        &[
            "A", "A", "A", "a", "AAAA", "NS", "ns", "CNAME", "PTR", "MX", "mx", "TXT", "SOA",
            "DS", "DNSKEY", "RRSIG", "NSEC", "NSEC3", "SVCB", "HTTPS", "TYPE262", "TYPE0",
            "TYPE65535", "TYPE65536", "NULL", "LOC", "SPF", "NAPTR", "BOGUSTYPE",
        ],
    )
}

fn directive(rng: &mut ChaCha8Rng) -> String {
    pick(
        rng,
        &[
            "$ORIGIN example.com.",
            "$ORIGIN sub",
            "$origin example.net.",
            "$ORIGIN a b",
            "$ORIGIN",
            "$ORIGIN \"q.example.\"",
            "$ORIGIN ..bad.",
            "$TTL 300",
            "$TTL 0",
            "$TTL 2147483647",
            "$TTL 2147483648",
            "$TTL x",
            "$TTL",
            "$TTL 1 2",
            "$ttl 600",
            "$BOGUS x",
            "$",
            "$INCLUDE fuzz_no_such_file.zone",
            "$INCLUDE /dev/null",
            "$INCLUDE",
        ],
    )
    .to_string()
}

/// One syntactically plausible entry (record, directive, comment, or blank).
fn push_entry(rng: &mut ChaCha8Rng, out: &mut String, monsters: &[String]) {
    match rng.gen_range(0..100u32) {
        0..=11 => {
            out.push_str(&directive(rng));
            out.push('\n');
        }
        12..=16 => {
            out.push_str(pick(rng, &["; a comment\n", ";\n", ";;;; $ORIGIN not.real.\n"]));
        }
        17..=21 => {
            out.push_str(pick(rng, &["\n", "   \n", "\t\n", " ;c\n"]));
        }
        _ => {
            // A record: owner (or inherited), shuffled header, type, rdata.
            let indented = rng.gen_bool(0.3);
            if indented {
                out.push_str(pick(rng, &[" ", "\t", "    "]));
            } else {
                out.push_str(&name(rng, monsters));
                out.push_str(ws(rng));
            }
            let mut header: Vec<String> = Vec::new();
            if rng.gen_bool(0.5) {
                header.push(ttl_text(rng).to_string());
            }
            if rng.gen_bool(0.4) {
                header.push(class_text(rng).to_string());
            }
            if rng.gen_bool(0.15) {
                header.shuffle(rng);
            }
            for h in &header {
                out.push_str(h);
                out.push_str(ws(rng));
            }
            let ty = type_text(rng);
            out.push_str(ty);
            let rdata = rdata_for(rng, ty, monsters);
            if !rdata.is_empty() {
                out.push_str(ws(rng));
                // Sometimes wrap multi-token rdata in a group across lines.
                if rng.gen_bool(0.15) && !rdata.contains('"') && rdata.contains(' ') {
                    out.push_str("( ");
                    for part in rdata.split(' ') {
                        out.push_str(part);
                        out.push_str(pick(rng, &[" ", "\n\t", " ; note\n ", "\n"]));
                    }
                    out.push(')');
                } else {
                    out.push_str(&rdata);
                }
            }
            if rng.gen_bool(0.1) {
                out.push_str(" ; trailing");
            }
            out.push_str(if rng.gen_bool(0.05) { "\r\n" } else { "\n" });
        }
    }
}

fn gen_structured(rng: &mut ChaCha8Rng, monsters: &[String]) -> Vec<u8> {
    let mut out = String::new();
    for _ in 0..rng.gen_range(1..=12) {
        push_entry(rng, &mut out, monsters);
    }
    let mut data = out.into_bytes();
    // Strip the final newline sometimes: EOF-terminated entries are special.
    if rng.gen_bool(0.15) && data.last() == Some(&b'\n') {
        data.pop();
    }
    // Rare single-byte mutation keeps inputs near-valid but surprising.
    if rng.gen_bool(0.07) && !data.is_empty() {
        let at = rng.gen_range(0..data.len());
        match rng.gen_range(0..3u32) {
            0 => data[at] = rng.gen(),
            1 => data.insert(at, *pick(rng, &["\\", "\"", "(", ")", ";", "\n", "$", "\0"]).as_bytes().first().unwrap()),
            _ => {
                data.remove(at);
            }
        }
    }
    data
}

fn gen_soup(rng: &mut ChaCha8Rng) -> Vec<u8> {
    const VOCAB: &[&str] = &[
        "example.com.", "@", ".", "3600", "IN", "A", "AAAA", "MX", "TXT", "NSEC", "SOA",
        "TYPE262", "CLASS1", "\\#", "192.0.2.1", "2001:db8::1", "\"str\"", "(", ")", ";c",
        "$ORIGIN", "$TTL", "$INCLUDE", "300", "\\046", "a\\.b", "..", "\"a\nb\"", "0",
        "65536", "deadbeef", "AQ==", "key7=x", "port=53", "alpn=h2", "-", "om\\",
        "\"unterminated", "12345", "8", "2", "h2,h3", "mandatory=alpn",
    ];
    const SEP: &[&str] = &[" ", " ", "\t", "\n", " ;x\n", ""];
    let mut out = String::new();
    for _ in 0..rng.gen_range(1..=60) {
        out.push_str(pick(rng, VOCAB));
        out.push_str(pick(rng, SEP));
    }
    if rng.gen_bool(0.7) {
        out.push('\n');
    }
    out.into_bytes()
}

fn gen_bytes(rng: &mut ChaCha8Rng) -> Vec<u8> {
    const ALPHA: &[u8] =
        b"abcdefghijklmnopqrstuvwxyzABCDEFXYZ0123456789.-_\\\"();$=,:@#*+/ \t\r\n";
    let len = rng.gen_range(0..400);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        if rng.gen_bool(0.02) {
            out.push(rng.gen());
        } else {
            out.push(ALPHA[rng.gen_range(0..ALPHA.len())]);
        }
    }
    out
}

/// A few giant-token cases against a small window cap.
fn gen_long_tokens(rng: &mut ChaCha8Rng) -> Vec<u8> {
    let n = rng.gen_range(3500..6000);
    let mut out = String::from("big.example. 300 IN TXT ");
    match rng.gen_range(0..3u32) {
        0 => out.push_str(&"x".repeat(n)),
        1 => {
            out.push('"');
            out.push_str(&"y".repeat(n));
            out.push('"');
        }
        _ => {
            out.push('"');
            out.push_str(&"z\n".repeat(n / 2));
            // Leave it unterminated half the time.
            if rng.gen_bool(0.5) {
                out.push('"');
            }
        }
    }
    out.push('\n');
    out.into_bytes()
}

pub fn build_monsters() -> Vec<String> {
    vec![
        format!("{}.", "l".repeat(63)),
        format!("{}.", "l".repeat(64)),
        format!("{}a.", "a.".repeat(126)),
        format!("{}a.", "a.".repeat(127)),
        "a.".repeat(200),
        format!("{}\\9", "x".repeat(630)),
        format!("{}", "x".repeat(700)),
        format!("{}.tail.", "\\065\\066\\067".repeat(30)),
        format!("{}b", "b.".repeat(300)),
    ]
}

fn gen_options(rng: &mut ChaCha8Rng) -> ParserOptions {
    let mut options = ParserOptions::default();
    if rng.gen_bool(0.3) {
        let wire = b"\x07example\x03com\x00".to_vec();
        options.origin = Some(WireName::from_wire(wire).unwrap());
    }
    if rng.gen_bool(0.2) {
        options.max_window_bytes = 4096;
    }
    if rng.gen_bool(0.1) {
        options.default_ttl = Ttl(rng.gen_range(0..1u32 << 31));
    }
    if rng.gen_bool(0.1) {
        options.strict_mode = true;
    }
    if rng.gen_bool(0.1) {
        options.max_include_depth = rng.gen_range(0..4);
    }
    options
}

/// Input and options for fuzz case `i` under `base_seed`.  Pure function of
/// its arguments: failures reproduce standalone.
pub fn gen_case(base_seed: u64, i: usize, monsters: &[String]) -> (Vec<u8>, ParserOptions) {
    let mut rng =
        ChaCha8Rng::seed_from_u64(base_seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut options = gen_options(&mut rng);
    let data = match rng.gen_range(0..100u32) {
        0..=59 => gen_structured(&mut rng, monsters),
        60..=84 => gen_soup(&mut rng),
        85..=98 => gen_bytes(&mut rng),
        _ => {
            options.max_window_bytes = 4096;
            gen_long_tokens(&mut rng)
        }
    };
    (data, options)
}
