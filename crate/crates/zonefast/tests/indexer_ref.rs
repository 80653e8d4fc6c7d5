//! Differential test: the block/bitmask indexer against a plain one-byte-at-
//! a-time state machine that encodes the intended semantics directly. Any
//! divergence is a bug in the mask algebra (or a hole in this reference).

use zonefast::indexer::{index_window, Carry, WindowIndex};
use zonefast::Kernel;

#[derive(Default)]
struct RefIndex {
    fields: Vec<u32>,
    delims: Vec<u32>,
    hidden_newlines: bool,
}

#[derive(PartialEq)]
enum Mode {
    Normal,
    InToken,
    InQuote,
    InComment,
}

/// The meaning of the tapes, spelled out serially: fields mark token starts
/// (first content byte or opening quote) and structural bytes (newline,
/// parentheses, 0x00); delimiters mark the byte ending a token (first
/// separator after contiguous content, or the closing quote). A structural
/// byte that ends a token lands on both tapes.
fn reference_index(window: &[u8]) -> RefIndex {
    let mut out = RefIndex::default();
    let mut mode = Mode::Normal;
    let mut pending = false;
    for (i, &b) in window.iter().enumerate() {
        let i = i as u32;
        match mode {
            Mode::InComment => {
                if b == b'\n' {
                    out.fields.push(i);
                    mode = Mode::Normal;
                }
            }
            Mode::Normal => match b {
                _ if pending => unreachable!("pending escape only inside tokens"),
                b' ' | b'\t' | b'\r' => {}
                b'\n' | b'(' | b')' | 0 => out.fields.push(i),
                b'"' => {
                    out.fields.push(i);
                    mode = Mode::InQuote;
                }
                b';' => mode = Mode::InComment,
                b'\\' => {
                    out.fields.push(i);
                    pending = true;
                    mode = Mode::InToken;
                }
                _ => {
                    out.fields.push(i);
                    mode = Mode::InToken;
                }
            },
            Mode::InToken => {
                if pending {
                    pending = false;
                    if b == b'\n' {
                        out.hidden_newlines = true;
                    }
                    continue;
                }
                match b {
                    b'\\' => pending = true,
                    b' ' | b'\t' | b'\r' => {
                        out.delims.push(i);
                        mode = Mode::Normal;
                    }
                    b'\n' | b'(' | b')' | 0 => {
                        out.delims.push(i);
                        out.fields.push(i);
                        mode = Mode::Normal;
                    }
                    b'"' => {
                        out.delims.push(i);
                        out.fields.push(i);
                        mode = Mode::InQuote;
                    }
                    b';' => {
                        out.delims.push(i);
                        mode = Mode::InComment;
                    }
                    _ => {}
                }
            }
            Mode::InQuote => {
                if pending {
                    pending = false;
                    if b == b'\n' {
                        out.hidden_newlines = true;
                    }
                    continue;
                }
                match b {
                    b'\\' => pending = true,
                    b'"' => {
                        out.delims.push(i);
                        mode = Mode::Normal;
                    }
                    b'\n' => out.hidden_newlines = true,
                    _ => {}
                }
            }
        }
    }
    out
}

fn available_kernels() -> Vec<Kernel> {
    [Kernel::Scalar, Kernel::V128, Kernel::V256]
        .into_iter()
        .filter(|k| k.is_available())
        .collect()
}

fn check(window: &[u8]) {
    let want = reference_index(window);
    let mut buf = window.to_vec();
    buf.extend_from_slice(&[0u8; 64]);
    for kernel in available_kernels() {
        let mut carry = Carry::default();
        let mut got = WindowIndex::default();
        index_window(&buf, 0, window.len(), kernel, &mut carry, &mut got);
        assert_eq!(
            got.fields,
            want.fields,
            "fields diverge ({kernel:?}) on {:?}",
            String::from_utf8_lossy(window)
        );
        assert_eq!(
            got.delims,
            want.delims,
            "delims diverge ({kernel:?}) on {:?}",
            String::from_utf8_lossy(window)
        );
        assert_eq!(got.hidden_newlines, want.hidden_newlines);
    }
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

#[test]
fn handcrafted_windows() {
    let cases: &[&[u8]] = &[
        b"",
        b"a",
        b" ",
        b"\n",
        b"\\",
        b"\"",
        b";",
        b"(",
        b")",
        b"www A 1.2.3.4\n",
        b"a b  c\td\r\ne\n",
        b"\"quoted string\" plain\n",
        b"\"with \\\" escape\" x\n",
        b"\"multi\nline\nstring\" y\n",
        b"tok\\ en with\\;escapes\\\\ and\\\"more\n",
        b"; pure comment line\n",
        b"data ; trailing comment\nnext\n",
        b"a;b\n",
        b"a\\;b\n",
        b"\";not a comment\" ;real\n",
        b"( grouped\n tokens )\n",
        b"abc(def)ghi\n",
        b"x\"y\"z\n",
        b"\"\"\n",
        b"\"\" \"\"\n",
        b"esc\\\nnewline\n",
        b"comment with \\ backslash ; and \\\" quote\n",
        b"; comment then eof",
        b"token-at-eof",
        b"trailing-backslash\\",
        b"\"unterminated",
        b"nul\x00inside\n",
        b"\x00",
        b"a \x00 b\n",
    ];
    for case in cases {
        check(case);
    }
}

#[test]
fn random_soups_match_reference() {
    // Structural characters heavily over-weighted; lengths sweep across
    // block boundaries so partial-block masking and carries both fire.
    let alphabet: &[u8] = b"\\\\\"\";;\n\n\n  \t\r()a.zZ09-\x00\x80\xff";
    let mut rng = XorShift(0x0123_4567_89ab_cdef);
    for round in 0..4000 {
        let len = (round % 311) + (rng.next() % 64) as usize;
        let mut window = Vec::with_capacity(len);
        for _ in 0..len {
            window.push(alphabet[(rng.next() % alphabet.len() as u64) as usize]);
        }
        check(&window);
    }
}

#[test]
fn dense_structural_runs() {
    // Pathological runs of a single structural byte, all lengths near the
    // block size, to stress run/carry handling.
    for &b in b"\\\"; \n(" {
        for len in [1usize, 2, 3, 63, 64, 65, 127, 128, 129, 200] {
            let window = vec![b; len];
            check(&window);
            // And with a token on each side.
            let mut framed = b"x ".to_vec();
            framed.extend_from_slice(&window);
            framed.extend_from_slice(b" y\n");
            check(&framed);
        }
    }
}

#[test]
fn carry_states_across_block_edges() {
    // Place a two-byte construct so it straddles the 64-byte edge in every
    // alignment nearby.
    for construct in [&b"\\\""[..], b"\\\\", b"\";", b";\n", b"\"a", b"a\"", b"a;"] {
        for pos in 55..75usize {
            let mut window = vec![b'x'; 61];
            window.push(b' ');
            window.resize(pos, b'x');
            window.extend_from_slice(construct);
            window.resize(140, b'y');
            window.push(b'\n');
            check(&window);
        }
    }
}
