//! Scalar decoders for the text encodings that appear inside RDATA: base16,
//! base32hex (RFC 4648 §7) and base64.
//!
//! Callers concatenate the text of all items first; whitespace never reaches
//! a decoder. All three are strict: padding may only complete the final
//! quantum and leftover bits in a partial final quantum must be zero, so every
//! accepted string round-trips. Unpadded input is accepted.
//!
//! Each decoder exists in two forms: a `_into` core that writes to a caller
//! slice (the RDATA assembly path, which already owns a large buffer) and a
//! `Vec` wrapper. The cores work a full quantum at a time and defer the
//! alphabet check to one accumulated test per group, so the common loop is
//! branch-free apart from the loop itself.

/// Why a decode was rejected.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CodecError {
    /// A byte outside the alphabet (or misplaced padding).
    BadChar,
    /// The input length cannot end a quantum (e.g. a lone base64 unit).
    BadLength,
    /// Unused bits in the final partial quantum were not zero.
    TrailingBits,
}

const INVALID: u8 = 0xff;

const fn base16_table() -> [u8; 256] {
    let mut t = [INVALID; 256];
    let mut i = 0;
    while i < 10 {
        t[b'0' as usize + i] = i as u8;
        i += 1;
    }
    let mut i = 0;
    while i < 6 {
        t[b'A' as usize + i] = 10 + i as u8;
        t[b'a' as usize + i] = 10 + i as u8;
        i += 1;
    }
    t
}

const fn base32hex_table() -> [u8; 256] {
    let mut t = [INVALID; 256];
    let mut i = 0;
    while i < 10 {
        t[b'0' as usize + i] = i as u8;
        i += 1;
    }
    // Extended-hex alphabet continues with A..V, case-insensitive.
    let mut i = 0;
    while i < 22 {
        t[b'A' as usize + i] = 10 + i as u8;
        t[b'a' as usize + i] = 10 + i as u8;
        i += 1;
    }
    t
}

const fn base64_table() -> [u8; 256] {
    let mut t = [INVALID; 256];
    let mut i = 0;
    while i < 26 {
        t[b'A' as usize + i] = i as u8;
        t[b'a' as usize + i] = 26 + i as u8;
        i += 1;
    }
    let mut i = 0;
    while i < 10 {
        t[b'0' as usize + i] = 52 + i as u8;
        i += 1;
    }
    t[b'+' as usize] = 62;
    t[b'/' as usize] = 63;
    t
}

static BASE16: [u8; 256] = base16_table();
static BASE32HEX: [u8; 256] = base32hex_table();
static BASE64: [u8; 256] = base64_table();

/// Strips trailing `=` padding and validates it: padding must complete
/// exactly one final quantum, and the remaining data length must be able to
/// end a quantum. A `=` anywhere else stays in the returned data, where the
/// alphabet check rejects it. Returns the data portion.
fn split_pad<'a>(
    input: &'a [u8],
    quantum: usize,
    valid_rem: &[usize],
) -> Result<&'a [u8], CodecError> {
    let mut data_len = input.len();
    while data_len > 0 && input[data_len - 1] == b'=' {
        data_len -= 1;
    }
    let pad = input.len() - data_len;
    if pad != 0 {
        let rem = data_len % quantum;
        if rem == 0 || pad != quantum - rem {
            return Err(CodecError::BadChar);
        }
    }
    if !valid_rem.contains(&(data_len % quantum)) {
        return Err(CodecError::BadLength);
    }
    Ok(&input[..data_len])
}

/// Decodes hexadecimal into `out` and returns the byte count. `out` must
/// hold `input.len() / 2` bytes.
pub(crate) fn decode_base16_into(input: &[u8], out: &mut [u8]) -> Result<usize, CodecError> {
    if input.len() % 2 != 0 {
        return Err(CodecError::BadLength);
    }
    let n = input.len() / 2;
    let mut bad = 0u8;
    for (dst, pair) in out[..n].iter_mut().zip(input.chunks_exact(2)) {
        let hi = BASE16[pair[0] as usize];
        let lo = BASE16[pair[1] as usize];
        bad |= hi | lo;
        *dst = hi << 4 | lo;
    }
    // Valid values are nibbles; anything rejected contributed 0xff.
    if bad & 0xf0 != 0 {
        return Err(CodecError::BadChar);
    }
    Ok(n)
}

/// Packs the final partial quantum: `tail` symbols of `bits_per` bits each,
/// already validated against the alphabet, into `bytes` output bytes with a
/// zero check on the leftover low bits.
#[inline]
fn pack_tail(
    tail: &[u8],
    table: &[u8; 256],
    bits_per: u32,
    out: &mut [u8],
) -> Result<usize, CodecError> {
    let mut acc = 0u64;
    let mut bad = 0u8;
    for &c in tail {
        let v = table[c as usize];
        bad |= v;
        acc = acc << bits_per | v as u64;
    }
    if bad == INVALID {
        return Err(CodecError::BadChar);
    }
    let bits = tail.len() as u32 * bits_per;
    let bytes = (bits / 8) as usize;
    for (k, dst) in out[..bytes].iter_mut().enumerate() {
        *dst = (acc >> (bits - 8 * (k as u32 + 1))) as u8;
    }
    if acc & ((1 << (bits - 8 * bytes as u32)) - 1) != 0 {
        return Err(CodecError::TrailingBits);
    }
    Ok(bytes)
}

/// Decodes base32hex into `out` and returns the byte count. `out` must hold
/// `input.len() / 8 * 5 + 4` bytes.
pub(crate) fn decode_base32hex_into(input: &[u8], out: &mut [u8]) -> Result<usize, CodecError> {
    let data = split_pad(input, 8, &[0, 2, 4, 5, 7])?;
    let full = data.len() / 8;
    let mut bad = 0u8;
    for (group, dst) in data.chunks_exact(8).zip(out.chunks_exact_mut(5)) {
        let a = BASE32HEX[group[0] as usize];
        let b = BASE32HEX[group[1] as usize];
        let c = BASE32HEX[group[2] as usize];
        let d = BASE32HEX[group[3] as usize];
        let e = BASE32HEX[group[4] as usize];
        let f = BASE32HEX[group[5] as usize];
        let g = BASE32HEX[group[6] as usize];
        let h = BASE32HEX[group[7] as usize];
        bad |= a | b | c | d | e | f | g | h;
        dst[0] = a << 3 | b >> 2;
        dst[1] = b << 6 | c << 1 | d >> 4;
        dst[2] = d << 4 | e >> 1;
        dst[3] = e << 7 | f << 2 | g >> 3;
        dst[4] = g << 5 | h;
    }
    // Valid symbols fit five bits; 0xff flags a reject.
    if bad & 0xe0 != 0 {
        return Err(CodecError::BadChar);
    }
    let written = full * 5;
    let tail = &data[full * 8..];
    if tail.is_empty() {
        return Ok(written);
    }
    let extra = pack_tail(tail, &BASE32HEX, 5, &mut out[written..])?;
    Ok(written + extra)
}

/// Decodes base64 into `out` and returns the byte count. `out` must hold
/// `input.len() / 4 * 3 + 2` bytes.
pub(crate) fn decode_base64_into(input: &[u8], out: &mut [u8]) -> Result<usize, CodecError> {
    let data = split_pad(input, 4, &[0, 2, 3])?;
    let full = data.len() / 4;
    let mut bad = 0u8;
    for (group, dst) in data.chunks_exact(4).zip(out.chunks_exact_mut(3)) {
        let a = BASE64[group[0] as usize];
        let b = BASE64[group[1] as usize];
        let c = BASE64[group[2] as usize];
        let d = BASE64[group[3] as usize];
        bad |= a | b | c | d;
        dst[0] = a << 2 | b >> 4;
        dst[1] = b << 4 | c >> 2;
        dst[2] = c << 6 | d;
    }
    // Valid symbols fit six bits; 0xff flags a reject.
    if bad & 0xc0 != 0 {
        return Err(CodecError::BadChar);
    }
    let written = full * 3;
    let tail = &data[full * 4..];
    if tail.is_empty() {
        return Ok(written);
    }
    let extra = pack_tail(tail, &BASE64, 6, &mut out[written..])?;
    Ok(written + extra)
}

fn decode_vec(
    input: &[u8],
    bound: usize,
    out: &mut Vec<u8>,
    core: impl FnOnce(&[u8], &mut [u8]) -> Result<usize, CodecError>,
) -> Result<(), CodecError> {
    let start = out.len();
    out.resize(start + bound, 0);
    match core(input, &mut out[start..]) {
        Ok(n) => {
            out.truncate(start + n);
            Ok(())
        }
        Err(e) => {
            out.truncate(start);
            Err(e)
        }
    }
}

/// Decodes hexadecimal text (case-insensitive) and appends to `out`.
pub fn decode_base16(input: &[u8], out: &mut Vec<u8>) -> Result<(), CodecError> {
    decode_vec(input, input.len() / 2, out, decode_base16_into)
}

/// Decodes base32hex text (case-insensitive, padding optional).
pub fn decode_base32hex(input: &[u8], out: &mut Vec<u8>) -> Result<(), CodecError> {
    decode_vec(input, input.len() / 8 * 5 + 4, out, decode_base32hex_into)
}

/// Decodes base64 text (padding optional).
pub fn decode_base64(input: &[u8], out: &mut Vec<u8>) -> Result<(), CodecError> {
    decode_vec(input, input.len() / 4 * 3 + 2, out, decode_base64_into)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b16(s: &str) -> Result<Vec<u8>, CodecError> {
        let mut v = Vec::new();
        decode_base16(s.as_bytes(), &mut v).map(|_| v)
    }
    fn b32(s: &str) -> Result<Vec<u8>, CodecError> {
        let mut v = Vec::new();
        decode_base32hex(s.as_bytes(), &mut v).map(|_| v)
    }
    fn b64(s: &str) -> Result<Vec<u8>, CodecError> {
        let mut v = Vec::new();
        decode_base64(s.as_bytes(), &mut v).map(|_| v)
    }

    #[test]
    fn base16_basics() {
        assert_eq!(b16("").unwrap(), b"");
        assert_eq!(b16("C0000201").unwrap(), [0xc0, 0x00, 0x02, 0x01]);
        assert_eq!(b16("c0DeF00d").unwrap(), [0xc0, 0xde, 0xf0, 0x0d]);
        assert_eq!(b16("ABC"), Err(CodecError::BadLength));
        assert_eq!(b16("G0"), Err(CodecError::BadChar));
        assert_eq!(b16("0 12"), Err(CodecError::BadChar));
    }

    #[test]
    fn base32hex_vectors() {
        // RFC 4648 test vectors in the extended-hex alphabet.
        assert_eq!(b32("").unwrap(), b"");
        assert_eq!(b32("CO").unwrap(), b"f");
        assert_eq!(b32("CPNG").unwrap(), b"fo");
        assert_eq!(b32("CPNMU").unwrap(), b"foo");
        assert_eq!(b32("CPNMUOG").unwrap(), b"foob");
        assert_eq!(b32("CPNMUOJ1").unwrap(), b"fooba");
        assert_eq!(b32("CPNMUOJ1E8").unwrap(), b"foobar");
        assert_eq!(b32("cpnmuoj1e8").unwrap(), b"foobar");
        assert_eq!(b32("CPNMUOJ1E8======").unwrap(), b"foobar");
        assert_eq!(b32("CO======").unwrap(), b"f");
    }

    #[test]
    fn base32hex_rejects() {
        assert_eq!(b32("C"), Err(CodecError::BadLength));
        assert_eq!(b32("CPN"), Err(CodecError::BadLength));
        assert_eq!(b32("CPNMUO"), Err(CodecError::BadLength));
        assert_eq!(b32("CW"), Err(CodecError::BadChar)); // W outside 0..V
        assert_eq!(b32("CP=G"), Err(CodecError::BadChar)); // pad mid-stream
        assert_eq!(b32("CO====="), Err(CodecError::BadChar)); // short pad
        assert_eq!(b32("CPNMUOJ1========"), Err(CodecError::BadChar)); // pad on full quantum
        // 'CP' decodes to 0x66 with leftover bits 0b01.
        assert_eq!(b32("CP"), Err(CodecError::TrailingBits));
    }

    #[test]
    fn base64_vectors() {
        assert_eq!(b64("").unwrap(), b"");
        assert_eq!(b64("Zg==").unwrap(), b"f");
        assert_eq!(b64("Zg").unwrap(), b"f");
        assert_eq!(b64("Zm8").unwrap(), b"fo");
        assert_eq!(b64("Zm9v").unwrap(), b"foo");
        assert_eq!(b64("Zm9vYg==").unwrap(), b"foob");
        assert_eq!(b64("Zm9vYmE").unwrap(), b"fooba");
        assert_eq!(b64("Zm9vYmFy").unwrap(), b"foobar");
        assert_eq!(b64("Zm9vYmFyIQ").unwrap(), b"foobar!");
        assert_eq!(b64("AA==").unwrap(), [0]);
        assert_eq!(b64("+/+/").unwrap(), [0xfb, 0xff, 0xbf]);
    }

    #[test]
    fn base64_rejects() {
        assert_eq!(b64("Z"), Err(CodecError::BadLength));
        assert_eq!(b64("Zm9vY"), Err(CodecError::BadLength));
        assert_eq!(b64("Zm.v"), Err(CodecError::BadChar));
        assert_eq!(b64("Zm9v===="), Err(CodecError::BadChar));
        assert_eq!(b64("Zg=v"), Err(CodecError::BadChar)); // data after pad
        assert_eq!(b64("Zg="), Err(CodecError::BadChar)); // incomplete pad
        // 'Zm9' leaves 0b01 in the final unit; base64("fo") is "Zm8=".
        assert_eq!(b64("Zm9"), Err(CodecError::TrailingBits));
        assert_eq!(b64("Zh"), Err(CodecError::TrailingBits));
    }

    #[test]
    fn append_preserves_existing_bytes() {
        let mut v = b"keep".to_vec();
        decode_base16(b"00ff", &mut v).unwrap();
        assert_eq!(v, b"keep\x00\xff");
        // A failure leaves previous contents untouched.
        assert!(decode_base64(b"!!!!", &mut v).is_err());
        assert_eq!(v, b"keep\x00\xff");
    }

    #[test]
    fn into_variants_match_vec_variants() {
        // Cross-check the slice cores against the Vec wrappers over assorted
        // generated inputs, valid and broken.
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        const MENU: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/=. ";
        for _ in 0..20_000 {
            let len = (rng() % 40) as usize;
            let input: Vec<u8> = (0..len).map(|_| MENU[(rng() % MENU.len() as u64) as usize]).collect();
            let mut buf = [0u8; 64];
            let mut vec_out = Vec::new();

            let a = decode_base16_into(&input, &mut buf);
            let b = decode_base16(&input, &mut vec_out).map(|_| vec_out.len());
            assert_eq!(a.is_ok(), b.is_ok(), "b16 {input:?}");
            if let (Ok(n), Ok(m)) = (a, b) {
                assert_eq!(n, m);
                assert_eq!(&buf[..n], &vec_out[..]);
            }

            vec_out.clear();
            let a = decode_base32hex_into(&input, &mut buf);
            let b = decode_base32hex(&input, &mut vec_out).map(|_| vec_out.len());
            assert_eq!(a.is_ok(), b.is_ok(), "b32 {input:?}");
            if let (Ok(n), Ok(m)) = (a, b) {
                assert_eq!(n, m);
                assert_eq!(&buf[..n], &vec_out[..]);
            }

            vec_out.clear();
            let a = decode_base64_into(&input, &mut buf);
            let b = decode_base64(&input, &mut vec_out).map(|_| vec_out.len());
            assert_eq!(a.is_ok(), b.is_ok(), "b64 {input:?}");
            if let (Ok(n), Ok(m)) = (a, b) {
                assert_eq!(n, m);
                assert_eq!(&buf[..n], &vec_out[..]);
            }
        }
    }
}
