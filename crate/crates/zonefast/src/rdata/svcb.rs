//! SVCB and HTTPS rdata: priority, target name, then `key=value` service
//! parameters in any presentation order, emitted sorted by key code.

use super::{num, text, Enc, Fields};
use crate::lexer::{Item, ItemKind};
use zonefast_types::{ErrorKind, ParseError};

const KEY_MANDATORY: u16 = 0;
const KEY_ALPN: u16 = 1;
const KEY_NO_DEFAULT_ALPN: u16 = 2;
const KEY_PORT: u16 = 3;
const KEY_IPV4HINT: u16 = 4;
const KEY_ECH: u16 = 5;
const KEY_IPV6HINT: u16 = 6;

/// Key mnemonic or the generic `keyNNNNN` spelling, case-insensitive.
/// The generic spelling always takes the escaped-blob value form, even for
/// codes that have a mnemonic.
fn key_code(name: &[u8]) -> Option<(u16, bool)> {
    const KEYS: [(&[u8], u16); 7] = [
        (b"mandatory", KEY_MANDATORY),
        (b"alpn", KEY_ALPN),
        (b"no-default-alpn", KEY_NO_DEFAULT_ALPN),
        (b"port", KEY_PORT),
        (b"ipv4hint", KEY_IPV4HINT),
        (b"ech", KEY_ECH),
        (b"ipv6hint", KEY_IPV6HINT),
    ];
    for (mnemonic, code) in KEYS {
        if name.eq_ignore_ascii_case(mnemonic) {
            return Some((code, false));
        }
    }
    let digits = match name.split_at_checked(3) {
        Some((head, rest)) if head.eq_ignore_ascii_case(b"key") && !rest.is_empty() => rest,
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
    Some((value as u16, true))
}

pub(crate) fn parse_svcb(f: &mut Fields) -> Result<(), ParseError> {
    let priority = f.u16_field("priority")?;
    f.out.push_u16(priority);
    f.name_field("target name")?;

    // Values are staged in a pool so the whole list can be emitted in key
    // order afterwards.
    let mut pool: Vec<u8> = Vec::new();
    let mut params: Vec<(u16, Item, core::ops::Range<usize>)> = Vec::new();

    while f.idx < f.items.len() {
        let item = f.next_contiguous("service parameter")?;
        let raw = f.lx.text(&item);
        let eq = raw.iter().position(|&b| b == b'=');
        let key_text = &raw[..eq.unwrap_or(raw.len())];
        let value: Option<&[u8]> = match eq {
            None => None,
            // `key=` followed by a quoted item: the quoted content is the
            // value. A bare trailing `=` is an empty value.
            Some(p) if p + 1 == raw.len() => match f.items.get(f.idx) {
                Some(next) if next.kind == ItemKind::Quoted => {
                    let next = *next;
                    f.idx += 1;
                    Some(f.content(&next))
                }
                _ => Some(b""),
            },
            Some(p) => Some(&raw[p + 1..]),
        };
        let (code, generic) = key_code(key_text).ok_or_else(|| {
            f.err_at(&item, ErrorKind::Syntax, "unknown service parameter key".into())
        })?;
        if params.iter().any(|&(c, _, _)| c == code) {
            return Err(f.err_at(
                &item,
                ErrorKind::Syntax,
                "duplicate service parameter key".into(),
            ));
        }
        let start = pool.len();
        encode_value(f, &item, code, generic, value, &mut pool)?;
        params.push((code, item, start..pool.len()));
    }

    params.sort_by_key(|&(code, _, _)| code);
    for (code, item, range) in params {
        let value = &pool[range];
        if value.len() > u16::MAX as usize {
            return Err(f.err_at(
                &item,
                ErrorKind::Semantic,
                "parameter value exceeds 65535 octets".into(),
            ));
        }
        f.out.push_u16(code);
        f.out.push_u16(value.len() as u16);
        if !f.out.write(value) {
            return Err(f.err_at(
                &item,
                ErrorKind::LimitExceeded,
                "record data exceeds 65535 octets".into(),
            ));
        }
        f.fits(&item)?;
    }
    Ok(())
}

fn encode_value(
    f: &mut Fields,
    item: &Item,
    code: u16,
    generic: bool,
    value: Option<&[u8]>,
    pool: &mut Vec<u8>,
) -> Result<(), ParseError> {
    // The keyNNNNN spelling takes a raw escaped blob regardless of code.
    if generic {
        let blob = value.unwrap_or(b"");
        text::unescape_into(blob, pool).map_err(|_| {
            f.err_at(
                item,
                ErrorKind::Syntax,
                "invalid escape sequence in parameter value".into(),
            )
        })?;
        return Ok(());
    }
    match code {
        KEY_MANDATORY => {
            let list = required(f, item, value)?;
            let mut codes: Vec<u16> = Vec::new();
            for part in list.split(|&b| b == b',') {
                let (c, _) = key_code(part).ok_or_else(|| {
                    f.err_at(item, ErrorKind::Syntax, "invalid key in mandatory list".into())
                })?;
                codes.push(c);
            }
            codes.sort_unstable();
            codes.dedup();
            for c in codes {
                pool.extend_from_slice(&c.to_be_bytes());
            }
        }
        KEY_ALPN => {
            let raw = required(f, item, value)?;
            // First level: ordinary zone-file escapes. Second level: within
            // the decoded value, backslash protects commas and backslashes.
            f.bytes.clear();
            text::unescape_into(raw, f.bytes).map_err(|_| {
                f.err_at(
                    item,
                    ErrorKind::Syntax,
                    "invalid escape sequence in parameter value".into(),
                )
            })?;
            let close = |pool: &mut Vec<u8>, len_pos: usize| -> Result<(), ParseError> {
                let id_len = pool.len() - len_pos - 1;
                if id_len == 0 {
                    return Err(f.err_at(
                        item,
                        ErrorKind::Syntax,
                        "empty alpn protocol id".into(),
                    ));
                }
                if id_len > 255 {
                    return Err(f.err_at(
                        item,
                        ErrorKind::Semantic,
                        "alpn protocol id exceeds 255 octets".into(),
                    ));
                }
                pool[len_pos] = id_len as u8;
                Ok(())
            };
            let mut len_pos = pool.len();
            pool.push(0);
            let mut k = 0;
            while k < f.bytes.len() {
                match f.bytes[k] {
                    b'\\' => {
                        let &escaped = f.bytes.get(k + 1).ok_or_else(|| {
                            f.err_at(
                                item,
                                ErrorKind::Syntax,
                                "invalid escape sequence in parameter value".into(),
                            )
                        })?;
                        pool.push(escaped);
                        k += 2;
                    }
                    b',' => {
                        close(pool, len_pos)?;
                        len_pos = pool.len();
                        pool.push(0);
                        k += 1;
                    }
                    b => {
                        pool.push(b);
                        k += 1;
                    }
                }
            }
            close(pool, len_pos)?;
        }
        KEY_NO_DEFAULT_ALPN => {
            if value.is_some() {
                return Err(f.err_at(
                    item,
                    ErrorKind::Syntax,
                    "service parameter does not take a value".into(),
                ));
            }
        }
        KEY_PORT => {
            let raw = no_escapes(f, item, required(f, item, value)?)?;
            let port = num::parse_u16(raw).map_err(|e| f.num_err(item, e, "port"))?;
            pool.extend_from_slice(&port.to_be_bytes());
        }
        KEY_IPV4HINT => {
            let raw = no_escapes(f, item, required(f, item, value)?)?;
            for part in raw.split(|&b| b == b',') {
                let quad = num::parse_ipv4(part).map_err(|_| {
                    f.err_at(item, ErrorKind::Syntax, "invalid IPv4 address".into())
                })?;
                pool.extend_from_slice(&quad);
            }
        }
        KEY_ECH => {
            let raw = required(f, item, value)?;
            f.bytes.clear();
            Enc::Base64
                .decode(raw, f.bytes)
                .map_err(|e| f.codec_err(item, e, Enc::Base64))?;
            pool.extend_from_slice(f.bytes);
        }
        KEY_IPV6HINT => {
            let raw = no_escapes(f, item, required(f, item, value)?)?;
            for part in raw.split(|&b| b == b',') {
                let addr = num::parse_ipv6(part).map_err(|_| {
                    f.err_at(item, ErrorKind::Syntax, "invalid IPv6 address".into())
                })?;
                pool.extend_from_slice(&addr);
            }
        }
        _ => unreachable!("mnemonic keys all have arms"),
    }
    Ok(())
}

fn required<'v>(
    f: &Fields,
    item: &Item,
    value: Option<&'v [u8]>,
) -> Result<&'v [u8], ParseError> {
    value.ok_or_else(|| {
        f.err_at(item, ErrorKind::Syntax, "service parameter requires a value".into())
    })
}

fn no_escapes<'v>(f: &Fields, item: &Item, value: &'v [u8]) -> Result<&'v [u8], ParseError> {
    if value.contains(&b'\\') {
        return Err(f.err_at(
            item,
            ErrorKind::Syntax,
            "escapes are not allowed in this parameter".into(),
        ));
    }
    Ok(value)
}
