//! Differential-check plumbing shared by the conformance and fuzz tests.
//!
//! The contract: on any input, the production parser and the reference parser
//! must agree on every record emitted before the first error, and on the first
//! error itself (kind, file, line, column, message).  The reference parser
//! keeps going after errors, so only its pre-error prefix takes part.

// Each test target compiles its own copy and uses only part of the module.
#![allow(dead_code)]

pub mod fuzzgen;

use std::path::Path;

use zonefast::Kernel;
use zonefast_oracle::{oracle_parse, oracle_parse_file, OracleRecordList};
use zonefast_types::{CollectingSink, ParseError, ParserOptions, ZoneRecord};

/// Every kernel this machine can run.
pub fn kernels() -> Vec<Kernel> {
    [Kernel::Scalar, Kernel::V128, Kernel::V256]
        .into_iter()
        .filter(|k| k.is_available())
        .collect()
}

/// Renders arbitrary bytes for failure messages.
pub fn dump(data: &[u8]) -> String {
    format!("{} bytes: \"{}\"", data.len(), data.escape_ascii())
}

/// One record in a compact, diffable form.
fn show(r: &ZoneRecord) -> String {
    format!(
        "{} {} type{} class{} rdata[{}]={}",
        r.owner.to_presentation(),
        r.ttl.0,
        r.rtype.0,
        r.rclass.0,
        r.rdata.len(),
        r.rdata
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>()
    )
}

fn diff_records(label: &str, fast: &[ZoneRecord], reference: &[ZoneRecord], input: &str) {
    if fast == reference {
        return;
    }
    let upto = fast.len().min(reference.len());
    for i in 0..upto {
        if fast[i] != reference[i] {
            panic!(
                "{label}: record {i} differs\n  fast:      {}\n  reference: {}\n  input {input}",
                show(&fast[i]),
                show(&reference[i]),
            );
        }
    }
    panic!(
        "{label}: record count differs (fast {} vs reference {})\n  next: {}\n  input {input}",
        fast.len(),
        reference.len(),
        if fast.len() > reference.len() {
            show(&fast[upto])
        } else {
            show(&reference[upto])
        },
    );
}

/// Compares one production run against the reference outcome.
pub fn compare(
    label: &str,
    input_dump: &str,
    reference: &OracleRecordList,
    fast: Result<&[ZoneRecord], &ParseError>,
) {
    match fast {
        Ok(records) => {
            if let Some(e) = reference.first_error() {
                panic!(
                    "{label}: fast parser succeeded but reference reported {e:?}\n  input {input_dump}"
                );
            }
            diff_records(label, records, &reference.records, input_dump);
        }
        Err(e) => {
            let oe = match reference.first_error() {
                Some(oe) => oe,
                None => panic!(
                    "{label}: fast parser failed with {e:?} but reference parsed cleanly\n  input {input_dump}"
                ),
            };
            assert_eq!(
                e, oe,
                "{label}: first error differs\n  fast:      {e:?}\n  reference: {oe:?}\n  input {input_dump}"
            );
        }
    }
}

/// Runs both parsers on in-memory input under every kernel and asserts the
/// differential contract.
pub fn check(label: &str, data: &[u8], options: &ParserOptions) {
    let reference = oracle_parse("zone", data, options);
    let input_dump = dump(data);
    for kernel in kernels() {
        let mut sink = CollectingSink::default();
        let result = zonefast::parse_bytes("zone", data, options, kernel, &mut sink);
        let tag = format!("{label} [{}]", kernel.name());
        match &result {
            Ok(_) => compare(&tag, &input_dump, &reference, Ok(&sink.records)),
            Err(e) => {
                compare(&tag, &input_dump, &reference, Err(e));
                diff_records(&tag, &sink.records, reference.clean(), &input_dump);
            }
        }
    }
}

/// Runs both parsers against an on-disk zone (following any includes) under
/// every kernel and asserts the differential contract.
pub fn check_file(label: &str, path: &Path, options: &ParserOptions) {
    let reference = oracle_parse_file(path, options);
    let input_dump = format!("file {}", path.display());
    for kernel in kernels() {
        let mut sink = CollectingSink::default();
        let result = zonefast::parse_file(path, options, kernel, &mut sink);
        let tag = format!("{label} [{}]", kernel.name());
        match &result {
            Ok(_) => compare(&tag, &input_dump, &reference, Ok(&sink.records)),
            Err(e) => {
                compare(&tag, &input_dump, &reference, Err(e));
                diff_records(&tag, &sink.records, reference.clean(), &input_dump);
            }
        }
    }
}
