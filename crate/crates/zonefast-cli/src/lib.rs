//! Shared plumbing for the zone tools: kernel and option resolution, input
//! sources, plus the benchmark harness ([`bench`]) and the synthetic zone
//! generator ([`gen`]).
//!
//! Exit code convention shared by all tools: 0 for a clean run, 1 for a
//! parse error, 2 for usage or input/output problems.

pub mod bench;
pub mod gen;

use std::io::Read;
use std::path::PathBuf;

use zonefast::rdata::name::{parse_name, NameError, NAME_SLACK};
use zonefast::{Kernel, ParseStats};
use zonefast_types::{ParseError, ParserOptions, RecordSink, Ttl, WireName};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_PARSE_ERROR: i32 = 1;
pub const EXIT_USAGE_OR_IO: i32 = 2;

/// Resolves the kernel from an explicit `--kernel` value, falling back to the
/// `ZONEFAST_KERNEL` environment variable and then CPU detection.
pub fn resolve_kernel(flag: Option<&str>) -> Result<Kernel, String> {
    let explicit = match flag {
        None => None,
        Some(text) => {
            let kernel = Kernel::from_name(text)
                .ok_or_else(|| format!("unknown kernel '{text}' (expected scalar, v128 or v256)"))?;
            if !kernel.is_available() {
                return Err(format!("kernel '{text}' is not available on this CPU"));
            }
            Some(kernel)
        }
    };
    Ok(Kernel::select(explicit))
}

/// Encodes a command-line origin argument to wire form. The name must be
/// absolute — there is no outer origin for it to lean on.
pub fn origin_from_text(text: &str) -> Result<WireName, String> {
    let mut scratch = [0u8; NAME_SLACK];
    let len = parse_name(text.as_bytes(), None, &mut scratch).map_err(|e| match e {
        NameError::Relative => format!("origin '{text}' must be absolute (end it with '.')"),
        NameError::Empty => "origin must not be empty".to_string(),
        NameError::EmptyLabel => format!("origin '{text}' has an empty label"),
        NameError::LabelTooLong => format!("origin '{text}' has a label over 63 octets"),
        NameError::NameTooLong => format!("origin '{text}' exceeds 255 octets"),
        NameError::BadEscape => format!("origin '{text}' has an invalid escape sequence"),
    })?;
    Ok(WireName::from_wire(scratch[..len].to_vec()).expect("encoder output is a valid wire name"))
}

/// Builds parser options from the flags the tools share.
pub fn build_options(default_ttl: Option<u32>, origin: Option<&str>) -> Result<ParserOptions, String> {
    let mut options = ParserOptions::default();
    if let Some(ttl) = default_ttl {
        let ttl = Ttl(ttl);
        if !ttl.is_valid() {
            return Err(format!("default TTL {} is out of range (maximum 2147483647)", ttl.0));
        }
        options.default_ttl = ttl;
    }
    if let Some(text) = origin {
        options.origin = Some(origin_from_text(text)?);
    }
    Ok(options)
}

/// Where a tool's zone text comes from: `-` means standard input.
pub enum Source {
    Stdin(Vec<u8>),
    File(PathBuf),
}

impl Source {
    /// The name errors are reported under.
    pub fn name(&self) -> String {
        match self {
            Source::Stdin(_) => "-".to_string(),
            Source::File(path) => path.display().to_string(),
        }
    }
}

/// Opens the input argument. Files are probed here so that an unreadable
/// path is a usage/io failure (exit 2) rather than a parse error; includes
/// that fail mid-parse still surface as parse errors (exit 1).
pub fn open_source(arg: &str) -> Result<Source, String> {
    if arg == "-" {
        let mut data = Vec::new();
        std::io::stdin()
            .lock()
            .read_to_end(&mut data)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        return Ok(Source::Stdin(data));
    }
    let path = PathBuf::from(arg);
    std::fs::File::open(&path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    Ok(Source::File(path))
}

/// Runs the production parser over a source.
pub fn parse_source<S: RecordSink>(
    source: Source,
    options: &ParserOptions,
    kernel: Kernel,
    sink: &mut S,
) -> Result<ParseStats, ParseError> {
    match source {
        Source::Stdin(data) => zonefast::parse_vec("-", data, options, kernel, sink),
        Source::File(path) => zonefast::parse_file(&path, options, kernel, sink),
    }
}

/// Runs the reference parser over a source.
pub fn oracle_source(
    source: Source,
    options: &ParserOptions,
) -> zonefast_oracle::OracleRecordList {
    match source {
        Source::Stdin(data) => zonefast_oracle::oracle_parse("-", &data, options),
        Source::File(path) => zonefast_oracle::oracle_parse_file(&path, options),
    }
}
