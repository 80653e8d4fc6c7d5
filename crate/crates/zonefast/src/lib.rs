//! zonefast: a DNS zone file parser built around SIMD structural indexing.
//!
//! Parsing happens in two stages. Stage one classifies 64-byte blocks into
//! bitmasks and turns them into tapes of field and delimiter offsets (see
//! [`indexer`]); stage two walks the tapes, applies the zone file grammar and
//! assembles wire-format RDATA. The stages interleave over windows of input
//! so the working set stays cache-sized regardless of file size.

pub mod codecs;
pub mod grammar;
pub mod indexer;
pub mod kernel;
pub mod lexer;
pub mod rdata;
pub mod rrtype;

pub use grammar::{parse_bytes, parse_file, parse_vec, ParseStats};
pub use kernel::Kernel;
