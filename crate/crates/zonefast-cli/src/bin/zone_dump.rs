//! Prints every record of a zone file in generic (type-independent) text
//! form, one line per record, in zone order.

use std::io::{self, Write};

use clap::Parser;
use zonefast_cli as cli;
use zonefast_types::{
    generic_line_into, record_to_generic_text, ClassCode, RecordSink, SinkFlow, Ttl, TypeCode,
};

/// Dump a DNS zone file as generic record text.
#[derive(Parser)]
#[command(name = "zone-dump", version)]
struct Args {
    /// Zone file to read; use "-" for standard input.
    file: String,
    /// Use the reference (slow, error-recovering) parsing engine.
    #[arg(long)]
    oracle: bool,
    /// Indexing kernel: scalar, v128 or v256 (default: best available).
    #[arg(long)]
    kernel: Option<String>,
    /// TTL for records that get one neither explicitly nor from $TTL.
    #[arg(long, value_name = "SECONDS")]
    default_ttl: Option<u32>,
    /// Absolute name appended to relative names, e.g. "example.com.".
    #[arg(long, value_name = "NAME")]
    origin: Option<String>,
}

/// Streams one generic-form line per record straight to the writer.
struct DumpSink<W: Write> {
    out: W,
    line: String,
    write_error: Option<io::Error>,
}

impl<W: Write> RecordSink for DumpSink<W> {
    fn record(
        &mut self,
        owner: &[u8],
        rtype: TypeCode,
        rclass: ClassCode,
        ttl: Ttl,
        rdata: &[u8],
    ) -> SinkFlow {
        self.line.clear();
        generic_line_into(&mut self.line, owner, rtype, rclass, ttl, rdata);
        self.line.push('\n');
        match self.out.write_all(self.line.as_bytes()) {
            Ok(()) => SinkFlow::Continue,
            Err(error) => {
                self.write_error = Some(error);
                SinkFlow::Abort
            }
        }
    }
}

fn main() {
    std::process::exit(run(Args::parse()));
}

fn run(args: Args) -> i32 {
    let kernel = match cli::resolve_kernel(args.kernel.as_deref()) {
        Ok(kernel) => kernel,
        Err(message) => return usage_error(&message),
    };
    let options = match cli::build_options(args.default_ttl, args.origin.as_deref()) {
        Ok(options) => options,
        Err(message) => return usage_error(&message),
    };
    let source = match cli::open_source(&args.file) {
        Ok(source) => source,
        Err(message) => return usage_error(&message),
    };

    let stdout = io::stdout().lock();
    let mut out = io::BufWriter::with_capacity(1 << 20, stdout);

    if args.oracle {
        let list = cli::oracle_source(source, &options);
        for record in list.clean() {
            if let Err(error) = writeln!(out, "{}", record_to_generic_text(record)) {
                return write_failure(&error);
            }
        }
        if let Err(error) = out.flush() {
            return write_failure(&error);
        }
        return match list.first_error() {
            Some(error) => {
                eprintln!("{error}");
                cli::EXIT_PARSE_ERROR
            }
            None => cli::EXIT_CLEAN,
        };
    }

    let mut sink = DumpSink { out, line: String::new(), write_error: None };
    let result = cli::parse_source(source, &options, kernel, &mut sink);
    if let Some(error) = sink.write_error {
        return write_failure(&error);
    }
    // Flush the records seen so far before reporting any parse error, so a
    // partial dump still reaches stdout in order.
    if let Err(error) = sink.out.flush() {
        return write_failure(&error);
    }
    match result {
        Ok(_) => cli::EXIT_CLEAN,
        Err(error) => {
            eprintln!("{error}");
            cli::EXIT_PARSE_ERROR
        }
    }
}

fn usage_error(message: &str) -> i32 {
    eprintln!("zone-dump: {message}");
    cli::EXIT_USAGE_OR_IO
}

fn write_failure(error: &io::Error) -> i32 {
    eprintln!("zone-dump: cannot write output: {error}");
    cli::EXIT_USAGE_OR_IO
}
