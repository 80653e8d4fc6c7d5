//! Counts the records in a zone file.

use clap::Parser;
use zonefast_cli as cli;
use zonefast_types::CountingSink;

/// Count the records in a DNS zone file.
#[derive(Parser)]
#[command(name = "zone-count", version)]
struct Args {
    /// Zone file to read; use "-" for standard input.
    file: String,
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

    let mut sink = CountingSink::default();
    match cli::parse_source(source, &options, kernel, &mut sink) {
        Ok(_) => {
            println!("{} records", sink.records);
            cli::EXIT_CLEAN
        }
        Err(error) => {
            // Records seen before the error are still worth reporting.
            println!("{} records", sink.records);
            eprintln!("{error}");
            cli::EXIT_PARSE_ERROR
        }
    }
}

fn usage_error(message: &str) -> i32 {
    eprintln!("zone-count: {message}");
    cli::EXIT_USAGE_OR_IO
}
