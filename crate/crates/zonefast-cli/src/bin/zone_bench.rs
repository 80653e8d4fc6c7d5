//! Benchmarks parsing throughput on an in-memory copy of a zone file.

use clap::Parser;
use zonefast_cli as cli;
use zonefast_cli::bench;

/// Benchmark DNS zone parsing throughput.
#[derive(Parser)]
#[command(name = "zone-bench", version)]
struct Args {
    /// Zone file to read into memory and parse repeatedly.
    file: String,
    /// Timed runs after one untimed warmup run.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    runs: u32,
    /// Indexing kernel: scalar, v128 or v256 (default: best available).
    #[arg(long)]
    kernel: Option<String>,
    /// Emit the report as JSON instead of human-readable text.
    #[arg(long)]
    json: bool,
}

fn main() {
    std::process::exit(run(Args::parse()));
}

fn run(args: Args) -> i32 {
    let kernel = match cli::resolve_kernel(args.kernel.as_deref()) {
        Ok(kernel) => kernel,
        Err(message) => return usage_error(&message),
    };
    if args.file == "-" {
        return usage_error("standard input is not supported; give a regular file");
    }
    let data = match std::fs::read(&args.file) {
        Ok(data) => data,
        Err(error) => return usage_error(&format!("cannot read '{}': {error}", args.file)),
    };

    let options = zonefast_types::ParserOptions::default();
    match bench::run(&args.file, &data, &options, kernel, args.runs as usize) {
        Ok(report) => {
            if args.json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                println!("{text}");
            } else {
                bench::print_human(&report);
            }
            cli::EXIT_CLEAN
        }
        Err(error) => {
            eprintln!("{error}");
            cli::EXIT_PARSE_ERROR
        }
    }
}

fn usage_error(message: &str) -> i32 {
    eprintln!("zone-bench: {message}");
    cli::EXIT_USAGE_OR_IO
}
