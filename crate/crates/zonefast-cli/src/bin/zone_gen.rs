//! Writes a deterministic synthetic zone to stdout.

use std::io::{self, Write};

use clap::Parser;
use zonefast_cli as cli;
use zonefast_cli::gen::{generate, Profile};

/// Generate a synthetic DNS zone on stdout.
#[derive(Parser)]
#[command(name = "zone-gen", version)]
struct Args {
    /// Number of records to emit (the first is always the zone SOA).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    records: u64,
    /// Record-type mix to imitate.
    #[arg(long, value_enum)]
    profile: Profile,
    /// Seed; the output is a pure function of (records, profile, seed).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() {
    std::process::exit(run(Args::parse()));
}

fn run(args: Args) -> i32 {
    let stdout = io::stdout().lock();
    let mut out = io::BufWriter::with_capacity(1 << 20, stdout);
    let result = generate(args.records, args.profile, args.seed, &mut out).and_then(|()| out.flush());
    match result {
        Ok(()) => cli::EXIT_CLEAN,
        Err(error) => {
            eprintln!("zone-gen: cannot write output: {error}");
            cli::EXIT_USAGE_OR_IO
        }
    }
}
