//! In-memory parse benchmarking.
//!
//! The input buffer is read into memory once by the caller; every timed run
//! parses a fresh copy of it with a counting sink, so the clock covers
//! parsing only (the copy is made outside the timed region). One untimed
//! warmup run precedes the timed runs. Throughput is computed from the
//! minimum wall time, the least-disturbed run.

use std::time::Instant;

use serde::Serialize;
use zonefast::Kernel;
use zonefast_types::{CountingSink, ParseError, ParserOptions};

/// One benchmark result, stable across releases via `report_version`.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub report_version: u32,
    pub tool: &'static str,
    pub kernel: String,
    pub runs: usize,
    pub bytes: u64,
    pub records: u64,
    /// Per-run wall times in seconds, warmup excluded.
    pub times_s: Vec<f64>,
    pub min_s: f64,
    pub mean_s: f64,
    /// bytes / min_s / 1e9.
    pub throughput_gbps: f64,
    /// How fast this host merely reads the same buffer, for scale.
    pub baseline_read_gbps: f64,
}

/// Parses `data` once for warmup and `runs` more times under the clock.
/// Returns the first parse error instead of timing garbage.
pub fn run(
    name: &str,
    data: &[u8],
    options: &ParserOptions,
    kernel: Kernel,
    runs: usize,
) -> Result<BenchReport, ParseError> {
    assert!(runs >= 1, "need at least one timed run");
    let mut warm = CountingSink::default();
    zonefast::parse_vec(name, data.to_vec(), options, kernel, &mut warm)?;

    let mut times_s = Vec::with_capacity(runs);
    let mut records = warm.records;
    for _ in 0..runs {
        let copy = data.to_vec();
        let mut sink = CountingSink::default();
        let start = Instant::now();
        zonefast::parse_vec(name, copy, options, kernel, &mut sink)?;
        times_s.push(start.elapsed().as_secs_f64());
        records = sink.records;
    }
    let min_s = times_s.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean_s = times_s.iter().sum::<f64>() / times_s.len() as f64;
    Ok(BenchReport {
        report_version: 1,
        tool: "zone-bench",
        kernel: kernel.name().to_string(),
        runs,
        bytes: data.len() as u64,
        records,
        times_s,
        min_s,
        mean_s,
        throughput_gbps: data.len() as f64 / min_s / 1e9,
        baseline_read_gbps: read_baseline_gbps(data),
    })
}

/// Times a plain summing pass over the buffer and returns GB/s.
pub fn read_baseline_gbps(data: &[u8]) -> f64 {
    let start = Instant::now();
    let mut acc = 0u64;
    let mut chunks = data.chunks_exact(8);
    for chunk in &mut chunks {
        acc = acc.wrapping_add(u64::from_le_bytes(chunk.try_into().unwrap()));
    }
    for &b in chunks.remainder() {
        acc = acc.wrapping_add(u64::from(b));
    }
    std::hint::black_box(acc);
    let elapsed = start.elapsed().as_secs_f64().max(1e-9);
    data.len() as f64 / elapsed / 1e9
}

/// Prints the human-readable form of a report to stdout.
pub fn print_human(report: &BenchReport) {
    println!("zone-bench: kernel {}, {} runs", report.kernel, report.runs);
    println!("  bytes:        {}", report.bytes);
    println!("  records:      {}", report.records);
    let times: Vec<String> = report.times_s.iter().map(|t| format!("{t:.4}")).collect();
    println!("  times (s):    {}", times.join(" "));
    println!("  min / mean:   {:.4} s / {:.4} s", report.min_s, report.mean_s);
    println!("  throughput:   {:.3} GB/s (bytes / min time)", report.throughput_gbps);
    println!("  read baseline: {:.3} GB/s", report.baseline_read_gbps);
}
