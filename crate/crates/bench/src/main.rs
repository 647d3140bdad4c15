//! Command-line benchmark runner: generates an input, sorts it with the
//! requested algorithm, validates the output, and reports a CSV row.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use samplesort::distributions::DistKind;
use samplesort_bench::csvio;
use samplesort_bench::harness::{run_benchmark, run_validation, Algo, BenchError, BenchRequest};
use samplesort_bench::keytype::KeyType;

/// Time a sorting algorithm on a generated input and print a validated CSV
/// row, or only check correctness with --validate-only.
#[derive(Debug, Parser)]
#[command(name = "bench")]
struct Args {
    /// Algorithm to run: samplesort or reference_sort.
    #[arg(long)]
    algo: String,
    /// Input distribution: uniform, gaussian, bucket, staggered or detdup.
    #[arg(long)]
    dist: String,
    /// Record type: u32, u64, f32 or pair.
    #[arg(long)]
    keytype: String,
    /// Number of records to sort.
    #[arg(long)]
    n: usize,
    /// Seed for input generation and splitter sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Timed repetitions; the median is reported.
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// Worker threads; 0 or omitted uses all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Distribution fan-out (buckets per pass); a power of two.
    #[arg(long)]
    k: Option<usize>,
    /// Bucket size below which the sorter finishes in place.
    #[arg(long)]
    m: Option<usize>,
    /// Sample keys drawn per splitter.
    #[arg(long)]
    a: Option<usize>,
    /// Records per tile in the distribution pass.
    #[arg(long)]
    tile: Option<usize>,
    /// Also write the CSV output to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Sort and validate once, without timing.
    #[arg(long)]
    validate_only: bool,
    /// Corrupt the output before validating, to prove validation catches it.
    #[arg(long)]
    inject_fault: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(BenchError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(err @ BenchError::Validation(_)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &Args) -> Result<(), BenchError> {
    let request = build_request(args)?;
    if args.validate_only {
        run_validation(&request)?;
        println!(
            "validated: {} on {} {} n={} seed={}",
            request.algo.name(),
            request.dist.name(),
            request.keytype.name(),
            request.n,
            request.seed
        );
        return Ok(());
    }
    let result = run_benchmark(&request)?;
    let text = csvio::emit_csv_string(std::slice::from_ref(&result));
    print!("{text}");
    if let Some(path) = &args.csv {
        std::fs::write(path, &text)
            .map_err(|e| BenchError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn build_request(args: &Args) -> Result<BenchRequest, BenchError> {
    let algo = Algo::parse(&args.algo).ok_or_else(|| {
        BenchError::Usage(format!(
            "unknown algo '{}'; expected samplesort or reference_sort",
            args.algo
        ))
    })?;
    let dist = DistKind::parse(&args.dist).ok_or_else(|| {
        BenchError::Usage(format!(
            "unknown dist '{}'; expected uniform, gaussian, bucket, staggered or detdup",
            args.dist
        ))
    })?;
    let keytype = KeyType::parse(&args.keytype).ok_or_else(|| {
        BenchError::Usage(format!(
            "unknown keytype '{}'; expected u32, u64, f32 or pair",
            args.keytype
        ))
    })?;

    let mut request = BenchRequest::new(algo, dist, keytype, args.n, args.seed, args.repeats);
    if let Some(workers) = args.workers {
        request.config.workers = workers;
    }
    if let Some(k) = args.k {
        request.config.bucket_count = k;
    }
    if let Some(m) = args.m {
        request.config.small_sort_threshold = m;
    }
    if let Some(a) = args.a {
        request.config.oversampling = Some(a);
    }
    if let Some(tile) = args.tile {
        request.config.tile_size = tile;
    }
    request.inject_fault = args.inject_fault;
    request
        .config
        .validate()
        .map_err(|e| BenchError::Usage(e.to_string()))?;
    Ok(request)
}
