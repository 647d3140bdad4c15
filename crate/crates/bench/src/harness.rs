//! Timed benchmark execution and output validation.
//!
//! The harness itself is single-threaded: it generates one input, runs one
//! warm-up sort that gets validated, then times `repeats` sorts of fresh
//! copies and reports the median. Generation and validation stay outside
//! the timed window. Only the sort under test parallelizes, with whatever
//! worker configuration it was given.

use std::cmp::Ordering;
use std::time::Instant;

use samplesort::distributions::{DistKind, DistSpec};
use samplesort::{sort_with_config, SortConfig, SortKey};

use crate::keytype::{self, BenchRecord, KeyType};

/// Inputs up to this size are validated by full sorted-copy comparison;
/// anything larger falls back to a commutative multiset hash.
const SORTED_COPY_LIMIT: usize = 1 << 22;

/// Algorithms the harness can time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    SampleSort,
    /// The platform's standard unstable sort, as the baseline.
    ReferenceSort,
}

impl Algo {
    pub const ALL: [Algo; 2] = [Algo::SampleSort, Algo::ReferenceSort];

    pub fn name(self) -> &'static str {
        match self {
            Algo::SampleSort => "samplesort",
            Algo::ReferenceSort => "reference_sort",
        }
    }

    pub fn parse(name: &str) -> Option<Algo> {
        Algo::ALL.iter().copied().find(|a| a.name() == name)
    }
}

/// One timed, validated benchmark result. Only validated runs are ever
/// constructed; failing runs surface as [`BenchError::Validation`] instead.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRun {
    pub algo: String,
    pub dist: String,
    pub keytype: String,
    pub n: usize,
    pub seed: u64,
    /// Median wall time of the repeated sorts, in seconds.
    pub time_s: f64,
    /// Sorting rate in million elements per second: n / (time_s * 10^6).
    pub rate_meps: f64,
    pub validated: bool,
}

/// Validation outcome; failures carry the first offending index where one
/// exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationReport {
    Pass,
    /// `output[index]` has a smaller key than its predecessor.
    OrderViolation { index: usize },
    /// The output is not a permutation of the input.
    MultisetMismatch,
}

impl ValidationReport {
    pub fn is_pass(self) -> bool {
        self == ValidationReport::Pass
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationReport::Pass => write!(f, "pass"),
            ValidationReport::OrderViolation { index } => {
                write!(f, "order violation at index {index}")
            }
            ValidationReport::MultisetMismatch => write!(f, "multiset mismatch"),
        }
    }
}

/// Harness failures, split by the exit code they map to.
#[derive(Debug, Clone, PartialEq)]
pub enum BenchError {
    /// Malformed request (unknown name, bad parameter combination): exit 1.
    Usage(String),
    /// The sorted output failed validation: exit 2.
    Validation(ValidationReport),
}

impl std::fmt::Display for BenchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchError::Usage(message) => write!(f, "{message}"),
            BenchError::Validation(report) => write!(f, "validation failed: {report}"),
        }
    }
}

impl std::error::Error for BenchError {}

/// Full description of one benchmark invocation.
#[derive(Debug, Clone)]
pub struct BenchRequest {
    pub algo: Algo,
    pub dist: DistKind,
    pub keytype: KeyType,
    pub n: usize,
    pub seed: u64,
    pub repeats: usize,
    /// Sorter tunables; the seed in here drives splitter sampling.
    pub config: SortConfig,
    /// Corrupt the warm-up output before validating it (self-test hook
    /// proving that validation rejects bad output).
    pub inject_fault: bool,
}

impl BenchRequest {
    pub fn new(
        algo: Algo,
        dist: DistKind,
        keytype: KeyType,
        n: usize,
        seed: u64,
        repeats: usize,
    ) -> Self {
        let config = SortConfig { seed, ..SortConfig::default() };
        BenchRequest { algo, dist, keytype, n, seed, repeats, config, inject_fault: false }
    }
}

/// Checks that `output` is a valid sort of `input`: (a) nondecreasing by
/// key, (b) the same multiset of records. Desk-scale inputs are compared
/// against a sorted copy; larger ones via a commutative digest (sum, xor
/// and rotated sum of per-record hashes), which any single changed record
/// breaks with overwhelming probability.
pub fn validate<R: BenchRecord>(input: &[R], output: &[R]) -> ValidationReport {
    for index in 1..output.len() {
        if output[index].key() < output[index - 1].key() {
            return ValidationReport::OrderViolation { index };
        }
    }
    if input.len() != output.len() {
        return ValidationReport::MultisetMismatch;
    }
    if input.len() <= SORTED_COPY_LIMIT {
        let mut expected = input.to_vec();
        let mut actual = output.to_vec();
        expected.sort_unstable_by(R::canonical_cmp);
        actual.sort_unstable_by(R::canonical_cmp);
        let equal = expected
            .iter()
            .zip(&actual)
            .all(|(a, b)| a.canonical_cmp(b) == Ordering::Equal);
        if !equal {
            return ValidationReport::MultisetMismatch;
        }
    } else if multiset_digest(input) != multiset_digest(output) {
        return ValidationReport::MultisetMismatch;
    }
    ValidationReport::Pass
}

fn multiset_digest<R: BenchRecord>(records: &[R]) -> (u64, u64, u64) {
    records.iter().fold((0u64, 0u64, 0u64), |(sum, xor, rotated), record| {
        let digest = record.digest();
        (
            sum.wrapping_add(digest),
            xor ^ digest,
            rotated.wrapping_add(digest.rotate_left(17)),
        )
    })
}

/// Generates the input values for a request.
pub fn generate_input(request: &BenchRequest) -> Result<Vec<u32>, BenchError> {
    if request.n < 1 {
        return Err(BenchError::Usage("n must be at least 1".to_string()));
    }
    if request.repeats < 1 {
        return Err(BenchError::Usage("repeats must be at least 1".to_string()));
    }
    DistSpec::new(request.dist, request.n, request.seed)
        .generate()
        .map_err(|e| {
            BenchError::Usage(format!(
                "cannot generate {} input of n = {}: {e}",
                request.dist.name(),
                request.n
            ))
        })
}

/// Runs one benchmark: generate, warm up and validate, then time `repeats`
/// sorts of fresh copies and report the median.
pub fn run_benchmark(request: &BenchRequest) -> Result<BenchRun, BenchError> {
    let values = generate_input(request)?;
    match request.keytype {
        KeyType::U32 => run_typed(values, request),
        KeyType::U64 => run_typed(keytype::to_u64(&values), request),
        KeyType::F32 => run_typed(keytype::to_f32(&values), request),
        KeyType::Pair => run_typed(keytype::to_pairs(&values), request),
    }
}

/// Generates, sorts once and validates, without timing anything.
pub fn run_validation(request: &BenchRequest) -> Result<(), BenchError> {
    let values = generate_input(request)?;
    match request.keytype {
        KeyType::U32 => warm_and_validate(&values, request),
        KeyType::U64 => warm_and_validate(&keytype::to_u64(&values), request),
        KeyType::F32 => warm_and_validate(&keytype::to_f32(&values), request),
        KeyType::Pair => warm_and_validate(&keytype::to_pairs(&values), request),
    }
}

fn run_typed<R: BenchRecord>(input: Vec<R>, request: &BenchRequest) -> Result<BenchRun, BenchError> {
    warm_and_validate(&input, request)?;

    let mut times = Vec::with_capacity(request.repeats);
    for _ in 0..request.repeats {
        let mut copy = input.clone();
        let start = Instant::now();
        sort_once(&mut copy, request)?;
        times.push(start.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    // Clamp below by a nanosecond so the rate stays finite even if the
    // clock cannot resolve a tiny sort.
    let time_s = times[times.len() / 2].max(1e-9);

    Ok(BenchRun {
        algo: request.algo.name().to_string(),
        dist: request.dist.name().to_string(),
        keytype: request.keytype.name().to_string(),
        n: request.n,
        seed: request.seed,
        time_s,
        rate_meps: request.n as f64 / (time_s * 1e6),
        validated: true,
    })
}

fn warm_and_validate<R: BenchRecord>(input: &[R], request: &BenchRequest) -> Result<(), BenchError> {
    let mut warm = input.to_vec();
    sort_once(&mut warm, request)?;
    if request.inject_fault {
        if let Some(record) = warm.first_mut() {
            record.perturb();
        }
    }
    match validate(input, &warm) {
        ValidationReport::Pass => Ok(()),
        failure => Err(BenchError::Validation(failure)),
    }
}

fn sort_once<R: BenchRecord>(data: &mut [R], request: &BenchRequest) -> Result<(), BenchError> {
    match request.algo {
        Algo::SampleSort => sort_with_config(data, &request.config)
            .map_err(|e| BenchError::Usage(format!("sort failed: {e}"))),
        Algo::ReferenceSort => {
            data.sort_unstable_by(|a, b| a.key().cmp_keys(&b.key()));
            Ok(())
        }
    }
}
