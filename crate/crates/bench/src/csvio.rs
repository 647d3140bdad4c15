//! CSV emission and parsing for benchmark results.
//!
//! The format is a fixed eight-column layout with a mandatory header, so a
//! result file round-trips exactly and spreadsheets ingest it unchanged.

use std::io;

use crate::harness::BenchRun;

/// The mandatory first line of every result file.
pub const CSV_HEADER: &str = "algo,dist,keytype,n,seed,time_s,rate_meps,validated";

/// Parse failures, by line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CsvError {
    MissingHeader,
    /// 1-based line number of a row with the wrong shape or a bad field.
    BadRow { line: usize },
}

impl std::fmt::Display for CsvError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CsvError::MissingHeader => write!(f, "missing header line: {CSV_HEADER}"),
            CsvError::BadRow { line } => write!(f, "malformed row at line {line}"),
        }
    }
}

impl std::error::Error for CsvError {}

/// Renders runs as CSV text. Floats use Rust's shortest round-trip
/// representation, so parsing the text recovers the exact values.
pub fn emit_csv_string(runs: &[BenchRun]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for run in runs {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            run.algo,
            run.dist,
            run.keytype,
            run.n,
            run.seed,
            run.time_s,
            run.rate_meps,
            run.validated
        ));
    }
    out
}

/// Writes runs as CSV to any sink.
pub fn emit_csv<W: io::Write>(writer: &mut W, runs: &[BenchRun]) -> io::Result<()> {
    writer.write_all(emit_csv_string(runs).as_bytes())
}

/// Parses CSV text produced by [`emit_csv_string`]. Blank lines are
/// ignored; anything else must be a well-formed row.
pub fn parse_csv(text: &str) -> Result<Vec<BenchRun>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == CSV_HEADER => {}
        _ => return Err(CsvError::MissingHeader),
    }
    let mut runs = Vec::new();
    for (index, row) in lines {
        let row = row.trim_end();
        if row.is_empty() {
            continue;
        }
        runs.push(parse_row(row).ok_or(CsvError::BadRow { line: index + 1 })?);
    }
    Ok(runs)
}

fn parse_row(row: &str) -> Option<BenchRun> {
    let fields: Vec<&str> = row.split(',').collect();
    let [algo, dist, keytype, n, seed, time_s, rate_meps, validated] = fields[..] else {
        return None;
    };
    Some(BenchRun {
        algo: algo.to_string(),
        dist: dist.to_string(),
        keytype: keytype.to_string(),
        n: n.parse().ok()?,
        seed: seed.parse().ok()?,
        time_s: time_s.parse().ok()?,
        rate_meps: rate_meps.parse().ok()?,
        validated: validated.parse().ok()?,
    })
}
