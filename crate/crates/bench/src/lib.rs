//! Benchmark and validation harness for the samplesort crate: input
//! generation, timed runs, output validation, and CSV reporting.

pub mod csvio;
pub mod harness;
pub mod keytype;
