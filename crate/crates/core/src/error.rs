//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while sorting.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SortError {
    /// The input was empty where at least one element is required.
    #[error("empty input")]
    EmptyInput,

    /// A key fell outside the total order (a float NaN).
    #[error("unordered key")]
    UnorderedKey,

    /// `oversampling * bucket_count` does not fit in the index type.
    #[error("sample size overflows the index type")]
    SampleTooLarge,

    /// A configuration field violates its documented bounds.
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),

    /// The auxiliary distribution buffer could not be allocated.
    #[error("failed to allocate the auxiliary buffer")]
    AllocationFailed,

    /// `sort_pairs` was given key and value slices of different lengths.
    #[error("keys and values have different lengths")]
    LengthMismatch,

    /// A scatter cursor ran past its reserved slot: the histogram and the
    /// scatter saw different data, so internal state was corrupted.
    #[error("histogram and scatter disagree in bucket {bucket}")]
    ScatterCorruption { bucket: usize },

    /// The dedicated worker pool could not be constructed.
    #[error("failed to build worker pool: {0}")]
    WorkerPool(String),
}
