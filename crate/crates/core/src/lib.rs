//! Parallel comparison-based multi-way sample sort for multicore CPUs.
//!
//! The sorter recursively distributes records into `k` buckets delimited by
//! splitters drawn from a random oversample of the input. One distribution
//! pass runs in bulk-synchronous phases: splitter selection, per-tile
//! histograms, one exclusive scan, and an offset-driven scatter. Every
//! phase touches each record a constant number of times regardless of `k`,
//! so a pass costs one read and one write of the data plus `log2(k)`
//! comparisons per record, and tiles proceed in parallel without locks.
//! Buckets that fall below a threshold are finished in place by quicksort
//! over an odd-even merge sorting network.
//!
//! Sorting is deterministic: output depends only on the input and the
//! configuration (including its seed), never on the number of workers.
//!
//! ```
//! let mut keys = vec![5u32, 3, 9, 3, 1];
//! samplesort::sort(&mut keys).unwrap();
//! assert_eq!(keys, [1, 3, 3, 5, 9]);
//! ```
//!
//! Key-value data can be sorted as parallel slices or as packed records:
//!
//! ```
//! let mut keys = vec![30u32, 10, 20];
//! let mut values = vec![0u32, 1, 2];
//! samplesort::sort_pairs(&mut keys, &mut values).unwrap();
//! assert_eq!(keys, [10, 20, 30]);
//! assert_eq!(values, [1, 2, 0]);
//! ```

pub mod distribute;
pub mod distributions;
pub mod driver;
pub mod error;
pub mod key;
pub mod rng;
pub mod small_sort;
pub mod splitters;

pub use driver::{
    classify_bucket, schedule_buckets, sort, sort_pairs, sort_with_config, sort_with_stats,
    BucketAction, BufferParity, SortConfig, SortStats, WorkItem,
};
pub use error::SortError;
pub use key::{KeyValue, Record, SortKey};

/// A 32-bit key with a 32-bit payload, the classic benchmark record.
pub type Pair = KeyValue<u32, u32>;
