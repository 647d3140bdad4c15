//! Splitter selection: random oversampling, the implicit search tree over
//! the sorted splitters, and branchless bucket lookup.

use std::cmp::Ordering;

use crate::error::SortError;
use crate::key::{Record, SortKey};
use crate::rng::Lcg64;
use crate::small_sort::{self, SmallSortConfig};

/// Oversampled keys drawn from the input, not yet sorted.
#[derive(Debug, Clone)]
pub struct SampleDraw<K> {
    /// Exactly `oversampling * bucket_count` keys, each read from a
    /// pseudo-random input position (drawn with replacement).
    pub values: Vec<K>,
    /// Seed the draw was made with.
    pub seed: u64,
    /// Keys drawn per splitter.
    pub oversampling: usize,
}

/// The `bucket_count - 1` splitters of one distribution pass, kept in two
/// layouts: sorted order, and an implicit complete binary search tree in a
/// 1-indexed array where the children of slot `j` live at `2j` and `2j+1`.
///
/// Bucket `b` (1-based) receives the keys in `(splitter[b-1], splitter[b]]`,
/// with the virtual splitters 0 and `bucket_count` standing for the minimum
/// and maximum of the key space. A key equal to a splitter descends left and
/// therefore lands in the lower of the two adjacent buckets.
#[derive(Debug, Clone)]
pub struct SplitterTree<K> {
    /// Tree slots 1..bucket_count; slot 0 is padding so child arithmetic
    /// stays shift-and-add.
    nodes: Vec<K>,
    /// The same splitters in nondecreasing order.
    sorted: Vec<K>,
    bucket_count: usize,
    /// log2(bucket_count): every lookup takes exactly this many steps.
    steps: u32,
}

impl<K: SortKey> SplitterTree<K> {
    /// Builds the implicit tree from splitters that are already sorted.
    /// The count must be one less than a power of two (at least 1).
    pub fn from_sorted(sorted: Vec<K>) -> Self {
        let bucket_count = sorted.len() + 1;
        assert!(
            bucket_count >= 2 && bucket_count.is_power_of_two(),
            "splitter count must be a power of two minus one, got {}",
            sorted.len()
        );
        debug_assert!(
            sorted.windows(2).all(|w| w[0].cmp_keys(&w[1]) != Ordering::Greater),
            "splitters must be sorted"
        );

        let mut nodes = vec![sorted[0]; bucket_count];
        // Fill subtrees from an explicit stack. The midpoint rule places the
        // median of every splitter range at its subtree root, which keeps
        // the tree perfectly balanced and makes an in-order walk reproduce
        // the sorted order.
        let mut pending = vec![(0usize, sorted.len(), 1usize)];
        while let Some((lo, hi, slot)) = pending.pop() {
            if lo >= hi {
                continue;
            }
            let mid = lo + (hi - lo) / 2;
            nodes[slot] = sorted[mid];
            pending.push((lo, mid, 2 * slot));
            pending.push((mid + 1, hi, 2 * slot + 1));
        }

        let steps = bucket_count.trailing_zeros();
        SplitterTree { nodes, sorted, bucket_count, steps }
    }

    pub fn bucket_count(&self) -> usize {
        self.bucket_count
    }

    /// The splitters in nondecreasing order, length `bucket_count - 1`.
    pub fn sorted_splitters(&self) -> &[K] {
        &self.sorted
    }

    /// The tree slots 1..bucket_count (the returned slice starts at the
    /// root; the internal padding slot is not included).
    pub fn tree_slots(&self) -> &[K] {
        &self.nodes[1..]
    }

    /// Maps a key to its 1-based bucket index in `[1, bucket_count]`.
    ///
    /// Fixed-depth descent over the implicit tree: each step runs
    /// `j = 2j + (node < key)`, a predicated increment rather than a
    /// data-dependent branch, so lookups for a whole tile pipeline well.
    /// After `log2(bucket_count)` steps `j` is a leaf position and
    /// `j - bucket_count + 1` the bucket index. Ties descend left, so a key
    /// equal to a splitter ends up in the lower bucket.
    #[inline]
    pub fn traverse(&self, key: K) -> usize {
        let mut j = 1usize;
        for _ in 0..self.steps {
            j = 2 * j + usize::from(self.nodes[j] < key);
        }
        j - self.bucket_count + 1
    }
}

/// Draws `oversampling * bucket_count` keys from `data` with replacement,
/// using positions from an [`Lcg64`] stream seeded with `seed`.
///
/// Fails with [`SortError::EmptyInput`] on an empty slice and with
/// [`SortError::SampleTooLarge`] if the sample size overflows `usize`.
pub fn draw_sample<R: Record>(
    data: &[R],
    oversampling: usize,
    bucket_count: usize,
    seed: u64,
) -> Result<SampleDraw<R::Key>, SortError> {
    if data.is_empty() {
        return Err(SortError::EmptyInput);
    }
    let count = oversampling
        .checked_mul(bucket_count)
        .ok_or(SortError::SampleTooLarge)?;
    debug_assert!(
        count + 1 >= bucket_count,
        "sample must be large enough to cut {bucket_count} buckets"
    );

    let mut rng = Lcg64::new(seed);
    let n = data.len() as u64;
    let values = (0..count)
        .map(|_| data[rng.next_below(n) as usize].key())
        .collect();
    Ok(SampleDraw { values, seed, oversampling })
}

/// Sorts the sample and builds the splitter tree from it.
///
/// With oversampling factor `a`, splitter `i` (1-based, `i = 1..k-1`) is the
/// `(a * i)`-th smallest sample key, so each splitter has `a - 1` sample
/// keys below it since the previous one. Duplicate sample keys simply yield
/// duplicate splitters; the distribution pass turns the buckets between two
/// equal splitters into constant buckets that need no further sorting.
pub fn build_splitter_tree<K: SortKey>(mut sample: SampleDraw<K>) -> SplitterTree<K> {
    let a = sample.oversampling;
    assert!(a >= 1, "oversampling factor must be at least 1");
    assert!(
        sample.values.len() % a == 0,
        "sample length must be a multiple of the oversampling factor"
    );
    let bucket_count = sample.values.len() / a;
    assert!(
        bucket_count >= 2 && bucket_count.is_power_of_two(),
        "bucket count must be a power of two, at least 2"
    );

    small_sort::small_sort(&mut sample.values, &SmallSortConfig::default());
    let sorted = (1..bucket_count).map(|i| sample.values[a * i - 1]).collect();
    SplitterTree::from_sorted(sorted)
}
