//! One k-way distribution pass: per-tile histograms, a column-major
//! exclusive scan, and an offset-driven scatter into the output buffer.
//!
//! The pass is bulk-synchronous. Tiles are counted independently, a single
//! scan turns the counts into disjoint output slots, and the scatter then
//! writes every tile's records into its own slots without any locks or
//! atomics. Bucket indices are recomputed from the splitter tree in the
//! scatter instead of being stored, trading a second round of lookups for
//! not materializing an index per record.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::SortError;
use crate::key::{Record, SortKey};
use crate::splitters::SplitterTree;

/// Per-bucket counts for every tile of a segment, flattened column-major:
/// the `tile_count` counts for bucket 0 come first, then bucket 1, and so
/// on. Scanning this layout left to right yields contiguous output regions
/// per bucket, subdivided by tile in tile order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramMatrix {
    pub counts: Vec<usize>,
    pub bucket_count: usize,
    pub tile_count: usize,
}

impl HistogramMatrix {
    /// Flat index of the count for `bucket` in `tile`.
    #[inline]
    pub fn slot(&self, bucket: usize, tile: usize) -> usize {
        debug_assert!(bucket < self.bucket_count && tile < self.tile_count);
        bucket * self.tile_count + tile
    }

    /// Sum of all counts; equals the segment length after a counting pass.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Exclusive prefix sums over a flattened [`HistogramMatrix`], plus the
/// grand total. `offsets[f]` is the first output position of flat slot `f`;
/// the slot ends where the next one begins (or at `total` for the last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetTable {
    pub offsets: Vec<usize>,
    pub bucket_count: usize,
    pub tile_count: usize,
    pub total: usize,
}

impl OffsetTable {
    /// First output position of `bucket`'s contiguous region.
    pub fn bucket_begin(&self, bucket: usize) -> usize {
        if bucket >= self.bucket_count || self.tile_count == 0 {
            return self.total;
        }
        self.offsets[bucket * self.tile_count]
    }

    /// Output slot `[begin, end)` reserved for `bucket` within `tile`.
    pub fn tile_slot(&self, bucket: usize, tile: usize) -> (usize, usize) {
        let flat = bucket * self.tile_count + tile;
        let begin = self.offsets[flat];
        let end = if flat + 1 < self.offsets.len() { self.offsets[flat + 1] } else { self.total };
        (begin, end)
    }
}

/// Output range and delimiting splitters of one bucket after a pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucketDescriptor<K> {
    pub begin: usize,
    pub end: usize,
    /// Splitter strictly below every key in the bucket; `None` for the
    /// first bucket.
    pub lo_splitter: Option<K>,
    /// Splitter every key in the bucket is at most; `None` for the last
    /// bucket.
    pub hi_splitter: Option<K>,
    /// Both delimiting splitters exist and are equal: every key in the
    /// bucket equals them, so the bucket needs no further sorting.
    pub is_constant: bool,
}

impl<K> BucketDescriptor<K> {
    pub fn len(&self) -> usize {
        self.end - self.begin
    }

    pub fn is_empty(&self) -> bool {
        self.begin == self.end
    }
}

/// Counts how many keys of `tile` fall into each of the tree's buckets.
pub fn compute_tile_histogram<R: Record>(tile: &[R], tree: &SplitterTree<R::Key>) -> Vec<usize> {
    let mut counts = vec![0usize; tree.bucket_count()];
    tile_histogram_into(tile, tree, &mut counts);
    counts
}

fn tile_histogram_into<R: Record>(tile: &[R], tree: &SplitterTree<R::Key>, counts: &mut [usize]) {
    debug_assert_eq!(counts.len(), tree.bucket_count());
    for record in tile {
        counts[tree.traverse(record.key()) - 1] += 1;
    }
}

/// Exclusive prefix sum over the flattened histogram.
pub fn exclusive_scan_column_major(hist: &HistogramMatrix) -> OffsetTable {
    let mut offsets = Vec::with_capacity(hist.counts.len());
    let mut running = 0usize;
    for &count in &hist.counts {
        offsets.push(running);
        running += count;
    }
    OffsetTable {
        offsets,
        bucket_count: hist.bucket_count,
        tile_count: hist.tile_count,
        total: running,
    }
}

/// Raw view of the output segment for the parallel scatter. The scanned
/// histogram reserves pairwise disjoint slots per (bucket, tile) pair, so
/// concurrent tile writers never alias; the per-write cursor check in
/// [`scatter_tile`] enforces exactly that before each store.
struct SharedOut<T> {
    ptr: *mut T,
    len: usize,
}

unsafe impl<T: Send> Sync for SharedOut<T> {}

impl<T> SharedOut<T> {
    fn new(out: &mut [T]) -> Self {
        Self { ptr: out.as_mut_ptr(), len: out.len() }
    }

    /// Caller must guarantee `index < len` and that no other thread writes
    /// this index during the scatter.
    #[inline]
    unsafe fn write(&self, index: usize, value: T) {
        debug_assert!(index < self.len);
        unsafe { self.ptr.add(index).write(value) };
    }
}

/// Scatters one tile into the output segment.
///
/// `cursors[b]` must hold the absolute output position reserved for this
/// tile's share of bucket `b`, and `slot_ends[b]` the end of that slot.
/// Bucket indices are recomputed with `tree.traverse`, so the tile must be
/// byte-identical to the one the histogram pass counted; if a cursor would
/// run past its slot end the two passes disagreed and the scatter aborts
/// with [`SortError::ScatterCorruption`]. Within one tile and one bucket,
/// records keep their input order.
pub fn scatter_tile<R: Record>(
    tile: &[R],
    tree: &SplitterTree<R::Key>,
    cursors: &mut [usize],
    slot_ends: &[usize],
    out: &mut [R],
) -> Result<(), SortError> {
    let shared = SharedOut::new(out);
    scatter_tile_shared(tile, tree, cursors, slot_ends, &shared)
}

fn scatter_tile_shared<R: Record>(
    tile: &[R],
    tree: &SplitterTree<R::Key>,
    cursors: &mut [usize],
    slot_ends: &[usize],
    out: &SharedOut<R>,
) -> Result<(), SortError> {
    assert_eq!(cursors.len(), tree.bucket_count());
    assert_eq!(slot_ends.len(), tree.bucket_count());
    // With every slot end bounded by the output length, the per-write
    // cursor check below doubles as the bounds proof for the raw store.
    assert!(slot_ends.iter().all(|&end| end <= out.len));

    for record in tile {
        let bucket = tree.traverse(record.key()) - 1;
        let position = cursors[bucket];
        if position >= slot_ends[bucket] {
            return Err(SortError::ScatterCorruption { bucket });
        }
        unsafe { out.write(position, *record) };
        cursors[bucket] = position + 1;
    }
    Ok(())
}

/// Runs one full distribution pass over `segment`, writing the permuted
/// records into `out` (same length) and returning one descriptor per
/// bucket. Tiles are independent parallel tasks in the histogram and
/// scatter phases; the scan in between is a single cheap sequential sweep
/// over `bucket_count * tile_count` counters.
pub fn distribute<R: Record>(
    segment: &[R],
    tree: &SplitterTree<R::Key>,
    tile_size: usize,
    out: &mut [R],
) -> Result<Vec<BucketDescriptor<R::Key>>, SortError> {
    assert!(tile_size >= 1, "tile size must be at least 1");
    assert_eq!(segment.len(), out.len(), "output must match the segment length");
    let k = tree.bucket_count();
    let n = segment.len();
    if n == 0 {
        let empty = OffsetTable { offsets: Vec::new(), bucket_count: k, tile_count: 0, total: 0 };
        return Ok(build_descriptors(tree, &empty));
    }
    let tile_count = n.div_ceil(tile_size);

    // Counting phase: one contiguous row of k counters per tile, so tiles
    // share no cache lines, then a transpose into the column-major matrix.
    let mut rows = vec![0usize; tile_count * k];
    rows.par_chunks_mut(k)
        .zip(segment.par_chunks(tile_size))
        .for_each(|(row, tile)| tile_histogram_into(tile, tree, row));

    let mut hist = HistogramMatrix {
        counts: vec![0usize; k * tile_count],
        bucket_count: k,
        tile_count,
    };
    hist.counts
        .par_chunks_mut(tile_count)
        .enumerate()
        .for_each(|(bucket, column)| {
            for (tile, slot) in column.iter_mut().enumerate() {
                *slot = rows[tile * k + bucket];
            }
        });

    let offsets = exclusive_scan_column_major(&hist);
    debug_assert_eq!(offsets.total, n);

    // Scatter phase: every tile owns one slot per bucket; slots are
    // pairwise disjoint by construction of the exclusive scan.
    let shared = SharedOut::new(out);
    segment
        .par_chunks(tile_size)
        .enumerate()
        .try_for_each(|(tile_index, tile)| {
            let mut cursors = vec![0usize; k];
            let mut ends = vec![0usize; k];
            for bucket in 0..k {
                let (begin, end) = offsets.tile_slot(bucket, tile_index);
                cursors[bucket] = begin;
                ends[bucket] = end;
            }
            scatter_tile_shared(tile, tree, &mut cursors, &ends, &shared)
        })?;

    Ok(build_descriptors(tree, &offsets))
}

fn build_descriptors<K: SortKey>(
    tree: &SplitterTree<K>,
    offsets: &OffsetTable,
) -> Vec<BucketDescriptor<K>> {
    let k = tree.bucket_count();
    let splitters = tree.sorted_splitters();
    (0..k)
        .map(|bucket| {
            let begin = offsets.bucket_begin(bucket);
            let end = offsets.bucket_begin(bucket + 1);
            let lo_splitter = (bucket > 0).then(|| splitters[bucket - 1]);
            let hi_splitter = (bucket + 1 < k).then(|| splitters[bucket]);
            let is_constant = match (lo_splitter, hi_splitter) {
                (Some(lo), Some(hi)) => lo.cmp_keys(&hi) == Ordering::Equal,
                _ => false,
            };
            BucketDescriptor { begin, end, lo_splitter, hi_splitter, is_constant }
        })
        .collect()
}
