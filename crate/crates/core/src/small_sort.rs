//! Bucket sorters: an odd-even merge sorting network for cache-resident
//! chunks and an explicit-stack quicksort with a heapsort fallback for
//! everything else below the distribution threshold.

use crate::key::Record;

/// Tunables for the bucket sorters.
#[derive(Debug, Clone)]
pub struct SmallSortConfig {
    /// Chunk size at which the sorting network takes over from quicksort.
    /// Must be at least 2.
    pub network_threshold: usize,
    /// The quicksort depth cap is this factor times `log2(len)`; partitions
    /// that get deeper are finished with heapsort so that adversarial pivot
    /// sequences cannot degrade to quadratic time.
    pub max_depth_factor: usize,
}

impl Default for SmallSortConfig {
    fn default() -> Self {
        // 1024 records keep a chunk comfortably inside L1 for 4-byte and
        // 8-byte records.
        Self { network_threshold: 1024, max_depth_factor: 2 }
    }
}

/// Calls `apply(lo, hi)` for every comparator of Batcher's odd-even merge
/// network over `width` lanes, in a fixed data-independent order with
/// `lo < hi` for every pair. `width` must be a power of two.
///
/// The network sorts in `log2(width) * (log2(width) + 1) / 2` rounds; the
/// comparator set of each round is a function of the lane indices alone,
/// which is what makes the sequence usable on SIMD lanes or other
/// lockstep execution and keeps its behavior independent of the data.
pub fn for_each_comparator(width: usize, mut apply: impl FnMut(usize, usize)) {
    debug_assert!(width.is_power_of_two() || width <= 1);
    let mut p = 1;
    while p < width {
        let mut k = p;
        while k >= 1 {
            let mut j = k % p;
            while j + k < width {
                let span = k.min(width - j - k);
                for i in 0..span {
                    // Compare only within a merge block of width 2p.
                    if (i + j) / (2 * p) == (i + j + k) / (2 * p) {
                        apply(i + j, i + j + k);
                    }
                }
                j += 2 * k;
            }
            k /= 2;
        }
        p *= 2;
    }
}

/// Sorts `chunk` in place with Batcher's odd-even merge network.
///
/// The comparator schedule is the exact network for the next power of two
/// at or above `chunk.len()`; comparators whose upper lane falls outside
/// the chunk are skipped, which behaves exactly as if the missing lanes
/// were padded with a maximal sentinel (they would never swap).
pub fn odd_even_merge_sort<R: Record>(chunk: &mut [R]) {
    let len = chunk.len();
    if len < 2 {
        return;
    }
    for_each_comparator(len.next_power_of_two(), |lo, hi| {
        if hi < len && chunk[hi].key() < chunk[lo].key() {
            chunk.swap(lo, hi);
        }
    });
}

/// In-place quicksort for one bucket: explicit work stack, median-of-three
/// pivots, network-sorted leaves, and heapsort for partitions that exceed
/// the depth cap.
pub fn quicksort_bucket<R: Record>(bucket: &mut [R], cfg: &SmallSortConfig) {
    let len = bucket.len();
    if len < 2 {
        return;
    }
    // Chunks of two are the smallest the partition step can produce, so the
    // leaf size is clamped there even if the caller asks for less.
    let leaf = cfg.network_threshold.max(2);
    let depth_cap = cfg.max_depth_factor * len.ilog2() as usize;

    let mut pending = vec![(0usize, len, 0usize)];
    while let Some((begin, end, depth)) = pending.pop() {
        let part = &mut bucket[begin..end];
        if part.len() <= leaf {
            odd_even_merge_sort(part);
            continue;
        }
        if depth >= depth_cap {
            heapsort(part);
            continue;
        }
        let split = begin + hoare_partition(part);
        pending.push((begin, split, depth + 1));
        pending.push((split, end, depth + 1));
    }
}

/// Median-of-three Hoare partition over `part` (length at least 3).
///
/// Returns a split point `s` with `1 <= s < len` such that every record
/// left of `s` has a key at most the pivot and every record from `s` on has
/// a key at least the pivot. Crossing pointers split runs of equal keys
/// between both sides, so all-equal partitions divide in half instead of
/// degenerating.
fn hoare_partition<R: Record>(part: &mut [R]) -> usize {
    let last = part.len() - 1;
    let mid = part.len() / 2;
    // Sort the three sample positions; afterwards part[0] <= pivot and
    // part[last] >= pivot act as scan sentinels.
    if part[mid].key() < part[0].key() {
        part.swap(0, mid);
    }
    if part[last].key() < part[0].key() {
        part.swap(0, last);
    }
    if part[last].key() < part[mid].key() {
        part.swap(mid, last);
    }
    let pivot = part[mid].key();

    let mut i = 0usize;
    let mut j = last;
    loop {
        i += 1;
        while part[i].key() < pivot {
            i += 1;
        }
        j -= 1;
        while pivot < part[j].key() {
            j -= 1;
        }
        if i >= j {
            return j + 1;
        }
        part.swap(i, j);
    }
}

/// Bottom-up heapsort: the guaranteed O(n log n) fallback for partitions
/// that exhaust the quicksort depth budget.
fn heapsort<R: Record>(part: &mut [R]) {
    let len = part.len();
    for root in (0..len / 2).rev() {
        sift_down(part, root);
    }
    for end in (1..len).rev() {
        part.swap(0, end);
        sift_down(&mut part[..end], 0);
    }
}

fn sift_down<R: Record>(heap: &mut [R], mut root: usize) {
    loop {
        let mut child = 2 * root + 1;
        if child >= heap.len() {
            return;
        }
        if child + 1 < heap.len() && heap[child].key() < heap[child + 1].key() {
            child += 1;
        }
        if heap[root].key() < heap[child].key() {
            heap.swap(root, child);
            root = child;
        } else {
            return;
        }
    }
}

/// Sorts one bucket in place, dispatching on size: nothing to do for empty
/// and singleton buckets, the network for chunks it can swallow whole,
/// quicksort above that.
pub fn small_sort<R: Record>(bucket: &mut [R], cfg: &SmallSortConfig) {
    if bucket.len() <= 1 {
        return;
    }
    if bucket.len() <= cfg.network_threshold {
        odd_even_merge_sort(bucket);
    } else {
        quicksort_bucket(bucket, cfg);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::key::KeyValue;
    use crate::rng::Lcg64;

    fn is_sorted(v: &[u32]) -> bool {
        v.windows(2).all(|w| w[0] <= w[1])
    }

    #[test]
    fn network_width_four_comparator_schedule() {
        let mut pairs = Vec::new();
        for_each_comparator(4, |lo, hi| pairs.push((lo, hi)));
        assert_eq!(pairs, [(0, 1), (2, 3), (0, 2), (1, 3), (1, 2)]);
    }

    #[test]
    fn network_comparator_counts_match_batcher() {
        // Comparator count of the odd-even merge network is
        // n/4 * log2(n) * (log2(n) - 1) + n - 1 for n a power of two.
        for log_n in 1..=7u32 {
            let n = 1usize << log_n;
            let mut count = 0usize;
            for_each_comparator(n, |_, _| count += 1);
            let l = log_n as usize;
            assert_eq!(count, n / 4 * l * (l - 1) + n - 1, "width {n}");
        }
    }

    #[test]
    fn network_sorts_all_zero_one_inputs_up_to_16() {
        // The 0-1 principle: a comparator network that sorts every 0-1
        // sequence sorts every input.
        for n in [2usize, 4, 8, 16] {
            for mask in 0u32..(1 << n) {
                let mut v: Vec<u32> = (0..n).map(|i| (mask >> i) & 1).collect();
                let ones = v.iter().sum::<u32>() as usize;
                odd_even_merge_sort(&mut v);
                let (zeros, rest) = v.split_at(n - ones);
                assert!(zeros.iter().all(|&b| b == 0) && rest.iter().all(|&b| b == 1));
            }
        }
    }

    #[test]
    fn network_handles_non_power_of_two_lengths() {
        let mut rng = Lcg64::new(5);
        for len in 0..=70usize {
            let mut v: Vec<u32> = (0..len).map(|_| rng.next_below(16) as u32).collect();
            let mut expect = v.clone();
            expect.sort_unstable();
            odd_even_merge_sort(&mut v);
            assert_eq!(v, expect, "length {len}");
        }
    }

    #[test]
    fn quicksort_sorts_random_input() {
        let cfg = SmallSortConfig { network_threshold: 8, max_depth_factor: 2 };
        let mut rng = Lcg64::new(11);
        let mut v: Vec<u32> = (0..10_000).map(|_| rng.next_u32()).collect();
        let mut expect = v.clone();
        expect.sort_unstable();
        quicksort_bucket(&mut v, &cfg);
        assert_eq!(v, expect);
    }

    #[test]
    fn quicksort_survives_adversarial_patterns() {
        let cfg = SmallSortConfig { network_threshold: 4, max_depth_factor: 2 };
        let n = 4096u32;
        let patterns: Vec<Vec<u32>> = vec![
            (0..n).collect(),
            (0..n).rev().collect(),
            vec![7; n as usize],
            (0..n).map(|i| i % 2).collect(),
            // Organ pipe: ascending then descending.
            (0..n / 2).chain((0..n / 2).rev()).collect(),
        ];
        for mut v in patterns {
            let mut expect = v.clone();
            expect.sort_unstable();
            quicksort_bucket(&mut v, &cfg);
            assert_eq!(v, expect);
        }
    }

    #[test]
    fn depth_cap_falls_back_to_heapsort() {
        // A zero depth budget forces heapsort immediately; the result must
        // still be sorted.
        let cfg = SmallSortConfig { network_threshold: 2, max_depth_factor: 0 };
        let mut rng = Lcg64::new(3);
        let mut v: Vec<u32> = (0..5000).map(|_| rng.next_below(100) as u32).collect();
        quicksort_bucket(&mut v, &cfg);
        assert!(is_sorted(&v));
    }

    #[test]
    fn small_sort_dispatches_on_size() {
        let cfg = SmallSortConfig { network_threshold: 16, max_depth_factor: 2 };
        let mut rng = Lcg64::new(17);
        for len in [0usize, 1, 2, 15, 16, 17, 100, 3000] {
            let mut v: Vec<u32> = (0..len).map(|_| rng.next_u32()).collect();
            let mut expect = v.clone();
            expect.sort_unstable();
            small_sort(&mut v, &cfg);
            assert_eq!(v, expect, "length {len}");
        }
    }

    #[test]
    fn sorters_move_whole_records() {
        let cfg = SmallSortConfig { network_threshold: 8, max_depth_factor: 2 };
        let mut rng = Lcg64::new(23);
        let mut v: Vec<KeyValue<u32, u32>> = (0..500)
            .map(|i| KeyValue::new(rng.next_below(50) as u32, i))
            .collect();
        small_sort(&mut v, &cfg);
        for w in v.windows(2) {
            assert!(w[0].key <= w[1].key);
        }
        // Every payload still present exactly once.
        let mut values: Vec<u32> = v.iter().map(|r| r.value).collect();
        values.sort_unstable();
        assert_eq!(values, (0..500).collect::<Vec<_>>());
    }
}
