//! Benchmark input generators: five standard key distributions that stress
//! a sorter at different entropy levels and presortedness patterns.
//!
//! All generators produce `u32` values deterministically from a seed. The
//! blocked distributions derive one seed per block, so any block can be
//! produced independently (and in parallel) without changing the output.

use thiserror::Error;

use crate::rng::{derive_seed, Lcg64};

/// Values of the blocked distributions live in `[0, 2^31)`, split into `p`
/// contiguous slots.
const VALUE_SPAN: u64 = 1 << 31;

/// Ways a generator request can be malformed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("element count must be at least 1")]
    Empty,

    #[error("block count must be at least 2")]
    TooFewBlocks,

    /// The bucket-sorted pattern needs `blocks^2 <= len` so every sub-block
    /// holds at least one element.
    #[error("too few elements per sub-block")]
    TooFewElementsPerSubBlock,

    /// Blocked patterns need at least one element per block.
    #[error("block count exceeds element count")]
    TooManyBlocks,

    /// The duplicate pattern halves its block groups and needs exact
    /// power-of-two counts to come out even.
    #[error("element and block counts must be powers of two")]
    NotPowerOfTwo,
}

/// The five generator kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistKind {
    /// Independent draws from the full 32-bit range.
    Uniform,
    /// Each value is the mean of four independent uniform draws, giving a
    /// bell-shaped value distribution.
    Gaussian,
    /// `p` blocks, each covering all `p` value slots in ascending order:
    /// globally noisy but locally presorted.
    BucketSorted,
    /// `p` blocks whose value slots interleave across the first and second
    /// half of the block list.
    Staggered,
    /// Halving groups of blocks filled with a single descending value each;
    /// almost no key entropy.
    DeterministicDuplicates,
}

impl DistKind {
    pub const ALL: [DistKind; 5] = [
        DistKind::Uniform,
        DistKind::Gaussian,
        DistKind::BucketSorted,
        DistKind::Staggered,
        DistKind::DeterministicDuplicates,
    ];

    /// The name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            DistKind::Uniform => "uniform",
            DistKind::Gaussian => "gaussian",
            DistKind::BucketSorted => "bucket",
            DistKind::Staggered => "staggered",
            DistKind::DeterministicDuplicates => "detdup",
        }
    }

    pub fn parse(name: &str) -> Option<DistKind> {
        DistKind::ALL.iter().copied().find(|kind| kind.name() == name)
    }
}

/// Full recipe for one generated input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistSpec {
    pub kind: DistKind,
    pub len: usize,
    /// Block count for the blocked distributions; ignored by `Uniform` and
    /// `Gaussian`.
    pub blocks: usize,
    pub seed: u64,
}

impl DistSpec {
    /// A spec with the conventional block count: 240, clamped down where a
    /// small `len` could not satisfy the distribution's preconditions, and
    /// rounded to a power of two where the pattern demands one.
    pub fn new(kind: DistKind, len: usize, seed: u64) -> Self {
        DistSpec { kind, len, blocks: default_blocks(kind, len), seed }
    }

    pub fn with_blocks(kind: DistKind, len: usize, blocks: usize, seed: u64) -> Self {
        DistSpec { kind, len, blocks, seed }
    }

    /// Generates the input described by this spec.
    pub fn generate(&self) -> Result<Vec<u32>, InputError> {
        if self.len == 0 {
            return Err(InputError::Empty);
        }
        match self.kind {
            DistKind::Uniform => Ok(gen_uniform(self.len, self.seed)),
            DistKind::Gaussian => Ok(gen_gaussian(self.len, self.seed)),
            DistKind::BucketSorted => gen_bucket_sorted(self.len, self.blocks, self.seed),
            DistKind::Staggered => gen_staggered(self.len, self.blocks, self.seed),
            DistKind::DeterministicDuplicates => gen_duplicates(self.len, self.blocks),
        }
    }
}

fn default_blocks(kind: DistKind, len: usize) -> usize {
    const CONVENTIONAL: usize = 240;
    match kind {
        DistKind::Uniform | DistKind::Gaussian => CONVENTIONAL,
        DistKind::BucketSorted => CONVENTIONAL.min(len.isqrt()).max(2),
        DistKind::Staggered => CONVENTIONAL.min(len).max(2),
        DistKind::DeterministicDuplicates => {
            // Largest power of two at most min(256, len), but at least 2.
            let bound = len.min(256).max(2);
            if bound.is_power_of_two() { bound } else { bound.next_power_of_two() / 2 }
        }
    }
}

fn gen_uniform(len: usize, seed: u64) -> Vec<u32> {
    let mut rng = Lcg64::new(seed);
    (0..len).map(|_| rng.next_u32()).collect()
}

fn gen_gaussian(len: usize, seed: u64) -> Vec<u32> {
    let mut rng = Lcg64::new(seed);
    (0..len)
        .map(|_| {
            let sum = (0..4).map(|_| rng.next_u32() as u64).sum::<u64>();
            (sum / 4) as u32
        })
        .collect()
}

/// Inclusive value range of slot `j` of `p`: `[j * 2^31 / p, (j+1) * 2^31 / p - 1]`.
fn slot_range(j: usize, p: usize) -> (u64, u64) {
    let lo = j as u64 * VALUE_SPAN / p as u64;
    let hi = (j as u64 + 1) * VALUE_SPAN / p as u64 - 1;
    (lo, hi)
}

/// Splits `len` into `count` parts: all `len / count` except the last,
/// which absorbs the remainder.
fn part_len(index: usize, count: usize, len: usize) -> usize {
    let base = len / count;
    if index + 1 == count { len - (count - 1) * base } else { base }
}

fn gen_bucket_sorted(len: usize, blocks: usize, seed: u64) -> Result<Vec<u32>, InputError> {
    if blocks < 2 {
        return Err(InputError::TooFewBlocks);
    }
    if blocks.checked_mul(blocks).map_or(true, |sq| sq > len) {
        return Err(InputError::TooFewElementsPerSubBlock);
    }
    let mut out = Vec::with_capacity(len);
    for block in 0..blocks {
        let block_len = part_len(block, blocks, len);
        let mut rng = Lcg64::new(derive_seed(seed, block as u64, 0));
        // Every block walks all value slots in ascending order, so each
        // block is locally sorted at the granularity of the slots.
        for slot in 0..blocks {
            let sub_len = part_len(slot, blocks, block_len);
            let (lo, hi) = slot_range(slot, blocks);
            for _ in 0..sub_len {
                out.push(rng.next_in_range(lo, hi) as u32);
            }
        }
    }
    Ok(out)
}

fn gen_staggered(len: usize, blocks: usize, seed: u64) -> Result<Vec<u32>, InputError> {
    if blocks < 2 {
        return Err(InputError::TooFewBlocks);
    }
    if blocks > len {
        return Err(InputError::TooManyBlocks);
    }
    let mut out = Vec::with_capacity(len);
    for block in 0..blocks {
        let block_len = part_len(block, blocks, len);
        let mut rng = Lcg64::new(derive_seed(seed, block as u64, 0));
        // Blocks in the first half of the list take the odd value slots in
        // order, blocks in the second half the even ones, so consuming the
        // blocks sequentially staggers across the value range.
        let index = block + 1;
        let slot = if index <= blocks / 2 { 2 * index - 1 } else { 2 * (index - blocks / 2) - 2 };
        let (lo, hi) = slot_range(slot, blocks);
        for _ in 0..block_len {
            out.push(rng.next_in_range(lo, hi) as u32);
        }
    }
    Ok(out)
}

fn gen_duplicates(len: usize, blocks: usize) -> Result<Vec<u32>, InputError> {
    if blocks < 2 {
        return Err(InputError::TooFewBlocks);
    }
    if !len.is_power_of_two() || !blocks.is_power_of_two() {
        return Err(InputError::NotPowerOfTwo);
    }
    if blocks > len {
        return Err(InputError::TooManyBlocks);
    }
    let block_len = len / blocks;
    let log_len = len.ilog2();
    let mut out = Vec::with_capacity(len);
    // Group g covers blocks/2^(g+1) blocks, all holding the single value
    // log2(len) - g; the halving leaves one block over at the end, which
    // takes the next value in the descending sequence.
    let mut group = 0u32;
    let mut group_blocks = blocks / 2;
    let mut filled = 0usize;
    while filled < blocks {
        let take = group_blocks.max(1).min(blocks - filled);
        let value = log_len - group;
        out.extend(std::iter::repeat(value).take(take * block_len));
        filled += take;
        group += 1;
        group_blocks /= 2;
    }
    Ok(out)
}
