//! Seedable pseudo-random generation for splitter sampling and input
//! synthesis.
//!
//! Everything that needs randomness goes through [`Lcg64`], a fixed 64-bit
//! linear congruential generator. Results therefore depend only on the seeds
//! handed in, never on global state or on how many worker threads happen to
//! run, which is what makes sort output reproducible across machines.

/// Multiplier and increment of Knuth's MMIX linear congruential generator.
const LCG_MUL: u64 = 6364136223846793005;
const LCG_ADD: u64 = 1442695040888963407;

/// A 64-bit linear congruential generator.
///
/// The low bits of an LCG state are weak, so consumers only ever see the
/// high half (or a product-based range reduction that favors high bits).
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        // One warm-up step so that nearby seeds do not yield nearby output.
        let mut rng = Lcg64 { state: seed };
        rng.step();
        rng
    }

    #[inline]
    fn step(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(LCG_MUL).wrapping_add(LCG_ADD);
        self.state
    }

    /// Next pseudo-random 32-bit value (the high half of the state).
    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        (self.step() >> 32) as u32
    }

    /// Next pseudo-random 64-bit value.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        // Two steps, keeping only the strong halves.
        let hi = (self.step() >> 32) as u64;
        let lo = (self.step() >> 32) as u64;
        (hi << 32) | lo
    }

    /// Uniform draw from `[0, bound)`. `bound` must be nonzero.
    ///
    /// Multiply-shift reduction: unlike a modulo it is driven by the high
    /// state bits, and its bias (at most `bound` in 2^64) is far below
    /// anything the statistical tests here could see.
    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.step() as u128 * bound as u128) >> 64) as u64
    }

    /// Uniform draw from the inclusive range `[lo, hi]`.
    #[inline]
    pub fn next_in_range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.next_below(hi - lo + 1)
    }
}

/// SplitMix64 finalizer: a cheap bijective mixer on 64-bit words.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed from a base seed and two stream
/// coordinates (for example a range begin and a recursion depth, or a block
/// index). Distinct coordinates give unrelated streams, so parallel callers
/// can seed themselves without coordination.
#[inline]
pub fn derive_seed(base: u64, coord_a: u64, coord_b: u64) -> u64 {
    splitmix64(base ^ splitmix64(coord_a ^ splitmix64(coord_b)))
}
