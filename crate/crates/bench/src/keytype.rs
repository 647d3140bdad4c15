//! Benchmarked key layouts and the record plumbing the harness needs on
//! top of the sorting traits: a canonical total order for oracle
//! comparisons, a digest for multiset hashing, and a perturbation hook for
//! fault injection.

use std::cmp::Ordering;

use samplesort::rng::splitmix64;
use samplesort::{Pair, Record};

/// Key layouts the harness can benchmark. Inputs are always generated as
/// `u32` values and widened into the requested layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyType {
    U32,
    U64,
    F32,
    Pair,
}

impl KeyType {
    pub const ALL: [KeyType; 4] = [KeyType::U32, KeyType::U64, KeyType::F32, KeyType::Pair];

    /// The name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            KeyType::U32 => "u32",
            KeyType::U64 => "u64",
            KeyType::F32 => "f32",
            KeyType::Pair => "pair",
        }
    }

    pub fn parse(name: &str) -> Option<KeyType> {
        KeyType::ALL.iter().copied().find(|t| t.name() == name)
    }
}

/// Record extensions used by validation and fault injection.
pub trait BenchRecord: Record {
    /// Total order over whole records (key first, then payload), used by
    /// the sorted-copy multiset comparison.
    fn canonical_cmp(&self, other: &Self) -> Ordering;

    /// Digest for the commutative multiset hash at large input sizes.
    fn digest(&self) -> u64;

    /// Minimal change that breaks multiset equality against the original
    /// input; proves that validation actually rejects bad output.
    fn perturb(&mut self);
}

impl BenchRecord for u32 {
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn digest(&self) -> u64 {
        splitmix64(*self as u64)
    }

    fn perturb(&mut self) {
        *self ^= 1;
    }
}

impl BenchRecord for u64 {
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn digest(&self) -> u64 {
        splitmix64(*self)
    }

    fn perturb(&mut self) {
        *self ^= 1;
    }
}

impl BenchRecord for f32 {
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }

    fn digest(&self) -> u64 {
        splitmix64(self.to_bits() as u64)
    }

    fn perturb(&mut self) {
        // Flip the low mantissa bit. Benchmark floats are converted u32
        // values, so the result stays finite and ordinary.
        *self = f32::from_bits(self.to_bits() ^ 1);
    }
}

impl BenchRecord for Pair {
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key).then(self.value.cmp(&other.value))
    }

    fn digest(&self) -> u64 {
        splitmix64(((self.key as u64) << 32) | self.value as u64)
    }

    fn perturb(&mut self) {
        self.value ^= 1;
    }
}

/// Widens generated values to 64-bit keys.
pub fn to_u64(values: &[u32]) -> Vec<u64> {
    values.iter().map(|&v| v as u64).collect()
}

/// Converts generated values to floats. u32-to-f32 conversion is monotone
/// (rounding preserves order), so the float workload sorts like the integer
/// one except that rounding may merge close keys into ties.
pub fn to_f32(values: &[u32]) -> Vec<f32> {
    values.iter().map(|&v| v as f32).collect()
}

/// Tags every key with its input position as the payload.
pub fn to_pairs(values: &[u32]) -> Vec<Pair> {
    values
        .iter()
        .enumerate()
        .map(|(position, &v)| Pair::new(v, position as u32))
        .collect()
}
