//! Key and record abstractions shared by every sorting stage.

use std::cmp::Ordering;

/// A totally ordered, copyable sort key.
///
/// The sorter is purely comparison based: it only ever asks whether one key
/// is less than another. Float keys are accepted as long as they contain no
/// NaN; the driver rejects inputs with unordered values up front, so the
/// comparison helpers below may assume a total order.
///
/// Every key is also a [`Record`] of itself, which lets the bucket sorters
/// run directly on key slices (splitter samples, key-only inputs).
pub trait SortKey: Copy + PartialOrd + Send + Sync + Record<Key = Self> + 'static {
    /// True for key types whose values can fall outside the total order
    /// (NaN for floats). The driver scans such inputs before sorting.
    const NEEDS_ORDER_CHECK: bool = false;

    /// Sample keys drawn per splitter when the caller does not override it.
    /// Wider keys use a smaller factor since each draw costs more bandwidth.
    const DEFAULT_OVERSAMPLING: usize = 30;

    /// Whether this value participates in the total order.
    #[inline]
    fn is_ordered(&self) -> bool {
        true
    }

    /// Total-order comparison, valid once `is_ordered` held for both sides.
    #[inline]
    fn cmp_keys(&self, other: &Self) -> Ordering {
        if *self < *other {
            Ordering::Less
        } else if *other < *self {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }
}

impl SortKey for u32 {}

impl SortKey for u64 {
    const DEFAULT_OVERSAMPLING: usize = 15;
}

impl SortKey for i32 {}

impl SortKey for i64 {
    const DEFAULT_OVERSAMPLING: usize = 15;
}

impl SortKey for f32 {
    const NEEDS_ORDER_CHECK: bool = true;

    #[inline]
    fn is_ordered(&self) -> bool {
        !self.is_nan()
    }
}

impl SortKey for f64 {
    const NEEDS_ORDER_CHECK: bool = true;
    const DEFAULT_OVERSAMPLING: usize = 15;

    #[inline]
    fn is_ordered(&self) -> bool {
        !self.is_nan()
    }
}

/// A sortable record: a key plus whatever payload travels with it.
///
/// Plain keys are their own records, so every sorting routine is written
/// once against this trait and works for both key-only and key-value data.
pub trait Record: Copy + Send + Sync + 'static {
    type Key: SortKey;

    fn key(&self) -> Self::Key;
}

macro_rules! impl_record_for_key {
    ($($t:ty),*) => {
        $(impl Record for $t {
            type Key = $t;

            #[inline]
            fn key(&self) -> $t {
                *self
            }
        })*
    };
}

impl_record_for_key!(u32, u64, i32, i64, f32, f64);

/// A key with an attached payload value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyValue<K, V> {
    pub key: K,
    pub value: V,
}

impl<K, V> KeyValue<K, V> {
    pub fn new(key: K, value: V) -> Self {
        Self { key, value }
    }
}

impl<K, V> Record for KeyValue<K, V>
where
    K: SortKey,
    V: Copy + Send + Sync + 'static,
{
    type Key = K;

    #[inline]
    fn key(&self) -> K {
        self.key
    }
}
