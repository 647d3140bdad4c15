//! Recursive sort driver: repeated k-way distribution until buckets fit
//! the small-sort threshold, largest-first bucket scheduling, and the
//! ping-pong bookkeeping between the caller's buffer and one auxiliary
//! buffer of the same length.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::distribute::{distribute, BucketDescriptor};
use crate::error::SortError;
use crate::key::{KeyValue, Record, SortKey};
use crate::rng::derive_seed;
use crate::small_sort::{small_sort, SmallSortConfig};
use crate::splitters::{build_splitter_tree, draw_sample};

/// All tunables of the sorter. `Default` gives the parameters the library
/// was tuned with; construct-and-override for anything else.
#[derive(Debug, Clone)]
pub struct SortConfig {
    /// Distribution fan-out. Must be a power of two, at least 2.
    pub bucket_count: usize,
    /// Buckets strictly below this size are sorted in place instead of
    /// distributed again. Must be at least `network_threshold`.
    pub small_sort_threshold: usize,
    /// Sample keys drawn per splitter. `None` picks the key type's default
    /// (30 for 32-bit keys, 15 for 64-bit keys).
    pub oversampling: Option<usize>,
    /// Records per tile in the histogram and scatter phases.
    pub tile_size: usize,
    /// Chunk size handed to the sorting network inside the bucket sorters.
    pub network_threshold: usize,
    /// Base seed for splitter sampling. Every recursive range derives its
    /// own stream from this, the range begin, and the depth.
    pub seed: u64,
    /// Worker threads. 0 uses the ambient thread pool; any other value
    /// builds a dedicated pool of exactly that many workers for this call.
    pub workers: usize,
}

impl Default for SortConfig {
    fn default() -> Self {
        Self {
            bucket_count: 128,
            small_sort_threshold: 1 << 17,
            oversampling: None,
            tile_size: 2048,
            network_threshold: 1024,
            seed: 0,
            workers: 0,
        }
    }
}

impl SortConfig {
    /// Checks the documented field bounds.
    pub fn validate(&self) -> Result<(), SortError> {
        if self.bucket_count < 2 || !self.bucket_count.is_power_of_two() {
            return Err(SortError::InvalidConfig(
                "bucket_count must be a power of two, at least 2",
            ));
        }
        if self.network_threshold < 2 {
            return Err(SortError::InvalidConfig("network_threshold must be at least 2"));
        }
        if self.small_sort_threshold < self.network_threshold {
            return Err(SortError::InvalidConfig(
                "small_sort_threshold must be at least network_threshold",
            ));
        }
        if self.oversampling == Some(0) {
            return Err(SortError::InvalidConfig("oversampling must be at least 1"));
        }
        if self.tile_size < 1 {
            return Err(SortError::InvalidConfig("tile_size must be at least 1"));
        }
        Ok(())
    }

    /// Recursion level at which a bucket is handed to the small sorters no
    /// matter how large it still is. Splitters drawn from heavily skewed
    /// data can fail to shrink a bucket, so without this cap such inputs
    /// would recurse forever; the slack of 4 beyond the expected depth
    /// leaves normal inputs untouched.
    pub fn depth_cap(&self, input_len: usize) -> usize {
        let mut cap = 4usize;
        let mut reach = self.small_sort_threshold.max(1);
        while reach < input_len {
            reach = reach.saturating_mul(self.bucket_count);
            cap += 1;
        }
        cap
    }

    fn small_sort_config(&self) -> SmallSortConfig {
        SmallSortConfig {
            network_threshold: self.network_threshold,
            max_depth_factor: 2,
        }
    }

    fn oversampling_for<K: SortKey>(&self) -> usize {
        self.oversampling.unwrap_or(K::DEFAULT_OVERSAMPLING)
    }
}

/// Which buffer currently holds a range of records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BufferParity {
    /// The caller's buffer, where sorted data must end up.
    Primary,
    /// The auxiliary buffer.
    Aux,
}

impl BufferParity {
    fn flip(self) -> Self {
        match self {
            BufferParity::Primary => BufferParity::Aux,
            BufferParity::Aux => BufferParity::Primary,
        }
    }
}

/// One pending range of the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkItem {
    pub begin: usize,
    pub end: usize,
    pub parity: BufferParity,
    pub depth: usize,
}

impl WorkItem {
    pub fn len(&self) -> usize {
        self.end - self.begin
    }

    pub fn is_empty(&self) -> bool {
        self.begin == self.end
    }

    fn schedule_key(&self) -> (std::cmp::Reverse<usize>, usize) {
        (std::cmp::Reverse(self.len()), self.begin)
    }
}

/// Orders pending buckets largest first (ties by ascending begin), so the
/// work that dominates the critical path starts as early as possible and
/// the order is deterministic.
pub fn schedule_buckets(items: &mut [WorkItem]) {
    items.sort_by_key(WorkItem::schedule_key);
}

/// What the driver does with one bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BucketAction {
    /// Provably sorted already: constant bucket, or fewer than two records.
    AlreadySorted,
    /// Hand the range to the bucket sorters.
    SmallSort,
    /// Run another distribution pass on it.
    Recurse,
}

/// Picks the action for a bucket that came out of a pass at `depth`.
pub fn classify_bucket<K: SortKey>(
    descriptor: &BucketDescriptor<K>,
    cfg: &SortConfig,
    depth: usize,
    depth_cap: usize,
) -> BucketAction {
    if descriptor.is_constant || descriptor.len() <= 1 {
        BucketAction::AlreadySorted
    } else if descriptor.len() < cfg.small_sort_threshold || depth >= depth_cap {
        BucketAction::SmallSort
    } else {
        BucketAction::Recurse
    }
}

/// Counters reported by [`sort_with_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SortStats {
    /// Distribution levels the deepest range went through. Uniform data at
    /// the default parameters stays within ceil(log_k(n / threshold)) + 1.
    pub distribution_levels: usize,
}

struct DriverContext<'a> {
    cfg: &'a SortConfig,
    depth_cap: usize,
    small: SmallSortConfig,
    levels: AtomicUsize,
}

/// One classified bucket plus its slices of both buffers.
struct ChildJob<'a, R: Record> {
    item: WorkItem,
    descriptor: BucketDescriptor<R::Key>,
    primary: &'a mut [R],
    aux: &'a mut [R],
}

/// Sorts keys in place with the default configuration.
pub fn sort<K: SortKey>(keys: &mut [K]) -> Result<(), SortError> {
    sort_with_config(keys, &SortConfig::default())
}

/// Sorts `keys` in place and applies the same permutation to `values`.
/// Equal-keyed records may appear in any order, but each key keeps the
/// value it arrived with.
pub fn sort_pairs<K, V>(keys: &mut [K], values: &mut [V]) -> Result<(), SortError>
where
    K: SortKey,
    V: Copy + Send + Sync + 'static,
{
    if keys.len() != values.len() {
        return Err(SortError::LengthMismatch);
    }
    let mut records: Vec<KeyValue<K, V>> = keys
        .iter()
        .zip(values.iter())
        .map(|(&k, &v)| KeyValue::new(k, v))
        .collect();
    sort_with_config(&mut records, &SortConfig::default())?;
    for ((key, value), record) in keys.iter_mut().zip(values.iter_mut()).zip(&records) {
        *key = record.key;
        *value = record.value;
    }
    Ok(())
}

/// Sorts records in place with an explicit configuration.
pub fn sort_with_config<R: Record>(data: &mut [R], cfg: &SortConfig) -> Result<(), SortError> {
    sort_with_stats(data, cfg).map(|_| ())
}

/// Like [`sort_with_config`], additionally reporting recursion counters.
pub fn sort_with_stats<R: Record>(data: &mut [R], cfg: &SortConfig) -> Result<SortStats, SortError> {
    cfg.validate()?;
    if R::Key::NEEDS_ORDER_CHECK && !data.iter().all(|r| r.key().is_ordered()) {
        return Err(SortError::UnorderedKey);
    }
    if data.len() <= 1 {
        return Ok(SortStats::default());
    }
    if cfg.workers == 0 {
        run_sort(data, cfg)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| SortError::WorkerPool(e.to_string()))?;
        pool.install(|| run_sort(data, cfg))
    }
}

fn run_sort<R: Record>(data: &mut [R], cfg: &SortConfig) -> Result<SortStats, SortError> {
    let n = data.len();
    let depth_cap = cfg.depth_cap(n);
    let ctx = DriverContext {
        cfg,
        depth_cap,
        small: cfg.small_sort_config(),
        levels: AtomicUsize::new(0),
    };

    let root = BucketDescriptor::<R::Key> {
        begin: 0,
        end: n,
        lo_splitter: None,
        hi_splitter: None,
        is_constant: false,
    };
    match classify_bucket(&root, cfg, 0, depth_cap) {
        BucketAction::AlreadySorted => {}
        BucketAction::SmallSort => small_sort(data, &ctx.small),
        BucketAction::Recurse => {
            // The distribution passes ping-pong between the caller's buffer
            // and one auxiliary buffer of the same length.
            let mut aux: Vec<R> = Vec::new();
            aux.try_reserve_exact(n).map_err(|_| SortError::AllocationFailed)?;
            aux.extend_from_slice(data);
            let item = WorkItem { begin: 0, end: n, parity: BufferParity::Primary, depth: 0 };
            recurse_range(data, &mut aux, item, &ctx)?;
        }
    }
    Ok(SortStats { distribution_levels: ctx.levels.load(AtomicOrdering::Relaxed) })
}

/// Runs one distribution pass on `item`'s range and dispatches the
/// resulting buckets. `primary` and `aux` are the two buffer views of
/// exactly this range; `item.parity` says which one currently holds the
/// live records.
fn recurse_range<R: Record>(
    primary: &mut [R],
    aux: &mut [R],
    item: WorkItem,
    ctx: &DriverContext<'_>,
) -> Result<(), SortError> {
    ctx.levels.fetch_max(item.depth + 1, AtomicOrdering::Relaxed);

    // Ranges seed their sample streams from (base seed, begin, depth), so
    // every range draws an independent deterministic stream regardless of
    // which worker runs it and in what order.
    let seed = derive_seed(ctx.cfg.seed, item.begin as u64, item.depth as u64);
    let descriptors = match item.parity {
        BufferParity::Primary => one_pass(primary, aux, seed, ctx)?,
        BufferParity::Aux => one_pass(aux, primary, seed, ctx)?,
    };

    let child_parity = item.parity.flip();
    let child_depth = item.depth + 1;

    // Split both buffers at the bucket boundaries. Descriptors tile the
    // range in bucket order, so peeling slices off the front lines up.
    let mut jobs: Vec<ChildJob<'_, R>> = Vec::with_capacity(descriptors.len());
    let mut rest_primary = primary;
    let mut rest_aux = aux;
    for descriptor in descriptors {
        let len = descriptor.len();
        let (job_primary, tail_primary) = rest_primary.split_at_mut(len);
        let (job_aux, tail_aux) = rest_aux.split_at_mut(len);
        rest_primary = tail_primary;
        rest_aux = tail_aux;
        jobs.push(ChildJob {
            item: WorkItem {
                begin: item.begin + descriptor.begin,
                end: item.begin + descriptor.end,
                parity: child_parity,
                depth: child_depth,
            },
            descriptor,
            primary: job_primary,
            aux: job_aux,
        });
    }

    // Largest buckets first, exactly like schedule_buckets orders items.
    jobs.sort_by_key(|job| job.item.schedule_key());

    jobs.into_par_iter().try_for_each(|job| handle_child(job, ctx))
}

fn one_pass<R: Record>(
    src: &[R],
    dst: &mut [R],
    seed: u64,
    ctx: &DriverContext<'_>,
) -> Result<Vec<BucketDescriptor<R::Key>>, SortError> {
    let sample = draw_sample(
        src,
        ctx.cfg.oversampling_for::<R::Key>(),
        ctx.cfg.bucket_count,
        seed,
    )?;
    let tree = build_splitter_tree(sample);
    distribute(src, &tree, ctx.cfg.tile_size, dst)
}

fn handle_child<R: Record>(job: ChildJob<'_, R>, ctx: &DriverContext<'_>) -> Result<(), SortError> {
    match classify_bucket(&job.descriptor, ctx.cfg, job.item.depth, ctx.depth_cap) {
        BucketAction::AlreadySorted => {
            settle_to_primary(job.primary, job.aux, job.item.parity);
            Ok(())
        }
        BucketAction::SmallSort => {
            settle_to_primary(job.primary, job.aux, job.item.parity);
            small_sort(job.primary, &ctx.small);
            Ok(())
        }
        BucketAction::Recurse => recurse_range(job.primary, job.aux, job.item, ctx),
    }
}

/// Copies a finished range back into the caller's buffer if it currently
/// lives in the auxiliary one.
fn settle_to_primary<R: Record>(primary: &mut [R], aux: &[R], parity: BufferParity) {
    if parity == BufferParity::Aux {
        primary.copy_from_slice(aux);
    }
}
