//! Execution strategy for data-parallel loops.
//!
//! Work is always split into fixed-size blocks whose results are collected in
//! block order and reduced sequentially, so outputs do not depend on the
//! strategy or on the number of worker threads.

/// Trials per block for Monte Carlo estimators.
pub const TRIAL_BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Rayon work stealing. Without the `parallel` feature this runs sequentially.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Evaluates `f(0..count)` and returns the results in index order.
    pub fn map<T, F>(self, count: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..count).map(f).collect(),
            Exec::Parallel => par_map(count, f),
        }
    }

    /// Splits `total` items into blocks of `block` and maps `f(block_index, start, len)`.
    pub fn map_blocks<T, F>(self, total: u64, block: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, u64, u64) -> T + Sync + Send,
    {
        assert!(block > 0);
        let blocks = total.div_ceil(block);
        self.map(blocks, |b| {
            let start = b * block;
            let len = block.min(total - start);
            f(b, start, len)
        })
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let f = |i: u64| (i * i) as f64 / 3.0;
        assert_eq!(Exec::Sequential.map(1000, f), Exec::Parallel.map(1000, f));
    }

    #[test]
    fn blocks_cover_range() {
        let parts = Exec::Parallel.map_blocks(10_001, 4096, |b, s, l| (b, s, l));
        assert_eq!(parts, vec![(0, 0, 4096), (1, 4096, 4096), (2, 8192, 1809)]);
        assert!(Exec::Sequential.map_blocks(0, 10, |_, _, l| l).is_empty());
    }
}
