//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! work out over the rayon pool; without it every helper runs sequentially.
//! Results never depend on the execution mode: reductions are either
//! commutative sums or ordered collections.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this mode actually runs on the thread pool in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Sizes the global worker pool. Must run before any parallel work; without
/// the `parallel` feature it only validates the count.
pub fn configure_threads(threads: usize) -> crate::error::Result<()> {
    if threads == 0 {
        return Err(crate::error::Error::InvalidConfig("thread count must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| crate::error::Error::InvalidConfig(e.to_string()))?;
    Ok(())
}

/// Maps `f` over `0..n` and returns the results in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Maps over `0..n` with a per-worker scratch value built by `init`, returning
/// results in index order.
pub fn map_indexed_with<S, T, I, F>(exec: Execution, n: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map_init(&init, |s, i| f(s, i)).collect();
    }
    let _ = exec;
    let mut scratch = init();
    (0..n).map(|i| f(&mut scratch, i)).collect()
}

/// Counts indices in `start..end` for which `pred` holds, with per-worker scratch.
pub fn count_with<S, I, F>(exec: Execution, start: u64, end: u64, init: I, pred: F) -> u64
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (start..end)
            .into_par_iter()
            .map_init(&init, |s, i| u64::from(pred(s, i)))
            .sum();
    }
    let _ = exec;
    let mut scratch = init();
    (start..end).filter(|&i| pred(&mut scratch, i)).count() as u64
}
