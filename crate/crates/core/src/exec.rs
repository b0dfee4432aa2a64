//! Data-parallel execution with a sequential fallback.
//!
//! The hot loops of the toolkit (per-sentence signature extraction, per-pair
//! similarity, per-record metric scoring, density-grid evaluation) go through
//! [`Execution::map`]. With the `parallel` feature the work is spread over
//! rayon's pool; without it, or with [`Execution::Sequential`], it runs on the
//! calling thread. Output order always matches input order, so results are
//! identical between the two modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Use rayon's global pool. Falls back to sequential when the crate is
    /// built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Order-preserving map over a slice.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Order-preserving map over `0..n`.
    pub fn map_range<U, F>(self, n: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }
}

/// Sizes rayon's global pool. Returns false when the pool was already
/// initialized or the crate was built without the `parallel` feature.
pub fn init_global_pool(workers: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        false
    }
}

/// Runs `f` over `items` with at most `workers` concurrent calls, returning
/// results in input order. Used for provider-bound fan-out where the degree of
/// concurrency must be capped independently of the global pool size.
pub fn bounded_map<T, U, F>(workers: usize, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    #[cfg(feature = "parallel")]
    if workers > 1 && items.len() > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => return pool.install(|| items.par_iter().map(&f).collect()),
            Err(e) => log::warn!("could not build worker pool ({e}); running sequentially"),
        }
    }
    items.iter().map(f).collect()
}
