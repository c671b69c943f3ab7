//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) work fans out over the rayon
//! global pool; without it every helper runs on the calling thread. Results are
//! always returned in input order, so output never depends on scheduling.

/// How a sweep or counting kernel distributes its work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
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

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }
        _ => items.into_iter().map(f).collect(),
    }
}

/// Sums `f` over `items`.
pub fn sum<T, F>(exec: Execution, items: Vec<T>, f: F) -> u128
where
    T: Send,
    F: Fn(T) -> u128 + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).sum()
        }
        _ => items.into_iter().map(f).sum(),
    }
}
