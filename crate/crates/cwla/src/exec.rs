//! Index-ordered map over a range, data-parallel when the `parallel` feature
//! is enabled and sequential otherwise.
//!
//! Results are collected in index order in both modes, so any routine built
//! on these helpers produces identical output whatever the worker count.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Fallible variant: evaluates every index, then reports the lowest-index
/// error so failure messages do not depend on scheduling.
pub(crate) fn try_map_indexed<T, F>(n: usize, f: F) -> crate::Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> crate::Result<T> + Sync + Send,
{
    map_indexed(n, f).into_iter().collect()
}
