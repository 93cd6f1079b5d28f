//! Thin wrappers around the hot data-parallel loops.
//!
//! With the `parallel` feature (default) these dispatch to rayon; without it
//! they run the same loop sequentially. Only order-independent reductions
//! (sums, minima, element-wise maps) go through here, so enabling or
//! disabling the feature never changes results, only wall time.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, collecting results in input order.
pub(crate) fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Map `f` over indices `0..n`, collecting results in index order.
pub(crate) fn map_indices<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Minimum of `f` over `items`; `f64::INFINITY` when empty.
pub(crate) fn min_f64<T, F>(items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items
            .par_iter()
            .map(f)
            .reduce(|| f64::INFINITY, f64::min)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).fold(f64::INFINITY, f64::min)
    }
}

/// Sum of `f` over `items` as a u128 (rank counting can exceed u64).
pub(crate) fn sum_u128<T, F>(items: &[T], f: F) -> u128
where
    T: Sync,
    F: Fn(&T) -> u128 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).sum()
    }
}
