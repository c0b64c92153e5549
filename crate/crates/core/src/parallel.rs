//! Data-parallel map over grids and sweeps.
//!
//! Every frequency-domain operation in this crate is pointwise over its grid,
//! so parallelism is a pure map. With the `parallel` feature (default) the map
//! runs on the rayon pool; without it the same code path degrades to a
//! sequential iterator. Results are collected in input order either way, so
//! outputs are identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Always-sequential map, kept for benchmark comparisons against the
/// parallel path.
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
