//! Data-parallel fan-out helpers for the verification suites. All checked
//! state is immutable, so suites map over sampled tuples and collect in
//! order; with the `parallel` feature this runs on rayon, and the sequential
//! twin is always available for comparison (see `benches/parallel.rs`).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_seq<T: Sync, R: Send, F: Fn(&T) -> R + Sync>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(|t| f(t)).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T: Sync, R: Send, F: Fn(&T) -> R + Sync>(items: &[T], f: F) -> Vec<R> {
    items.par_iter().map(|t| f(t)).collect()
}

/// Order-preserving map over a slice, parallel when the feature is enabled.
pub fn map<T: Sync, R: Send, F: Fn(&T) -> R + Sync>(items: &[T], f: F) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        map_par(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(items, f)
    }
}

/// First failure (by index order) out of a fallible check over items.
pub fn first_err<T: Sync, E: Send, F: Fn(&T) -> Result<(), E> + Sync>(
    items: &[T],
    f: F,
) -> Result<(), E> {
    let results = map(items, f);
    for r in results {
        r?;
    }
    Ok(())
}
