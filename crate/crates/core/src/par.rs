//! Single seam between the rayon and sequential execution lanes.
//!
//! Every data-parallel computation in the crate (profiles across outputs,
//! supremum searches across candidate indices, grid sweeps) is expressed as
//! an order-preserving map over an index set followed by a sequential
//! reduction, so one helper is enough. With the `parallel` feature the map
//! fans out on the current rayon pool; without it the same code path runs on
//! a plain iterator.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
