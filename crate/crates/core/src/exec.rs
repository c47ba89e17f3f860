//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Strategy::Parallel`] runs on the
//! rayon pool; without it every strategy runs sequentially. Results are
//! always returned in index order, and [`ordered_sum`] combines chunk sums
//! in a fixed order so float results do not depend on the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::linalg::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// Chunk size for [`ordered_sum`]; fixed so the summation tree is
/// independent of the pool size.
const SUM_CHUNK: usize = 64;

/// `(0..count).map(f)` collected in index order.
pub fn map_indexed<R, F>(strategy: Strategy, count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..count).into_par_iter().map(f).collect(),
        _ => (0..count).map(f).collect(),
    }
}

/// Applies `f` to every item, preserving order.
pub fn map_slice<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_indexed(strategy, items.len(), |i| f(&items[i]))
}

/// `Σ_{i<count} term(i)`, accumulated per fixed-size chunk and then across
/// chunks in index order. `term` returning `None` contributes nothing.
pub fn ordered_sum<E, F>(
    strategy: Strategy,
    count: usize,
    zero: &StateVector,
    term: F,
) -> Result<StateVector, E>
where
    E: Send,
    F: Fn(usize) -> Result<Option<StateVector>, E> + Sync + Send,
{
    let chunks = count.div_ceil(SUM_CHUNK);
    let partials = map_indexed(strategy, chunks, |chunk| {
        let mut acc = zero.clone();
        for i in chunk * SUM_CHUNK..((chunk + 1) * SUM_CHUNK).min(count) {
            if let Some(v) = term(i)? {
                acc.add_assign(&v);
            }
        }
        Ok(acc)
    });
    let mut total = zero.clone();
    for partial in partials {
        total.add_assign(&partial?);
    }
    Ok(total)
}
