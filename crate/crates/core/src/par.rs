//! Switch between rayon and sequential iteration.
//!
//! Every parallel loop in the crate goes through these helpers so that results
//! are identical in both modes: work is split into indexed items, each item is
//! computed independently and results come back in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon's global pool. Without the `parallel` feature this is the
    /// same as `Sequential`.
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

/// `f(i)` for every `i` in `0..len`, in index order.
pub fn map_indices<R, F>(exec: Execution, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
        _ => (0..len).map(f).collect(),
    }
}

/// `f(item)` for every item of the slice, in slice order.
pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Fold each index into a per-chunk accumulator and merge the chunk results in
/// chunk order, so floating-point sums do not depend on thread scheduling.
pub fn chunked_fold<A, F, M>(exec: Execution, len: usize, init: impl Fn() -> A + Sync + Send, fold: F, merge: M) -> A
where
    A: Send,
    F: Fn(&mut A, usize) + Sync + Send,
    M: Fn(A, A) -> A,
{
    const CHUNK: usize = 256;
    let chunks = len.div_ceil(CHUNK);
    let partials = map_indices(exec, chunks, |c| {
        let mut acc = init();
        for i in c * CHUNK..((c + 1) * CHUNK).min(len) {
            fold(&mut acc, i);
        }
        acc
    });
    partials.into_iter().fold(init(), merge)
}
