//! Index-range scans with a rayon backend and a sequential fallback.
//!
//! Every exhaustive search in the crate runs over `0..n` in canonical
//! enumeration order. The helpers here return results in that order no matter
//! how the work is scheduled, so "first witness" answers are deterministic.
//!
//! With the `parallel` feature (on by default) the scans use rayon. The
//! sequential path is always compiled and can be forced at runtime with
//! [`force_sequential`], which is what the benches use to compare the two.

use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Below this many items a scan always runs sequentially.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 64;

/// Route all scans through the sequential implementation (or stop doing so).
pub fn force_sequential(on: bool) {
    FORCE_SEQUENTIAL.store(on, Ordering::Relaxed);
}

/// True when scans will actually be dispatched to rayon.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.load(Ordering::Relaxed)
}

#[cfg(feature = "parallel")]
#[inline]
fn use_parallel(n: usize) -> bool {
    n >= PAR_THRESHOLD && is_parallel()
}

/// Smallest `i < n` satisfying `pred`.
pub fn find_first<P>(n: usize, pred: P) -> Option<usize>
where
    P: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_parallel(n) {
        return (0..n).into_par_iter().find_first(|&i| pred(i));
    }
    (0..n).find(|&i| pred(i))
}

/// First `Some` produced by `f` over `0..n`, in index order.
pub fn find_map_first<T, F>(n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_parallel(n) {
        return (0..n).into_par_iter().find_map_first(&f);
    }
    (0..n).find_map(f)
}

/// All `i < n` satisfying `pred`, ascending.
pub fn filter<P>(n: usize, pred: P) -> Vec<usize>
where
    P: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_parallel(n) {
        return (0..n).into_par_iter().filter(|&i| pred(i)).collect();
    }
    (0..n).filter(|&i| pred(i)).collect()
}

/// `f(0), f(1), …, f(n-1)` collected in order.
pub fn map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_parallel(n) {
        return (0..n).into_par_iter().map(&f).collect();
    }
    (0..n).map(f).collect()
}

/// Map over a slice, preserving order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_parallel(items.len()) {
        return items.par_iter().map(&f).collect();
    }
    items.iter().map(f).collect()
}
