//! Data-parallel map/reduce helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) these dispatch to rayon; without
//! it they run plain loops. The `*_seq` variants are always sequential and
//! exist so benchmarks can compare both paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(n, f)
}

pub fn try_map_indexed_seq<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    F: Fn(usize) -> Result<T, E>,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn try_map_indexed<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn try_map_indexed<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    try_map_indexed_seq(n, f)
}

pub fn fold_indexed_seq<A, F, M>(n: usize, identity: impl Fn() -> A, f: F, merge: M) -> A
where
    F: Fn(usize) -> A,
    M: Fn(A, A) -> A,
{
    (0..n).fold(identity(), |acc, i| merge(acc, f(i)))
}

#[cfg(feature = "parallel")]
pub fn fold_indexed<A, F, M>(n: usize, identity: impl Fn() -> A + Sync + Send, f: F, merge: M) -> A
where
    A: Send,
    F: Fn(usize) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    (0..n).into_par_iter().map(f).reduce(&identity, &merge)
}

#[cfg(not(feature = "parallel"))]
pub fn fold_indexed<A, F, M>(n: usize, identity: impl Fn() -> A + Sync + Send, f: F, merge: M) -> A
where
    A: Send,
    F: Fn(usize) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    fold_indexed_seq(n, identity, f, merge)
}
