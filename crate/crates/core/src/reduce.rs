//! Order-fixed parallel summation.
//!
//! Work is cut into chunks whose boundaries depend only on the range and the
//! chunk length; partial sums are combined in index order. The result is
//! therefore bit-identical for any number of worker threads.

use std::ops::Range;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

/// Default number of indices per chunk.
pub const DEFAULT_CHUNK: usize = 4096;

/// Σ_{i ∈ range} f(i).
pub fn chunked_sum<F>(range: Range<usize>, chunk: usize, f: F) -> C64
where
    F: Fn(usize) -> C64 + Sync,
{
    let chunk = chunk.max(1);
    if range.is_empty() {
        return C64::new(0.0, 0.0);
    }
    let n_chunks = (range.end - range.start).div_ceil(chunk);
    let partials: Vec<C64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = range.start + c * chunk;
            let hi = (lo + chunk).min(range.end);
            let mut acc = C64::new(0.0, 0.0);
            for i in lo..hi {
                acc += f(i);
            }
            acc
        })
        .collect();
    partials.into_iter().fold(C64::new(0.0, 0.0), |acc, p| acc + p)
}

/// Σ f(item) over a slice, chunked the same way.
pub fn chunked_sum_slice<T, F>(items: &[T], chunk: usize, f: F) -> C64
where
    T: Sync,
    F: Fn(&T) -> C64 + Sync,
{
    chunked_sum(0..items.len(), chunk, |i| f(&items[i]))
}
