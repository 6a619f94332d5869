//! Reproducible floating-point reductions.
//!
//! Inputs are cut into fixed chunks, each chunk is summed with a fixed
//! pairwise tree, and chunk results are combined with the same tree. The
//! chunk boundaries never depend on the thread count, so parallel and
//! sequential evaluation return identical bits.

use rayon::prelude::*;

const CHUNK: usize = 4096;
const LEAF: usize = 32;
const PAR_THRESHOLD: usize = 1 << 16;

fn tree<F: Fn(usize) -> f64 + Copy>(lo: usize, hi: usize, f: F) -> f64 {
    let n = hi - lo;
    if n <= LEAF {
        let mut s = 0.0;
        for i in lo..hi {
            s += f(i);
        }
        return s;
    }
    let mid = lo + n / 2;
    tree(lo, mid, f) + tree(mid, hi, f)
}

fn combine(parts: &[f64]) -> f64 {
    tree(0, parts.len(), |i| parts[i])
}

fn chunked<F: Fn(usize) -> f64 + Copy + Send + Sync>(len: usize, f: F) -> f64 {
    let chunks = len.div_ceil(CHUNK);
    let part = |c: usize| tree(c * CHUNK, ((c + 1) * CHUNK).min(len), f);
    let parts: Vec<f64> = if len >= PAR_THRESHOLD {
        (0..chunks).into_par_iter().map(part).collect()
    } else {
        (0..chunks).map(part).collect()
    };
    combine(&parts)
}

pub fn sum(a: &[f64]) -> f64 {
    chunked(a.len(), |i| a[i])
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    chunked(a.len(), |i| a[i] * b[i])
}

pub fn sum_sq(a: &[f64]) -> f64 {
    chunked(a.len(), |i| a[i] * a[i])
}

/// Reproducible sum of `f(i)` for `i` in `0..len`.
pub fn sum_by<F: Fn(usize) -> f64 + Copy + Send + Sync>(len: usize, f: F) -> f64 {
    chunked(len, f)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
