//! Arithmetic inner sums shared by the explicit formulas.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::arith::{ArithError, SieveTable};
use crate::reduce::{chunked_sum, DEFAULT_CHUNK};

/// e^{2πiθ}, reduced modulo 1 first.
pub(crate) fn unit(theta: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * theta.fract())
}

/// e^{2πi n X}; exactly 1 for integer X.
pub(crate) fn twist(n: usize, x: f64, integral: bool) -> C64 {
    if integral {
        C64::new(1.0, 0.0)
    } else {
        unit(n as f64 * x)
    }
}

/// Prime powers r ≤ n with their Λ(r).
pub(crate) fn prime_powers(sieve: &SieveTable, n: usize) -> Result<Vec<(usize, f64)>, ArithError> {
    if n < 2 {
        return Ok(Vec::new());
    }
    let lam = sieve.mangoldt_table(n)?;
    Ok((2..=n).filter(|&r| lam[r] > 0.0).map(|r| (r, lam[r])).collect())
}

/// Σ_{m ≤ y} e^{2πimX} log^k m.
pub(crate) fn twisted_log_sum(y: f64, x: f64, integral: bool, k: i32) -> C64 {
    let n = y.floor() as usize;
    chunked_sum(1..n + 1, DEFAULT_CHUNK, |m| {
        twist(m, x, integral) * (m as f64).ln().powi(k)
    })
}

/// Σ_{mr ≤ y} Λ(r) w(m, r), enumerated over m in fixed chunks.
/// `w` receives m, r and Λ(r).
pub(crate) fn mr_sum<W>(sieve: &SieveTable, y: f64, w: W) -> Result<C64, ArithError>
where
    W: Fn(usize, usize, f64) -> C64 + Sync,
{
    let n = y.floor() as usize;
    let pp = prime_powers(sieve, n)?;
    Ok(chunked_sum(1..n / 2 + 1, DEFAULT_CHUNK, |m| {
        let lim = n / m;
        let mut acc = C64::new(0.0, 0.0);
        for &(r, lam) in pp.iter().take_while(|&&(r, _)| r <= lim) {
            acc += w(m, r, lam);
        }
        acc
    }))
}

/// Ordered pairs (m, r) with m·r = n.
pub(crate) fn factor_pairs(sieve: &SieveTable, n: usize) -> Result<Vec<(usize, usize)>, ArithError> {
    Ok(sieve.divisors(n)?.into_iter().map(|m| (m, n / m)).collect())
}
