//! Sieve-backed arithmetic functions: Λ, μ, Λ_k and the Dirichlet
//! coefficients c_a(r) of ζ'(s)/(ζ(s) − a).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default sieve size.
pub const DEFAULT_SIEVE_LIMIT: usize = 2_000_000;
/// Largest k accepted by [`SieveTable::mangoldt_k`].
pub const MAX_MANGOLDT_K: u32 = 6;
/// |X − round(X)| below which X counts as an integer.
pub const INTEGER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArithError {
    #[error("{n} is outside the sieve range 1..={limit}")]
    OutOfRange { n: usize, limit: usize },
    #[error("c_a(r) is undefined for a = {0} (too close to 1)")]
    LevelOne(C64),
    #[error("invalid limit {0}")]
    InvalidLimit(usize),
    #[error("Λ_k requested with k = {0} > {MAX_MANGOLDT_K}")]
    OrderTooHigh(u32),
}

/// Smallest-prime-factor table built by a linear sieve.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: usize,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SieveTable {
    pub fn new(limit: usize) -> Result<Self, ArithError> {
        if limit < 2 || limit > u32::MAX as usize {
            return Err(ArithError::InvalidLimit(limit));
        }
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > limit {
                    break;
                }
                spf[ip] = p;
            }
        }
        Ok(SieveTable { limit, spf, primes })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    fn check(&self, n: usize) -> Result<(), ArithError> {
        if n == 0 || n > self.limit {
            Err(ArithError::OutOfRange { n, limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Smallest prime factor of n ≥ 2.
    pub fn smallest_prime_factor(&self, n: usize) -> Result<usize, ArithError> {
        self.check(n)?;
        if n == 1 {
            return Err(ArithError::OutOfRange { n, limit: self.limit });
        }
        Ok(self.spf[n] as usize)
    }

    /// Prime factorization as (p, exponent) pairs, increasing in p.
    pub fn factorize(&self, n: usize) -> Result<Vec<(usize, u32)>, ArithError> {
        self.check(n)?;
        let mut out: Vec<(usize, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }

    /// All divisors of n, unsorted.
    pub fn divisors(&self, n: usize) -> Result<Vec<usize>, ArithError> {
        let mut divs = vec![1usize];
        for (p, e) in self.factorize(n)? {
            let base = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..base {
                    divs.push(divs[i] * pk);
                }
            }
        }
        Ok(divs)
    }

    /// von Mangoldt Λ(r).
    pub fn mangoldt(&self, r: usize) -> Result<f64, ArithError> {
        self.check(r)?;
        if r == 1 {
            return Ok(0.0);
        }
        let p = self.spf[r] as usize;
        let mut m = r;
        while m.is_multiple_of(p) {
            m /= p;
        }
        Ok(if m == 1 { (p as f64).ln() } else { 0.0 })
    }

    /// Λ(1..=n) as a vector indexed from 0 (entry 0 is unused and zero).
    pub fn mangoldt_table(&self, n: usize) -> Result<Vec<f64>, ArithError> {
        if n > self.limit {
            return Err(ArithError::OutOfRange { n, limit: self.limit });
        }
        let mut out = vec![0.0; n + 1];
        for &p in &self.primes {
            let p = p as usize;
            if p > n {
                break;
            }
            let lp = (p as f64).ln();
            let mut pk = p;
            loop {
                out[pk] = lp;
                match pk.checked_mul(p) {
                    Some(q) if q <= n => pk = q,
                    _ => break,
                }
            }
        }
        Ok(out)
    }

    /// Möbius μ(m).
    pub fn moebius(&self, m: usize) -> Result<i8, ArithError> {
        let f = self.factorize(m)?;
        if f.iter().any(|&(_, e)| e > 1) {
            Ok(0)
        } else if f.len() % 2 == 0 {
            Ok(1)
        } else {
            Ok(-1)
        }
    }

    /// Λ_k(m) = Σ_{d|m} μ(d) log^k(m/d). Λ_0 is the indicator of m = 1.
    pub fn mangoldt_k(&self, m: usize, k: u32) -> Result<f64, ArithError> {
        if k > MAX_MANGOLDT_K {
            return Err(ArithError::OrderTooHigh(k));
        }
        let f = self.factorize(m)?;
        // only squarefree d contribute: walk subsets of the distinct primes
        let mut acc = 0.0;
        for mask in 0u32..(1u32 << f.len()) {
            let d: usize = f
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &(p, _))| p)
                .product();
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * ((m / d) as f64).ln().powi(k as i32);
        }
        Ok(acc)
    }
}

/// Δ(X): 1 if X is an integer (within [`INTEGER_TOLERANCE`]), else 0.
pub fn delta_indicator(x: f64) -> u8 {
    if x > 0.0 && (x - x.round()).abs() < INTEGER_TOLERANCE {
        1
    } else {
        0
    }
}

/// Coefficients of ζ'(s)/(ζ(s) − a) = Σ_{r≥2} c_a(r) r^{−s}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaCoefficients {
    pub a: C64,
    pub limit: usize,
    values: Vec<C64>,
}

impl CaCoefficients {
    /// c_a(r) for 1 ≤ r ≤ limit.
    pub fn get(&self, r: usize) -> C64 {
        assert!(r >= 1 && r <= self.limit, "c_a index {r} outside 1..={}", self.limit);
        self.values[r]
    }

    /// Values indexed from 0; entry 0 is unused.
    pub fn values(&self) -> &[C64] {
        &self.values
    }
}

/// Solves (1 − a)c_a(k) + Σ_{r|k, r<k} c_a(r) = −log k for k = 1..=limit.
pub fn c_a_coefficients(a: C64, limit: usize) -> Result<CaCoefficients, ArithError> {
    let one_minus_a = C64::new(1.0, 0.0) - a;
    if one_minus_a.norm() < 1e-12 {
        return Err(ArithError::LevelOne(a));
    }
    if limit < 2 {
        return Err(ArithError::InvalidLimit(limit));
    }
    // acc[k] collects Σ_{r|k, r<k} c_a(r) as r is finalized
    let mut acc = vec![C64::new(0.0, 0.0); limit + 1];
    let mut values = vec![C64::new(0.0, 0.0); limit + 1];
    for k in 2..=limit {
        let c = -((k as f64).ln() + acc[k]) / one_minus_a;
        values[k] = c;
        let mut m = 2 * k;
        while m <= limit {
            acc[m] += c;
            m += k;
        }
    }
    Ok(CaCoefficients { a, limit, values })
}
