//! Truncated Taylor series ("jets") in one complex variable.
//!
//! Coefficient `j` holds f^{(j)}(s) / j!. Every derivative the engine
//! returns is read off a jet, so ζ and its derivatives share one code path.

use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64 as C64;

/// Longest jet the engine builds; bounds `EvalOptions::deriv_order_max`.
pub const MAX_JET_LEN: usize = 8;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    len: usize,
    coeffs: [C64; MAX_JET_LEN],
}

impl Jet {
    /// All-zero jet carrying derivatives up to `order`.
    pub fn zero(order: usize) -> Self {
        assert!(order < MAX_JET_LEN, "jet order {order} too large");
        Jet {
            len: order + 1,
            coeffs: [ZERO; MAX_JET_LEN],
        }
    }

    pub fn constant(value: C64, order: usize) -> Self {
        let mut j = Jet::zero(order);
        j.coeffs[0] = value;
        j
    }

    /// The identity map s ↦ s expanded at `s`.
    pub fn variable(s: C64, order: usize) -> Self {
        let mut j = Jet::constant(s, order);
        if order >= 1 {
            j.coeffs[1] = C64::new(1.0, 0.0);
        }
        j
    }

    /// Jet of `value · exp(rate·(s − s₀))` at s₀, i.e. coefficients
    /// `value · rate^j / j!`.
    pub fn exponential(value: C64, rate: C64, order: usize) -> Self {
        let mut j = Jet::zero(order);
        let mut c = value;
        for k in 0..j.len {
            j.coeffs[k] = c;
            c = c * rate / (k + 1) as f64;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.len - 1
    }

    pub fn value(&self) -> C64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, j: usize) -> C64 {
        self.coeffs[j]
    }

    pub fn set(&mut self, j: usize, value: C64) {
        assert!(j < self.len);
        self.coeffs[j] = value;
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs[..self.len]
    }

    /// n-th derivative, `n! · coeff(n)`.
    pub fn derivative(&self, n: usize) -> C64 {
        let mut f = 1.0;
        for k in 2..=n {
            f *= k as f64;
        }
        self.coeffs[n] * f
    }

    /// Adds `value · rate^j / j!` to each coefficient without materializing
    /// the exponential jet. This is the inner loop of the direct sums.
    #[inline]
    pub fn add_exponential(&mut self, value: C64, rate: f64) {
        let mut c = value;
        self.coeffs[0] += c;
        for k in 1..self.len {
            c *= rate / k as f64;
            self.coeffs[k] += c;
        }
    }

    pub fn scale(mut self, factor: C64) -> Self {
        for c in &mut self.coeffs[..self.len] {
            *c *= factor;
        }
        self
    }

    /// Jet of f(−s) given the jet of f at −s: coefficient j picks up (−1)^j.
    pub fn reflect(mut self) -> Self {
        for (k, c) in self.coeffs[..self.len].iter_mut().enumerate() {
            if k % 2 == 1 {
                *c = -*c;
            }
        }
        self
    }

    /// exp(f) for a jet f whose constant term is ignored (treated as 0).
    pub fn exp_of_tail(&self) -> Self {
        let mut out = Jet::zero(self.order());
        out.coeffs[0] = C64::new(1.0, 0.0);
        for n in 1..self.len {
            let mut acc = ZERO;
            for k in 1..=n {
                acc += self.coeffs[k] * out.coeffs[n - k] * k as f64;
            }
            out.coeffs[n] = acc / n as f64;
        }
        out
    }

    /// 1 / (s − pole) expanded at `s`.
    pub fn reciprocal_linear(s: C64, pole: C64, order: usize) -> Self {
        let mut j = Jet::zero(order);
        let inv = (s - pole).inv();
        let mut c = inv;
        for k in 0..j.len {
            j.coeffs[k] = c;
            c *= -inv;
        }
        j
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        self += rhs;
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        debug_assert_eq!(self.len, rhs.len);
        for k in 0..self.len {
            self.coeffs[k] += rhs.coeffs[k];
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = Jet::zero(self.order());
        for i in 0..self.len {
            for k in 0..self.len - i {
                out.coeffs[i + k] += self.coeffs[i] * rhs.coeffs[k];
            }
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(C64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_linear_jets_is_polynomial() {
        // (s)(s+1) at s = 2: value 6, derivative 2s+1 = 5, second derivative 2
        let s = C64::new(2.0, 0.0);
        let p = Jet::variable(s, 3) * (Jet::variable(s, 3) + Jet::constant(C64::new(1.0, 0.0), 3));
        assert_eq!(p.derivative(0), C64::new(6.0, 0.0));
        assert_eq!(p.derivative(1), C64::new(5.0, 0.0));
        assert_eq!(p.derivative(2), C64::new(2.0, 0.0));
        assert_eq!(p.derivative(3), C64::new(0.0, 0.0));
    }

    #[test]
    fn exp_of_tail_matches_exponential() {
        let rate = C64::new(0.3, -1.2);
        let mut lin = Jet::zero(5);
        lin.coeffs[1] = rate;
        let e = lin.exp_of_tail();
        let direct = Jet::exponential(C64::new(1.0, 0.0), rate, 5);
        for k in 0..=5 {
            assert!((e.coeff(k) - direct.coeff(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn reciprocal_linear_derivatives() {
        let s = C64::new(0.5, 2.0);
        let j = Jet::reciprocal_linear(s, C64::new(1.0, 0.0), 3);
        let w = s - 1.0;
        assert!((j.derivative(2) - 2.0 / (w * w * w)).norm() < 1e-14);
    }
}
