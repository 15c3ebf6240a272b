//! Complex log-gamma and polygamma functions.
//!
//! Both use upward recurrence until |z| is large enough that the Stirling
//! (resp. asymptotic polygamma) series with ten Bernoulli corrections is
//! accurate to a few ulps, then evaluate the series.

use num_complex::Complex64 as C64;

use super::BERNOULLI_2K;

/// Recurrence shifts z until |z| reaches this radius.
const ASYMPTOTIC_RADIUS: f64 = 17.0;
const STIRLING_TERMS: usize = 10;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(z)` for z away from the non-positive integers.
///
/// The imaginary part is the sum of principal logarithms produced by the
/// recurrence, so it may differ from the principal branch by a multiple of
/// 2π. Callers only exponentiate it or use the real part.
pub fn ln_gamma(z: C64) -> C64 {
    let mut z = z;
    let mut shift = C64::new(0.0, 0.0);
    while z.norm() < ASYMPTOTIC_RADIUS {
        shift += z.ln();
        z += 1.0;
    }
    stirling(z) - shift
}

fn stirling(z: C64) -> C64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = C64::new(0.0, 0.0);
    for k in 1..=STIRLING_TERMS {
        let two_k = (2 * k) as f64;
        series += pow * (BERNOULLI_2K[k - 1] / (two_k * (two_k - 1.0)));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// Digamma ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: C64) -> C64 {
    let mut z = z;
    let mut shift = C64::new(0.0, 0.0);
    while z.norm() < ASYMPTOTIC_RADIUS {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv2;
    let mut series = C64::new(0.0, 0.0);
    for k in 1..=STIRLING_TERMS {
        series += pow * (BERNOULLI_2K[k - 1] / (2 * k) as f64);
        pow *= inv2;
    }
    z.ln() - inv * 0.5 - series - shift
}

/// Polygamma ψ^{(m)}(z). `m = 0` is the digamma function.
pub fn polygamma(m: usize, z: C64) -> C64 {
    if m == 0 {
        return digamma(z);
    }
    let m_fact = factorial(m);
    // ψ^{(m)}(z) = ψ^{(m)}(z + 1) − (−1)^m m! / z^{m+1}
    let sign_m = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut z = z;
    let mut shift = C64::new(0.0, 0.0);
    while z.norm() < ASYMPTOTIC_RADIUS {
        shift += z.powi(-(m as i32 + 1)) * (sign_m * m_fact);
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut acc = inv.powi(m as i32) * factorial(m - 1) + inv.powi(m as i32 + 1) * (0.5 * m_fact);
    let mut pow = inv.powi(m as i32 + 2);
    for k in 1..=STIRLING_TERMS {
        let coeff = BERNOULLI_2K[k - 1] * factorial(2 * k + m - 1) / factorial(2 * k);
        acc += pow * coeff;
        pow *= inv2;
    }
    // leading sign (−1)^{m+1}
    let lead = -sign_m;
    acc * lead - shift
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ln_gamma_real_values() {
        assert!(ln_gamma(c(1.0, 0.0)).norm() < 1e-14);
        assert!(ln_gamma(c(2.0, 0.0)).norm() < 1e-14);
        assert!((ln_gamma(c(0.5, 0.0)).re - 0.5 * PI.ln()).abs() < 1e-13);
        // Γ(10) = 9!
        assert!((ln_gamma(c(10.0, 0.0)).re - 362_880f64.ln()).abs() < 1e-13);
        // Γ(-0.5) = -2√π
        let v = ln_gamma(c(-0.5, 0.0)).exp();
        assert!((v.re + 2.0 * PI.sqrt()).abs() < 1e-13, "{v}");
    }

    #[test]
    fn ln_gamma_reflection_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for &y in &[0.3, 2.0, 11.0, 40.0] {
            let lhs = 2.0 * ln_gamma(c(0.0, y)).re;
            let rhs = (PI / (y * (PI * y).sinh())).ln();
            assert!((lhs - rhs).abs() < 1e-12, "y={y}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn ln_gamma_recurrence_at_large_height() {
        let z = c(0.25, 1234.5);
        let d = ln_gamma(z + 1.0) - ln_gamma(z) - z.ln();
        let wrapped = d.im - (d.im / (2.0 * PI)).round() * 2.0 * PI;
        assert!(d.re.abs() < 1e-10 && wrapped.abs() < 1e-10, "{d}");
    }

    #[test]
    fn digamma_known_values() {
        assert!((digamma(c(1.0, 0.0)).re + EULER_GAMMA).abs() < 1e-14);
        // ψ(1/2) = −γ − 2 ln 2
        let v = digamma(c(0.5, 0.0)).re;
        assert!((v + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-14);
        // Im ψ(iy) = 1/(2y) + (π/2) coth(πy)
        let y = 3.0;
        let v = digamma(c(0.0, y)).im;
        assert!((v - (0.5 / y + 0.5 * PI / (PI * y).tanh())).abs() < 1e-13);
    }

    #[test]
    fn polygamma_known_values() {
        assert!((polygamma(1, c(1.0, 0.0)).re - PI * PI / 6.0).abs() < 1e-13);
        let zeta3 = 1.202_056_903_159_594_3;
        assert!((polygamma(2, c(1.0, 0.0)).re + 2.0 * zeta3).abs() < 1e-13);
        let zeta4 = PI.powi(4) / 90.0;
        assert!((polygamma(3, c(1.0, 0.0)).re - 6.0 * zeta4).abs() < 1e-12);
    }

    #[test]
    fn polygamma_matches_finite_difference_of_lower_order() {
        let z = c(4.3, -7.1);
        let h = 1e-5;
        for m in 0..3 {
            let fd = (polygamma(m, z + h) - polygamma(m, z - h)) / (2.0 * h);
            let exact = polygamma(m + 1, z);
            assert!((fd - exact).norm() < 1e-8 * (1.0 + exact.norm()), "m={m}");
        }
    }
}
