//! Double-precision evaluation of ζ(s), its derivatives, χ(s), ζ'/ζ and ξ'/ξ.
//!
//! For Re s ≥ −3 the engine uses Euler–Maclaurin summation with
//! N = ⌈|t|⌉ + `em_terms_base` direct terms and `em_bernoulli_order`
//! Bernoulli corrections. Left of that line it switches to the reflection
//! ζ(s) = χ(s) ζ(1 − s), evaluated in log space, so trivial zeros at −2k
//! keep full relative accuracy.
//!
//! Derivatives are obtained by carrying every term as a truncated Taylor
//! series ([`Jet`]), which is the same as differentiating the
//! Euler–Maclaurin formula term by term.

pub mod gamma;
pub mod jet;

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use jet::{Jet, MAX_JET_LEN};

use crate::complex::ComplexPoint;

/// B₂, B₄, …, B₂₄.
pub(crate) const BERNOULLI_2K: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Largest |Im s| the cutoff policy supports.
pub const MAX_HEIGHT: f64 = 1.0e4;
/// Radius of the excluded disk around the pole at s = 1.
pub const POLE_GUARD: f64 = 1e-12;
/// Threshold below which ζ(s) is treated as vanishing in quotients.
pub const ZERO_GUARD: f64 = 1e-12;
/// Real parts below this are evaluated through the functional equation.
pub const REFLECTION_BELOW: f64 = -3.0;
/// |Re s| bound for χ(s).
pub const CHI_SIGMA_LIMIT: f64 = 200.0;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("s = {0} is within {POLE_GUARD:e} of the pole at s = 1")]
    PoleAtOne(C64),
    #[error("|Im s| = {0} exceeds the supported height {MAX_HEIGHT}")]
    CutoffOverflow(f64),
    #[error("argument {0} is not finite")]
    NonFinite(C64),
    #[error("derivative order {order} exceeds deriv_order_max = {max}")]
    OrderTooHigh { order: usize, max: usize },
    #[error("ζ(s) is numerically zero at s = {0}; quotient undefined")]
    NearZero(C64),
    #[error("χ(s) overflows: |Re s| = {0} > {CHI_SIGMA_LIMIT}")]
    ChiOverflow(f64),
    #[error("χ has a pole at s = {0}")]
    ChiPole(C64),
    #[error("result overflowed at s = {0}")]
    Overflow(C64),
    #[error("invalid evaluation options: {0}")]
    InvalidOptions(String),
}

/// Cutoff and truncation policy for the Euler–Maclaurin evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// N = ⌈|t|⌉ + em_terms_base.
    pub em_terms_base: usize,
    /// Number of Bernoulli correction terms.
    pub em_bernoulli_order: usize,
    pub deriv_order_max: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            em_terms_base: 20,
            em_bernoulli_order: 8,
            deriv_order_max: 4,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.em_terms_base < 10 {
            return Err(EngineError::InvalidOptions(format!(
                "em_terms_base = {} < 10",
                self.em_terms_base
            )));
        }
        if self.em_bernoulli_order == 0 || self.em_bernoulli_order > 12 {
            return Err(EngineError::InvalidOptions(format!(
                "em_bernoulli_order = {} outside 1..=12",
                self.em_bernoulli_order
            )));
        }
        if self.deriv_order_max >= MAX_JET_LEN {
            return Err(EngineError::InvalidOptions(format!(
                "deriv_order_max = {} exceeds {}",
                self.deriv_order_max,
                MAX_JET_LEN - 1
            )));
        }
        Ok(())
    }

    /// Direct-sum length used at height t.
    pub fn cutoff(&self, t: f64) -> usize {
        t.abs().ceil() as usize + self.em_terms_base
    }
}

/// Coefficients of ζ(s) = 1/(s−1) + C₀ + C₁(s−1) + ⋯.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaurentConstants {
    pub c0: f64,
    pub c1: f64,
}

/// Euler's constant.
pub const LAURENT_C0: f64 = 0.577_215_664_901_532_9;
/// −γ₁ (first Stieltjes constant, negated).
pub const LAURENT_C1: f64 = 0.072_815_845_483_676_72;

pub fn laurent_constants() -> LaurentConstants {
    LaurentConstants {
        c0: LAURENT_C0,
        c1: LAURENT_C1,
    }
}

impl LaurentConstants {
    /// Recomputes C₀ and C₁ from the engine by Richardson extrapolation of
    /// the symmetric quotients of ζ(1 ± h) − 1/(±h) at h and h/2.
    pub fn from_engine(opts: &EvalOptions) -> Result<Self, EngineError> {
        let sym = |h: f64| -> Result<(f64, f64), EngineError> {
            let up = zeta(C64::new(1.0 + h, 0.0), opts)?.re - 1.0 / h;
            let down = zeta(C64::new(1.0 - h, 0.0), opts)?.re + 1.0 / h;
            Ok(((up + down) / 2.0, (up - down) / (2.0 * h)))
        };
        let h = 4e-3;
        let (c0_h, c1_h) = sym(h)?;
        let (c0_h2, c1_h2) = sym(h / 2.0)?;
        Ok(LaurentConstants {
            c0: (4.0 * c0_h2 - c0_h) / 3.0,
            c1: (4.0 * c1_h2 - c1_h) / 3.0,
        })
    }
}

fn check_argument(s: C64) -> Result<(), EngineError> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(EngineError::NonFinite(s));
    }
    if (s - 1.0).norm() < POLE_GUARD {
        return Err(EngineError::PoleAtOne(s));
    }
    if s.im.abs() > MAX_HEIGHT {
        return Err(EngineError::CutoffOverflow(s.im.abs()));
    }
    Ok(())
}

/// Taylor jet of ζ at `s` up to `order`.
pub fn zeta_jet(s: C64, order: usize, opts: &EvalOptions) -> Result<Jet, EngineError> {
    opts.validate()?;
    if order > opts.deriv_order_max {
        return Err(EngineError::OrderTooHigh {
            order,
            max: opts.deriv_order_max,
        });
    }
    check_argument(s)?;
    let jet = if s.re < REFLECTION_BELOW {
        reflected_jet(s, order, opts)
    } else {
        euler_maclaurin_jet(s, order, opts)
    };
    if jet.coeffs().iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(EngineError::Overflow(s));
    }
    Ok(jet)
}

fn euler_maclaurin_jet(s: C64, order: usize, opts: &EvalOptions) -> Jet {
    let cutoff = opts.cutoff(s.im);
    let mut acc = Jet::zero(order);
    for n in 1..cutoff {
        let ln_n = (n as f64).ln();
        acc.add_exponential((-s * ln_n).exp(), -ln_n);
    }

    let n = cutoff as f64;
    let ln_n = n.ln();
    let n_pow = Jet::exponential((-s * ln_n).exp(), C64::new(-ln_n, 0.0), order);
    let pole = Jet::reciprocal_linear(s, C64::new(1.0, 0.0), order);
    acc += n_pow * pole * n;
    acc += n_pow * 0.5;

    // Σ_k B_{2k}/(2k)! · s(s+1)⋯(s+2k−2) · N^{1−2k}, times N^{−s}
    let mut rising = Jet::variable(s, order);
    let mut corrections = Jet::zero(order);
    let mut n_scale = 1.0 / n;
    let mut fact = 2.0;
    for k in 1..=opts.em_bernoulli_order {
        corrections += rising * (BERNOULLI_2K[k - 1] / fact * n_scale);
        let a = Jet::variable(s, order) + Jet::constant(C64::new((2 * k - 1) as f64, 0.0), order);
        let b = Jet::variable(s, order) + Jet::constant(C64::new((2 * k) as f64, 0.0), order);
        rising = rising * a * b;
        n_scale /= n * n;
        fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
    }
    acc += corrections * n_pow;
    acc
}

/// sin and cos of `w`, both multiplied by e^{−|Im w|}.
fn scaled_sin_cos(w: C64) -> (C64, C64) {
    let (sp, cp) = w.re.sin_cos();
    let q = w.im;
    let decay = (-2.0 * q.abs()).exp();
    let ch = 0.5 * (1.0 + decay);
    let sh = -0.5 * (-2.0 * q.abs()).exp_m1() * q.signum();
    (C64::new(sp * ch, cp * sh), C64::new(cp * ch, -sp * sh))
}

/// sin(πs/2) and cos(πs/2) scaled by e^{−π|t|/2}. The real part is reduced
/// modulo 2 exactly so the zeros at even integers stay exact.
fn half_pi_sin_cos(s: C64) -> (C64, C64, f64) {
    let k = (s.re / 2.0).round();
    let r = s.re - 2.0 * k;
    let w = C64::new(r, s.im) * (PI / 2.0);
    let (sn, mut cs) = scaled_sin_cos(w);
    if s.im == 0.0 && r.abs() == 1.0 {
        cs = C64::new(0.0, 0.0);
    }
    let sign = if (k as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (sn * sign, cs * sign, (PI / 2.0 * s.im).abs())
}

fn reflected_jet(s: C64, order: usize, opts: &EvalOptions) -> Jet {
    let u = C64::new(1.0, 0.0) - s;
    let zeta_u = euler_maclaurin_jet(u, order, opts).reflect();

    // G(s) = 2^s π^{s−1} Γ(1−s); (ln G)' = ln 2π − ψ(1−s), (ln G)^{(j)} = (−1)^j ψ^{(j−1)}(1−s)
    let ln_g = s * LN_2 + (s - 1.0) * LN_PI + gamma::ln_gamma(u);
    let mut log_tail = Jet::zero(order);
    let mut fact = 1.0;
    for j in 1..=order {
        fact *= j as f64;
        let d = if j == 1 {
            C64::new(LN_2PI, 0.0) - gamma::digamma(u)
        } else {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            gamma::polygamma(j - 1, u) * sign
        };
        log_tail.set(j, d / fact);
    }
    let g_shape = log_tail.exp_of_tail();

    let (sn, cs, shift) = half_pi_sin_cos(s);
    let mut sin_jet = Jet::zero(order);
    let cycle = [sn, cs, -sn, -cs];
    let mut scale = 1.0;
    for j in 0..=order {
        sin_jet.set(j, cycle[j % 4] * scale);
        scale *= PI / 2.0 / (j + 1) as f64;
    }

    let magnitude = (ln_g + shift).exp();
    (g_shape * sin_jet * zeta_u).scale(magnitude)
}

/// ζ(s).
pub fn zeta(s: C64, opts: &EvalOptions) -> Result<C64, EngineError> {
    zeta_deriv(s, 0, opts)
}

/// ζ^{(n)}(s).
pub fn zeta_deriv(s: C64, n: usize, opts: &EvalOptions) -> Result<C64, EngineError> {
    Ok(zeta_jet(s, n, opts)?.derivative(n))
}

/// ζ'(s)/ζ(s).
pub fn log_deriv_zeta(s: C64, opts: &EvalOptions) -> Result<C64, EngineError> {
    let jet = zeta_jet(s, 1, opts)?;
    if jet.value().norm() <= ZERO_GUARD {
        return Err(EngineError::NearZero(s));
    }
    Ok(jet.coeff(1) / jet.value())
}

/// (ζ'/ζ)'(s) = (ζ''ζ − ζ'²)/ζ².
pub fn log_deriv_zeta_prime(s: C64, opts: &EvalOptions) -> Result<C64, EngineError> {
    let jet = zeta_jet(s, 2, opts)?;
    let z = jet.value();
    if z.norm() <= ZERO_GUARD {
        return Err(EngineError::NearZero(s));
    }
    let d1 = jet.derivative(1);
    let d2 = jet.derivative(2);
    Ok((d2 * z - d1 * d1) / (z * z))
}

/// ξ'(s)/ξ(s) for ξ(s) = ½ s(s−1) π^{−s/2} Γ(s/2) ζ(s).
pub fn xi_log_deriv(s: C64, opts: &EvalOptions) -> Result<C64, EngineError> {
    if s.norm() < POLE_GUARD {
        return Err(EngineError::PoleAtOne(s));
    }
    let zl = log_deriv_zeta(s, opts)?;
    Ok(s.inv() + (s - 1.0).inv() - LN_PI / 2.0 + gamma::digamma(s / 2.0) / 2.0 + zl)
}

/// χ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s), so that ζ(s) = χ(s) ζ(1−s).
pub fn chi(s: C64) -> Result<C64, EngineError> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(EngineError::NonFinite(s));
    }
    if s.re.abs() > CHI_SIGMA_LIMIT {
        return Err(EngineError::ChiOverflow(s.re.abs()));
    }
    let (sn, cs, shift) = half_pi_sin_cos(s);
    let value = if s.re >= 0.5 {
        // χ(s) = (2π)^s / (2 cos(πs/2) Γ(s)); finite at even integers
        if cs.norm() == 0.0 {
            return Err(EngineError::ChiPole(s));
        }
        (s * LN_2PI - LN_2 - shift - gamma::ln_gamma(s)).exp() / cs
    } else {
        if sn.norm() == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        (s * LN_2 + (s - 1.0) * LN_PI + shift + gamma::ln_gamma(1.0 - s)).exp() * sn
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(EngineError::Overflow(s));
    }
    Ok(value)
}

/// Convenience wrapper taking the validated point type.
pub fn zeta_at(s: ComplexPoint, opts: &EvalOptions) -> Result<ComplexPoint, EngineError> {
    let v = zeta(s.into(), opts)?;
    ComplexPoint::try_from(v).map_err(|_| EngineError::Overflow(s.into()))
}

#[cfg(test)]
mod tests;
