//! Direct sums over a-points and the closed-form main terms they are
//! compared against.
//!
//! Every right-hand side is returned as a [`TermBreakdown`] so that the
//! individual term groups can be tabulated next to the total. Arithmetic
//! inner sums are enumerated directly from a shared [`SieveTable`].

use std::f64::consts::{E, PI};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apoints::APoint;
use crate::arith::{delta_indicator, ArithError, SieveTable};
use crate::engine::{zeta_deriv, EngineError, EvalOptions};

mod rhs;
mod sums;

pub use rhs::*;

/// Exponent ε used for the T^{1/2+ε} error scale.
pub const RH_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormulaError {
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("this formula needs delta != 0 (alpha != 0)")]
    DeltaZero,
    #[error("X = {0} is not a positive integer")]
    NonIntegerX(f64),
    #[error("level a = 1 is excluded")]
    LevelOne,
    #[error("point with gamma = {gamma} lies outside ({tau}, {t}]")]
    WindowMismatch { gamma: f64, tau: f64, t: f64 },
    #[error("point at level {found} does not belong to level {expected}")]
    LevelMismatch { found: C64, expected: C64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Level a, weight X, shift parameter α, window (τ, T] and the derived
/// shift δ = 2πα / log(T/2πX).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumParams {
    pub a: C64,
    /// The weight X.
    pub x: f64,
    pub alpha: f64,
    pub tau: f64,
    /// The height T.
    pub t: f64,
    pub delta: f64,
}

impl SumParams {
    pub fn new(a: C64, x: f64, alpha: f64, tau: f64, t: f64) -> Result<Self, FormulaError> {
        for (name, v) in [("X", x), ("alpha", alpha), ("tau", tau), ("T", t)] {
            if !v.is_finite() {
                return Err(FormulaError::Domain(format!("{name} = {v} is not finite")));
            }
        }
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(FormulaError::Domain(format!("a = {a} is not finite")));
        }
        if x <= 0.0 {
            return Err(FormulaError::Domain(format!("X = {x} must be positive")));
        }
        let ratio = t / (2.0 * PI * x);
        if ratio <= E {
            return Err(FormulaError::Domain(format!("T/(2 pi X) = {ratio} must exceed e")));
        }
        let delta = if alpha == 0.0 {
            0.0
        } else {
            2.0 * PI * alpha / ratio.ln()
        };
        if tau < delta.abs() + 1.0 {
            return Err(FormulaError::Domain(format!(
                "tau = {tau} must be at least |delta| + 1 = {}",
                delta.abs() + 1.0
            )));
        }
        if t <= tau {
            return Err(FormulaError::Domain(format!("T = {t} must exceed tau = {tau}")));
        }
        Ok(SumParams {
            a,
            x,
            alpha,
            tau,
            t,
            delta,
        })
    }

    /// Same parameters at another height (δ is re-derived).
    pub fn at_height(&self, t: f64) -> Result<Self, FormulaError> {
        SumParams::new(self.a, self.x, self.alpha, self.tau, t)
    }

    /// T/2π.
    pub fn height_ratio(&self) -> f64 {
        self.t / (2.0 * PI)
    }

    /// T/(2πX).
    pub fn cutoff(&self) -> f64 {
        self.t / (2.0 * PI * self.x)
    }
}

/// A labelled alternative error scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorScale {
    pub label: String,
    pub value: f64,
}

/// Term-by-term value of a main-term formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermBreakdown {
    pub labels: Vec<String>,
    pub values: Vec<C64>,
    pub total: C64,
    pub error_scale: f64,
    /// Further scales, e.g. the conditional branch of E(T).
    pub alt_scales: Vec<ErrorScale>,
}

impl TermBreakdown {
    pub fn new<S: Into<String>>(terms: Vec<(S, C64)>, error_scale: f64) -> Self {
        let (labels, values): (Vec<String>, Vec<C64>) = terms.into_iter().map(|(l, v)| (l.into(), v)).unzip();
        let total = values.iter().sum();
        TermBreakdown {
            labels,
            values,
            total,
            error_scale,
            alt_scales: Vec::new(),
        }
    }

    pub fn with_alt_scale(mut self, label: &str, value: f64) -> Self {
        self.alt_scales.push(ErrorScale {
            label: label.to_string(),
            value,
        });
        self
    }

    pub fn term(&self, label: &str) -> Option<C64> {
        self.labels.iter().position(|l| l == label).map(|i| self.values[i])
    }
}

/// Comparison of a direct sum with a formula at one height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub t: f64,
    /// Height actually scanned (differs from `t` after a boundary nudge).
    pub t_effective: f64,
    pub lhs: C64,
    pub rhs: C64,
    pub abs_dev: f64,
    pub norm_dev: f64,
    pub rel_dev: f64,
}

impl VerificationRow {
    pub fn new(t: f64, t_effective: f64, lhs: C64, rhs: C64, error_scale: f64) -> Self {
        let abs_dev = (lhs - rhs).norm();
        VerificationRow {
            t,
            t_effective,
            lhs,
            rhs,
            abs_dev,
            norm_dev: abs_dev / error_scale,
            rel_dev: abs_dev / rhs.norm(),
        }
    }
}

/// T^{1/2} log^k T.
pub fn sqrt_log_scale(t: f64, k: i32) -> f64 {
    t.sqrt() * t.ln().powi(k)
}

/// Unconditional scale T e^{−√log T} (constant set to 1).
pub fn unconditional_scale(t: f64) -> f64 {
    t * (-t.ln().sqrt()).exp()
}

/// Conditional scale T^{1/2+ε}.
pub fn rh_scale(t: f64) -> f64 {
    t.powf(0.5 + RH_EPSILON)
}

/// Shared state for formula evaluation: the sieve and engine options.
#[derive(Debug, Clone)]
pub struct FormulaContext {
    pub sieve: SieveTable,
    pub eval: EvalOptions,
}

impl FormulaContext {
    pub fn new(sieve_limit: usize) -> Result<Self, FormulaError> {
        Ok(FormulaContext {
            sieve: SieveTable::new(sieve_limit)?,
            eval: EvalOptions::default(),
        })
    }

    /// Σ ζ⁽ⁿ⁾(ρ_a + iδ) X^{ρ_a} over the given points.
    pub fn lhs_sum(&self, points: &[APoint], p: &SumParams, n: usize) -> Result<C64, FormulaError> {
        if n == 0 {
            return Err(FormulaError::Domain("derivative order n must be at least 1".into()));
        }
        if n > 1 && p.delta != 0.0 {
            return Err(FormulaError::Domain(
                "higher derivatives are only summed with delta = 0".into(),
            ));
        }
        for q in points {
            if (q.a - p.a).norm() > 1e-12 {
                return Err(FormulaError::LevelMismatch {
                    found: q.a,
                    expected: p.a,
                });
            }
            if !(q.gamma > p.tau && q.gamma <= p.t) {
                return Err(FormulaError::WindowMismatch {
                    gamma: q.gamma,
                    tau: p.tau,
                    t: p.t,
                });
            }
        }
        let log_x = p.x.ln();
        let shift = C64::new(0.0, p.delta);
        let terms: Vec<Result<C64, EngineError>> = points
            .par_iter()
            .map(|q| {
                let rho = q.rho();
                Ok(zeta_deriv(rho + shift, n, &self.eval)? * (rho * log_x).exp())
            })
            .collect();
        let mut total = C64::new(0.0, 0.0);
        for term in terms {
            total += term?;
        }
        Ok(total)
    }
}

/// round(X) when X is a positive integer in the Δ sense.
pub(crate) fn integer_part(x: f64) -> Option<usize> {
    (delta_indicator(x) == 1).then(|| x.round() as usize)
}

/// n^{iδ}.
pub(crate) fn pow_i(n: f64, delta: f64) -> C64 {
    C64::from_polar(1.0, delta * n.ln())
}
