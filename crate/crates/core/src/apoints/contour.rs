//! Argument-principle integrals of ζ'(s)/(ζ(s) − a) along straight segments.
//!
//! A segment is sampled at a uniform initial step and every sub-interval is
//! refined until the principal argument increment of ζ − a is small and
//! agrees with the trapezoid value of Im ∫ ζ'/(ζ − a) ds. Accepted argument
//! increments telescope around a closed polygon, so the winding number is an
//! exact integer; the trapezoid total is kept as an independent check.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::engine::{zeta_jet, EngineError, EvalOptions};

/// Largest principal argument step accepted without refinement.
const MAX_ARG_STEP: f64 = 0.5;
/// Allowed gap between the trapezoid and the argument increment.
const ARG_AGREEMENT: f64 = 0.02;
/// Segments shorter than this signal a root on the path.
const MIN_SEGMENT: f64 = 1e-9;
/// |ζ(s) − a| below this on the path counts as hitting a root.
const ON_PATH: f64 = 1e-13;
/// Long segments are split into chunks of this length for parallel sampling.
const CHUNK_LENGTH: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum ContourError {
    NearRoot(C64),
    Engine(EngineError),
}

impl From<EngineError> for ContourError {
    fn from(e: EngineError) -> Self {
        ContourError::Engine(e)
    }
}

/// Accumulated path data: total argument change of ζ − a and the moments
/// ∫ s^k ζ'/(ζ − a) ds for k = 0, 1, 2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct PathIntegral {
    pub arg: f64,
    pub moments: [C64; 3],
}

impl PathIntegral {
    /// Winding number implied by the argument change (closed paths only).
    pub fn winding(&self) -> f64 {
        self.arg / (2.0 * PI)
    }

    pub fn count(&self) -> i64 {
        self.winding().round() as i64
    }

    /// |trapezoid winding − integer count|.
    pub fn defect(&self) -> f64 {
        let trap = self.moments[0] / C64::new(0.0, 2.0 * PI);
        (trap - self.count() as f64).norm()
    }

    /// Power sums Σ ρ^k of the enclosed roots, k = 1, 2.
    pub fn power_sums(&self) -> (C64, C64) {
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        (self.moments[1] / two_pi_i, self.moments[2] / two_pi_i)
    }
}

impl Add for PathIntegral {
    type Output = PathIntegral;
    fn add(mut self, rhs: PathIntegral) -> PathIntegral {
        self += rhs;
        self
    }
}

impl AddAssign for PathIntegral {
    fn add_assign(&mut self, rhs: PathIntegral) {
        self.arg += rhs.arg;
        for k in 0..3 {
            self.moments[k] += rhs.moments[k];
        }
    }
}

impl Neg for PathIntegral {
    type Output = PathIntegral;
    fn neg(self) -> PathIntegral {
        PathIntegral {
            arg: -self.arg,
            moments: self.moments.map(|m| -m),
        }
    }
}

impl Sub for PathIntegral {
    type Output = PathIntegral;
    fn sub(self, rhs: PathIntegral) -> PathIntegral {
        self + (-rhs)
    }
}

#[derive(Clone, Copy)]
struct Sample {
    s: C64,
    f: C64,
    g: C64,
}

#[derive(Clone, Copy)]
pub(crate) struct Integrand {
    pub a: C64,
    pub opts: EvalOptions,
    pub step: f64,
}

impl Integrand {
    fn sample(&self, s: C64) -> Result<Sample, ContourError> {
        let jet = zeta_jet(s, 1, &self.opts)?;
        let f = jet.value() - self.a;
        if f.norm() < ON_PATH {
            return Err(ContourError::NearRoot(s));
        }
        Ok(Sample {
            s,
            f,
            g: jet.coeff(1) / f,
        })
    }

    /// Integral along the straight segment z0 → z1.
    pub fn segment(&self, z0: C64, z1: C64) -> Result<PathIntegral, ContourError> {
        let len = (z1 - z0).norm();
        let chunks = (len / CHUNK_LENGTH).ceil().max(1.0) as usize;
        if chunks == 1 {
            return self.chunk(z0, z1);
        }
        let point = |j: usize| {
            if j == chunks {
                z1
            } else {
                z0 + (z1 - z0) * (j as f64 / chunks as f64)
            }
        };
        let parts: Vec<Result<PathIntegral, ContourError>> = (0..chunks)
            .into_par_iter()
            .map(|j| self.chunk(point(j), point(j + 1)))
            .collect();
        let mut total = PathIntegral::default();
        for p in parts {
            total += p?;
        }
        Ok(total)
    }

    fn chunk(&self, z0: C64, z1: C64) -> Result<PathIntegral, ContourError> {
        let n = ((z1 - z0).norm() / self.step).ceil().max(1.0) as usize;
        let mut acc = PathIntegral::default();
        let mut prev = self.sample(z0)?;
        for j in 1..=n {
            let s = if j == n {
                z1
            } else {
                z0 + (z1 - z0) * (j as f64 / n as f64)
            };
            let next = self.sample(s)?;
            self.refine(prev, next, &mut acc)?;
            prev = next;
        }
        Ok(acc)
    }

    fn refine(&self, p: Sample, q: Sample, acc: &mut PathIntegral) -> Result<(), ContourError> {
        let ds = q.s - p.s;
        let inc = (q.f / p.f).arg();
        let trap = (p.g + q.g) * 0.5 * ds;
        if inc.abs() <= MAX_ARG_STEP && (trap.im - inc).abs() <= ARG_AGREEMENT {
            acc.arg += inc;
            acc.moments[0] += trap;
            acc.moments[1] += (p.s * p.g + q.s * q.g) * 0.5 * ds;
            acc.moments[2] += (p.s * p.s * p.g + q.s * q.s * q.g) * 0.5 * ds;
            return Ok(());
        }
        let mid = (p.s + q.s) * 0.5;
        if ds.norm() < MIN_SEGMENT {
            return Err(ContourError::NearRoot(mid));
        }
        let m = self.sample(mid)?;
        self.refine(p, m, acc)?;
        self.refine(m, q, acc)
    }

    /// Counterclockwise integral around the rectangle [σ0, σ1] × [t0, t1].
    pub fn rectangle(&self, sigma: (f64, f64), t: (f64, f64)) -> Result<PathIntegral, ContourError> {
        let c = |x: f64, y: f64| C64::new(x, y);
        let edges = [
            (c(sigma.0, t.0), c(sigma.1, t.0)),
            (c(sigma.1, t.0), c(sigma.1, t.1)),
            (c(sigma.1, t.1), c(sigma.0, t.1)),
            (c(sigma.0, t.1), c(sigma.0, t.0)),
        ];
        let parts: Vec<_> = edges.par_iter().map(|&(z0, z1)| self.segment(z0, z1)).collect();
        let mut total = PathIntegral::default();
        for p in parts {
            total += p?;
        }
        Ok(total)
    }

    /// Counterclockwise integral around a regular polygon inscribed in the
    /// circle |s − center| = radius.
    pub fn polygon(&self, center: C64, radius: f64, sides: usize) -> Result<PathIntegral, ContourError> {
        let vertex = |j: usize| center + C64::from_polar(radius, 2.0 * PI * (j % sides) as f64 / sides as f64);
        let mut total = PathIntegral::default();
        for j in 0..sides {
            total += self.segment(vertex(j), vertex(j + 1))?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrand(a: f64) -> Integrand {
        Integrand {
            a: C64::new(a, 0.0),
            opts: EvalOptions::default(),
            step: 0.05,
        }
    }

    #[test]
    fn first_zero_is_enclosed_once() {
        let w = integrand(0.0).rectangle((-1.0, 2.0), (10.0, 20.0)).unwrap();
        assert_eq!(w.count(), 1);
        assert!(w.defect() < 1e-3);
        let (p1, _) = w.power_sums();
        assert!((p1 - C64::new(0.5, 14.134_725)).norm() < 1e-2, "{p1}");
    }

    #[test]
    fn reversed_edges_cancel() {
        let f = integrand(0.3);
        let z0 = C64::new(-1.0, 30.0);
        let z1 = C64::new(6.0, 30.0);
        let fwd = f.segment(z0, z1).unwrap();
        let back = f.segment(z1, z0).unwrap();
        assert!((fwd.arg + back.arg).abs() < 1e-12);
    }

    #[test]
    fn root_on_path_is_reported() {
        let rho = C64::new(0.5, 14.134_725_141_734_693);
        let f = integrand(0.0);
        let r = f.segment(C64::new(-1.0, rho.im), C64::new(2.0, rho.im));
        assert!(matches!(r, Err(ContourError::NearRoot(_))));
    }

    #[test]
    fn trivial_zero_inside_polygon() {
        let w = integrand(0.0).polygon(C64::new(-10.0, 0.0), 0.5, 32).unwrap();
        assert_eq!(w.count(), 1);
        let (p1, p2) = w.power_sums();
        assert!((p1 + 10.0).norm() < 5e-2, "{p1}");
        assert!((p2 - 100.0).norm() < 1.0, "{p2}");
    }
}
