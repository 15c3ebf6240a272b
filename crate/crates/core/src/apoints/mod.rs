//! Counting and locating a-points, the roots of ζ(s) − a.
//!
//! Counting is the argument principle around a rectangle. Locating cuts the
//! window into horizontal slabs, counts each slab from shared edge
//! integrals, seeds Newton's method from the contour moments and falls back
//! to box bisection when the seeds do not converge to distinct roots inside
//! the box.

mod contour;

use std::f64::consts::{E, PI};
use std::fmt;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{zeta_jet, EngineError, EvalOptions, MAX_HEIGHT};
use contour::{ContourError, Integrand, PathIntegral};

/// Windows starting at |t| below this are lifted to it, away from the pole.
pub const POLE_LIFT: f64 = 1e-3;
/// Residual every reported point must satisfy.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Minimum distance between two reported points.
pub const SEPARATION: f64 = 1e-6;
const MAX_DEFECT: f64 = 0.25;
const MAX_NEWTON_STEPS: usize = 100;

/// A root ρ_a = β + iγ of ζ(s) − a.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct APoint {
    pub a: C64,
    pub beta: f64,
    pub gamma: f64,
    /// |ζ(ρ_a) − a|
    pub residual: f64,
}

impl APoint {
    pub fn rho(&self) -> C64 {
        C64::new(self.beta, self.gamma)
    }
}

/// Rectangle (sigma_low, sigma_high) × (t_low, t_high].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanWindow {
    pub t_low: f64,
    pub t_high: f64,
    pub sigma_low: f64,
    pub sigma_high: f64,
}

impl fmt::Display for ScanWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "σ∈({}, {}) t∈({}, {}]",
            self.sigma_low, self.sigma_high, self.t_low, self.t_high
        )
    }
}

impl ScanWindow {
    pub fn new(t_low: f64, t_high: f64, sigma_low: f64, sigma_high: f64) -> Result<Self, ScanError> {
        let w = ScanWindow {
            t_low,
            t_high,
            sigma_low,
            sigma_high,
        };
        w.validate()?;
        Ok(w)
    }

    /// Window with the default σ-extent for level `a`.
    pub fn for_level(a: C64, t_low: f64, t_high: f64) -> Result<Self, ScanError> {
        let (lo, hi) = default_sigma_bounds(a);
        ScanWindow::new(t_low, t_high, lo, hi)
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        let all = [self.t_low, self.t_high, self.sigma_low, self.sigma_high];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(ScanError::InvalidWindow(format!("non-finite bound in {self}")));
        }
        if self.t_low >= self.t_high || self.sigma_low >= self.sigma_high {
            return Err(ScanError::InvalidWindow(format!("empty window {self}")));
        }
        if self.t_low.abs().max(self.t_high.abs()) > MAX_HEIGHT {
            return Err(ScanError::InvalidWindow(format!("{self} exceeds height {MAX_HEIGHT}")));
        }
        if self.t_low < 0.0 && self.t_high > 0.0 {
            return Err(ScanError::InvalidWindow(format!("{self} straddles the real axis")));
        }
        Ok(())
    }

    /// Moves horizontal edges that touch the real axis up (or down) to
    /// ±[`POLE_LIFT`].
    fn lifted(mut self) -> Self {
        if self.t_low >= 0.0 && self.t_low < POLE_LIFT {
            self.t_low = POLE_LIFT;
        }
        if self.t_high <= 0.0 && self.t_high > -POLE_LIFT {
            self.t_high = -POLE_LIFT;
        }
        self
    }

    fn height_scale(&self) -> f64 {
        self.t_high.abs().max(self.t_low.abs()).max(E).ln()
    }
}

/// Default σ-range (−1, max(6, 4 + log₂(1 + |a|))).
pub fn default_sigma_bounds(a: C64) -> (f64, f64) {
    (-1.0, (4.0 + (1.0 + a.norm()).log2()).max(6.0))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("an a-point stays within reach of the {edge} edge after {attempts} nudges (window {window})")]
    BoundaryProximity {
        edge: &'static str,
        attempts: u32,
        window: ScanWindow,
    },
    #[error("argument-principle defect {defect:.3} ≥ 0.25 on {window}")]
    QuadratureNonConvergence { defect: f64, window: ScanWindow },
    #[error("Newton iteration failed to converge inside sub-box {sub_box}")]
    NewtonDivergence { sub_box: ScanWindow },
    #[error("sub-box {sub_box} still holds {count} a-points; suspected multiple root")]
    MultipleRoot { sub_box: ScanWindow, count: i64 },
    #[error("no a-point found in |s + {}| < 0.5 (Newton ended at {last})", 2 * .k)]
    NotFound { k: u32, last: C64 },
    #[error("inconsistent count {count} on {window}")]
    InconsistentCount { count: i64, window: ScanWindow },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Tuning for the scanner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub eval: EvalOptions,
    /// Initial quadrature step on every edge.
    pub initial_step: f64,
    /// Target slab height for [`locate_apoints`].
    pub slab_height: f64,
    pub max_nudges: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            eval: EvalOptions::default(),
            initial_step: 0.05,
            slab_height: 1.0,
            max_nudges: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub count: usize,
    /// Trapezoid winding number before rounding.
    pub winding: f64,
    pub defect: f64,
    /// Window actually used after lifting and nudging.
    pub window: ScanWindow,
    pub nudges: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub points: Vec<APoint>,
    pub window: ScanWindow,
    pub nudges: u32,
}

#[derive(Clone, Copy)]
enum Edge {
    Bottom,
    Top,
    Left,
    Right,
}

impl Edge {
    fn name(self) -> &'static str {
        match self {
            Edge::Bottom => "bottom",
            Edge::Top => "top",
            Edge::Left => "left",
            Edge::Right => "right",
        }
    }
}

/// Moves the offending edge outward by 0.01/log T; a horizontal edge that
/// would cross the real axis moves inward instead.
fn nudge(w: &mut ScanWindow, edge: Edge) {
    let d = 0.01 / w.height_scale();
    match edge {
        Edge::Bottom if w.t_low >= 0.0 && w.t_low - d < POLE_LIFT => w.t_low += d,
        Edge::Bottom => w.t_low -= d,
        Edge::Top if w.t_high <= 0.0 && w.t_high + d > -POLE_LIFT => w.t_high -= d,
        Edge::Top => w.t_high += d,
        Edge::Left => w.sigma_low -= d,
        Edge::Right => w.sigma_high += d,
    }
}

fn which_edge(w: &ScanWindow, s: C64) -> Edge {
    let d = [
        ((s.im - w.t_low).abs(), Edge::Bottom),
        ((s.im - w.t_high).abs(), Edge::Top),
        ((s.re - w.sigma_low).abs(), Edge::Left),
        ((s.re - w.sigma_high).abs(), Edge::Right),
    ];
    d.iter().min_by(|x, y| x.0.total_cmp(&y.0)).unwrap().1
}

/// Number of a-points in the window by the argument principle.
pub fn count_apoints(a: C64, window: &ScanWindow, opts: &ScanOptions) -> Result<CountReport, ScanError> {
    window.validate()?;
    opts.eval.validate()?;
    let f = Integrand {
        a,
        opts: opts.eval,
        step: opts.initial_step,
    };
    let mut w = window.lifted();
    let mut nudges = 0;
    loop {
        match f.rectangle((w.sigma_low, w.sigma_high), (w.t_low, w.t_high)) {
            Ok(total) => {
                let count = total.count();
                let defect = total.defect();
                if defect >= MAX_DEFECT {
                    return Err(ScanError::QuadratureNonConvergence { defect, window: w });
                }
                if count < 0 {
                    return Err(ScanError::InconsistentCount { count, window: w });
                }
                let winding = (total.moments[0] / C64::new(0.0, 2.0 * PI)).re;
                return Ok(CountReport {
                    count: count as usize,
                    winding,
                    defect,
                    window: w,
                    nudges,
                });
            }
            Err(ContourError::Engine(e)) => return Err(e.into()),
            Err(ContourError::NearRoot(s)) => {
                let edge = which_edge(&w, s);
                if nudges >= opts.max_nudges {
                    return Err(ScanError::BoundaryProximity {
                        edge: edge.name(),
                        attempts: nudges,
                        window: w,
                    });
                }
                nudge(&mut w, edge);
                nudges += 1;
            }
        }
    }
}

/// Main term of the a-point counting function, (T/2π) log(T/(2πe·c_a)),
/// with c_a = 2 for a = 1 and 1 otherwise.
pub fn expected_count(a: C64, t: f64) -> f64 {
    let c_a = if (a - 1.0).norm() < 1e-12 { 2.0 } else { 1.0 };
    let x = t / (2.0 * PI);
    x * (x / (E * c_a)).ln()
}

/// All a-points in the window, sorted by γ.
pub fn locate_apoints(a: C64, window: &ScanWindow, opts: &ScanOptions) -> Result<ScanReport, ScanError> {
    window.validate()?;
    opts.eval.validate()?;
    let f = Integrand {
        a,
        opts: opts.eval,
        step: opts.initial_step,
    };
    let mut w = window.lifted();
    let mut nudges = 0;

    let slabs = ((w.t_high - w.t_low) / opts.slab_height).ceil().max(1.0) as usize;
    // interior cut heights may move independently of the window edges
    let mut cuts: Vec<f64> = (0..=slabs)
        .map(|i| w.t_low + (w.t_high - w.t_low) * i as f64 / slabs as f64)
        .collect();

    let lines = loop {
        cuts[0] = w.t_low;
        cuts[slabs] = w.t_high;
        let mut cut_nudges = vec![0u32; slabs + 1];
        let mut result: Vec<Option<PathIntegral>> = vec![None; slabs + 1];
        let mut failure = None;
        for _round in 0..=opts.max_nudges {
            let todo: Vec<usize> = (0..=slabs).filter(|&i| result[i].is_none()).collect();
            if todo.is_empty() {
                break;
            }
            let done: Vec<(usize, Result<PathIntegral, ContourError>)> = todo
                .par_iter()
                .map(|&i| {
                    let y = cuts[i];
                    (i, f.segment(C64::new(w.sigma_low, y), C64::new(w.sigma_high, y)))
                })
                .collect();
            for (i, r) in done {
                match r {
                    Ok(p) => result[i] = Some(p),
                    Err(ContourError::Engine(e)) => return Err(e.into()),
                    Err(ContourError::NearRoot(_)) if i == 0 || i == slabs => {
                        failure = Some(if i == 0 { Edge::Bottom } else { Edge::Top });
                    }
                    Err(ContourError::NearRoot(_)) => {
                        if cut_nudges[i] >= opts.max_nudges {
                            return Err(ScanError::BoundaryProximity {
                                edge: "interior",
                                attempts: cut_nudges[i],
                                window: w,
                            });
                        }
                        cut_nudges[i] += 1;
                        cuts[i] += 0.01 / w.height_scale();
                    }
                }
            }
            if failure.is_some() {
                break;
            }
        }
        match failure {
            None => break result.into_iter().map(Option::unwrap).collect::<Vec<_>>(),
            Some(edge) => {
                if nudges >= opts.max_nudges {
                    return Err(ScanError::BoundaryProximity {
                        edge: edge.name(),
                        attempts: nudges,
                        window: w,
                    });
                }
                nudge(&mut w, edge);
                nudges += 1;
            }
        }
    };

    let sides: Vec<Result<(PathIntegral, PathIntegral), ContourError>> = (0..slabs)
        .into_par_iter()
        .map(|i| {
            let (y0, y1) = (cuts[i], cuts[i + 1]);
            let right = f.segment(C64::new(w.sigma_high, y0), C64::new(w.sigma_high, y1))?;
            let left = f.segment(C64::new(w.sigma_low, y0), C64::new(w.sigma_low, y1))?;
            Ok((right, left))
        })
        .collect();
    let mut boxes = Vec::with_capacity(slabs);
    for (i, side) in sides.into_iter().enumerate() {
        let (right, left) = match side {
            Ok(v) => v,
            Err(ContourError::Engine(e)) => return Err(e.into()),
            Err(ContourError::NearRoot(s)) => {
                let edge = which_edge(&w, s);
                // retry the whole scan with the side moved out
                let mut wider = *window;
                wider.sigma_low = w.sigma_low;
                wider.sigma_high = w.sigma_high;
                nudge(&mut wider, edge);
                if nudges >= opts.max_nudges {
                    return Err(ScanError::BoundaryProximity {
                        edge: edge.name(),
                        attempts: nudges,
                        window: w,
                    });
                }
                let mut inner = *opts;
                inner.max_nudges -= nudges + 1;
                let mut report = locate_apoints(a, &wider, &inner)?;
                report.nudges += nudges + 1;
                return Ok(report);
            }
        };
        let total = lines[i] + right - lines[i + 1] - left;
        let sub = ScanWindow {
            t_low: cuts[i],
            t_high: cuts[i + 1],
            ..w
        };
        boxes.push((sub, total));
    }

    let found: Vec<Result<Vec<C64>, ScanError>> = boxes
        .par_iter()
        .map(|&(sub, total)| resolve_box(a, sub, total, opts, &f, 0))
        .collect();
    let mut points = Vec::new();
    for r in found {
        for rho in r? {
            let residual = (zeta_jet(rho, 0, &opts.eval)?.value() - a).norm();
            points.push(APoint {
                a,
                beta: rho.re,
                gamma: rho.im,
                residual,
            });
        }
    }
    points.sort_by(|p, q| p.gamma.total_cmp(&q.gamma));
    Ok(ScanReport {
        points,
        window: w,
        nudges,
    })
}

fn box_count(total: &PathIntegral, sub: ScanWindow) -> Result<i64, ScanError> {
    let defect = total.defect();
    if defect >= MAX_DEFECT {
        return Err(ScanError::QuadratureNonConvergence { defect, window: sub });
    }
    let n = total.count();
    if n < 0 {
        return Err(ScanError::InconsistentCount { count: n, window: sub });
    }
    Ok(n)
}

fn inside(sub: &ScanWindow, s: C64) -> bool {
    s.re > sub.sigma_low && s.re < sub.sigma_high && s.im > sub.t_low && s.im <= sub.t_high
}

/// Roots in `sub` given its contour integral.
fn resolve_box(
    a: C64,
    sub: ScanWindow,
    total: PathIntegral,
    opts: &ScanOptions,
    f: &Integrand,
    depth: u32,
) -> Result<Vec<C64>, ScanError> {
    let n = box_count(&total, sub)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if let Some(roots) = seeded_roots(a, &sub, &total, n, &opts.eval) {
        return Ok(roots);
    }
    let width = sub.sigma_high - sub.sigma_low;
    let height = sub.t_high - sub.t_low;
    if width.max(height) < SEPARATION || depth > 80 {
        return Err(if n >= 2 {
            ScanError::MultipleRoot { sub_box: sub, count: n }
        } else {
            ScanError::NewtonDivergence { sub_box: sub }
        });
    }
    // cut the longer side; shift the cut if it runs through a root
    let split_t = height >= width;
    for frac in [0.5, 0.47, 0.53, 0.44, 0.56, 0.41, 0.59] {
        let (lower, upper) = if split_t {
            let y = sub.t_low + height * frac;
            (ScanWindow { t_high: y, ..sub }, ScanWindow { t_low: y, ..sub })
        } else {
            let x = sub.sigma_low + width * frac;
            (ScanWindow { sigma_high: x, ..sub }, ScanWindow { sigma_low: x, ..sub })
        };
        let lower_total = match f.rectangle((lower.sigma_low, lower.sigma_high), (lower.t_low, lower.t_high)) {
            Ok(v) => v,
            Err(ContourError::NearRoot(_)) => continue,
            Err(ContourError::Engine(e)) => return Err(e.into()),
        };
        // the other half reuses the parent integral; its argument change
        // stays an exact multiple of 2π under subtraction
        let upper_total = total - lower_total;
        let mut roots = resolve_box(a, lower, lower_total, opts, f, depth + 1)?;
        roots.extend(resolve_box(a, upper, upper_total, opts, f, depth + 1)?);
        if roots.len() as i64 != n {
            return Err(ScanError::InconsistentCount {
                count: roots.len() as i64,
                window: sub,
            });
        }
        return Ok(roots);
    }
    Err(ScanError::BoundaryProximity {
        edge: "interior",
        attempts: 7,
        window: sub,
    })
}

/// Newton from the roots of the moment polynomial; `None` if the result is
/// not `n` distinct points inside the box.
fn seeded_roots(a: C64, sub: &ScanWindow, total: &PathIntegral, n: i64, opts: &EvalOptions) -> Option<Vec<C64>> {
    let (p1, p2) = total.power_sums();
    if n == 1 {
        let center = C64::new(0.5 * (sub.sigma_low + sub.sigma_high), 0.5 * (sub.t_low + sub.t_high));
        return [p1, center].into_iter().find_map(|seed| {
            let r = newton(a, seed, opts).ok()?;
            inside(sub, r).then(|| vec![r])
        });
    }
    let seeds = match n {
        2 => {
            // z² − e₁z + e₂ with e₁ = p₁, e₂ = (p₁² − p₂)/2
            let e2 = (p1 * p1 - p2) * 0.5;
            let disc = (p1 * p1 - e2 * 4.0).sqrt();
            vec![(p1 + disc) * 0.5, (p1 - disc) * 0.5]
        }
        _ => return None,
    };
    let mut roots: Vec<C64> = Vec::with_capacity(seeds.len());
    for seed in seeds {
        if !seed.re.is_finite() || !seed.im.is_finite() {
            return None;
        }
        let r = newton(a, seed, opts).ok()?;
        if !inside(sub, r) || roots.iter().any(|q| (q - r).norm() <= SEPARATION) {
            return None;
        }
        roots.push(r);
    }
    Some(roots)
}

/// Newton's method on ζ(s) − a, with steps capped at length 1.
pub fn newton(a: C64, seed: C64, opts: &EvalOptions) -> Result<C64, EngineError> {
    let mut s = seed;
    let mut converged = 0;
    for _ in 0..MAX_NEWTON_STEPS {
        let jet = zeta_jet(s, 1, opts)?;
        let d = jet.coeff(1);
        if d.norm() == 0.0 {
            return Err(EngineError::NearZero(s));
        }
        let mut step = (jet.value() - a) / d;
        if step.norm() > 1.0 {
            step /= step.norm();
        }
        s -= step;
        if step.norm() <= 1e-14 * (1.0 + s.norm()) {
            // one extra step after the update stalls
            converged += 1;
            if converged == 2 {
                break;
            }
        }
    }
    let residual = (zeta_jet(s, 0, opts)?.value() - a).norm();
    if residual < RESIDUAL_TOLERANCE {
        Ok(s)
    } else {
        Err(EngineError::NearZero(s))
    }
}

/// The a-point near s = −2k for each k in `k_min..=k_max`: Newton seeded at
/// −2k, accepted if it stays in |s + 2k| < 0.5 and the disk holds exactly
/// one a-point. Failures are reported per k.
pub fn trivial_apoints(a: C64, k_min: u32, k_max: u32, opts: &ScanOptions) -> Vec<Result<APoint, ScanError>> {
    (k_min..=k_max)
        .into_par_iter()
        .map(|k| trivial_apoint(a, k, opts))
        .collect()
}

fn trivial_apoint(a: C64, k: u32, opts: &ScanOptions) -> Result<APoint, ScanError> {
    let center = C64::new(-2.0 * k as f64, 0.0);
    let last = newton_path(a, center, &opts.eval)?;
    let residual = (zeta_jet(last, 0, &opts.eval)?.value() - a).norm();
    if (last - center).norm() >= 0.5 || residual >= RESIDUAL_TOLERANCE {
        return Err(ScanError::NotFound { k, last });
    }
    let f = Integrand {
        a,
        opts: opts.eval,
        step: opts.initial_step.min(0.02),
    };
    let count = match f.polygon(center, 0.5, 64) {
        Ok(p) => p.count(),
        Err(ContourError::Engine(e)) => return Err(e.into()),
        Err(ContourError::NearRoot(_)) => return Err(ScanError::NotFound { k, last }),
    };
    if count != 1 {
        let sub_box = ScanWindow {
            t_low: -0.5,
            t_high: 0.5,
            sigma_low: center.re - 0.5,
            sigma_high: center.re + 0.5,
        };
        return Err(ScanError::MultipleRoot { sub_box, count });
    }
    Ok(APoint {
        a,
        beta: last.re,
        gamma: last.im,
        residual,
    })
}

/// Newton iterate from `seed` without the residual check.
fn newton_path(a: C64, seed: C64, opts: &EvalOptions) -> Result<C64, EngineError> {
    let mut s = seed;
    for _ in 0..MAX_NEWTON_STEPS {
        let jet = zeta_jet(s, 1, opts)?;
        let d = jet.coeff(1);
        if d.norm() == 0.0 {
            break;
        }
        let mut step = (jet.value() - a) / d;
        if step.norm() > 1.0 {
            step /= step.norm();
        }
        s -= step;
        if step.norm() <= 1e-15 * (1.0 + s.norm()) {
            break;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests;
