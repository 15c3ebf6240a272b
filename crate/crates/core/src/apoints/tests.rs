use super::*;
use crate::engine::{gamma::ln_gamma, zeta};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn opts() -> ScanOptions {
    ScanOptions::default()
}

/// Hardy's Z(t) = e^{iθ(t)} ζ(½ + it), real for real t.
fn hardy_z(t: f64) -> f64 {
    let theta = ln_gamma(c(0.25, t / 2.0)).im - t / 2.0 * PI.ln();
    let v = C64::from_polar(1.0, theta) * zeta(c(0.5, t), &EvalOptions::default()).unwrap();
    assert!(v.im.abs() < 1e-8 * (1.0 + v.re.abs()), "Z({t}) not real: {v}");
    v.re
}

/// Ordinates of sign changes of Z on a uniform grid, refined by bisection.
fn critical_line_zeros(t0: f64, t1: f64) -> Vec<f64> {
    let step = 0.01;
    let n = ((t1 - t0) / step).ceil() as usize;
    let mut out = Vec::new();
    let mut prev = (t0, hardy_z(t0));
    for j in 1..=n {
        let t = (t0 + j as f64 * step).min(t1);
        let z = hardy_z(t);
        if z.signum() != prev.1.signum() {
            let (mut lo, mut hi) = (prev.0, t);
            let s_lo = prev.1.signum();
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if hardy_z(mid).signum() == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = (t, z);
    }
    out
}

#[test]
fn counts_zeros_up_to_one_hundred() {
    let oracle = critical_line_zeros(1.0, 100.0);
    assert_eq!(oracle.len(), 29);
    let w = ScanWindow::new(0.0, 100.0, -1.0, 2.0).unwrap();
    let r = count_apoints(c(0.0, 0.0), &w, &opts()).unwrap();
    assert_eq!(r.count, oracle.len());
    assert!(r.defect < 0.25);
    let wide = ScanWindow::for_level(c(0.0, 0.0), 0.0, 100.0).unwrap();
    assert_eq!(count_apoints(c(0.0, 0.0), &wide, &opts()).unwrap().count, 29);
}

#[test]
fn no_zeros_below_ten() {
    let w = ScanWindow::new(0.0, 10.0, -1.0, 2.0).unwrap();
    assert_eq!(count_apoints(c(0.0, 0.0), &w, &opts()).unwrap().count, 0);
    assert!(critical_line_zeros(1.0, 10.0).is_empty());
}

#[test]
fn thin_window_is_empty() {
    for a in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 1.0)] {
        let w = ScanWindow::for_level(a, 50.0, 50.0001).unwrap();
        assert_eq!(count_apoints(a, &w, &opts()).unwrap().count, 0);
    }
}

#[test]
fn first_zero_located() {
    let oracle = critical_line_zeros(13.0, 15.0);
    assert_eq!(oracle.len(), 1);
    let w = ScanWindow::for_level(c(0.0, 0.0), 0.0, 20.0).unwrap();
    let r = locate_apoints(c(0.0, 0.0), &w, &opts()).unwrap();
    assert_eq!(r.points.len(), 1);
    let p = r.points[0];
    assert!((p.gamma - oracle[0]).abs() < 1e-6, "{} vs {}", p.gamma, oracle[0]);
    assert!((p.gamma - 14.134_725).abs() < 1e-6);
    assert!((p.beta - 0.5).abs() < 1e-6);
    assert!(p.residual < RESIDUAL_TOLERANCE);
}

#[test]
fn zeros_to_one_hundred_match_oracle() {
    let oracle = critical_line_zeros(1.0, 100.0);
    let w = ScanWindow::for_level(c(0.0, 0.0), 0.0, 100.0).unwrap();
    let r = locate_apoints(c(0.0, 0.0), &w, &opts()).unwrap();
    assert_eq!(r.points.len(), oracle.len());
    for (p, g) in r.points.iter().zip(&oracle) {
        assert!((p.gamma - g).abs() < 1e-8);
        assert!((p.beta - 0.5).abs() < 1e-9);
    }
}

#[test]
fn half_points_have_small_residual() {
    let a = c(0.5, 0.0);
    let w = ScanWindow::for_level(a, 0.0, 30.0).unwrap();
    let r = locate_apoints(a, &w, &opts()).unwrap();
    assert!(!r.points.is_empty());
    for p in &r.points {
        let v = zeta(p.rho(), &EvalOptions::default()).unwrap();
        assert!((v - a).norm() < 1e-9);
        assert!(p.residual < 1e-9);
    }
    let n = count_apoints(a, &w, &opts()).unwrap().count;
    assert_eq!(n, r.points.len());
}

#[test]
fn conjugate_symmetry_for_real_level() {
    let a = c(0.5, 0.0);
    let up = locate_apoints(a, &ScanWindow::for_level(a, 10.0, 40.0).unwrap(), &opts()).unwrap();
    let down = locate_apoints(a, &ScanWindow::for_level(a, -40.0, -10.0).unwrap(), &opts()).unwrap();
    assert_eq!(up.points.len(), down.points.len());
    for (p, q) in up.points.iter().zip(down.points.iter().rev()) {
        assert!((p.rho() - q.rho().conj()).norm() < 1e-9);
    }
}

#[test]
fn locate_matches_count_on_random_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for a in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 1.0)] {
        for _ in 0..20 {
            let t0 = rng.gen_range(1.0..150.0);
            let t1 = t0 + rng.gen_range(1.0..40.0);
            let w = ScanWindow::for_level(a, t0, t1).unwrap();
            let n = count_apoints(a, &w, &opts()).unwrap();
            let r = locate_apoints(a, &w, &opts()).unwrap();
            assert_eq!(r.points.len(), n.count, "a={a} window {w}");
            for p in &r.points {
                assert!(p.gamma > r.window.t_low && p.gamma <= r.window.t_high);
                assert!(p.residual < RESIDUAL_TOLERANCE);
            }
            for pair in r.points.windows(2) {
                assert!((pair[0].rho() - pair[1].rho()).norm() > SEPARATION);
            }
        }
    }
}

#[test]
fn window_counts_are_additive() {
    for a in [c(0.0, 0.0), c(0.0, 1.0)] {
        let whole = count_apoints(a, &ScanWindow::for_level(a, 5.0, 120.0).unwrap(), &opts())
            .unwrap()
            .count;
        let lo = count_apoints(a, &ScanWindow::for_level(a, 5.0, 61.3).unwrap(), &opts())
            .unwrap()
            .count;
        let hi = count_apoints(a, &ScanWindow::for_level(a, 61.3, 120.0).unwrap(), &opts())
            .unwrap()
            .count;
        assert_eq!(whole, lo + hi);
    }
}

#[test]
fn expected_count_examples() {
    let v = expected_count(c(0.0, 0.0), 100.0);
    let x = 100.0 / (2.0 * PI);
    assert!((v - x * (x / E).ln()).abs() < 1e-12);
    assert!((v - 28.1).abs() < 0.1, "{v}");
    let v1 = expected_count(c(1.0, 0.0), 100.0);
    assert!((v1 - x * (x / (2.0 * E)).ln()).abs() < 1e-12);
    assert!(expected_count(c(0.3, 0.0), 2.0 * PI * E).abs() < 1e-12);
}

#[test]
fn trivial_zeros_are_exact() {
    let r = trivial_apoints(c(0.0, 0.0), 1, 12, &opts());
    for (k, p) in (1..=12).zip(r) {
        let p = p.unwrap();
        assert!((p.rho() + 2.0 * k as f64).norm() < 1e-9, "k={k}: {:?}", p);
    }
}

#[test]
fn trivial_points_at_level_point_three() {
    let a = c(0.3, 0.0);
    let r = trivial_apoints(a, 8, 12, &opts());
    let mut last = f64::INFINITY;
    for (k, p) in (8..=12).zip(r) {
        let p = p.unwrap();
        let d = (p.rho() + 2.0 * k as f64).norm();
        assert!(d < 0.5 && d < last, "k={k} d={d}");
        assert!((zeta(p.rho(), &EvalOptions::default()).unwrap() - a).norm() < 1e-9);
        last = d;
    }
    // |ζ| < 0.3 on the whole disk around −10, so there is nothing to find
    assert!(matches!(
        trivial_apoints(a, 5, 5, &opts())[0],
        Err(ScanError::NotFound { k: 5, .. })
    ));
}

#[test]
fn newton_reports_failure() {
    let a = c(0.3, 0.0);
    assert!(
        newton(a, c(-10.0, 0.0), &EvalOptions::default()).is_err() || {
            let s = newton(a, c(-10.0, 0.0), &EvalOptions::default()).unwrap();
            (s + 10.0).norm() >= 0.5
        }
    );
}

#[test]
fn invalid_windows_rejected() {
    assert!(ScanWindow::new(5.0, 5.0, -1.0, 2.0).is_err());
    assert!(ScanWindow::new(1.0, 5.0, 2.0, -1.0).is_err());
    assert!(ScanWindow::new(-5.0, 5.0, -1.0, 2.0).is_err());
    assert!(ScanWindow::new(1.0, 2e4, -1.0, 2.0).is_err());
    assert!(ScanWindow::new(f64::NAN, 5.0, -1.0, 2.0).is_err());
}

#[test]
fn root_on_top_edge_is_nudged() {
    let w = ScanWindow::for_level(c(0.0, 0.0), 10.0, 14.134_725_141_734_693).unwrap();
    let r = count_apoints(c(0.0, 0.0), &w, &opts()).unwrap();
    assert!(r.nudges >= 1);
    assert_eq!(r.count, 1);
    assert!(r.window.t_high > w.t_high);
    let l = locate_apoints(c(0.0, 0.0), &w, &opts()).unwrap();
    assert_eq!(l.points.len(), 1);
    assert!(l.window.t_high > w.t_high);
}

#[test]
fn root_on_bottom_edge_is_nudged_outward() {
    let g = 14.134_725_141_734_693;
    let w = ScanWindow::for_level(c(0.0, 0.0), g, 20.0).unwrap();
    let r = count_apoints(c(0.0, 0.0), &w, &opts()).unwrap();
    assert!(r.nudges >= 1);
    assert!(r.window.t_low < w.t_low);
    assert_eq!(r.count, 1);
    let l = locate_apoints(c(0.0, 0.0), &w, &opts()).unwrap();
    assert_eq!(l.points.len(), 1);
    assert!((l.points[0].gamma - g).abs() < 1e-9);
}
