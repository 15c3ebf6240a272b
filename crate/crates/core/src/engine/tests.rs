use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn opts() -> EvalOptions {
    EvalOptions::default()
}

#[test]
fn zeta_two_matches_direct_sum_with_tail() {
    // Σ_{n<M} n^-2 + 1/M + 1/(2M²) + 1/(6M³)
    let m = 100_000u64;
    let mut direct = 0.0;
    for n in (1..m).rev() {
        direct += 1.0 / (n as f64 * n as f64);
    }
    let mf = m as f64;
    direct += 1.0 / mf + 0.5 / (mf * mf) + 1.0 / (6.0 * mf * mf * mf);
    let v = zeta(c(2.0, 0.0), &opts()).unwrap();
    assert!((v.re - direct).abs() < 1e-13, "{v} vs {direct}");
    assert!((v.re - PI * PI / 6.0).abs() < 1e-13);
    assert_eq!(v.im, 0.0);
}

#[test]
fn trivial_zero_and_zeta_zero() {
    let v = zeta(c(-2.0, 0.0), &opts()).unwrap();
    assert!(v.norm() < 1e-10, "{v}");
    let v = zeta(c(0.0, 0.0), &opts()).unwrap();
    assert!((v.re + 0.5).abs() < 1e-13);
    // reflected branch: trivial zeros deep in the left half plane stay exact
    for k in 2..=12 {
        let v = zeta(c(-2.0 * k as f64, 0.0), &opts()).unwrap();
        assert_eq!(v.norm(), 0.0, "k={k}");
    }
}

#[test]
fn negative_odd_integers_are_bernoulli_values() {
    // ζ(1−2k) = −B_{2k}/(2k)
    for k in 1..=6 {
        let s = 1.0 - 2.0 * k as f64;
        let want = -BERNOULLI_2K[k - 1] / (2 * k) as f64;
        let got = zeta(c(s, 0.0), &opts()).unwrap().re;
        assert!(
            (got - want).abs() < 1e-10 * (1.0 + want.abs()),
            "s={s}: {got} vs {want}"
        );
    }
}

#[test]
fn zeta_deriv_at_two_matches_log_sum() {
    // −Σ log m / m², tail by the integral ∫_M^∞ log x/x² dx + midpoint corrections
    let m = 200_000u64;
    let mut direct = 0.0;
    for n in (2..m).rev() {
        let nf = n as f64;
        direct += nf.ln() / (nf * nf);
    }
    let mf = m as f64;
    let lm = mf.ln();
    direct += (lm + 1.0) / mf + 0.5 * lm / (mf * mf);
    let v = zeta_deriv(c(2.0, 0.0), 1, &opts()).unwrap();
    assert!((v.re + direct).abs() < 1e-9, "{v} vs {direct}");
    assert!((v.re + 0.937_548_254_315_843_7).abs() < 1e-12);
}

#[test]
fn deriv_order_zero_is_bitwise_zeta() {
    let s = c(3.0, 0.0);
    assert_eq!(zeta_deriv(s, 0, &opts()).unwrap(), zeta(s, &opts()).unwrap());
    let s = c(0.7, 123.4);
    assert_eq!(zeta_deriv(s, 0, &opts()).unwrap(), zeta(s, &opts()).unwrap());
}

#[test]
fn derivative_near_first_zero_matches_central_difference() {
    let s = c(0.5, 14.0);
    let h = 1e-5;
    let fd = (zeta(s + h, &opts()).unwrap() - zeta(s - h, &opts()).unwrap()) / (2.0 * h);
    let d = zeta_deriv(s, 1, &opts()).unwrap();
    assert!((fd - d).norm() < 1e-6, "{fd} vs {d}");
}

#[test]
fn derivatives_match_finite_differences_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let o = opts();
    let h = 1e-5;
    for _ in 0..50 {
        let s = c(rng.gen_range(-6.0..4.0), rng.gen_range(-200.0..200.0));
        if (s - 1.0).norm() < 0.5 {
            continue;
        }
        for n in 1..=2 {
            let up = zeta_deriv(s + h, n - 1, &o).unwrap();
            let down = zeta_deriv(s - h, n - 1, &o).unwrap();
            let fd = (up - down) / (2.0 * h);
            let d = zeta_deriv(s, n, &o).unwrap();
            let scale = d.norm().max(up.norm()).max(1e-3);
            assert!((fd - d).norm() < 1e-5 * scale, "s={s} n={n}: {fd} vs {d}");
        }
    }
}

#[test]
fn chi_has_unit_modulus_on_critical_line() {
    for &t in &[5.0, 17.0, 20.0, 63.2, 250.0, 4999.0] {
        let v = chi(c(0.5, t)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-9, "t={t}: {}", v.norm());
        let v = chi(c(0.5, -t)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn chi_leading_behaviour_at_fifty() {
    // the expansion is stated for χ(1 − s) with s = ½ + it
    let t: f64 = 50.0;
    let lead = C64::from_polar(1.0, -PI / 4.0) * C64::from_polar(1.0, t * (t / (2.0 * PI * std::f64::consts::E)).ln());
    let v = chi(1.0 - c(0.5, t)).unwrap();
    assert!((v / lead - 1.0).norm() <= 0.03, "{}", (v / lead - 1.0).norm());
}

#[test]
fn chi_branches_agree_and_handle_special_points() {
    // both formulas valid near σ = ½
    let s = c(0.5, 33.0);
    let lo = (s * LN_2 + (s - 1.0) * LN_PI + gamma::ln_gamma(1.0 - s)).exp() * (s * PI / 2.0).sin();
    assert!((chi(s).unwrap() / lo - 1.0).norm() < 1e-11);
    // χ(2) = ζ(2)/ζ(−1) = (π²/6)/(−1/12)
    assert!((chi(c(2.0, 0.0)).unwrap().re + 2.0 * PI * PI).abs() < 1e-10);
    // χ(1) is a pole of (2π)/(2cos(π/2)Γ(1))
    assert!(matches!(chi(c(1.0, 0.0)), Err(EngineError::ChiPole(_))));
    assert!(matches!(chi(c(250.0, 0.0)), Err(EngineError::ChiOverflow(_))));
    assert_eq!(chi(c(-4.0, 0.0)).unwrap(), C64::new(0.0, 0.0));
}

#[test]
fn functional_equation_at_two_plus_thirty_i() {
    let s = c(2.0, 30.0);
    let o = opts();
    let r = zeta(1.0 - s, &o).unwrap() / (chi(1.0 - s).unwrap() * zeta(s, &o).unwrap());
    assert!((r - 1.0).norm() < 1e-8);
}

#[test]
fn functional_equation_residual_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let o = opts();
    let mut n = 0;
    while n < 200 {
        let sigma = rng.gen_range(-3.0..4.0);
        let t = rng.gen_range(2.0..500.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let s = c(sigma, t);
        let lhs = zeta(1.0 - s, &o).unwrap();
        let rhs = chi(1.0 - s).unwrap() * zeta(s, &o).unwrap();
        let res = (lhs - rhs).norm() / (1.0 + lhs.norm());
        assert!(res < 1e-8, "s={s}: residual {res}");
        n += 1;
    }
}

#[test]
fn conjugation_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let o = opts();
    for _ in 0..100 {
        let s = c(rng.gen_range(-8.0..5.0), rng.gen_range(0.1..800.0));
        let a = zeta(s.conj(), &o).unwrap();
        let b = zeta(s, &o).unwrap().conj();
        assert!(
            (a.re - b.re).abs() < 1e-12 * (1.0 + b.norm()) && (a.im - b.im).abs() < 1e-12 * (1.0 + b.norm()),
            "{s}"
        );
    }
}

#[test]
fn dirichlet_region_agreement_at_sigma_three() {
    let o = opts();
    for &t in &[0.0, 7.5, 40.0, 311.0] {
        let s = c(3.0, t);
        let mut z = C64::new(0.0, 0.0);
        let mut dz = C64::new(0.0, 0.0);
        for n in (1..=100_000u64).rev() {
            let ln = (n as f64).ln();
            let term = (-s * ln).exp();
            z += term;
            dz -= term * ln;
        }
        assert!((zeta(s, &o).unwrap() - z).norm() < 1e-8, "t={t}");
        assert!((zeta_deriv(s, 1, &o).unwrap() - dz).norm() < 1e-8, "t={t}");
    }
}

#[test]
fn log_deriv_at_three_matches_mangoldt_sum() {
    // −Σ_{r≤10⁶} Λ(r)/r³ via a plain sieve
    let limit = 1_000_000usize;
    let mut composite = vec![false; limit + 1];
    let mut sum = 0.0;
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        let mut q = p * p;
        while q <= limit {
            composite[q] = true;
            q += p;
        }
        let lp = (p as f64).ln();
        let mut pk = p;
        loop {
            sum += lp / (pk as f64).powi(3);
            match pk.checked_mul(p) {
                Some(n) if n <= limit => pk = n,
                _ => break,
            }
        }
    }
    let v = log_deriv_zeta(c(3.0, 0.0), &opts()).unwrap();
    assert!((v.re + sum).abs() < 1e-10, "{v} vs {}", -sum);
    assert!((v.re + 0.164_822_682_158_277).abs() < 1e-12);
}

#[test]
fn log_deriv_definition_and_guard() {
    let o = opts();
    let s = c(2.0, 0.0);
    let q = zeta_deriv(s, 1, &o).unwrap() / zeta(s, &o).unwrap();
    assert_eq!(log_deriv_zeta(s, &o).unwrap(), q);
    assert!(matches!(
        log_deriv_zeta(c(-4.0, 0.0), &o),
        Err(EngineError::NearZero(_))
    ));
}

#[test]
fn log_deriv_functional_equation_estimate() {
    let s = c(1.5, 100.0);
    let o = opts();
    let v = log_deriv_zeta(1.0 - s, &o).unwrap() + (100.0 / (2.0 * PI)).ln() + log_deriv_zeta(s, &o).unwrap();
    assert!(v.norm() <= 0.05, "{}", v.norm());
}

#[test]
fn log_deriv_prime_matches_finite_difference() {
    let o = opts();
    let s = c(0.8, 21.0);
    let h = 1e-5;
    let fd = (log_deriv_zeta(s + h, &o).unwrap() - log_deriv_zeta(s - h, &o).unwrap()) / (2.0 * h);
    let v = log_deriv_zeta_prime(s, &o).unwrap();
    assert!((fd - v).norm() < 1e-6 * (1.0 + v.norm()));
}

#[test]
fn xi_log_deriv_checks() {
    let o = opts();
    let s = c(2.0, 100.0);
    let t = 100.0f64;
    let approx = C64::new(0.5 * (t / (2.0 * PI)).ln(), PI / 4.0) + log_deriv_zeta(s, &o).unwrap();
    let dev = xi_log_deriv(s, &o).unwrap() - approx;
    // next term of the expansion is −i(3 + σ)/(2t)
    assert!((dev - c(0.0, -2.5 / t)).norm() < 1e-3, "{dev}");
    assert!(dev.norm() < 0.03);

    let s = c(0.3, 40.0);
    let sym = xi_log_deriv(s, &o).unwrap() + xi_log_deriv(1.0 - s, &o).unwrap();
    assert!(sym.norm() < 1e-8, "{sym}");

    assert!(xi_log_deriv(c(2.0, 0.0), &o).unwrap().im.abs() < 1e-10);
}

#[test]
fn laurent_constants_reproduce() {
    // γ by Euler–Maclaurin acceleration of H_N − log N
    let n = 1000u64;
    let h: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
    let nf = n as f64;
    let gamma = h - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf) - 1.0 / (120.0 * nf.powi(4));
    assert!((gamma - LAURENT_C0).abs() < 1e-14);

    let from_engine = LaurentConstants::from_engine(&opts()).unwrap();
    assert!((from_engine.c0 - LAURENT_C0).abs() < 1e-9, "{from_engine:?}");
    assert!((from_engine.c1 - LAURENT_C1).abs() < 1e-7, "{from_engine:?}");

    let k = laurent_constants();
    assert!(k.c0 > 0.57 && k.c0 < 0.58 && k.c1 > 0.07 && k.c1 < 0.08);

    let e = 1e-3;
    let v = zeta(c(1.0 + e, 0.0), &opts()).unwrap().re - 1.0 / e - k.c0 - k.c1 * e;
    assert!(v.abs() < 1e-6);
}

#[test]
fn stieltjes_richardson_on_fixed_grid() {
    // C₁ from (ζ(1+ε) − 1/ε − C₀)/ε on ε ∈ {1e−2, 5e−3, 2.5e−3}, extrapolated to 0
    let f = |e: f64| (zeta(c(1.0 + e, 0.0), &opts()).unwrap().re - 1.0 / e - LAURENT_C0) / e;
    let (a, b, cc) = (f(1e-2), f(5e-3), f(2.5e-3));
    let r1 = 2.0 * b - a;
    let r2 = 2.0 * cc - b;
    let c1 = (4.0 * r2 - r1) / 3.0;
    assert!((c1 - LAURENT_C1).abs() < 1e-7, "{c1}");
}

#[test]
fn errors_are_reported() {
    let o = opts();
    assert!(matches!(zeta(c(1.0, 0.0), &o), Err(EngineError::PoleAtOne(_))));
    assert!(matches!(zeta(c(0.5, 2e4), &o), Err(EngineError::CutoffOverflow(_))));
    assert!(matches!(zeta(c(f64::NAN, 0.0), &o), Err(EngineError::NonFinite(_))));
    assert!(matches!(
        zeta_deriv(c(2.0, 0.0), 5, &o),
        Err(EngineError::OrderTooHigh { .. })
    ));
    let bad = EvalOptions { em_terms_base: 3, ..o };
    assert!(matches!(zeta(c(2.0, 0.0), &bad), Err(EngineError::InvalidOptions(_))));
}

#[test]
fn accuracy_high_on_critical_line() {
    // Z(t) sign changes bracket the first zero and ζ(ρ₁) is tiny there
    let rho = c(0.5, 14.134_725_141_734_693);
    assert!(zeta(rho, &opts()).unwrap().norm() < 1e-12);
    let rho = c(0.5, 4_997.686_258_545_67);
    let v = zeta(rho, &opts());
    assert!(v.is_ok());
}
