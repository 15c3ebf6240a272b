//! Main-term evaluators.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::sums::{factor_pairs, mr_sum, prime_powers, twist, twisted_log_sum};
use super::{
    integer_part, pow_i, rh_scale, sqrt_log_scale, unconditional_scale, FormulaContext, FormulaError, SumParams,
    TermBreakdown,
};
use crate::arith::{c_a_coefficients, delta_indicator, MAX_MANGOLDT_K};
use crate::engine::{laurent_constants, log_deriv_zeta, log_deriv_zeta_prime, zeta, zeta_deriv};

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// K_δ^{(2)}(x) = x^{1−iδ}(log²x/(1−iδ) − 2 log x/(1−iδ)² + 2/(1−iδ)³).
pub fn k_delta_2(x: f64, delta: f64) -> C64 {
    let u = C64::new(1.0, -delta);
    let l = x.ln();
    x * pow_i(x, -delta) * (l * l / u - 2.0 * l / (u * u) + 2.0 / (u * u * u))
}

fn check_level(a: C64) -> Result<(), FormulaError> {
    if (a - 1.0).norm() < 1e-12 {
        Err(FormulaError::LevelOne)
    } else {
        Ok(())
    }
}

fn need_delta(delta: f64) -> Result<(), FormulaError> {
    if delta == 0.0 {
        Err(FormulaError::DeltaZero)
    } else {
        Ok(())
    }
}

fn height_domain(t: f64, min: f64, what: &str) -> Result<(), FormulaError> {
    if t.is_finite() && t > min {
        Ok(())
    } else {
        Err(FormulaError::Domain(format!("{what} = {t} must exceed {min}")))
    }
}

fn integer_weight(x: f64) -> Result<usize, FormulaError> {
    integer_part(x).ok_or(FormulaError::NonIntegerX(x))
}

impl FormulaContext {
    /// Σ_{mr=n} Λ(r) m^{−iδ} log m.
    fn divisor_log_sum(&self, n: usize, delta: f64) -> Result<C64, FormulaError> {
        let mut acc = C64::new(0.0, 0.0);
        for (m, r) in factor_pairs(&self.sieve, n)? {
            let lam = self.sieve.mangoldt(r)?;
            if lam > 0.0 {
                acc += lam * pow_i(m as f64, -delta) * (m as f64).ln();
            }
        }
        Ok(acc)
    }

    /// The shifted zero sum with weight X^ρ, valid for every X > 0.
    pub fn theorem1_rhs(&self, p: &SumParams) -> Result<TermBreakdown, FormulaError> {
        need_delta(p.delta)?;
        let d = p.delta;
        let x0 = p.height_ratio();
        let y = p.cutoff();
        let lx = p.x.ln();
        let int = integer_part(p.x);
        let integral = int.is_some();
        let xmi = pow_i(p.x, -d);
        let x1 = p.x * xmi;

        let g1 = match int {
            Some(n) => {
                let div = self.divisor_log_sum(n, d)?;
                -x0 * (xmi * lx * (0.5 * x0.ln() - 0.5 + I * PI / 4.0) - div)
            }
            None => c(0.0),
        };
        let s0 = twisted_log_sum(y, p.x, integral, 0);
        let s1 = twisted_log_sum(y, p.x, integral, 1);
        let g2 = -x1 * lx * (0.5 * lx - I * PI / 4.0) * s0;
        let mixed = mr_sum(&self.sieve, y, |m, r, lam| {
            twist(m * r, p.x, integral) * lam * pow_i(r as f64, -d)
        })?;
        let g3 = x1 * lx * (mixed - 0.5 * s1);
        let weighted = mr_sum(&self.sieve, y, |m, r, lam| {
            twist(m * r, p.x, integral) * lam * pow_i(r as f64, -d) * (r as f64).ln()
        })?;
        let g4 = x1 * weighted;
        Ok(TermBreakdown::new(
            vec![
                ("divisor_group", g1),
                ("twisted_count", g2),
                ("mixed_group", g3),
                ("lambda_log_group", g4),
            ],
            sqrt_log_scale(p.t, 3),
        ))
    }

    /// The unshifted zero sum with weight X^ρ, in the five-group form.
    pub fn fujii_weighted_rhs(&self, x: f64, t: f64) -> Result<TermBreakdown, FormulaError> {
        if !(x.is_finite() && x > 0.0) {
            return Err(FormulaError::Domain(format!("X = {x} must be positive")));
        }
        let y = t / (2.0 * PI * x);
        height_domain(y, 1.0, "T/(2 pi X)")?;
        let x0 = t / (2.0 * PI);
        let lx = x.ln();
        let int = integer_part(x);
        let integral = int.is_some();
        let f1 = match int {
            Some(n) => {
                let div = self.divisor_log_sum(n, 0.0)?;
                -x0 * ((0.5 * x0.ln() - 0.5 + I * PI / 4.0) * lx - div)
            }
            None => c(0.0),
        };
        let s0 = twisted_log_sum(y, x, integral, 0);
        let s1 = twisted_log_sum(y, x, integral, 1);
        let s2 = twisted_log_sum(y, x, integral, 2);
        let f5 = mr_sum(&self.sieve, y, |m, r, lam| {
            twist(m * r, x, integral) * lam * (m as f64).ln()
        })?;
        Ok(TermBreakdown::new(
            vec![
                ("divisor_group", f1),
                ("log_square_sum", x * s2),
                ("log_sum", 0.5 * x * lx * s1),
                ("count_sum", -0.25 * x * lx * (2.0 * lx - I * PI) * s0),
                ("lambda_log_m_sum", -x * f5),
            ],
            sqrt_log_scale(t, 3),
        ))
    }

    /// Z_δ(x) built from ζ and ζ'/ζ near 1.
    pub fn z_delta(&self, x: f64, delta: f64) -> Result<C64, FormulaError> {
        need_delta(delta)?;
        height_domain(x, 1.0, "x")?;
        let u = C64::new(1.0, -delta);
        let zp = zeta_deriv(C64::new(1.0, delta), 1, &self.eval)?;
        let ldp = log_deriv_zeta_prime(u, &self.eval)?;
        let ld = log_deriv_zeta(u, &self.eval)?;
        Ok(zp + pow_i(x, -delta) / u * (ldp + ld * (x.ln() - 1.0 / u)))
    }

    /// Shifted zero sum for integer X, written with Z_δ.
    pub fn corollary2_rhs(&self, p: &SumParams) -> Result<TermBreakdown, FormulaError> {
        need_delta(p.delta)?;
        let n = integer_weight(p.x)?;
        let d = p.delta;
        let x0 = p.height_ratio();
        let y = p.cutoff();
        let lx = p.x.ln();
        let xmi = pow_i(p.x, -d);
        let v = C64::new(1.0, d);
        let u = C64::new(1.0, -d);
        let c1 = x0 * self.divisor_log_sum(n, d)?;
        let c2 = -xmi * x0 * self.z_delta(y, d)?;
        let c3 = if n == 1 {
            c(0.0)
        } else {
            let ld = log_deriv_zeta(v, &self.eval)?;
            let zu = zeta(u, &self.eval)?;
            -xmi * lx * x0 * (x0.ln() - 1.0 + ld - zu / u * pow_i(y, -d))
        };
        Ok(TermBreakdown::new(
            vec![("divisor_group", c1), ("z_delta_group", c2), ("log_x_group", c3)],
            unconditional_scale(p.t),
        )
        .with_alt_scale("rh", rh_scale(p.t)))
    }

    /// K_δ^{(1)}(x): zero unless 1/X is an integer N, in which case the
    /// three factorisation sums of N weight the log-polynomials.
    pub fn k_delta_1(&self, x: f64, delta: f64, big_x: f64) -> Result<C64, FormulaError> {
        if delta_indicator(1.0 / big_x) == 0 {
            return Ok(c(0.0));
        }
        let n = (1.0 / big_x).round() as usize;
        let s = &self.sieve;
        let p = |k: usize| pow_i(k as f64, delta);
        let mut s1 = c(0.0);
        for (m, k) in factor_pairs(s, n)? {
            s1 += s.moebius(m)? as f64 * p(k);
        }
        let mut s2 = c(0.0);
        let mut s3 = c(0.0);
        for (m, rest) in factor_pairs(s, n)? {
            let lm = s.mangoldt(m)?;
            if lm == 0.0 {
                continue;
            }
            for (k, r) in factor_pairs(s, rest)? {
                s2 += lm * (p(m) + 1.0) * p(k) * s.moebius(r)? as f64;
            }
            for (l, rest2) in factor_pairs(s, rest)? {
                let ll = s.mangoldt(l)?;
                if ll == 0.0 {
                    continue;
                }
                for (k, r) in factor_pairs(s, rest2)? {
                    s3 += lm * p(m * k) * s.moebius(r)? as f64 * ll;
                }
            }
        }
        let u = C64::new(1.0, -delta);
        let l = x.ln();
        let xu = x * pow_i(x, -delta);
        Ok(s1 * k_delta_2(x, delta) + s2 * xu * (l / u - 1.0 / (u * u)) + s3 * xu / u)
    }

    /// Shifted a-point sum in terms of the shifted zero sum.
    pub fn theorem3_rhs(&self, p: &SumParams, zero_sum: C64) -> Result<TermBreakdown, FormulaError> {
        need_delta(p.delta)?;
        check_level(p.a)?;
        let x0 = p.height_ratio();
        let div = match integer_part(p.x) {
            Some(n) => {
                let ca = c_a_coefficients(p.a, n.max(2))?;
                let mut acc = c(0.0);
                for (m, r) in factor_pairs(&self.sieve, n)? {
                    let w = self.sieve.mangoldt(r)? + ca.get(r);
                    acc += w * pow_i(m as f64, -p.delta) * (m as f64).ln();
                }
                -x0 * acc
            }
            None => c(0.0),
        };
        let k = -p.a * self.k_delta_1(x0, p.delta, p.x)?;
        Ok(TermBreakdown::new(
            vec![("zero_sum", zero_sum), ("divisor_group", div), ("k_term", k)],
            sqrt_log_scale(p.t, 7),
        ))
    }

    /// The unshifted a-point sum Σ_{1<γ_a≤T} ζ'(ρ_a)X^{ρ_a} for integer X.
    ///
    /// The a-term of the x·log x coefficient is +2a·1_{X=1}, which is what
    /// the shifted theorem with X = 1 gives in the limit δ → 0.
    pub fn corollary_jm_rhs(&self, a: C64, x: f64, t: f64) -> Result<TermBreakdown, FormulaError> {
        self.jm_groups(a, x, t, 2.0)
    }

    /// The variant with −2a·1_{X=1} in the x·log x coefficient.
    /// Kept for side-by-side tables.
    pub fn corollary_jm_rhs_printed(&self, a: C64, x: f64, t: f64) -> Result<TermBreakdown, FormulaError> {
        self.jm_groups(a, x, t, -2.0)
    }

    fn jm_groups(&self, a: C64, x: f64, t: f64, log_sign: f64) -> Result<TermBreakdown, FormulaError> {
        check_level(a)?;
        let n = integer_weight(x)?;
        height_domain(t, 2.0 * PI, "T")?;
        let k = laurent_constants();
        let x0 = t / (2.0 * PI);
        let l = x0.ln();
        let lx = x.ln();
        let one = if n == 1 { a } else { c(0.0) };
        let ca = c_a_coefficients(a, n.max(2))?;
        let mut div = c(0.0);
        for (m, r) in factor_pairs(&self.sieve, n)? {
            if r > 1 {
                div += ca.get(r) * (m as f64).ln();
            }
        }
        Ok(TermBreakdown::new(
            vec![
                ("log_square", (0.5 - one) * x0 * l * l),
                ("log", (k.c0 - 1.0 - lx + log_sign * one) * x0 * l),
                ("constant", (1.0 - k.c0 - k.c0 * k.c0 + 3.0 * k.c1 - 2.0 * one) * x0),
                ("arithmetic", -(div + (k.c0 - 1.0 + 0.5 * lx) * lx) * x0),
            ],
            unconditional_scale(t),
        )
        .with_alt_scale("rh", rh_scale(t)))
    }

    /// The older form Σζ'(ρ_a)X^{ρ_a} = Σζ'(ρ)X^ρ − a x(log²x − 2log x + 2), x = T/2π,
    /// kept only for side-by-side tables.
    pub fn legacy_jama_rhs(&self, a: C64, t: f64, zero_sum: C64) -> Result<TermBreakdown, FormulaError> {
        height_domain(t, 2.0 * PI, "T")?;
        let x0 = t / (2.0 * PI);
        let l = x0.ln();
        Ok(TermBreakdown::new(
            vec![("zero_sum", zero_sum), ("a_term", -a * x0 * (l * l - 2.0 * l + 2.0))],
            rh_scale(t),
        ))
    }

    /// Fujii's unshifted zero sum Σ_{0<γ≤T} ζ'(ρ).
    pub fn fujii_zero_sum_rhs(&self, t: f64) -> Result<TermBreakdown, FormulaError> {
        fujii_zero_sum_rhs(t)
    }

    /// L = Σ_{mr≤x} Λ(r) r^{iδ} log r by direct enumeration.
    pub fn l_sum_direct(&self, x: f64, delta: f64) -> Result<C64, FormulaError> {
        height_domain(x, 2.0 - f64::EPSILON, "x")?;
        let weights: Vec<C64> = self.weights(x, |r, lam| lam * pow_i(r as f64, delta) * (r as f64).ln())?;
        Ok(mr_sum(&self.sieve, x, |_, r, _| weights[r])?)
    }

    /// Residues of ζ(s)(ζ'/ζ)'(s − iδ)x^s/s at s = 1 and s = 1 + iδ.
    pub fn l_sum_residue(&self, x: f64, delta: f64) -> Result<TermBreakdown, FormulaError> {
        need_delta(delta)?;
        height_domain(x, 1.0, "x")?;
        let u = C64::new(1.0, -delta);
        let v = C64::new(1.0, delta);
        let jet = crate::engine::zeta_jet(v, 1, &self.eval)?;
        let at_one = log_deriv_zeta_prime(u, &self.eval)? * x;
        let xv = x * pow_i(x, delta);
        let shifted = xv / v * (jet.coeff(1) + jet.value() * (x.ln() - 1.0 / v));
        Ok(TermBreakdown::new(
            vec![("pole_at_1", at_one), ("pole_at_1_plus_i_delta", shifted)],
            l_scale(x),
        ))
    }

    /// The variant residue expression; its coefficients belong
    /// to Σ Λ(r) m^{iδ} log m rather than to L.
    pub fn l_sum_residue_printed(&self, x: f64, delta: f64) -> Result<TermBreakdown, FormulaError> {
        need_delta(delta)?;
        height_domain(x, 1.0, "x")?;
        let u = C64::new(1.0, -delta);
        let v = C64::new(1.0, delta);
        let first = -zeta_deriv(u, 1, &self.eval)? * x;
        let xv = x * pow_i(x, delta);
        let ldp = log_deriv_zeta_prime(v, &self.eval)?;
        let ld = log_deriv_zeta(v, &self.eval)?;
        let second = -xv / v * (ldp + ld * (x.ln() - 1.0 / v));
        Ok(TermBreakdown::new(
            vec![("pole_at_1", first), ("pole_at_1_plus_i_delta", second)],
            l_scale(x),
        ))
    }

    /// Σ_{mr≤x} Λ(r) r^{iδ} directly, and its two-term main part.
    pub fn fujii_estimate_pair(&self, x: f64, delta: f64) -> Result<(C64, TermBreakdown), FormulaError> {
        need_delta(delta)?;
        height_domain(x, 2.0 - f64::EPSILON, "x")?;
        let weights = self.weights(x, |r, lam| lam * pow_i(r as f64, delta))?;
        let direct = mr_sum(&self.sieve, x, |_, r, _| weights[r])?;
        let u = C64::new(1.0, -delta);
        let v = C64::new(1.0, delta);
        let main = TermBreakdown::new(
            vec![
                ("pole_at_1_plus_i_delta", zeta(v, &self.eval)? * x * pow_i(x, delta) / v),
                ("pole_at_1", -log_deriv_zeta(u, &self.eval)? * x),
            ],
            l_scale(x),
        );
        Ok((direct, main))
    }

    /// Per-r weights indexed by r (zero off prime powers).
    fn weights<F: Fn(usize, f64) -> C64>(&self, x: f64, f: F) -> Result<Vec<C64>, FormulaError> {
        let n = x.floor() as usize;
        let mut w = vec![c(0.0); n + 1];
        for (r, lam) in prime_powers(&self.sieve, n)? {
            w[r] = f(r, lam);
        }
        Ok(w)
    }

    fn mangoldt_k_table(&self, k: u32, n: usize) -> Result<Vec<f64>, FormulaError> {
        let mut t = vec![0.0; n + 1];
        for (m, v) in t.iter_mut().enumerate().skip(1) {
            *v = self.sieve.mangoldt_k(m, k)?;
        }
        Ok(t)
    }

    /// A_1(k; T) = Σ_{m≤T/2π} Λ_k(m) log^{n−k+1} m.
    pub fn a1_sum(&self, k: u32, n: u32, t: f64) -> Result<f64, FormulaError> {
        check_orders(k, n)?;
        height_domain(t, 2.0 * PI, "T")?;
        let top = (t / (2.0 * PI)).floor() as usize;
        let lk = self.mangoldt_k_table(k, top)?;
        let e = (n - k + 1) as i32;
        Ok((1..=top).map(|m| lk[m] * (m as f64).ln().powi(e)).sum())
    }

    /// A_2(k; T) = Σ_{mr≤T/2π} Λ(r) Λ_k(m) log^{n−k}(mr).
    pub fn a2_sum(&self, k: u32, n: u32, t: f64) -> Result<f64, FormulaError> {
        check_orders(k, n)?;
        height_domain(t, 2.0 * PI, "T")?;
        let y = t / (2.0 * PI);
        let lk = self.mangoldt_k_table(k, y.floor() as usize)?;
        let e = (n - k) as i32;
        Ok(mr_sum(&self.sieve, y, |m, r, lam| {
            c(lam * lk[m] * ((m * r) as f64).ln().powi(e))
        })?
        .re)
    }

    /// Σζ⁽ⁿ⁾(ρ_a) in terms of Σζ⁽ⁿ⁾(ρ) and the A_1, A_2 sums.
    pub fn theorem_nderiv_rhs(
        &self,
        a: C64,
        n: u32,
        t: f64,
        zero_nderiv_sum: C64,
    ) -> Result<TermBreakdown, FormulaError> {
        if !(1..=3).contains(&n) {
            return Err(FormulaError::Domain(format!(
                "derivative order n = {n} must be in 1..=3"
            )));
        }
        let mut terms = vec![("zero_sum".to_string(), zero_nderiv_sum)];
        for k in 0..=n {
            let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            let diff = self.a1_sum(k, n, t)? - self.a2_sum(k, n, t)?;
            terms.push((format!("k{k}"), a * (binomial(n, k) * sign * diff)));
        }
        Ok(TermBreakdown::new(terms, sqrt_log_scale(t, n as i32 + 6)))
    }
}

/// Fujii's unshifted zero sum Σ_{0<γ≤T} ζ'(ρ).
pub fn fujii_zero_sum_rhs(t: f64) -> Result<TermBreakdown, FormulaError> {
    if !(t.is_finite() && t >= 2.0 * PI) {
        return Err(FormulaError::Domain(format!("T = {t} must be at least 2 pi")));
    }
    let k = laurent_constants();
    let x0 = t / (2.0 * PI);
    let l = x0.ln();
    Ok(TermBreakdown::new(
        vec![
            ("log_square", c(0.5 * x0 * l * l)),
            ("log", c((k.c0 - 1.0) * x0 * l)),
            ("constant", c((1.0 - k.c0 - k.c0 * k.c0 + 3.0 * k.c1) * x0)),
        ],
        unconditional_scale(t),
    )
    .with_alt_scale("rh", rh_scale(t)))
}

/// x e^{−√log x}.
fn l_scale(x: f64) -> f64 {
    x * (-x.ln().sqrt()).exp()
}

fn check_orders(k: u32, n: u32) -> Result<(), FormulaError> {
    if k > n || n > 4 || k > MAX_MANGOLDT_K {
        return Err(FormulaError::Domain(format!("need k <= n <= 4, got k = {k}, n = {n}")));
    }
    Ok(())
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}
