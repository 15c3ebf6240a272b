//! C interface to `apoints-core`.
//!
//! Every function returns an [`ApStatus`]; results go through out-pointers.
//! Handles are opaque and must be released with their `_free` function.
//! The message for the most recent failure on the calling thread is
//! available from [`ap_last_error`].

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use apoints_core::apoints::{count_apoints, locate_apoints, APoint, ScanError, ScanOptions, ScanWindow};
use apoints_core::engine::{zeta_deriv, EvalOptions};
use apoints_core::formulas::{FormulaContext, FormulaError, SumParams, TermBreakdown};
use num_complex::Complex64 as C64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Scan = 4,
    Engine = 5,
    OutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ApComplex {
    fn from(z: C64) -> Self {
        ApComplex { re: z.re, im: z.im }
    }
}

impl From<ApComplex> for C64 {
    fn from(z: ApComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

/// ρ_a = beta + i·gamma with |ζ(ρ_a) − a| = residual.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApPoint {
    pub beta: f64,
    pub gamma: f64,
    pub residual: f64,
}

/// Level a, weight X, shift α and window (τ, T].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApParams {
    pub a: ApComplex,
    pub x: f64,
    pub alpha: f64,
    pub tau: f64,
    pub t: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApFormula {
    FujiiZero = 0,
    FujiiWeighted = 1,
    Theorem1 = 2,
    Corollary2 = 3,
    Theorem3 = 4,
    CorollaryJm = 5,
    Nderiv = 6,
}

/// Sieve and evaluation settings shared by the formula calls.
pub struct ApContext {
    inner: FormulaContext,
}

/// a-points of one level, sorted by height.
pub struct ApPointSet {
    a: C64,
    points: Vec<APoint>,
    t_effective: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| {
        let mut v = msg.into_bytes();
        v.retain(|&b| b != 0);
        v.push(0);
        *e.borrow_mut() = v;
    });
}

struct Failure(ApStatus, String);

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        let code = match e {
            FormulaError::Engine(_) => ApStatus::Engine,
            _ => ApStatus::Domain,
        };
        Failure(code, e.to_string())
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        let code = match e {
            ScanError::InvalidWindow(_) => ApStatus::InvalidArgument,
            ScanError::Engine(_) => ApStatus::Engine,
            _ => ApStatus::Scan,
        };
        Failure(code, e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> ApStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            ApStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            ApStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(ApStatus::NullPointer, "null pointer argument".into())
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

unsafe fn input<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

/// Copies the last error message (NUL-terminated, possibly truncated) into
/// `buf` and returns the full message length without the terminator.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ap_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let n = msg.len().saturating_sub(1);
        if !buf.is_null() && len > 0 {
            let k = n.min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, k);
            *buf.add(k) = 0;
        }
        n
    })
}

/// n-th derivative of ζ at s.
///
/// # Safety
/// `result` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_zeta(s: ApComplex, n: u32, result: *mut ApComplex) -> ApStatus {
    guard(|| {
        let result = out(result)?;
        let v = zeta_deriv(s.into(), n as usize, &EvalOptions::default())
            .map_err(|e| Failure(ApStatus::Engine, e.to_string()))?;
        *result = v.into();
        Ok(())
    })
}

fn scan_window(a: C64, t_low: f64, t_high: f64) -> Result<ScanWindow, Failure> {
    Ok(ScanWindow::for_level(a, t_low, t_high)?)
}

/// Number of a-points with t_low < γ ≤ t_high.
///
/// # Safety
/// `count` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_count(a: ApComplex, t_low: f64, t_high: f64, count: *mut usize) -> ApStatus {
    guard(|| {
        let count = out(count)?;
        let a = C64::from(a);
        *count = count_apoints(a, &scan_window(a, t_low, t_high)?, &ScanOptions::default())?.count;
        Ok(())
    })
}

/// Locates the a-points with t_low < γ ≤ t_high.
///
/// # Safety
/// `set` must be a valid pointer; on success it receives a handle to be
/// released with [`ap_point_set_free`].
#[no_mangle]
pub unsafe extern "C" fn ap_locate(a: ApComplex, t_low: f64, t_high: f64, set: *mut *mut ApPointSet) -> ApStatus {
    guard(|| {
        let set = out(set)?;
        *set = ptr::null_mut();
        let a = C64::from(a);
        let report = locate_apoints(a, &scan_window(a, t_low, t_high)?, &ScanOptions::default())?;
        *set = Box::into_raw(Box::new(ApPointSet {
            a,
            points: report.points,
            t_effective: report.window.t_high,
        }));
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle from [`ap_locate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_point_set_free(set: *mut ApPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle; `len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_point_set_len(set: *const ApPointSet, len: *mut usize) -> ApStatus {
    guard(|| {
        *out(len)? = input(set)?.points.len();
        Ok(())
    })
}

/// Upper edge of the window actually scanned.
///
/// # Safety
/// `set` must be a live handle; `t` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_point_set_t_effective(set: *const ApPointSet, t: *mut f64) -> ApStatus {
    guard(|| {
        *out(t)? = input(set)?.t_effective;
        Ok(())
    })
}

/// # Safety
/// `set` must be a live handle; `point` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_point_set_get(set: *const ApPointSet, index: usize, point: *mut ApPoint) -> ApStatus {
    guard(|| {
        let point = out(point)?;
        let set = input(set)?;
        let p = set.points.get(index).ok_or_else(|| {
            Failure(
                ApStatus::OutOfRange,
                format!("index {index} out of range for {} points", set.points.len()),
            )
        })?;
        *point = ApPoint {
            beta: p.beta,
            gamma: p.gamma,
            residual: p.residual,
        };
        Ok(())
    })
}

/// Creates a context with a sieve up to `sieve_limit`.
///
/// # Safety
/// `ctx` must be a valid pointer; release the handle with [`ap_context_free`].
#[no_mangle]
pub unsafe extern "C" fn ap_context_new(sieve_limit: usize, ctx: *mut *mut ApContext) -> ApStatus {
    guard(|| {
        let ctx = out(ctx)?;
        *ctx = ptr::null_mut();
        let inner = FormulaContext::new(sieve_limit)?;
        *ctx = Box::into_raw(Box::new(ApContext { inner }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must be null or a handle from [`ap_context_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_context_free(ctx: *mut ApContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

fn sum_params(p: &ApParams) -> Result<SumParams, Failure> {
    Ok(SumParams::new(p.a.into(), p.x, p.alpha, p.tau, p.t)?)
}

/// Σ ζ⁽ⁿ⁾(ρ_a + iδ) X^{ρ_a} over the points of `set` with τ < γ ≤ T.
///
/// # Safety
/// All pointers must be valid; `ctx` and `set` live handles.
#[no_mangle]
pub unsafe extern "C" fn ap_lhs_sum(
    ctx: *const ApContext,
    set: *const ApPointSet,
    params: *const ApParams,
    n: u32,
    result: *mut ApComplex,
) -> ApStatus {
    guard(|| {
        let result = out(result)?;
        let ctx = input(ctx)?;
        let set = input(set)?;
        let p = sum_params(input(params)?)?;
        if (set.a - p.a).norm() > 1e-12 {
            return Err(Failure(
                ApStatus::InvalidArgument,
                format!("point set is for level {}, params for {}", set.a, p.a),
            ));
        }
        let pts: Vec<APoint> = set
            .points
            .iter()
            .copied()
            .filter(|q| q.gamma > p.tau && q.gamma <= p.t)
            .collect();
        *result = ctx.inner.lhs_sum(&pts, &p, n as usize)?.into();
        Ok(())
    })
}

fn evaluate(
    ctx: &FormulaContext,
    id: ApFormula,
    p: &ApParams,
    n: u32,
    zero_sum: C64,
) -> Result<TermBreakdown, Failure> {
    let a = C64::from(p.a);
    Ok(match id {
        ApFormula::FujiiZero => ctx.fujii_zero_sum_rhs(p.t)?,
        ApFormula::FujiiWeighted => ctx.fujii_weighted_rhs(p.x, p.t)?,
        ApFormula::Theorem1 => ctx.theorem1_rhs(&sum_params(p)?)?,
        ApFormula::Corollary2 => ctx.corollary2_rhs(&sum_params(p)?)?,
        ApFormula::Theorem3 => ctx.theorem3_rhs(&sum_params(p)?, zero_sum)?,
        ApFormula::CorollaryJm => ctx.corollary_jm_rhs(a, p.x, p.t)?,
        ApFormula::Nderiv => ctx.theorem_nderiv_rhs(a, n, p.t, zero_sum)?,
    })
}

/// Main term of formula `id`; `n` is used by `Nderiv` and `zero_sum` by
/// `Theorem3` and `Nderiv`. `error_scale` may be null.
///
/// # Safety
/// `ctx`, `params` and `total` must be valid; `error_scale` valid or null.
#[no_mangle]
pub unsafe extern "C" fn ap_formula(
    ctx: *const ApContext,
    id: ApFormula,
    params: *const ApParams,
    n: u32,
    zero_sum: ApComplex,
    total: *mut ApComplex,
    error_scale: *mut f64,
) -> ApStatus {
    guard(|| {
        let total = out(total)?;
        let b = evaluate(&input(ctx)?.inner, id, input(params)?, n, zero_sum.into())?;
        *total = b.total.into();
        if let Some(s) = error_scale.as_mut() {
            *s = b.error_scale;
        }
        Ok(())
    })
}
