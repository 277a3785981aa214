//! C interface to the `nuinarch` library.
//!
//! Every function returns an [`NuStatus`]; results are written through
//! out-pointers. On failure the message is available from
//! [`nu_last_error`] on the same thread. Objects are opaque handles released
//! with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use nuinarch::cir::{sample_limit, CirParams, CriticalValueTable, DirectLimitSampler, STANDARD_LEVELS};
use nuinarch::estimate::{cls_alpha, cml_fit, CmlMode};
use nuinarch::infer::{ci_nearly_unstable, ci_stationary, unit_root_test, EmpiricalDistribution};
use nuinarch::model::InarchParams;
use nuinarch::simulate::{simulate_inarch, CountSeries, RngStream};
use nuinarch::{Error, ErrorKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DataError = 3,
    NumericalError = 4,
    Panic = 5,
}

/// A count series `(X_0, ..., X_n)`.
pub struct NuSeries(CountSeries);

/// A sorted sample of the limit law with its provenance.
pub struct NuLimitDist(EmpiricalDistribution);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NuUrtResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub alpha_hat: f64,
    pub n: usize,
    /// 1 when the unit root is rejected, 0 otherwise.
    pub reject: c_int,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NuInterval {
    pub lower: f64,
    pub upper: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> NuStatus {
    match err.kind() {
        ErrorKind::Usage => NuStatus::InvalidArgument,
        ErrorKind::Data => NuStatus::DataError,
        ErrorKind::Numerical => NuStatus::NumericalError,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NuStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => NuStatus::Ok,
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null pointer passed for `{name}`"));
            NuStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("internal error: {message}"));
            NuStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(name))
}

unsafe fn path_arg(p: *const c_char, name: &'static str) -> Result<PathBuf, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::InvalidParameter(format!("`{name}` is not valid UTF-8")))?;
    Ok(PathBuf::from(s))
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nu_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Copy `len` counts into a new series.
///
/// # Safety
/// `values` must point to `len` readable values; `out_series` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_series_new(
    values: *const u64,
    len: usize,
    out_series: *mut *mut NuSeries,
) -> NuStatus {
    guard(|| {
        let slot = out(out_series, "out_series")?;
        if values.is_null() && len > 0 {
            return Err(Failure::Null("values"));
        }
        let data = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(values, len).to_vec()
        };
        *slot = Box::into_raw(Box::new(NuSeries(CountSeries::new(data))));
        Ok(())
    })
}

/// Simulate `(X_0 = kappa, X_1, ..., X_n)` on stream `(seed, stream)`.
///
/// # Safety
/// `out_series` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_series_simulate(
    beta: f64,
    alpha: f64,
    kappa: u64,
    n: usize,
    seed: u64,
    stream: u64,
    out_series: *mut *mut NuSeries,
) -> NuStatus {
    guard(|| {
        let slot = out(out_series, "out_series")?;
        let params = InarchParams::new(beta, alpha, kappa)?;
        let series = simulate_inarch(&params, n, &mut RngStream::new(seed, stream))?;
        *slot = Box::into_raw(Box::new(NuSeries(series)));
        Ok(())
    })
}

/// Number of values, including `X_0`. Zero for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nu_series_len(series: *const NuSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.len())
}

/// Copy the values into `buf`, which must hold at least
/// `nu_series_len(series)` of them.
///
/// # Safety
/// `series` must be a live handle and `buf` must have room for `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn nu_series_values(
    series: *const NuSeries,
    buf: *mut u64,
    capacity: usize,
) -> NuStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        if capacity < s.0.len() {
            return Err(Error::InvalidParameter(format!(
                "buffer holds {capacity} values, series has {}",
                s.0.len()
            ))
            .into());
        }
        if buf.is_null() && !s.0.is_empty() {
            return Err(Failure::Null("buf"));
        }
        if !s.0.is_empty() {
            ptr::copy_nonoverlapping(s.0.values.as_ptr(), buf, s.0.len());
        }
        Ok(())
    })
}

/// # Safety
/// `series` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nu_series_free(series: *mut NuSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Least-squares estimate of `alpha` with `beta` known.
///
/// # Safety
/// `series` must be a live handle; `alpha_hat` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_cls_alpha(
    series: *const NuSeries,
    beta: f64,
    alpha_hat: *mut f64,
) -> NuStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let slot = out(alpha_hat, "alpha_hat")?;
        *slot = cls_alpha(&s.0, beta)?.alpha_hat;
        Ok(())
    })
}

/// Conditional maximum likelihood. With `joint` nonzero, maximizes over
/// `beta > 0` and `alpha` in `[0, 1]`; otherwise over `beta` at `alpha_fixed`.
///
/// # Safety
/// `series` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_cml_fit(
    series: *const NuSeries,
    joint: c_int,
    alpha_fixed: f64,
    beta_hat: *mut f64,
    alpha_hat: *mut f64,
    loglik: *mut f64,
) -> NuStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let (b, a, l) = (
            out(beta_hat, "beta_hat")?,
            out(alpha_hat, "alpha_hat")?,
            out(loglik, "loglik")?,
        );
        let mode = if joint != 0 {
            CmlMode::Joint
        } else {
            CmlMode::BetaOnly { alpha: alpha_fixed }
        };
        let fit = cml_fit(&s.0, mode)?;
        (*b, *a, *l) = (fit.beta_hat, fit.alpha_hat, fit.loglik);
        Ok(())
    })
}

/// Sample `draws` values of the limit law `D_gamma` with `steps` Euler steps.
///
/// # Safety
/// `out_dist` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_limit_sample(
    beta: f64,
    gamma: f64,
    steps: usize,
    draws: usize,
    seed: u64,
    out_dist: *mut *mut NuLimitDist,
) -> NuStatus {
    guard(|| {
        let slot = out(out_dist, "out_dist")?;
        let dist = sample_limit(&CirParams::new(beta, gamma, steps)?, draws, seed)?;
        *slot = Box::into_raw(Box::new(NuLimitDist(dist)));
        Ok(())
    })
}

/// # Safety
/// `dist` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nu_limit_len(dist: *const NuLimitDist) -> usize {
    dist.as_ref().map_or(0, |d| d.0.len())
}

/// Quantile at `level` in `(0, 1)`, interpolating between order statistics.
///
/// # Safety
/// `dist` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_limit_quantile(
    dist: *const NuLimitDist,
    level: f64,
    value: *mut f64,
) -> NuStatus {
    guard(|| {
        let d = borrow(dist, "dist")?;
        *out(value, "value")? = d.0.quantile(level)?;
        Ok(())
    })
}

/// Distribution function at `x`, consistent with [`nu_limit_quantile`].
///
/// # Safety
/// `dist` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_limit_cdf(dist: *const NuLimitDist, x: f64, value: *mut f64) -> NuStatus {
    guard(|| {
        let d = borrow(dist, "dist")?;
        *out(value, "value")? = d.0.interpolated_cdf(x);
        Ok(())
    })
}

/// Write a JSON critical-value table including the sample.
///
/// # Safety
/// `dist` must be a live handle; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn nu_limit_write_table(dist: *const NuLimitDist, path: *const c_char) -> NuStatus {
    guard(|| {
        let d = borrow(dist, "dist")?;
        let path = path_arg(path, "path")?;
        CriticalValueTable::from_distribution(&d.0, &STANDARD_LEVELS, true)?.write(&path)?;
        Ok(())
    })
}

/// Load a table written with its sample. Fails with `InvalidArgument` when the
/// table was built for a different `(beta, gamma)`.
///
/// # Safety
/// `path` must be a NUL-terminated UTF-8 string; `out_dist` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_limit_read_table(
    path: *const c_char,
    beta: f64,
    gamma: f64,
    out_dist: *mut *mut NuLimitDist,
) -> NuStatus {
    guard(|| {
        let path = path_arg(path, "path")?;
        let slot = out(out_dist, "out_dist")?;
        let table = CriticalValueTable::read(&path)?;
        table.check_matches(beta, gamma)?;
        *slot = Box::into_raw(Box::new(NuLimitDist(table.to_distribution()?)));
        Ok(())
    })
}

/// # Safety
/// `dist` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nu_limit_free(dist: *mut NuLimitDist) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Test `alpha = 1` against `alpha < 1` at level `zeta` using the `D_0`
/// sample `d0`.
///
/// # Safety
/// `series` and `d0` must be live handles; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_unit_root_test(
    series: *const NuSeries,
    beta: f64,
    d0: *const NuLimitDist,
    zeta: f64,
    result: *mut NuUrtResult,
) -> NuStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let d = borrow(d0, "d0")?;
        let slot = out(result, "result")?;
        let r = unit_root_test(&s.0, beta, &d.0, zeta)?;
        *slot = NuUrtResult {
            statistic: r.statistic,
            critical_value: r.critical_value,
            p_value: r.p_value,
            alpha_hat: r.alpha_hat,
            n: r.n,
            reject: c_int::from(r.reject),
        };
        Ok(())
    })
}

/// Normal-approximation interval for `alpha` under stationarity.
///
/// # Safety
/// `series` must be a live handle; `interval` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_ci_stationary(
    series: *const NuSeries,
    beta: f64,
    level: f64,
    interval: *mut NuInterval,
) -> NuStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let slot = out(interval, "interval")?;
        let ci = ci_stationary(&s.0, beta, level)?;
        *slot = NuInterval {
            lower: ci.lower,
            upper: ci.upper,
        };
        Ok(())
    })
}

/// Nearly unstable interval for `alpha`, sampling `D_gamma` at the plug-in
/// `gamma` with `steps` Euler steps and `draws` draws.
///
/// # Safety
/// `series` must be a live handle; `interval` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nu_ci_nearly_unstable(
    series: *const NuSeries,
    beta: f64,
    level: f64,
    steps: usize,
    draws: usize,
    seed: u64,
    interval: *mut NuInterval,
) -> NuStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let slot = out(interval, "interval")?;
        let provider = DirectLimitSampler::new(steps, draws, seed);
        let ci = ci_nearly_unstable(&s.0, beta, &provider, level)?;
        *slot = NuInterval {
            lower: ci.lower,
            upper: ci.upper,
        };
        Ok(())
    })
}
