//! C ABI over `inner-fourier`.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `*_free`. Every fallible call returns an [`IfStatus`];
//! on failure the message is kept per thread and read with
//! [`if_last_error`]. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use inner_fourier::basis::fourier_gram;
use inner_fourier::catalog::{CatalogEntry, CatalogParams};
use inner_fourier::classify::{classify_sequence, GrowthModel};
use inner_fourier::coeffs::fourier_coefficients;
use inner_fourier::distributions::{distribution_coefficients, poisson_kernel, DeltaSpec};
use inner_fourier::hilbert::{inner_product_disk, DiskProductConfig};
use inner_fourier::kernels::contour_partial_sum;
use inner_fourier::series::{regulated_sums, rho_limit, RhoSchedule};
use inner_fourier::{
    from_taylor, to_taylor, Error, FourierCoefficients, InnerAnalytic, PolarPoint, SampleGrid,
    TaylorCoefficients,
};
use num_complex::Complex64;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfStatus {
    Ok = 0,
    NullPointer = 1,
    Precondition = 2,
    Domain = 3,
    Evaluation = 4,
    Pole = 5,
    NonRealMean = 6,
    Parse = 7,
    Io = 8,
    BufferTooSmall = 9,
    InvalidUtf8 = 10,
    Panic = 11,
}

/// Real Fourier coefficients.
pub struct IfFourier(FourierCoefficients);

/// Complex Taylor coefficients.
pub struct IfTaylor(TaylorCoefficients);

/// An inner analytic function.
pub struct IfInner(InnerAnalytic);

/// Cauchy-integral partial sum at one point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IfPartialSum {
    pub direct_re: f64,
    pub direct_im: f64,
    pub contour_re: f64,
    pub contour_im: f64,
    pub discrepancy: f64,
}

/// Growth classification of a magnitude sequence.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IfClassification {
    pub bounded: bool,
    pub fitted_rate: f64,
    pub fitted_power: f64,
    pub window_lo: usize,
    pub window_hi: usize,
    pub sparsity_flag: bool,
    pub degenerate: bool,
}

struct Failure(IfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Precondition(_) => IfStatus::Precondition,
            Error::Domain(_) => IfStatus::Domain,
            Error::Evaluation { .. } => IfStatus::Evaluation,
            Error::Pole { .. } => IfStatus::Pole,
            Error::NonRealMean(_) => IfStatus::NonRealMean,
            Error::Parse(_) | Error::Json(_) | Error::Csv(_) => IfStatus::Parse,
            Error::Io(_) => IfStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            IfStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(IfStatus::NullPointer, format!("{what} is NULL"))
}

/// Borrows a handle, rejecting NULL.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Borrows `len` elements, accepting NULL when `len == 0`.
unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn boxed<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn if_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn if_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Builds coefficients from `alpha0`, `alpha[0..k]` and `beta[0..k]`.
///
/// # Safety
/// `alpha` and `beta` must point to `k` doubles (or be NULL when `k == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_fourier_new(
    alpha0: f64,
    alpha: *const f64,
    beta: *const f64,
    k: usize,
    out: *mut *mut IfFourier,
) -> IfStatus {
    guard(|| {
        let a = input(alpha, k, "alpha")?.to_vec();
        let b = input(beta, k, "beta")?.to_vec();
        boxed(out, IfFourier(FourierCoefficients::new(alpha0, a, b)?))
    })
}

/// Coefficients of a catalog entry. NaN floats and zero integers select the
/// entry defaults. Distributions always use their closed form; other
/// entries use `points`-point quadrature unless `exact` is set.
///
/// # Safety
/// `id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_fourier_from_catalog(
    id: *const c_char,
    k: usize,
    points: usize,
    exact: bool,
    harmonic: u32,
    c: f64,
    r: f64,
    theta1: f64,
    order: u32,
    out: *mut *mut IfFourier,
) -> IfStatus {
    guard(|| {
        if id.is_null() {
            return Err(null("id"));
        }
        let id = CStr::from_ptr(id)
            .to_str()
            .map_err(|_| Failure(IfStatus::InvalidUtf8, "catalog id is not UTF-8".into()))?;
        let float = |x: f64| (!x.is_nan()).then_some(x);
        let params = CatalogParams {
            harmonic: (harmonic != 0).then_some(harmonic),
            c: float(c),
            r: float(r),
            theta1: float(theta1),
            order: (order != 0).then_some(order),
        };
        let entry = CatalogEntry::parse(id, &params)?;
        boxed(out, IfFourier(entry.coefficients(k, points, exact)?))
    })
}

/// Coefficients of samples on the uniform grid `theta_m = (2m - M) pi / M`.
///
/// # Safety
/// `values` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_fourier_from_samples(
    values: *const f64,
    len: usize,
    k: usize,
    out: *mut *mut IfFourier,
) -> IfStatus {
    guard(|| {
        let grid = SampleGrid::new(input(values, len, "values")?.to_vec())?;
        boxed(out, IfFourier(fourier_coefficients(&grid.into(), k, len)?))
    })
}

/// Coefficients of the delta (`order == 0`) or its `order`-th derivative.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_delta_coefficients(
    theta1: f64,
    order: u32,
    k: usize,
    out: *mut *mut IfFourier,
) -> IfStatus {
    guard(|| {
        let spec = DeltaSpec::new(theta1, order)?;
        boxed(out, IfFourier(distribution_coefficients(&spec, k)?))
    })
}

/// Truncation order `K`, or 0 for NULL.
///
/// # Safety
/// `fc` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn if_fourier_order(fc: *const IfFourier) -> usize {
    fc.as_ref().map_or(0, |f| f.0.order())
}

/// Copies `alpha0` and the `K` cosine and sine coefficients out.
///
/// # Safety
/// `alpha` and `beta` must have room for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn if_fourier_get(
    fc: *const IfFourier,
    alpha0: *mut f64,
    alpha: *mut f64,
    beta: *mut f64,
    cap: usize,
) -> IfStatus {
    guard(|| {
        let f = &handle(fc, "fc")?.0;
        let k = f.order();
        if cap < k {
            return Err(Failure(
                IfStatus::BufferTooSmall,
                format!("need {k} slots, got {cap}"),
            ));
        }
        write(alpha0, f.alpha0(), "alpha0")?;
        if k > 0 {
            if alpha.is_null() || beta.is_null() {
                return Err(null("alpha or beta"));
            }
            ptr::copy_nonoverlapping(f.alpha().as_ptr(), alpha, k);
            ptr::copy_nonoverlapping(f.beta().as_ptr(), beta, k);
        }
        Ok(())
    })
}

/// # Safety
/// `fc` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn if_fourier_free(fc: *mut IfFourier) {
    if !fc.is_null() {
        drop(Box::from_raw(fc));
    }
}

/// # Safety
/// `re` and `im` must point to `len >= 1` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_taylor_new(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut IfTaylor,
) -> IfStatus {
    guard(|| {
        let (re, im) = (input(re, len, "re")?, input(im, len, "im")?);
        let c = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        boxed(out, IfTaylor(TaylorCoefficients::new(c)?))
    })
}

/// # Safety
/// `tc` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn if_taylor_order(tc: *const IfTaylor) -> usize {
    tc.as_ref().map_or(0, |t| t.0.order())
}

/// Copies the `K + 1` coefficients out.
///
/// # Safety
/// `re` and `im` must have room for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn if_taylor_get(
    tc: *const IfTaylor,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
) -> IfStatus {
    guard(|| {
        let c = handle(tc, "tc")?.0.coefficients();
        if cap < c.len() {
            return Err(Failure(
                IfStatus::BufferTooSmall,
                format!("need {} slots, got {cap}", c.len()),
            ));
        }
        if re.is_null() || im.is_null() {
            return Err(null("re or im"));
        }
        for (i, z) in c.iter().enumerate() {
            re.add(i).write(z.re);
            im.add(i).write(z.im);
        }
        Ok(())
    })
}

/// # Safety
/// `tc` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn if_taylor_free(tc: *mut IfTaylor) {
    if !tc.is_null() {
        drop(Box::from_raw(tc));
    }
}

/// `c_0 = alpha_0 / 2`, `c_k = alpha_k - i beta_k`.
///
/// # Safety
/// `fc` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_to_taylor(fc: *const IfFourier, out: *mut *mut IfTaylor) -> IfStatus {
    guard(|| boxed(out, IfTaylor(to_taylor(&handle(fc, "fc")?.0))))
}

/// Inverse of [`if_to_taylor`]; fails with `NonRealMean` when `c_0` is not real.
///
/// # Safety
/// `tc` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_from_taylor(tc: *const IfTaylor, out: *mut *mut IfFourier) -> IfStatus {
    guard(|| boxed(out, IfFourier(from_taylor(&handle(tc, "tc")?.0)?)))
}

/// Regulated sum and its conjugate at `(rho, theta)`, `0 <= rho < 1`.
///
/// # Safety
/// `fc` must be a live handle; `value` and `conjugate` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_regulated_sum(
    fc: *const IfFourier,
    theta: f64,
    rho: f64,
    value: *mut f64,
    conjugate: *mut f64,
) -> IfStatus {
    guard(|| {
        let (u, v) = regulated_sums(&handle(fc, "fc")?.0, theta, rho)?;
        write(value, u, "value")?;
        write(conjugate, v, "conjugate")
    })
}

/// Limit of the regulated sum along radii `1 - 2^-j`, `j = first..=last`.
///
/// # Safety
/// `fc` must be a live handle; `value` and `converged` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_rho_limit(
    fc: *const IfFourier,
    theta: f64,
    first: u32,
    last: u32,
    tol: f64,
    value: *mut f64,
    converged: *mut bool,
) -> IfStatus {
    guard(|| {
        let f = &handle(fc, "fc")?.0;
        let limit = rho_limit(f, theta, &RhoSchedule::geometric(first, last, tol)?);
        write(value, limit.value, "value")?;
        write(converged, limit.converged, "converged")
    })
}

/// Closed-form Poisson kernel `(1 - rho^2) / (2 pi (1 + rho^2 - 2 rho cos(theta - theta1)))`.
#[no_mangle]
pub extern "C" fn if_poisson_kernel(theta: f64, theta1: f64, rho: f64) -> f64 {
    poisson_kernel(theta, theta1, rho)
}

/// # Safety
/// `tc` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_inner_from_taylor(
    tc: *const IfTaylor,
    out: *mut *mut IfInner,
) -> IfStatus {
    guard(|| {
        boxed(
            out,
            IfInner(InnerAnalytic::Taylor(handle(tc, "tc")?.0.clone())),
        )
    })
}

/// The delta's inner function, with its pole at `e^{i theta1}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_inner_delta(theta1: f64, out: *mut *mut IfInner) -> IfStatus {
    guard(|| {
        DeltaSpec::new(theta1, 0)?;
        boxed(out, IfInner(InnerAnalytic::Delta { theta1 }))
    })
}

/// # Safety
/// `w` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn if_inner_free(w: *mut IfInner) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// `w(z)` for `z = re + i im`.
///
/// # Safety
/// `w` must be a live handle; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_inner_eval(
    w: *const IfInner,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> IfStatus {
    guard(|| {
        let v = handle(w, "w")?.0.eval_at(Complex64::new(re, im))?;
        write(out_re, v.re, "out_re")?;
        write(out_im, v.im, "out_im")
    })
}

/// Order-`n` partial sum at `z = rho e^{i theta}` directly and through the
/// Cauchy integral on the circle of radius `rho1`.
///
/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_contour_partial_sum(
    w: *const IfInner,
    rho: f64,
    theta: f64,
    n: usize,
    rho1: f64,
    points: usize,
    out: *mut IfPartialSum,
) -> IfStatus {
    guard(|| {
        let r = contour_partial_sum(
            &handle(w, "w")?.0,
            PolarPoint::new(rho, theta)?,
            n,
            rho1,
            points,
        )?;
        let summary = IfPartialSum {
            direct_re: r.direct.re,
            direct_im: r.direct.im,
            contour_re: r.contour.re,
            contour_im: r.contour.im,
            discrepancy: r.discrepancy,
        };
        write(out, summary, "out")
    })
}

/// Disk scalar product on the circle of radius `rho0`.
///
/// # Safety
/// `w1` and `w2` must be live handles; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_inner_product_disk(
    w1: *const IfInner,
    w2: *const IfInner,
    rho0: f64,
    points: usize,
    re: *mut f64,
    im: *mut f64,
) -> IfStatus {
    guard(|| {
        let cfg = DiskProductConfig::new(rho0, points)?;
        let v = inner_product_disk(&handle(w1, "w1")?.0, &handle(w2, "w2")?.0, &cfg)?;
        write(re, v.re, "re")?;
        write(im, v.im, "im")
    })
}

/// Classifies `mags[0..len]` (index = k). `window_lo == window_hi == 0`
/// selects the default window; `rate_tol <= 0` the default tolerance.
///
/// # Safety
/// `mags` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_classify(
    mags: *const f64,
    len: usize,
    window_lo: usize,
    window_hi: usize,
    rate_tol: f64,
    out: *mut IfClassification,
) -> IfStatus {
    guard(|| {
        let m = input(mags, len, "mags")?;
        let mut model = if window_lo == 0 && window_hi == 0 {
            GrowthModel::default()
        } else {
            GrowthModel::with_window(window_lo, window_hi)?
        };
        if rate_tol > 0.0 {
            model.rate_tol = rate_tol;
        }
        let r = classify_sequence(m, &model)?;
        let summary = IfClassification {
            bounded: r.bounded,
            fitted_rate: r.fitted_rate,
            fitted_power: r.fitted_power,
            window_lo: r.window.0,
            window_hi: r.window.1,
            sparsity_flag: r.sparsity_flag,
            degenerate: r.degenerate,
        };
        write(out, summary, "out")
    })
}

/// Largest diagonal and off-diagonal errors of the Fourier Gram matrix.
///
/// # Safety
/// `diag_error` and `offdiag_error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_fourier_gram_errors(
    k: usize,
    points: usize,
    diag_error: *mut f64,
    offdiag_error: *mut f64,
) -> IfStatus {
    guard(|| {
        let g = fourier_gram(k, points)?;
        write(diag_error, g.max_diag_error, "diag_error")?;
        write(offdiag_error, g.max_offdiag_error, "offdiag_error")
    })
}
