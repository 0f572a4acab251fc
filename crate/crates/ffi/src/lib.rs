//! C ABI over `scs-core`.
//!
//! Every fallible function returns an [`ScsStatus`]; on failure the message is
//! kept per thread and can be fetched with [`scs_last_error_message`]. Panics
//! never cross the boundary and are reported as [`ScsStatus::Panic`].

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64;
use scs_core::meanfield;
use scs_core::pairdyn::{Boundary, Evolver, FieldGrid, MassSign, SolverConfig};
use scs_core::scsfactor;
use scs_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    /// Input outside the domain of a formula (off shell, factorization or boost domain).
    Domain = 3,
    /// Divergence, NaN or solver breakdown.
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
    Other = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScsMassSign {
    Manifest = 0,
    Broken = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScsDiagnostics {
    pub step: u64,
    pub t: f64,
    pub energy: f64,
    pub charge: f64,
    pub max_abs: f64,
    pub efield_norm: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScsFactorization {
    pub eta: f64,
    pub zeta: f64,
    pub phi_mag: f64,
    pub beta: f64,
}

/// Opaque evolver handle.
pub struct ScsEvolver {
    inner: Evolver,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> ScsStatus {
    match e {
        Error::InvalidParameter { .. }
        | Error::GridMismatch(_)
        | Error::GridTooSmall { .. }
        | Error::CflViolated { .. }
        | Error::Config { .. } => ScsStatus::InvalidParameter,
        Error::OffShell { .. }
        | Error::MassNormalizedUndefined { .. }
        | Error::DegenerateComponents { .. }
        | Error::BoostDomain(_)
        | Error::FactorizationDomain(_)
        | Error::NoRealBranch(_)
        | Error::DegenerateLimit(_)
        | Error::NotClassicallyAllowed { .. }
        | Error::LightLike { .. } => ScsStatus::Domain,
        e if e.is_numerical() => ScsStatus::Numerical,
        _ => ScsStatus::Other,
    }
}

fn fail(status: ScsStatus, msg: impl Into<String>) -> ScsStatus {
    set_error(msg.into());
    status
}

/// Run `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), (ScsStatus, String)>) -> ScsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            ScsStatus::Ok
        }
        Ok(Err((s, m))) => fail(s, m),
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(ScsStatus::Panic, msg)
        }
    }
}

fn core(e: Error) -> (ScsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (ScsStatus, String) {
    (ScsStatus::NullPointer, "null pointer argument".into())
}

/// Copy the last error message of this thread into `buf` as a NUL-terminated
/// string. Returns the buffer size needed including the terminator; nothing is
/// written when `buf` is null or `len` is too small.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn scs_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let need = e.len() + 1;
        if !buf.is_null() && len >= need {
            ptr::copy_nonoverlapping(e.as_ptr(), buf.cast::<u8>(), e.len());
            *buf.add(e.len()) = 0;
        }
        need
    })
}

/// Create an evolver for the pairing field on `nx` points.
///
/// `re`, `im`, `vre`, `vim` hold the initial field and its time derivative.
/// With `periodic` nonzero the boundary is periodic, otherwise the ghost
/// points are pinned to `left` and `right` (given as re/im pairs).
///
/// # Safety
/// The four input arrays must each hold `nx` doubles; `left` and `right` must
/// point to two doubles when `periodic` is zero; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scs_evolver_new(
    nx: usize,
    dx: f64,
    dt: f64,
    m_delta: f64,
    g_delta: f64,
    sign: ScsMassSign,
    periodic: i32,
    left: *const f64,
    right: *const f64,
    re: *const f64,
    im: *const f64,
    vre: *const f64,
    vim: *const f64,
    out: *mut *mut ScsEvolver,
) -> ScsStatus {
    guard(|| {
        if out.is_null() || re.is_null() || im.is_null() || vre.is_null() || vim.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let boundary = if periodic != 0 {
            Boundary::Periodic
        } else {
            if left.is_null() || right.is_null() {
                return Err(null());
            }
            Boundary::FixedAsymptote {
                left: Complex64::new(*left, *left.add(1)),
                right: Complex64::new(*right, *right.add(1)),
            }
        };
        let pack = |a: *const f64, b: *const f64| -> Vec<Complex64> {
            let (a, b) = (slice::from_raw_parts(a, nx), slice::from_raw_parts(b, nx));
            a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect()
        };
        let grid = FieldGrid::new(dx, 0.0, pack(re, im), pack(vre, vim)).map_err(core)?;
        let mut cfg = SolverConfig::new(dx, dt, 0, m_delta, g_delta);
        cfg.sign = match sign {
            ScsMassSign::Manifest => MassSign::Manifest,
            ScsMassSign::Broken => MassSign::Broken,
        };
        cfg.boundary = boundary;
        let inner = Evolver::new(grid, cfg).map_err(core)?;
        *out = Box::into_raw(Box::new(ScsEvolver { inner }));
        Ok(())
    })
}

/// Advance `steps` time steps.
///
/// # Safety
/// `h` must be a live handle from [`scs_evolver_new`].
#[no_mangle]
pub unsafe extern "C" fn scs_evolver_step(h: *mut ScsEvolver, steps: u64) -> ScsStatus {
    guard(|| {
        let h = h.as_mut().ok_or_else(null)?;
        for _ in 0..steps {
            h.inner.step().map_err(core)?;
        }
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scs_evolver_diagnostics(h: *const ScsEvolver, out: *mut ScsDiagnostics) -> ScsStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        let out = out.as_mut().ok_or_else(null)?;
        let d = h.inner.diagnostics();
        *out = ScsDiagnostics {
            step: d.step as u64,
            t: d.t,
            energy: d.energy,
            charge: d.charge,
            max_abs: d.max_abs,
            efield_norm: d.efield_norm,
        };
        Ok(())
    })
}

/// Copy the current field into `re` and `im`, each of capacity `len`.
///
/// # Safety
/// `h` must be a live handle; `re` and `im` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn scs_evolver_field(h: *const ScsEvolver, re: *mut f64, im: *mut f64, len: usize) -> ScsStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        let values = &h.inner.field().values;
        if len < values.len() {
            return Err((
                ScsStatus::BufferTooSmall,
                format!("need {} points, buffer holds {len}", values.len()),
            ));
        }
        let (re, im) = (slice::from_raw_parts_mut(re, len), slice::from_raw_parts_mut(im, len));
        for (i, v) in values.iter().enumerate() {
            re[i] = v.re;
            im[i] = v.im;
        }
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn scs_evolver_free(h: *mut ScsEvolver) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Real energy roots of the in-medium dispersion relation at momentum `p`,
/// sorted ascending. `count` receives the number of roots; when it exceeds
/// `cap` nothing is written to `roots` and `BufferTooSmall` is returned.
///
/// # Safety
/// `roots` must hold `cap` writable doubles (may be null when `cap` is 0);
/// `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scs_dispersion_roots(
    p: f64,
    mu: f64,
    sigma: f64,
    m: f64,
    re_delta: f64,
    im_delta: f64,
    roots: *mut f64,
    cap: usize,
    count: *mut usize,
) -> ScsStatus {
    guard(|| {
        let count = count.as_mut().ok_or_else(null)?;
        if [p, mu, sigma, m, re_delta, im_delta].iter().any(|v| !v.is_finite()) {
            return Err((ScsStatus::InvalidParameter, "non-finite input".into()));
        }
        let found = meanfield::dispersion_solve(p, mu, sigma, m, Complex64::new(re_delta, im_delta));
        *count = found.len();
        if found.len() > cap {
            return Err((
                ScsStatus::BufferTooSmall,
                format!("{} roots, buffer holds {cap}", found.len()),
            ));
        }
        if !found.is_empty() {
            if roots.is_null() {
                return Err(null());
            }
            slice::from_raw_parts_mut(roots, found.len()).copy_from_slice(&found);
        }
        Ok(())
    })
}

/// Spin-charge factorization of the dressed boost.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scs_factorize(
    e_plus: f64,
    e_minus: f64,
    re_delta_bar: f64,
    im_delta_bar: f64,
    out: *mut ScsFactorization,
) -> ScsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(null)?;
        let f = scsfactor::factorize(e_plus, e_minus, Complex64::new(re_delta_bar, im_delta_bar)).map_err(core)?;
        *out = ScsFactorization {
            eta: f.eta,
            zeta: f.zeta,
            phi_mag: f.phi_mag,
            beta: f.beta,
        };
        Ok(())
    })
}
