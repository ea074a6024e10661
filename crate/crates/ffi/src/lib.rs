//! C ABI for `dp5-core`.
//!
//! Every function returns a [`Dp5Status`]; results are written through out
//! pointers. Reports are opaque handles that must be released with their
//! `_free` function. After a failure, [`dp5_last_error`] returns the message
//! for the calling thread. Panics never cross the boundary; they surface as
//! `DP5_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dp5_core::density::{alpha_constant, euler_product, omega_infty, peyre_constant, PeyreConstant};
use dp5_core::enumerate::{count_naive, count_torsor, CountReport, EnumOptions};
use dp5_core::surface::{is_on_surface, ProjectivePoint};
use dp5_core::torsor::{psi, TorsorPoint};
use dp5_core::Error;
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dp5Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NaiveBoundExceeded = 3,
    NonConvergence = 4,
    Verification = 5,
    Pole = 6,
    /// The requested value was not computed for this report.
    Unavailable = 7,
    Panic = 8,
}

/// Counts from one or both engines at a single height bound.
pub struct Dp5CountReport(CountReport);

/// The leading constant with its factors and error bars.
pub struct Dp5Constant(PeyreConstant);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> Dp5Status {
    match e {
        Error::ZeroArgument(_) | Error::InvalidArgument(_) => Dp5Status::InvalidArgument,
        Error::NaiveBoundExceeded { .. } => Dp5Status::NaiveBoundExceeded,
        Error::NonConvergence { .. } => Dp5Status::NonConvergence,
        Error::Pole { .. } => Dp5Status::Pole,
        Error::Verification(_) | Error::PsiInvariant(_) | Error::LineCount(_) => Dp5Status::Verification,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (Dp5Status, String)>) -> Dp5Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Dp5Status::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside dp5".into());
            Dp5Status::Panic
        }
    }
}

fn core(e: Error) -> (Dp5Status, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (Dp5Status, String) {
    (Dp5Status::NullPointer, format!("{name} is null"))
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), (Dp5Status, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dp5_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Number of points of height at most `b` on the complement of the lines,
/// via the universal torsor. `workers` = 0 uses every core.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_count_torsor(b: u64, workers: usize, out: *mut u64) -> Dp5Status {
    guard(|| {
        let n = count_torsor(b, EnumOptions::default().with_workers(workers)).map_err(core)?;
        write(out, "out", n.count)
    })
}

/// As [`dp5_count_torsor`], directly on the quadrics; `b` is limited.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_count_naive(b: u64, workers: usize, out: *mut u64) -> Dp5Status {
    guard(|| {
        let n = count_naive(b, EnumOptions::default().with_workers(workers)).map_err(core)?;
        write(out, "out", n.count)
    })
}

/// Runs the selected engines at `b`, and the three-way split with parameter
/// `split_a` when it is positive.
///
/// # Safety
/// `out` must be valid for writes. The handle written there is owned by the
/// caller and must be released with [`dp5_count_report_free`].
#[no_mangle]
pub unsafe extern "C" fn dp5_count_report_new(
    b: u64,
    naive: bool,
    torsor: bool,
    split_a: f64,
    workers: usize,
    out: *mut *mut Dp5CountReport,
) -> Dp5Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let split = (split_a > 0.0).then_some(split_a);
        let r = CountReport::run(b, naive, torsor, split, EnumOptions::default().with_workers(workers)).map_err(core)?;
        out.write(Box::into_raw(Box::new(Dp5CountReport(r))));
        Ok(())
    })
}

/// # Safety
/// `report` must come from [`dp5_count_report_new`] and not be freed yet, or
/// be null.
#[no_mangle]
pub unsafe extern "C" fn dp5_count_report_free(report: *mut Dp5CountReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

unsafe fn report_field(
    report: *const Dp5CountReport,
    out: *mut u64,
    get: impl FnOnce(&CountReport) -> Option<u64>,
) -> Dp5Status {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let v = get(&r.0).ok_or((Dp5Status::Unavailable, "not computed for this report".into()))?;
        write(out, "out", v)
    })
}

/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_count_report_naive(report: *const Dp5CountReport, out: *mut u64) -> Dp5Status {
    report_field(report, out, |r| r.n_naive)
}

/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_count_report_torsor(report: *const Dp5CountReport, out: *mut u64) -> Dp5Status {
    report_field(report, out, |r| r.n_torsor)
}

/// Writes `N_a`, `N_b1`, `N_b2` to `out[0..3]`.
///
/// # Safety
/// `report` must be a live handle; `out` valid for three writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_count_report_split(report: *const Dp5CountReport, out: *mut u64) -> Dp5Status {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let s = r.0.split.ok_or((Dp5Status::Unavailable, "split not computed".into()))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out.copy_from_nonoverlapping([s.na, s.nb1, s.nb2].as_ptr(), 3);
        Ok(())
    })
}

/// Both engines agree, and the split sums to the total.
///
/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_count_report_consistent(report: *const Dp5CountReport, out: *mut bool) -> Dp5Status {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        write(out, "out", r.0.consistent())
    })
}

/// Whether the primitive point `coords` lies on the surface.
///
/// # Safety
/// `coords` must point to 6 readable values; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_is_on_surface(coords: *const i64, out: *mut bool) -> Dp5Status {
    guard(|| {
        if coords.is_null() {
            return Err(null("coords"));
        }
        let mut raw = [0i64; 6];
        raw.copy_from_slice(std::slice::from_raw_parts(coords, 6));
        let p = ProjectivePoint::normalize(raw).map_err(core)?;
        write(out, "out", is_on_surface(&p))
    })
}

/// The image of the torsor point `(eta[0..6], alpha[0..2])`, as a primitive
/// integral vector with positive first coordinate.
///
/// # Safety
/// `eta` must hold 6 values, `alpha` 2, and `out` room for 6.
#[no_mangle]
pub unsafe extern "C" fn dp5_psi(eta: *const i64, alpha: *const i64, out: *mut i64) -> Dp5Status {
    guard(|| {
        if eta.is_null() || alpha.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let mut e = [0i64; 6];
        e.copy_from_slice(std::slice::from_raw_parts(eta, 6));
        let mut a = [0i64; 2];
        a.copy_from_slice(std::slice::from_raw_parts(alpha, 2));
        let p = psi(&TorsorPoint::new(e, a)).map_err(core)?;
        out.copy_from_nonoverlapping(p.coords().as_ptr(), 6);
        Ok(())
    })
}

/// The exact constant `α` as `num / den`.
///
/// # Safety
/// Both pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_alpha(num: *mut i64, den: *mut i64) -> Dp5Status {
    guard(|| {
        let a = alpha_constant();
        write(num, "num", a.numer().to_i64().unwrap())?;
        write(den, "den", a.denom().to_i64().unwrap())
    })
}

/// The Euler product over `p <= p_max`; the full product lies in
/// `[value - tail_bound, value]`.
///
/// # Safety
/// Both pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_euler_product(p_max: u64, value: *mut f64, tail_bound: *mut f64) -> Dp5Status {
    guard(|| {
        let e = euler_product(p_max).map_err(core)?;
        write(value, "value", e.value)?;
        write(tail_bound, "tail_bound", e.tail_bound)
    })
}

/// The archimedean density to relative tolerance `tol`.
///
/// # Safety
/// Both pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_omega_infty(tol: f64, value: *mut f64, error: *mut f64) -> Dp5Status {
    guard(|| {
        let r = omega_infty(tol).map_err(core)?;
        write(value, "value", r.value)?;
        write(error, "error", r.error_estimate)
    })
}

/// # Safety
/// `out` must be valid for writes; the handle must be released with
/// [`dp5_constant_free`].
#[no_mangle]
pub unsafe extern "C" fn dp5_constant_new(tol: f64, p_max: u64, out: *mut *mut Dp5Constant) -> Dp5Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let c = peyre_constant(tol, p_max).map_err(core)?;
        out.write(Box::into_raw(Box::new(Dp5Constant(c))));
        Ok(())
    })
}

/// `c` and its propagated error.
///
/// # Safety
/// `c` must be a live handle; pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_constant_value(c: *const Dp5Constant, value: *mut f64, error: *mut f64) -> Dp5Status {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("c"))?;
        write(value, "value", c.0.value)?;
        write(error, "error", c.0.error)
    })
}

/// `ω∞` and its error estimate as used in `c`.
///
/// # Safety
/// `c` must be a live handle; pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp5_constant_omega(c: *const Dp5Constant, value: *mut f64, error: *mut f64) -> Dp5Status {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("c"))?;
        write(value, "value", c.0.omega.value)?;
        write(error, "error", c.0.omega.error_estimate)
    })
}

/// # Safety
/// `c` must come from [`dp5_constant_new`] and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn dp5_constant_free(c: *mut Dp5Constant) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_are_stable() {
        assert_eq!(Dp5Status::Ok as i32, 0);
        assert_eq!(Dp5Status::Panic as i32, 8);
    }

    #[test]
    fn null_out_pointer() {
        let s = unsafe { dp5_count_torsor(1, 0, ptr::null_mut()) };
        assert_eq!(s, Dp5Status::NullPointer);
        assert!(!dp5_last_error().is_null());
    }
}
