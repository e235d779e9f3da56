//! C ABI over `gls-core`.
//!
//! Generating functions and moment tables are opaque heap handles created by
//! `gls_*` constructors and released with the matching `_free`. Every
//! fallible call returns a [`GlsStatus`] and writes results through out
//! pointers; `gls_last_error_message` describes the latest failure on the
//! calling thread.

// `!(x >= y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gls_core::calculus;
use gls_core::fenchel;
use gls_core::psi::{self, MomentTable, PsiFunction};
use gls_core::{Error, Extended};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    EmptyDomain = 3,
    BelowValidity = 4,
    ConstraintViolation = 5,
    ParseError = 6,
    ArityMismatch = 7,
    Other = 8,
    Panic = 9,
}

/// Opaque generating function.
pub struct GlsPsi(PsiFunction);

/// Opaque moment table.
pub struct GlsMomentTable(MomentTable);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GlsStatus {
    match e {
        Error::InvalidParameter(_) | Error::ExponentOutOfRange(_) | Error::UnrepresentableScale(_) => {
            GlsStatus::InvalidParameter
        }
        Error::EmptyDomain(_)
        | Error::EmptyIntersection(_)
        | Error::EmptyOutputDomain(_)
        | Error::DomainMismatch(_) => GlsStatus::EmptyDomain,
        Error::BelowValidity { .. } => GlsStatus::BelowValidity,
        Error::ConstraintViolation(_) => GlsStatus::ConstraintViolation,
        Error::Parse { .. } => GlsStatus::ParseError,
        Error::ArityMismatch { .. } => GlsStatus::ArityMismatch,
        _ => GlsStatus::Other,
    }
}

fn guard(f: impl FnOnce() -> Result<(), GlsStatus>) -> GlsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GlsStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside gls-core");
            GlsStatus::Panic
        }
    }
}

fn fail(e: Error) -> GlsStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null() -> GlsStatus {
    set_error("null pointer argument");
    GlsStatus::NullPointer
}

unsafe fn psi_ref<'a>(p: *const GlsPsi) -> Result<&'a PsiFunction, GlsStatus> {
    p.as_ref().map(|h| &h.0).ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), GlsStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn put_psi(out: *mut *mut GlsPsi, r: gls_core::Result<PsiFunction>) -> Result<(), GlsStatus> {
    let psi = r.map_err(fail)?;
    put(out, Box::into_raw(Box::new(GlsPsi(psi))))
}

/// Message for the latest failure on this thread; empty after a success.
/// The pointer stays valid until the next `gls_*` call on the same thread.
#[no_mangle]
pub extern "C" fn gls_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `beta * p^gamma` on `[1, inf)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_power(beta: f64, gamma: f64, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| put_psi(out, PsiFunction::power(beta, gamma)))
}

/// `beta * p^gamma / (p - 1)^delta`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_rational_factor(
    beta: f64,
    gamma: f64,
    delta: f64,
    out: *mut *mut GlsPsi,
) -> GlsStatus {
    guard(|| put_psi(out, PsiFunction::rational_factor(beta, gamma, delta)))
}

/// `scale * (p - a)^(-c) * (b - p)^(-s)` on `(a, b)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_window(
    scale: f64,
    a: f64,
    b: f64,
    c: f64,
    s: f64,
    out: *mut *mut GlsPsi,
) -> GlsStatus {
    guard(|| put_psi(out, PsiFunction::window(scale, a, b, c, s)))
}

/// 1 at `p = r`, infinite elsewhere.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_degenerate(r: f64, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| put_psi(out, PsiFunction::degenerate(r)))
}

/// Natural function of a moment table (the table is copied).
///
/// # Safety
/// `table` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_natural(table: *const GlsMomentTable, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(null)?;
        put_psi(out, PsiFunction::natural(t.0.clone()))
    })
}

/// # Safety
/// `a`, `b` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_product(a: *const GlsPsi, b: *const GlsPsi, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| put_psi(out, PsiFunction::product(psi_ref(a)?, psi_ref(b)?)))
}

/// # Safety
/// `a` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_scaled(c: f64, a: *const GlsPsi, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| put_psi(out, PsiFunction::scaled(c, psi_ref(a)?)))
}

/// # Safety
/// `psi` must come from a `gls_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_free(psi: *mut GlsPsi) {
    if !psi.is_null() {
        drop(Box::from_raw(psi));
    }
}

/// `psi(p)`: `INFINITY` off the domain, `NaN` for a null handle.
///
/// # Safety
/// `psi` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_eval(psi: *const GlsPsi, p: f64) -> f64 {
    match psi.as_ref() {
        Some(h) => catch_unwind(AssertUnwindSafe(|| h.0.eval(p).to_f64())).unwrap_or(f64::NAN),
        None => f64::NAN,
    }
}

/// Domain endpoints and closedness flags.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_domain(
    psi: *const GlsPsi,
    lower: *mut f64,
    upper: *mut f64,
    lower_closed: *mut bool,
    upper_closed: *mut bool,
) -> GlsStatus {
    guard(|| {
        let d = psi_ref(psi)?.domain();
        put(lower, d.lower())?;
        put(upper, d.upper())?;
        put(lower_closed, d.lower_closed())?;
        put(upper_closed, d.upper_closed())
    })
}

/// Builds a table from parallel arrays of exponents and moments.
///
/// # Safety
/// `ps` and `moments` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_moments_new(
    ps: *const f64,
    moments: *const f64,
    len: usize,
    out: *mut *mut GlsMomentTable,
) -> GlsStatus {
    guard(|| {
        if ps.is_null() || moments.is_null() {
            return Err(null());
        }
        let p = std::slice::from_raw_parts(ps, len);
        let m = std::slice::from_raw_parts(moments, len);
        let t = MomentTable::new(p.iter().copied().zip(m.iter().copied()).collect()).map_err(fail)?;
        put(out, Box::into_raw(Box::new(GlsMomentTable(t))))
    })
}

/// Parses `glsmoments v1` text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_moments_parse(text: *const c_char, out: *mut *mut GlsMomentTable) -> GlsStatus {
    guard(|| {
        if text.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("moment text is not UTF-8");
            GlsStatus::ParseError
        })?;
        let t = MomentTable::parse(s).map_err(fail)?;
        put(out, Box::into_raw(Box::new(GlsMomentTable(t))))
    })
}

/// # Safety
/// `table` must come from a `gls_moments_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gls_moments_free(table: *mut GlsMomentTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// GLS norm `sup_p moment(p) / psi(p)` over the table.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_norm(table: *const GlsMomentTable, psi: *const GlsPsi, out: *mut f64) -> GlsStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(null)?;
        let v = psi::gls_norm(&t.0, psi_ref(psi)?).map_err(fail)?;
        put(out, v)
    })
}

/// `h*(v)`; `value` is `INFINITY` and `argmax` `NaN` when it diverges.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_fenchel_conjugate(
    psi: *const GlsPsi,
    v: f64,
    value: *mut f64,
    argmax: *mut f64,
) -> GlsStatus {
    guard(|| {
        let c = fenchel::fenchel_conjugate(psi_ref(psi)?, v);
        put(value, c.value.to_f64())?;
        put(argmax, c.argmax)
    })
}

/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_tail_bound(psi: *const GlsPsi, norm: f64, y: f64, out: *mut f64) -> GlsStatus {
    guard(|| put(out, fenchel::tail_bound(psi_ref(psi)?, norm, y).map_err(fail)?))
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_power_tail_closed_form(gamma: f64, k: f64, y: f64, out: *mut f64) -> GlsStatus {
    guard(|| put(out, fenchel::power_tail_closed_form(gamma, k, y).map_err(fail)?))
}

/// # Safety
/// All out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_holder_split_min(
    g1: f64,
    g2: f64,
    value: *mut f64,
    alpha: *mut f64,
    beta: *mut f64,
) -> GlsStatus {
    guard(|| {
        let (v, a, b) = calculus::holder_split_min(g1, g2).map_err(fail)?;
        put(value, v)?;
        put(alpha, a)?;
        put(beta, b)
    })
}

/// # Safety
/// All out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_conjugate_split_min(
    g1: f64,
    g2: f64,
    p: f64,
    value: *mut f64,
    p1: *mut f64,
    p2: *mut f64,
) -> GlsStatus {
    guard(|| {
        let (v, a, b) = calculus::conjugate_split_min(g1, g2, p).map_err(fail)?;
        put(value, v)?;
        put(p1, a)?;
        put(p2, b)
    })
}

/// # Safety
/// All out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_beckner_constant(n: u32, p1: f64, p2: f64, r: *mut f64, g: *mut f64) -> GlsStatus {
    guard(|| {
        let (rr, gg) = calculus::beckner_constant(n, p1, p2).map_err(fail)?;
        put(r, rr)?;
        put(g, gg)
    })
}

/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_combine_product(a: *const GlsPsi, b: *const GlsPsi, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| put_psi(out, calculus::combine_product(psi_ref(a)?, psi_ref(b)?)))
}

/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_combine_tensor(a: *const GlsPsi, b: *const GlsPsi, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| put_psi(out, calculus::combine_tensor(psi_ref(a)?, psi_ref(b)?)))
}

/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_combine_convolution(
    a: *const GlsPsi,
    b: *const GlsPsi,
    n: u32,
    out: *mut *mut GlsPsi,
) -> GlsStatus {
    guard(|| put_psi(out, calculus::combine_convolution(psi_ref(a)?, psi_ref(b)?, n)))
}

/// Writes the `m^(d/p)` bound to `out` and the relaxed constant `m^d`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_combine_infimal_convolution(
    psi: *const GlsPsi,
    d: u32,
    m: u32,
    out: *mut *mut GlsPsi,
    relaxed: *mut f64,
) -> GlsStatus {
    guard(|| {
        if relaxed.is_null() {
            return Err(null());
        }
        let (k, c) = calculus::combine_infimal_convolution(psi_ref(psi)?, d, m).map_err(fail)?;
        put_psi(out, Ok(k))?;
        put(relaxed, c)
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_combine_maximal(gamma: f64, d: u32, c_env: f64, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| put_psi(out, calculus::combine_maximal(gamma, d, c_env)))
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_combine_hausdorff(gamma: f64, m: u32, c_env: f64, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| put_psi(out, calculus::combine_hausdorff(gamma, m, c_env)))
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gls_combine_toeplitz(g1: f64, g2: f64, out: *mut *mut GlsPsi) -> GlsStatus {
    guard(|| put_psi(out, calculus::combine_toeplitz(g1, g2)))
}

/// Whether `p` lies in the domain where `psi` is finite.
///
/// # Safety
/// `psi` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn gls_psi_is_finite_at(psi: *const GlsPsi, p: f64) -> bool {
    psi.as_ref().is_some_and(|h| h.0.eval(p) != Extended::PosInf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn null_handles_are_reported() {
        let mut out = ptr::null_mut();
        let s = unsafe { gls_psi_product(ptr::null(), ptr::null(), &mut out) };
        assert_eq!(s, GlsStatus::NullPointer);
        assert!(unsafe { gls_psi_eval(ptr::null(), 2.0) }.is_nan());
    }
}
