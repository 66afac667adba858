//! C ABI over the qhankel library.
//!
//! Matrices are handed out as opaque `QhMatrix` pointers created by the
//! `qh_build_*` functions and released with `qh_matrix_free`. Every fallible
//! function returns a `QhStatus`; on failure `qh_last_error_message` describes
//! the error for the calling thread. Results are written through out-pointers.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qhankel::operators::{
    build_classical, build_g, build_gcal, build_h, build_j, build_jcal, build_quantum_hilbert, build_tilde_h,
    ClassicalBuilder, QuantumHilbertParams,
};
use qhankel::spectral::{commutator_interior_max, eigenvalues, multiplier_g, multiplier_h, multiplier_tilde_h};
use qhankel::{AscParams, DenseSymmetricMatrix, Error, QBase};

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QhStatus {
    Ok = 0,
    Domain = 1,
    Pole = 2,
    Divergence = 3,
    IllConditioned = 4,
    Convergence = 5,
    DimensionMismatch = 6,
    Io = 7,
    NullPointer = 8,
    IndexOutOfRange = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Opaque handle to a dense symmetric matrix truncation.
pub struct QhMatrix(DenseSymmetricMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QhStatus {
    match e {
        Error::Domain(_) => QhStatus::Domain,
        Error::Pole(_) => QhStatus::Pole,
        Error::Divergence(_) => QhStatus::Divergence,
        Error::IllConditioned(_) => QhStatus::IllConditioned,
        Error::Convergence(_) => QhStatus::Convergence,
        Error::DimensionMismatch { .. } => QhStatus::DimensionMismatch,
        Error::Io(_) | Error::Json(_) => QhStatus::Io,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (QhStatus, String)>) -> QhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QhStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QhStatus::Panic
        }
    }
}

fn lib<T>(r: qhankel::Result<T>) -> Result<T, (QhStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (QhStatus, String) {
    (QhStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (QhStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: the caller guarantees `out` points to writable storage for a `T`.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn matrix<'a>(m: *const QhMatrix, what: &str) -> Result<&'a DenseSymmetricMatrix, (QhStatus, String)> {
    // SAFETY: non-null handles come from `qh_build_*` and are live until freed.
    unsafe { m.as_ref() }.map(|m| &m.0).ok_or_else(|| null(what))
}

fn build_into(out: *mut *mut QhMatrix, f: impl FnOnce() -> qhankel::Result<DenseSymmetricMatrix>) -> QhStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = lib(f())?;
        // SAFETY: `out` was checked to be non-null above.
        unsafe { *out = Box::into_raw(Box::new(QhMatrix(m))) };
        Ok(())
    })
}

fn base(q: f64) -> qhankel::Result<QBase> {
    QBase::new(q)
}

/// Weighted Hankel matrix `H(a,b)` on the Al-Salam--Chihara basis.
#[no_mangle]
pub extern "C" fn qh_build_asc(a: f64, b: f64, q: f64, order: usize, out: *mut *mut QhMatrix) -> QhStatus {
    build_into(out, || build_h(&AscParams::new(a, b, q)?, order))
}

/// Jacobi matrix `J(a,b)` commuting with `H(a,b)`.
#[no_mangle]
pub extern "C" fn qh_build_asc_jacobi(a: f64, b: f64, q: f64, order: usize, out: *mut *mut QhMatrix) -> QhStatus {
    build_into(out, || build_j(&AscParams::new(a, b, q)?, order))
}

/// Matrix `G(a;q)`.
#[no_mangle]
pub extern "C" fn qh_build_g(a: f64, q: f64, order: usize, out: *mut *mut QhMatrix) -> QhStatus {
    build_into(out, || build_g(a, base(q)?, order))
}

/// Matrix `H~(α;q)`.
#[no_mangle]
pub extern "C" fn qh_build_tilde_h(alpha: f64, q: f64, order: usize, out: *mut *mut QhMatrix) -> QhStatus {
    build_into(out, || build_tilde_h(alpha, base(q)?, order))
}

/// Quantum Hilbert matrix with entries `q^{ε(m+n)} / (1 - q^{m+n+ν})`.
#[no_mangle]
pub extern "C" fn qh_build_quantum_hilbert(
    nu: f64,
    q: f64,
    eps: f64,
    order: usize,
    out: *mut *mut QhMatrix,
) -> QhStatus {
    build_into(out, || build_quantum_hilbert(&QuantumHilbertParams::new(nu, q, eps)?, order))
}

/// Matrix of entries `q^{m+n} / (1 - q^{m+n+1})`.
#[no_mangle]
pub extern "C" fn qh_build_gcal(q: f64, order: usize, out: *mut *mut QhMatrix) -> QhStatus {
    build_into(out, || build_gcal(base(q)?, order))
}

/// Jacobi matrix commuting with the `qh_build_gcal` matrix.
#[no_mangle]
pub extern "C" fn qh_build_jcal(q: f64, order: usize, out: *mut *mut QhMatrix) -> QhStatus {
    build_into(out, || build_jcal(base(q)?, order))
}

/// Generalised Hilbert matrix `1/(m+n+ν)`.
#[no_mangle]
pub extern "C" fn qh_build_hilbert(nu: f64, order: usize, out: *mut *mut QhMatrix) -> QhStatus {
    build_into(out, || build_classical(ClassicalBuilder::Hilbert { nu }, order))
}

/// Matrix `B(a,b,c)`.
#[no_mangle]
pub extern "C" fn qh_build_b(a: f64, b: f64, c: f64, order: usize, out: *mut *mut QhMatrix) -> QhStatus {
    build_into(out, || build_classical(ClassicalBuilder::B { a, b, c }, order))
}

/// Releases a matrix; null is ignored.
///
/// # Safety
/// `m` must be null or a handle from `qh_build_*` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qh_matrix_free(m: *mut QhMatrix) {
    if !m.is_null() {
        // SAFETY: per the contract `m` came from `Box::into_raw` and is freed once.
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Order of the matrix, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qh_matrix_order(m: *const QhMatrix) -> usize {
    // SAFETY: forwarded caller contract.
    unsafe { m.as_ref() }.map_or(0, |m| m.0.order())
}

/// Entry `(row, col)`.
///
/// # Safety
/// `m` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qh_matrix_get(m: *const QhMatrix, row: usize, col: usize, out: *mut f64) -> QhStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let m = unsafe { matrix(m, "matrix") }?;
        if row >= m.order() || col >= m.order() {
            return Err((QhStatus::IndexOutOfRange, format!("({row},{col}) outside order {}", m.order())));
        }
        // SAFETY: forwarded caller contract.
        unsafe { write(out, m.get(row, col), "out") }
    })
}

/// Copies all entries row-major into `buf`, which must hold `order²` values.
///
/// # Safety
/// `m` must be null or a live handle; `buf` must be null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qh_matrix_copy(m: *const QhMatrix, buf: *mut f64, len: usize) -> QhStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let m = unsafe { matrix(m, "matrix") }?;
        let data = m.as_slice();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < data.len() {
            return Err((QhStatus::BufferTooSmall, format!("need {} values, got {len}", data.len())));
        }
        // SAFETY: `buf` holds at least `data.len()` values and cannot overlap the matrix.
        unsafe { ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len()) };
        Ok(())
    })
}

/// Eigenvalues in ascending order into `buf`, which must hold `order` values.
///
/// # Safety
/// `m` must be null or a live handle; `buf` must be null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qh_matrix_eigenvalues(m: *const QhMatrix, buf: *mut f64, len: usize) -> QhStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let m = unsafe { matrix(m, "matrix") }?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < m.order() {
            return Err((QhStatus::BufferTooSmall, format!("need {} values, got {len}", m.order())));
        }
        let ev = lib(eigenvalues(m))?;
        // SAFETY: `buf` holds at least `ev.len()` values.
        unsafe { ptr::copy_nonoverlapping(ev.as_ptr(), buf, ev.len()) };
        Ok(())
    })
}

/// Largest `|(JM - MJ)_{m,n}|` over `m, n < order - margin`.
///
/// # Safety
/// `j` and `m` must be null or live handles; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qh_commutator_interior_max(
    j: *const QhMatrix,
    m: *const QhMatrix,
    margin: usize,
    out: *mut f64,
) -> QhStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (j, m) = unsafe { (matrix(j, "j")?, matrix(m, "m")?) };
        let v = lib(commutator_interior_max(j, m, margin))?;
        // SAFETY: forwarded caller contract.
        unsafe { write(out, v, "out") }
    })
}

/// Multiplier of `H(a,b)` at `θ ∈ (0, π)`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qh_multiplier_h(theta: f64, a: f64, b: f64, q: f64, out: *mut f64) -> QhStatus {
    guard(|| {
        let v = lib(AscParams::new(a, b, q).and_then(|p| multiplier_h(theta, &p)))?;
        // SAFETY: forwarded caller contract.
        unsafe { write(out, v, "out") }
    })
}

/// Multiplier of `G(a;q)` at `θ ∈ (0, π)`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qh_multiplier_g(theta: f64, a: f64, q: f64, out: *mut f64) -> QhStatus {
    guard(|| {
        let v = lib(base(q).and_then(|q| multiplier_g(theta, a, q)))?;
        // SAFETY: forwarded caller contract.
        unsafe { write(out, v, "out") }
    })
}

/// Multiplier of `H~(α;q)` at `θ ∈ (0, π)`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qh_multiplier_tilde_h(theta: f64, alpha: f64, q: f64, out: *mut f64) -> QhStatus {
    guard(|| {
        let v = lib(base(q).and_then(|q| multiplier_tilde_h(theta, alpha, q)))?;
        // SAFETY: forwarded caller contract.
        unsafe { write(out, v, "out") }
    })
}

/// Message of the last failed call on this thread (empty after success).
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn qh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn qh_status_name(status: QhStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        QhStatus::Ok => b"ok\0",
        QhStatus::Domain => b"domain\0",
        QhStatus::Pole => b"pole\0",
        QhStatus::Divergence => b"divergence\0",
        QhStatus::IllConditioned => b"ill-conditioned\0",
        QhStatus::Convergence => b"convergence\0",
        QhStatus::DimensionMismatch => b"dimension-mismatch\0",
        QhStatus::Io => b"io\0",
        QhStatus::NullPointer => b"null-pointer\0",
        QhStatus::IndexOutOfRange => b"index-out-of-range\0",
        QhStatus::BufferTooSmall => b"buffer-too-small\0",
        QhStatus::Panic => b"panic\0",
    };
    s.as_ptr().cast()
}
