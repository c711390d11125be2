//! C ABI for the entropy-collapse engine.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`EclStatus`]; on failure `ecl_last_error()` describes the error for the
//! calling thread. Panics are caught and reported as `ECL_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use entropy_collapse::dynamics::{evolve, DynamicsParams, Trajectory, UpdateRule};
use entropy_collapse::metrics::{self, EntropyMeasure};
use entropy_collapse::report::write_trajectory_csv;
use entropy_collapse::rng::RngStream;
use entropy_collapse::simplex::StateDistribution;
use entropy_collapse::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EclStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidDimension = 3,
    Degenerate = 4,
    Io = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EclRule {
    Multiplicative = 0,
    Softmax = 1,
    Replicator = 2,
}

impl From<EclRule> for UpdateRule {
    fn from(r: EclRule) -> Self {
        match r {
            EclRule::Multiplicative => UpdateRule::Multiplicative,
            EclRule::Softmax => UpdateRule::SoftmaxReinforcement,
            EclRule::Replicator => UpdateRule::Replicator,
        }
    }
}

/// A point on the probability simplex.
pub struct EclDistribution {
    inner: StateDistribution,
}

/// Per-step summaries of one evolved trajectory.
pub struct EclTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: EclStatus, message: impl Into<String>) -> EclStatus {
    set_error(message.into());
    status
}

fn from_error(e: Error) -> EclStatus {
    let status = match &e {
        Error::InvalidDimension { .. } => EclStatus::InvalidDimension,
        Error::DegenerateVector(_) => EclStatus::Degenerate,
        Error::Io { .. } => EclStatus::Io,
        _ => EclStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> EclStatus) -> EclStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(EclStatus::Panic, "panic inside entropy-collapse"),
    }
}

fn put<T>(out: *mut *mut T, value: T) -> EclStatus {
    // SAFETY: callers check `out` for null before calling.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    EclStatus::Ok
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ecl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ecl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Uniform distribution over `n` states.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ecl_distribution_uniform(n: usize, out: *mut *mut EclDistribution) -> EclStatus {
    guard(|| {
        if out.is_null() {
            return fail(EclStatus::NullPointer, "out is NULL");
        }
        match StateDistribution::uniform(n) {
            Ok(inner) => put(out, EclDistribution { inner }),
            Err(e) => from_error(e),
        }
    })
}

/// Flat Dirichlet draw from the stream `(seed, stream)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ecl_distribution_dirichlet(
    n: usize,
    seed: u64,
    stream: u64,
    out: *mut *mut EclDistribution,
) -> EclStatus {
    guard(|| {
        if out.is_null() {
            return fail(EclStatus::NullPointer, "out is NULL");
        }
        let mut rng = RngStream::new(seed, stream);
        match StateDistribution::sample_dirichlet_uniform(n, &mut rng) {
            Ok(inner) => put(out, EclDistribution { inner }),
            Err(e) => from_error(e),
        }
    })
}

/// Copy `n` probabilities into a new distribution. They must already sum to one.
///
/// # Safety
/// `probs` must point to `n` readable doubles and `out` to writable storage
/// for one handle.
#[no_mangle]
pub unsafe extern "C" fn ecl_distribution_from_probs(
    probs: *const f64,
    n: usize,
    out: *mut *mut EclDistribution,
) -> EclStatus {
    guard(|| {
        if probs.is_null() || out.is_null() {
            return fail(EclStatus::NullPointer, "probs or out is NULL");
        }
        let v = std::slice::from_raw_parts(probs, n).to_vec();
        match StateDistribution::from_probs(v) {
            Ok(inner) => put(out, EclDistribution { inner }),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `d` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ecl_distribution_free(d: *mut EclDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of states, or 0 for NULL.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ecl_distribution_len(d: *const EclDistribution) -> usize {
    d.as_ref().map_or(0, |d| d.inner.len())
}

/// Copy the probabilities into `buf`, which must hold exactly `len` doubles.
///
/// # Safety
/// `d` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ecl_distribution_probs(
    d: *const EclDistribution,
    buf: *mut f64,
    len: usize,
) -> EclStatus {
    guard(|| {
        let (Some(d), false) = (d.as_ref(), buf.is_null()) else {
            return fail(EclStatus::NullPointer, "distribution or buf is NULL");
        };
        if len != d.inner.len() {
            return fail(
                EclStatus::InvalidArgument,
                format!("buffer holds {len} values, distribution has {}", d.inner.len()),
            );
        }
        std::slice::from_raw_parts_mut(buf, len).copy_from_slice(d.inner.probs());
        EclStatus::Ok
    })
}

/// Entropy in nats: Shannon when `q == 1`, Rényi of order `q` otherwise.
///
/// # Safety
/// `d` must be a live handle and `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn ecl_entropy(d: *const EclDistribution, q: f64, out: *mut f64) -> EclStatus {
    guard(|| {
        let (Some(d), false) = (d.as_ref(), out.is_null()) else {
            return fail(EclStatus::NullPointer, "distribution or out is NULL");
        };
        match EntropyMeasure::renyi(q) {
            Ok(m) => {
                *out = m.entropy(&d.inner);
                EclStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Evolve `p0` for `horizon` steps with constant β. Noise (if `sigma > 0`)
/// draws from the stream `(seed, stream)`.
///
/// # Safety
/// `p0` must be a live handle and `out` writable storage for one handle.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ecl_evolve(
    p0: *const EclDistribution,
    alpha: f64,
    beta: f64,
    rule: EclRule,
    sigma: f64,
    horizon: usize,
    seed: u64,
    stream: u64,
    out: *mut *mut EclTrajectory,
) -> EclStatus {
    guard(|| {
        let (Some(p0), false) = (p0.as_ref(), out.is_null()) else {
            return fail(EclStatus::NullPointer, "p0 or out is NULL");
        };
        let params = DynamicsParams::new(alpha, beta, rule.into()).with_noise(sigma);
        let mut rng = RngStream::new(seed, stream);
        match evolve(&p0.inner, &params, horizon, &mut rng, EntropyMeasure::Shannon) {
            Ok(inner) => put(out, EclTrajectory { inner }),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `t` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ecl_trajectory_free(t: *mut EclTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of recorded steps (horizon + 1), or 0 for NULL.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ecl_trajectory_len(t: *const EclTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.inner.steps.len())
}

/// Copy the normalized Shannon entropy per step into `buf` (`len` doubles,
/// equal to `ecl_trajectory_len`).
///
/// # Safety
/// `t` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ecl_trajectory_entropy_norm(
    t: *const EclTrajectory,
    buf: *mut f64,
    len: usize,
) -> EclStatus {
    guard(|| {
        let (Some(t), false) = (t.as_ref(), buf.is_null()) else {
            return fail(EclStatus::NullPointer, "trajectory or buf is NULL");
        };
        if len != t.inner.steps.len() {
            return fail(
                EclStatus::InvalidArgument,
                format!("buffer holds {len} values, trajectory has {}", t.inner.steps.len()),
            );
        }
        let out = std::slice::from_raw_parts_mut(buf, len);
        for (o, s) in out.iter_mut().zip(&t.inner.steps) {
            *o = s.entropy_norm;
        }
        EclStatus::Ok
    })
}

/// Final state of the trajectory as a new distribution handle.
///
/// # Safety
/// `t` must be a live handle and `out` writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ecl_trajectory_final_state(
    t: *const EclTrajectory,
    out: *mut *mut EclDistribution,
) -> EclStatus {
    guard(|| {
        let (Some(t), false) = (t.as_ref(), out.is_null()) else {
            return fail(EclStatus::NullPointer, "trajectory or out is NULL");
        };
        match &t.inner.final_state {
            Some(p) => put(out, EclDistribution { inner: p.clone() }),
            None => fail(EclStatus::InvalidArgument, "trajectory has no final state"),
        }
    })
}

/// Write the trajectory CSV to the UTF-8 path `path`.
///
/// # Safety
/// `t` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ecl_trajectory_write_csv(t: *const EclTrajectory, path: *const c_char) -> EclStatus {
    guard(|| {
        let (Some(t), false) = (t.as_ref(), path.is_null()) else {
            return fail(EclStatus::NullPointer, "trajectory or path is NULL");
        };
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            return fail(EclStatus::InvalidArgument, "path is not UTF-8");
        };
        match write_trajectory_csv(&t.inner, Path::new(path)) {
            Ok(()) => EclStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Normalized Shannon entropy of a distribution, or NaN for NULL.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ecl_normalized_entropy(d: *const EclDistribution) -> f64 {
    d.as_ref().map_or(f64::NAN, |d| metrics::normalized_shannon(&d.inner))
}
