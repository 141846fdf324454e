//! C ABI over `capped-proj`.
//!
//! Every entry point returns a [`CpStatus`]; results come back through
//! out-pointers. Exact projections are held in an opaque [`CpProjection`]
//! handle that the caller releases with [`cp_projection_free`]. Panics never
//! cross the boundary; they surface as `CP_STATUS_PANIC`.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use capped_proj::{
    admm_project, certify, dykstra_project, enumerate_oracle, kkt_residuals, project_capped_box_with,
    project_simplex, IterativeResult, ProjError, ProjectOptions, ProjectionInput, ProjectionResult,
    SolverConfig,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Infeasible = 3,
    Capacity = 4,
    Inconsistent = 5,
    BufferTooSmall = 6,
    NotConverged = 7,
    Internal = 8,
    Panic = 9,
}

impl From<&ProjError> for CpStatus {
    fn from(e: &ProjError) -> Self {
        match e {
            ProjError::InvalidInput(_) | ProjError::DegeneratePartition(_) => CpStatus::InvalidInput,
            ProjError::Infeasible { .. } => CpStatus::Infeasible,
            ProjError::Capacity { .. } => CpStatus::Capacity,
            ProjError::InconsistentCandidate(_) => CpStatus::Inconsistent,
            ProjError::Internal(_) => CpStatus::Internal,
        }
    }
}

/// Opaque result of an exact projection.
pub struct CpProjection {
    inner: ProjectionResult,
}

/// Residuals of the optimality system, max-norm.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CpKktReport {
    pub stationarity: f64,
    pub primal_lower: f64,
    pub primal_upper: f64,
    pub sum: f64,
    pub dual: f64,
    pub complementarity: f64,
    pub passed: bool,
}

/// Settings for the iterative solvers. Zero fields take the library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CpSolverConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub rho: f64,
}

fn guard(f: impl FnOnce() -> Result<(), CpStatus>) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => CpStatus::Panic,
    }
}

unsafe fn input_slice<'a>(ptr: *const f64, len: usize) -> Result<&'a [f64], CpStatus> {
    if len == 0 {
        return Err(CpStatus::InvalidInput);
    }
    if ptr.is_null() {
        return Err(CpStatus::NullPointer);
    }
    Ok(slice::from_raw_parts(ptr, len))
}

unsafe fn output_slice<'a>(ptr: *mut f64, len: usize) -> Result<&'a mut [f64], CpStatus> {
    if ptr.is_null() {
        return Err(CpStatus::NullPointer);
    }
    Ok(slice::from_raw_parts_mut(ptr, len))
}

fn lib<T>(r: capped_proj::Result<T>) -> Result<T, CpStatus> {
    r.map_err(|e| CpStatus::from(&e))
}

/// Static description of a status code. Never NULL; do not free.
#[no_mangle]
pub extern "C" fn cp_status_message(status: CpStatus) -> *const c_char {
    let msg: &'static std::ffi::CStr = match status {
        CpStatus::Ok => c"ok",
        CpStatus::NullPointer => c"null pointer argument",
        CpStatus::InvalidInput => c"invalid input",
        CpStatus::Infeasible => c"infeasible: s outside [0, cap * D]",
        CpStatus::Capacity => c"dimension exceeds the oracle limit",
        CpStatus::Inconsistent => c"inconsistent candidate",
        CpStatus::BufferTooSmall => c"output buffer too small",
        CpStatus::NotConverged => c"iterative solver did not converge",
        CpStatus::Internal => c"internal error",
        CpStatus::Panic => c"panic inside the library",
    };
    msg.as_ptr()
}

/// Projects `y[0..len]` onto `{x : sum(x) = s, 0 <= x <= cap}`.
/// `eps <= 0` selects the default comparison tolerance. On success `*out`
/// owns a new handle.
///
/// # Safety
/// `y` must point to `len` readable doubles and `out` to a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cp_project(
    y: *const f64,
    len: usize,
    s: f64,
    cap: f64,
    eps: f64,
    out: *mut *mut CpProjection,
) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return Err(CpStatus::NullPointer);
        }
        *out = ptr::null_mut();
        let y = input_slice(y, len)?;
        let input = lib(ProjectionInput::with_cap(y.to_vec(), s, cap))?;
        let opts = ProjectOptions {
            eps: (eps > 0.0).then_some(eps),
        };
        let inner = lib(project_capped_box_with(&input, &opts))?;
        *out = Box::into_raw(Box::new(CpProjection { inner }));
        Ok(())
    })
}

/// Releases a handle from [`cp_project`]. NULL is ignored.
///
/// # Safety
/// `handle` must be NULL or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cp_projection_free(handle: *mut CpProjection) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Dimension of the projected vector, 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_projection_len(handle: *const CpProjection) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.x.len())
}

/// Copies the solution into `out[0..len]`; `len` must be at least the
/// dimension.
///
/// # Safety
/// `handle` must be a live handle and `out` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_projection_copy_x(
    handle: *const CpProjection,
    out: *mut f64,
    len: usize,
) -> CpStatus {
    guard(|| {
        let h = handle.as_ref().ok_or(CpStatus::NullPointer)?;
        let x = &h.inner.x;
        if len < x.len() {
            return Err(CpStatus::BufferTooSmall);
        }
        output_slice(out, x.len())?.copy_from_slice(x);
        Ok(())
    })
}

/// Multiplier of the sum constraint.
///
/// # Safety
/// `handle` must be a live handle and `gamma` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_projection_gamma(handle: *const CpProjection, gamma: *mut f64) -> CpStatus {
    guard(|| {
        let h = handle.as_ref().ok_or(CpStatus::NullPointer)?;
        *gamma.as_mut().ok_or(CpStatus::NullPointer)? = h.inner.gamma;
        Ok(())
    })
}

/// Number of zeros `a` and the end `b` of the interior run; `D - b`
/// coordinates sit at the cap.
///
/// # Safety
/// `handle` must be a live handle; `a` and `b` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_projection_partition(
    handle: *const CpProjection,
    a: *mut usize,
    b: *mut usize,
) -> CpStatus {
    guard(|| {
        let h = handle.as_ref().ok_or(CpStatus::NullPointer)?;
        let (a, b) = (
            a.as_mut().ok_or(CpStatus::NullPointer)?,
            b.as_mut().ok_or(CpStatus::NullPointer)?,
        );
        *a = h.inner.partition.a;
        *b = h.inner.partition.b;
        Ok(())
    })
}

/// True when the solver had to fall back to the least-violating partition.
///
/// # Safety
/// `handle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_projection_fallback(handle: *const CpProjection) -> bool {
    handle.as_ref().is_some_and(|h| h.inner.fallback)
}

/// Certifies candidate `x` as the projection of `y` and fills `report`.
///
/// # Safety
/// `y` and `x` must point to `len` readable doubles; `report` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_verify(
    y: *const f64,
    x: *const f64,
    len: usize,
    s: f64,
    cap: f64,
    tol: f64,
    report: *mut CpKktReport,
) -> CpStatus {
    guard(|| {
        let report = report.as_mut().ok_or(CpStatus::NullPointer)?;
        let y = input_slice(y, len)?;
        let x = input_slice(x, len)?;
        let input = lib(ProjectionInput::with_cap(y.to_vec(), s, cap))?;
        let (_, cert) = lib(certify(&input, x))?;
        let r = lib(kkt_residuals(&input, x, &cert, tol))?;
        *report = CpKktReport {
            stationarity: r.stationarity_residual,
            primal_lower: r.primal_lower,
            primal_upper: r.primal_upper,
            sum: r.sum_residual,
            dual: r.dual_residual,
            complementarity: r.cs_residual,
            passed: r.passed,
        };
        Ok(())
    })
}

/// Projection onto `{x >= 0, sum(x) = s}` written to `out[0..len]`.
///
/// # Safety
/// `y` readable and `out` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_project_simplex(y: *const f64, len: usize, s: f64, out: *mut f64) -> CpStatus {
    guard(|| {
        let y = input_slice(y, len)?;
        let x = lib(project_simplex(y, s))?;
        output_slice(out, len)?.copy_from_slice(&x);
        Ok(())
    })
}

/// Brute-force unit-cap projection for `len <= 14`.
///
/// # Safety
/// `y` readable and `out` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_enumerate_oracle(y: *const f64, len: usize, s: f64, out: *mut f64) -> CpStatus {
    guard(|| {
        let y = input_slice(y, len)?;
        let x = lib(enumerate_oracle(y, s))?;
        output_slice(out, len)?.copy_from_slice(&x);
        Ok(())
    })
}

fn solver_config(cfg: *const CpSolverConfig) -> SolverConfig {
    let mut out = SolverConfig::default();
    // SAFETY: callers pass NULL or a valid pointer.
    if let Some(c) = unsafe { cfg.as_ref() } {
        if c.tol > 0.0 {
            out.tol = c.tol;
        }
        if c.max_iters > 0 {
            out.max_iters = c.max_iters;
        }
        if c.rho > 0.0 {
            out.rho = c.rho;
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
unsafe fn run_iterative(
    y: *const f64,
    len: usize,
    s: f64,
    cap: f64,
    cfg: *const CpSolverConfig,
    out: *mut f64,
    iterations: *mut usize,
    solver: fn(&ProjectionInput, &SolverConfig) -> capped_proj::Result<IterativeResult>,
) -> CpStatus {
    guard(|| {
        let y = input_slice(y, len)?;
        let input = lib(ProjectionInput::with_cap(y.to_vec(), s, cap))?;
        let r = lib(solver(&input, &solver_config(cfg)))?;
        output_slice(out, len)?.copy_from_slice(&r.x);
        if let Some(it) = iterations.as_mut() {
            *it = r.iterations;
        }
        if r.converged {
            Ok(())
        } else {
            Err(CpStatus::NotConverged)
        }
    })
}

/// Dykstra alternating projection. `cfg` and `iterations` may be NULL.
/// Returns `CP_STATUS_NOT_CONVERGED` (with the last iterate in `out`) when
/// the iteration budget runs out.
///
/// # Safety
/// `y` readable and `out` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_dykstra(
    y: *const f64,
    len: usize,
    s: f64,
    cap: f64,
    cfg: *const CpSolverConfig,
    out: *mut f64,
    iterations: *mut usize,
) -> CpStatus {
    run_iterative(y, len, s, cap, cfg, out, iterations, dykstra_project)
}

/// ADMM with a fixed penalty. Same conventions as [`cp_dykstra`].
///
/// # Safety
/// `y` readable and `out` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_admm(
    y: *const f64,
    len: usize,
    s: f64,
    cap: f64,
    cfg: *const CpSolverConfig,
    out: *mut f64,
    iterations: *mut usize,
) -> CpStatus {
    run_iterative(y, len, s, cap, cfg, out, iterations, admm_project)
}
