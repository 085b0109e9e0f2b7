//! C ABI over `qdephase`.
//!
//! Every fallible function returns a [`QdStatus`]; on failure a message is
//! available from [`qd_last_error`] on the calling thread. Outputs are only
//! written on success. Noise parameters live behind an opaque
//! [`QdNoiseSpec`] handle created by [`qd_noise_spec_new`] and released by
//! [`qd_noise_spec_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qdephase::channel::{evolve_ensemble, transform_basis, DephasingParams};
use qdephase::coherence::{coherence_xy, coherence_z, l1_coherence};
use qdephase::decoherence::{critical_omega0, gamma_dot, gamma_exact, gamma_exact_on};
use qdephase::grape::{self, CMatrix, GrapeOptions, GrapeProblem};
use qdephase::nonmarkov::blp_measure;
use qdephase::revival::{critical_zeeman, predict_z_revivals, resonant_zeeman, RevivalKind};
use qdephase::{Basis, Complex64, Error, NoiseSpec, TimeGrid};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdStatus {
    Ok = 0,
    NullPointer = 1,
    /// A parameter is outside the domain of the operation.
    Domain = 2,
    Dimension = 3,
    Pole = 4,
    /// The caller's output buffer is too short.
    BufferTooSmall = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Opaque noise parameters.
pub struct QdNoiseSpec(NoiseSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: QdStatus, msg: impl Into<String>) -> QdStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> QdStatus {
    let status = match e {
        Error::Domain { .. } => QdStatus::Domain,
        Error::Dimension(_) => QdStatus::Dimension,
        Error::Pole { .. } => QdStatus::Pole,
    };
    fail(status, e.to_string())
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), QdStatus>) -> QdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QdStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QdStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, QdStatus>;
}

impl<T> OrStatus<T> for qdephase::Result<T> {
    fn or_status(self) -> Result<T, QdStatus> {
        self.map_err(from_error)
    }
}

unsafe fn spec_ref<'a>(spec: *const QdNoiseSpec) -> Result<&'a NoiseSpec, QdStatus> {
    spec.as_ref().map(|s| &s.0).ok_or_else(|| fail(QdStatus::NullPointer, "null noise spec"))
}

unsafe fn out_ref<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, QdStatus> {
    ptr.as_mut().ok_or_else(|| fail(QdStatus::NullPointer, format!("null `{name}`")))
}

unsafe fn out_slice<'a>(ptr: *mut f64, len: usize, need: usize) -> Result<&'a mut [f64], QdStatus> {
    if ptr.is_null() {
        return Err(fail(QdStatus::NullPointer, "null output buffer"));
    }
    if len < need {
        return Err(fail(QdStatus::BufferTooSmall, format!("buffer holds {len}, need {need}")));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, need))
}

/// Message of the last failed call on this thread (empty if none). The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn qd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a noise spec. `p = 0` is white noise.
#[no_mangle]
pub unsafe extern "C" fn qd_noise_spec_new(
    alpha: f64,
    omega0: f64,
    omega_j: f64,
    p: f64,
    out: *mut *mut QdNoiseSpec,
) -> QdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let spec = NoiseSpec::new(alpha, omega0, omega_j, p).or_status()?;
        *out = Box::into_raw(Box::new(QdNoiseSpec(spec)));
        Ok(())
    })
}

/// Releases a spec; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qd_noise_spec_free(spec: *mut QdNoiseSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Number of harmonic modes `J`, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qd_noise_spec_mode_count(spec: *const QdNoiseSpec) -> usize {
    spec.as_ref().map_or(0, |s| s.0.mode_count())
}

/// `Γ(t)`.
#[no_mangle]
pub unsafe extern "C" fn qd_gamma(spec: *const QdNoiseSpec, t: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        *out_ref(out, "out")? = gamma_exact(spec_ref(spec)?, t);
        Ok(())
    })
}

/// `dΓ/dt`.
#[no_mangle]
pub unsafe extern "C" fn qd_gamma_dot(spec: *const QdNoiseSpec, t: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        *out_ref(out, "out")? = gamma_dot(spec_ref(spec)?, t);
        Ok(())
    })
}

/// `Γ` on `n_points` uniform samples of `[0, t_max]`.
#[no_mangle]
pub unsafe extern "C" fn qd_gamma_on_grid(
    spec: *const QdNoiseSpec,
    t_max: f64,
    n_points: usize,
    out: *mut f64,
    out_len: usize,
) -> QdStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        let grid = TimeGrid::new(t_max, n_points).or_status()?;
        out_slice(out, out_len, n_points)?.copy_from_slice(&gamma_exact_on(spec, &grid));
        Ok(())
    })
}

/// σz-basis coherence `exp(−2Γ(t))`.
#[no_mangle]
pub unsafe extern "C" fn qd_coherence_z(spec: *const QdNoiseSpec, t: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        *out_ref(out, "out")? = coherence_z(spec_ref(spec)?, t);
        Ok(())
    })
}

/// σx/σy-basis coherence `|cos(ωk t)| exp(−2Γ(t))`.
#[no_mangle]
pub unsafe extern "C" fn qd_coherence_xy(spec: *const QdNoiseSpec, omega_k: f64, t: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        *out_ref(out, "out")? = coherence_xy(spec_ref(spec)?, omega_k, t);
        Ok(())
    })
}

/// BLP measure on `[0, t_max]`. `onset` receives the first time `Γ̇ < 0`,
/// or NaN for a Markovian window; it may be null.
#[no_mangle]
pub unsafe extern "C" fn qd_blp_measure(
    spec: *const QdNoiseSpec,
    t_max: f64,
    n_points: usize,
    measure: *mut f64,
    onset: *mut f64,
) -> QdStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        let measure = out_ref(measure, "measure")?;
        let grid = TimeGrid::new(t_max, n_points).or_status()?;
        let report = blp_measure(spec, &grid);
        *measure = report.measure;
        if let Some(onset) = onset.as_mut() {
            *onset = report.onset.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// `ω0^c = 1.57 / (0.4996 t_max)`.
#[no_mangle]
pub unsafe extern "C" fn qd_critical_omega0(t_max: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        *out_ref(out, "out")? = critical_omega0(t_max).or_status()?;
        Ok(())
    })
}

/// `ωk^c = π / (2 t_max)`.
#[no_mangle]
pub unsafe extern "C" fn qd_critical_zeeman(t_max: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        if t_max.is_nan() || t_max <= 0.0 {
            return Err(fail(QdStatus::Domain, "t_max must be positive"));
        }
        *out_ref(out, "out")? = critical_zeeman(t_max);
        Ok(())
    })
}

/// `ωk^r = π ω0 / 6.285`.
#[no_mangle]
pub unsafe extern "C" fn qd_resonant_zeeman(omega0: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        if omega0.is_nan() || omega0 <= 0.0 {
            return Err(fail(QdStatus::Domain, "omega0 must be positive"));
        }
        *out_ref(out, "out")? = resonant_zeeman(omega0);
        Ok(())
    })
}

/// σz-basis revival times in `[0, t_max]`. `count` receives the number of
/// times; `full` is set to 1 for complete revivals and 0 otherwise.
#[no_mangle]
pub unsafe extern "C" fn qd_predict_z_revivals(
    omega0: f64,
    t_max: f64,
    times: *mut f64,
    capacity: usize,
    count: *mut usize,
    full: *mut c_int,
) -> QdStatus {
    guard(|| {
        let count = out_ref(count, "count")?;
        let full = out_ref(full, "full")?;
        let prediction = predict_z_revivals(omega0, t_max).or_status()?;
        let n = prediction.times.len();
        if n > 0 {
            out_slice(times, capacity, n)?.copy_from_slice(&prediction.times);
        }
        *count = n;
        *full = c_int::from(prediction.kind == RevivalKind::Full);
        Ok(())
    })
}

/// Monte Carlo l1 coherence of the canonical input for `basis`
/// (0 = σz, 1 = σx, 2 = σy) on `n_points` samples of `[0, t_max]`.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn qd_ensemble_coherence(
    spec: *const QdNoiseSpec,
    omega_k: f64,
    basis: c_int,
    t_max: f64,
    n_points: usize,
    members: usize,
    seed: u64,
    out: *mut f64,
    out_len: usize,
) -> QdStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        let basis = match basis {
            0 => Basis::Z,
            1 => Basis::X,
            2 => Basis::Y,
            b => return Err(fail(QdStatus::Domain, format!("unknown basis code {b}"))),
        };
        let grid = TimeGrid::new(t_max, n_points).or_status()?;
        let params = DephasingParams::new(omega_k).or_status()?;
        let out = out_slice(out, out_len, n_points)?;
        let states = evolve_ensemble(spec, params, &basis.canonical_state(), &grid, members, seed).or_status()?;
        for (o, s) in out.iter_mut().zip(&states) {
            *o = l1_coherence(&transform_basis(s, basis));
        }
        Ok(())
    })
}

/// GRAPE for a one-qubit target given row-major as separate real and
/// imaginary parts. Controls are `σx, σy` amplitudes bounded by `bound`,
/// written as `segments × 2` row-major into `controls`.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn qd_grape_1q(
    target_re: *const f64,
    target_im: *const f64,
    segments: usize,
    dt: f64,
    bound: f64,
    max_iter: usize,
    target_fidelity: f64,
    seed: u64,
    controls: *mut f64,
    controls_len: usize,
    fidelity: *mut f64,
    iterations: *mut usize,
) -> QdStatus {
    guard(|| {
        if target_re.is_null() || target_im.is_null() {
            return Err(fail(QdStatus::NullPointer, "null target"));
        }
        let fidelity = out_ref(fidelity, "fidelity")?;
        let iterations = out_ref(iterations, "iterations")?;
        let out = out_slice(controls, controls_len, 2 * segments)?;
        let re = std::slice::from_raw_parts(target_re, 4);
        let im = std::slice::from_raw_parts(target_im, 4);
        let entries: Vec<Complex64> = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let target = CMatrix::from_row_slice(2, 2, &entries);
        let problem = GrapeProblem::with_pauli_controls(target, segments, dt, bound).or_status()?;
        let options = GrapeOptions {
            max_iter,
            target_fidelity,
            ..GrapeOptions::default()
        };
        let result = grape::optimize(&problem, &grape::random_controls(&problem, seed), &options).or_status()?;
        for (dst, src) in out.chunks_mut(2).zip(&result.controls) {
            dst.copy_from_slice(src);
        }
        *fidelity = result.fidelity;
        *iterations = result.iterations;
        Ok(())
    })
}
