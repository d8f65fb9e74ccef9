//! C ABI for the twoatom engine.
//!
//! Every object crosses the boundary as an opaque pointer created by a `*_new`/producer
//! function and released by the matching `*_free`. Functions return a [`TwoatomStatus`];
//! on failure the message is available from [`twoatom_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twoatom::cli_runner::{parse_config, run_scenario, ResultTable};
use twoatom::coupling_geometry::{AtomPairConfig, DriveField, WaveType};
use twoatom::liouvillian::{build_vacuum_drive, steady_state, DensityMatrix4, Generator16};
use twoatom::observables::{collective_populations, g2_tau, total_intensity, visibility, DetectionGeometry};
use twoatom::quantum_jump::{run_trajectories, TrajectoryOptions};
use twoatom::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoatomStatus {
    Ok = 0,
    NullPointer = 1,
    Invariant = 2,
    Domain = 3,
    InvalidState = 4,
    Integration = 5,
    Numerical = 6,
    Undefined = 7,
    Config = 8,
    Partial = 9,
    InvalidUtf8 = 10,
    OutOfRange = 11,
    Panic = 12,
}

/// Opaque atom-pair configuration.
pub struct TwoatomPair(AtomPairConfig);
/// Opaque driving field.
pub struct TwoatomDrive(DriveField);
/// Opaque Liouvillian generator.
pub struct TwoatomGenerator(Generator16);
/// Opaque 4×4 density matrix.
pub struct TwoatomState(DensityMatrix4);
/// Opaque result table from a scenario run.
pub struct TwoatomTable(ResultTable);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> TwoatomStatus {
    match e {
        Error::Invariant(_) => TwoatomStatus::Invariant,
        Error::Domain(_) => TwoatomStatus::Domain,
        Error::InvalidState(_) => TwoatomStatus::InvalidState,
        Error::Integration { .. } => TwoatomStatus::Integration,
        Error::Numerical(_) => TwoatomStatus::Numerical,
        Error::Undefined(_) => TwoatomStatus::Undefined,
        Error::Config(_) => TwoatomStatus::Config,
        Error::Partial { .. } => TwoatomStatus::Partial,
    }
}

enum Fail {
    Engine(Error),
    Status(TwoatomStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Engine(e)
    }
}

fn null() -> Fail {
    Fail::Status(TwoatomStatus::NullPointer, "null pointer argument".into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TwoatomStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TwoatomStatus::Ok
        }
        Ok(Err(Fail::Engine(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TwoatomStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Copy the last error message of this thread into `buf` (NUL-terminated, truncated to `len`).
/// Returns the full message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn twoatom_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Identical atoms (Γ₁ = Γ₂ = 1) at `separation` wavelengths; `dipole_angle` between μ̂ and r̂₁₂.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twoatom_pair_new(separation: f64, dipole_angle: f64, out: *mut *mut TwoatomPair) -> TwoatomStatus {
    guard(|| {
        let p = AtomPairConfig::identical(separation, dipole_angle);
        p.validate()?;
        store(out, TwoatomPair(p))
    })
}

/// Pair with explicit (Γ₁₂, Ω₁₂), rates Γ₁, Γ₂ and detuning Δ.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twoatom_pair_new_explicit(
    gamma1: f64,
    gamma2: f64,
    delta: f64,
    gamma12: f64,
    omega12: f64,
    out: *mut *mut TwoatomPair,
) -> TwoatomStatus {
    guard(|| {
        let p = AtomPairConfig::explicit(gamma12, omega12).with_rates(gamma1, gamma2).with_delta(delta);
        p.validate()?;
        store(out, TwoatomPair(p))
    })
}

/// Collective damping Γ₁₂ and dipole-dipole shift Ω₁₂ of a pair.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_pair_couplings(pair: *const TwoatomPair, gamma12: *mut f64, omega12: *mut f64) -> TwoatomStatus {
    guard(|| {
        let (g, o) = deref(pair)?.0.couplings()?;
        if gamma12.is_null() || omega12.is_null() {
            return Err(null());
        }
        *gamma12 = g;
        *omega12 = o;
        Ok(())
    })
}

/// # Safety
/// `pair` must come from a `twoatom_pair_new*` call or be null.
#[no_mangle]
pub unsafe extern "C" fn twoatom_pair_free(pair: *mut TwoatomPair) {
    free(pair)
}

/// Laser drive. `standing` nonzero selects a standing wave.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twoatom_drive_new(
    rabi: f64,
    detuning: f64,
    propagation_angle: f64,
    standing: i32,
    phase: f64,
    out: *mut *mut TwoatomDrive,
) -> TwoatomStatus {
    guard(|| {
        let wave_type = if standing != 0 { WaveType::Standing } else { WaveType::Running };
        let d = DriveField { rabi, detuning, propagation_angle, wave_type, phase };
        d.validate()?;
        store(out, TwoatomDrive(d))
    })
}

/// # Safety
/// `drive` must come from `twoatom_drive_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn twoatom_drive_free(drive: *mut TwoatomDrive) {
    free(drive)
}

/// Generator of the driven pair in the vacuum.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_generator_vacuum(
    pair: *const TwoatomPair,
    drive: *const TwoatomDrive,
    out: *mut *mut TwoatomGenerator,
) -> TwoatomStatus {
    guard(|| {
        let l = build_vacuum_drive(&deref(pair)?.0, &deref(drive)?.0)?;
        store(out, TwoatomGenerator(l))
    })
}

/// # Safety
/// `gen` must come from a generator constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn twoatom_generator_free(gen: *mut TwoatomGenerator) {
    free(gen)
}

/// Steady state of a generator.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_steady_state(gen: *const TwoatomGenerator, out: *mut *mut TwoatomState) -> TwoatomStatus {
    guard(|| {
        let ss = steady_state(&deref(gen)?.0)?;
        store(out, TwoatomState(ss.rho))
    })
}

/// Element ρ_ij in the product basis (0 = gg, 1 = eg, 2 = ge, 3 = ee).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_state_element(
    state: *const TwoatomState,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> TwoatomStatus {
    guard(|| {
        let s = deref(state)?;
        if i > 3 || j > 3 {
            return Err(Fail::Status(TwoatomStatus::OutOfRange, format!("index ({i}, {j}) outside 4x4")));
        }
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        let z = s.0.get(i, j);
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Collective populations (ρ_gg, ρ_ss, ρ_aa, ρ_ee) into `out[4]`.
///
/// # Safety
/// `out` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn twoatom_state_collective_populations(state: *const TwoatomState, out: *mut f64) -> TwoatomStatus {
    guard(|| {
        let p = collective_populations(&deref(state)?.0);
        if out.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(p.as_ptr(), out, 4);
        Ok(())
    })
}

/// # Safety
/// `state` must come from a state producer or be null.
#[no_mangle]
pub unsafe extern "C" fn twoatom_state_free(state: *mut TwoatomState) {
    free(state)
}

/// Total photon emission rate of `state`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_total_intensity(state: *const TwoatomState, pair: *const TwoatomPair, out: *mut f64) -> TwoatomStatus {
    guard(|| {
        let v = total_intensity(&deref(state)?.0, &deref(pair)?.0);
        *out.as_mut().ok_or_else(null)? = v;
        Ok(())
    })
}

/// First-order interference visibility of `state`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_visibility(state: *const TwoatomState, out: *mut f64) -> TwoatomStatus {
    guard(|| {
        let v = visibility(&deref(state)?.0)?;
        *out.as_mut().ok_or_else(null)? = v;
        Ok(())
    })
}

/// Normalized g²(τ) for a single detector at angle `theta` to the axis, perpendicular to the dipoles.
///
/// # Safety
/// `tau` and `out` must point to `n` doubles; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_g2_tau(
    gen: *const TwoatomGenerator,
    state: *const TwoatomState,
    pair: *const TwoatomPair,
    theta: f64,
    tau: *const f64,
    n: usize,
    out: *mut f64,
) -> TwoatomStatus {
    guard(|| {
        if tau.is_null() || out.is_null() {
            return Err(null());
        }
        let taus = std::slice::from_raw_parts(tau, n);
        let s = g2_tau(&deref(gen)?.0, &deref(state)?.0, &deref(pair)?.0, &DetectionGeometry::single(theta), taus)?;
        ptr::copy_nonoverlapping(s.values.as_ptr(), out, n);
        Ok(())
    })
}

/// Quantum-jump ensemble from the ground state. Writes mean product-basis populations,
/// `n_grid × 4` row-major, into `populations`.
///
/// # Safety
/// `grid` must point to `n_grid` doubles and `populations` to `4 n_grid`.
#[no_mangle]
pub unsafe extern "C" fn twoatom_run_trajectories(
    pair: *const TwoatomPair,
    drive: *const TwoatomDrive,
    n_traj: usize,
    seed: u64,
    grid: *const f64,
    n_grid: usize,
    populations: *mut f64,
) -> TwoatomStatus {
    guard(|| {
        if grid.is_null() || populations.is_null() {
            return Err(null());
        }
        let grid = std::slice::from_raw_parts(grid, n_grid);
        let opts = TrajectoryOptions { keep_records: false, ..TrajectoryOptions::default() };
        let ens = run_trajectories(&deref(pair)?.0, &deref(drive)?.0, &DensityMatrix4::ground(), n_traj, seed, grid, &opts)?;
        let out = std::slice::from_raw_parts_mut(populations, 4 * n_grid);
        for k in 0..n_grid {
            out[4 * k..4 * k + 4].copy_from_slice(&ens.populations(k));
        }
        Ok(())
    })
}

/// Parse and run a scenario config given as NUL-terminated UTF-8 text.
///
/// # Safety
/// `config` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twoatom_run_config(config: *const c_char, out: *mut *mut TwoatomTable) -> TwoatomStatus {
    guard(|| {
        if config.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(config)
            .to_str()
            .map_err(|e| Fail::Status(TwoatomStatus::InvalidUtf8, e.to_string()))?;
        let table = run_scenario(&parse_config(text)?)?;
        store(out, TwoatomTable(table))
    })
}

/// Table dimensions.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_table_shape(table: *const TwoatomTable, rows: *mut usize, cols: *mut usize) -> TwoatomStatus {
    guard(|| {
        let t = &deref(table)?.0;
        *rows.as_mut().ok_or_else(null)? = t.rows.len();
        *cols.as_mut().ok_or_else(null)? = t.columns.len();
        Ok(())
    })
}

/// Cell value at (`row`, `col`).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_table_get(table: *const TwoatomTable, row: usize, col: usize, out: *mut f64) -> TwoatomStatus {
    guard(|| {
        let t = &deref(table)?.0;
        let v = t
            .rows
            .get(row)
            .and_then(|r| r.get(col))
            .ok_or_else(|| Fail::Status(TwoatomStatus::OutOfRange, format!("cell ({row}, {col}) outside table")))?;
        *out.as_mut().ok_or_else(null)? = *v;
        Ok(())
    })
}

/// Write the table as CSV into `buf` (NUL-terminated, truncated to `len`); `needed` receives
/// the full length excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes; `needed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn twoatom_table_csv(table: *const TwoatomTable, buf: *mut c_char, len: usize, needed: *mut usize) -> TwoatomStatus {
    guard(|| {
        let csv = deref(table)?.0.to_csv();
        *needed.as_mut().ok_or_else(null)? = csv.len();
        if !buf.is_null() && len > 0 {
            let n = csv.len().min(len - 1);
            ptr::copy_nonoverlapping(csv.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        Ok(())
    })
}

/// # Safety
/// `table` must come from `twoatom_run_config` or be null.
#[no_mangle]
pub unsafe extern "C" fn twoatom_table_free(table: *mut TwoatomTable) {
    free(table)
}
