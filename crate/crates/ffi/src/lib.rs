//! C ABI over `esdkit`.
//!
//! States and propagators cross the boundary as opaque handles that the
//! caller releases with the matching `*_free`. Every fallible call returns an
//! [`EsdStatus`]; on failure a description is kept per thread and can be
//! copied out with [`esd_last_error_message`]. Panics never unwind into C.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use esdkit::dynamics::{self, SuddenTime, WwParams, WwPropagator};
use esdkit::geoment::{self, GeOptions};
use esdkit::measures::{self, DiscordOptions};
use esdkit::qcore::{self, DensityMatrix, Partition, PureState, SubsystemLayout};
use esdkit::{Error, C64};
use nalgebra::DMatrix;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsdStatus {
    Ok = 0,
    InvalidInput = 1,
    Numeric = 2,
    NullPointer = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsdComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for EsdComplex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<EsdComplex> for C64 {
    fn from(z: EsdComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EsdSigma {
    pub q_aa: f64,
    pub q_pp: f64,
    pub c4: f64,
    pub sigma: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EsdGeOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EsdDiscordOptions {
    pub grid: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EsdWwParams {
    pub modes: usize,
    pub gamma: f64,
    pub half_bandwidth: f64,
    pub atom_frequency: f64,
}

/// Opaque pure state.
pub struct EsdPureState(PureState);

/// Opaque density matrix.
pub struct EsdDensityMatrix(DensityMatrix);

/// Opaque single-atom bath propagator.
pub struct EsdWwPropagator(WwPropagator);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Small(usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

type FfiResult<T> = Result<T, Fail>;

/// Runs `f`, records any error or panic and maps it to a status.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> EsdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EsdStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            match e {
                Error::Numeric(_) => EsdStatus::Numeric,
                _ => EsdStatus::InvalidInput,
            }
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            EsdStatus::NullPointer
        }
        Ok(Err(Fail::Small(need))) => {
            set_error(format!("buffer too small: need {need} elements"));
            EsdStatus::BufferTooSmall
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            EsdStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    unsafe { p.as_ref() }.ok_or(Fail::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> FfiResult<&'a [T]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn out<T>(p: *mut T, value: T, what: &'static str) -> FfiResult<()> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    unsafe { p.write(value) };
    Ok(())
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidInput(format!("{what} is not UTF-8"))))
}

unsafe fn layout(dims: *const usize, n: usize, labels: *const c_char) -> FfiResult<SubsystemLayout> {
    let dims = unsafe { slice(dims, n, "dims") }?.to_vec();
    let names: Vec<String> = if labels.is_null() {
        (0..dims.len()).map(|i| format!("q{i}")).collect()
    } else {
        unsafe { text(labels, "labels") }?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect()
    };
    Ok(SubsystemLayout::new(dims, names)?)
}

fn copy_out<T: Copy>(src: &[T], buf: *mut T, len: usize) -> FfiResult<()> {
    if len < src.len() {
        return Err(Fail::Small(src.len()));
    }
    if buf.is_null() {
        return Err(Fail::Null("buffer"));
    }
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn sudden(t: SuddenTime) -> f64 {
    t.time().unwrap_or(f64::INFINITY)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn esd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full length including
/// the terminator.
#[no_mangle]
pub unsafe extern "C" fn esd_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len() + 1
    })
}

#[no_mangle]
pub extern "C" fn esd_ge_options_default() -> EsdGeOptions {
    let o = GeOptions::default();
    EsdGeOptions {
        restarts: o.restarts,
        max_iterations: o.max_iterations,
        tolerance: o.tolerance,
        seed: o.seed,
    }
}

#[no_mangle]
pub extern "C" fn esd_discord_options_default() -> EsdDiscordOptions {
    let o = DiscordOptions::default();
    EsdDiscordOptions {
        grid: o.grid,
        tolerance: o.tolerance,
        max_iterations: o.max_iterations,
        restarts: o.restarts,
        seed: o.seed,
    }
}

#[no_mangle]
pub extern "C" fn esd_ww_params_default() -> EsdWwParams {
    let p = WwParams::default();
    EsdWwParams {
        modes: p.modes,
        gamma: p.gamma,
        half_bandwidth: p.half_bandwidth,
        atom_frequency: p.atom_frequency,
    }
}

/// Builds a normalized pure state. `labels` is a comma list or NULL for
/// `q0, q1, ...`.
#[no_mangle]
pub unsafe extern "C" fn esd_pure_state_new(
    dims: *const usize,
    n_dims: usize,
    labels: *const c_char,
    amps: *const EsdComplex,
    n_amps: usize,
    out_state: *mut *mut EsdPureState,
) -> EsdStatus {
    guard(|| {
        let l = unsafe { layout(dims, n_dims, labels) }?;
        let a = unsafe { slice(amps, n_amps, "amps") }?
            .iter()
            .map(|&z| z.into())
            .collect();
        let psi = PureState::new(a, l)?;
        unsafe { out(out_state, boxed(EsdPureState(psi)), "out_state") }
    })
}

/// Cavity-model state at dimensionless time `jt`, layout `A1 P1 A2 P2`.
#[no_mangle]
pub unsafe extern "C" fn esd_jc_state(theta: f64, jt: f64, out_state: *mut *mut EsdPureState) -> EsdStatus {
    guard(|| {
        let psi = dynamics::jc_state(theta, jt)?;
        unsafe { out(out_state, boxed(EsdPureState(psi)), "out_state") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_pair_state(
    theta: f64,
    xi: EsdComplex,
    chi: EsdComplex,
    out_state: *mut *mut EsdPureState,
) -> EsdStatus {
    guard(|| {
        let psi = dynamics::pair_state(theta, xi.into(), chi.into())?;
        unsafe { out(out_state, boxed(EsdPureState(psi)), "out_state") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_pure_state_free(state: *mut EsdPureState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Hilbert-space dimension, 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn esd_pure_state_dim(state: *const EsdPureState) -> usize {
    unsafe { state.as_ref() }.map_or(0, |s| s.0.dim())
}

#[no_mangle]
pub unsafe extern "C" fn esd_pure_state_amplitudes(
    state: *const EsdPureState,
    buf: *mut EsdComplex,
    len: usize,
) -> EsdStatus {
    guard(|| {
        let s = unsafe { get(state, "state") }?;
        let v: Vec<EsdComplex> = s.0.amplitudes().iter().map(|&z| z.into()).collect();
        copy_out(&v, buf, len)
    })
}

/// Density matrix from row-major entries; validated.
#[no_mangle]
pub unsafe extern "C" fn esd_density_new(
    dims: *const usize,
    n_dims: usize,
    labels: *const c_char,
    entries: *const EsdComplex,
    n_entries: usize,
    out_rho: *mut *mut EsdDensityMatrix,
) -> EsdStatus {
    guard(|| {
        let l = unsafe { layout(dims, n_dims, labels) }?;
        let d = l.total_dim();
        let e = unsafe { slice(entries, n_entries, "entries") }?;
        if e.len() != d * d {
            return Err(Error::InvalidInput(format!("expected {} entries, got {}", d * d, e.len())).into());
        }
        let m = DMatrix::from_row_iterator(d, d, e.iter().map(|&z| C64::from(z)));
        let rho = DensityMatrix::new(m, l)?;
        unsafe { out(out_rho, boxed(EsdDensityMatrix(rho)), "out_rho") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_reduced_state(
    state: *const EsdPureState,
    keep: *const usize,
    n_keep: usize,
    out_rho: *mut *mut EsdDensityMatrix,
) -> EsdStatus {
    guard(|| {
        let s = unsafe { get(state, "state") }?;
        let k = unsafe { slice(keep, n_keep, "keep") }?;
        let rho = s.0.reduced_state(k)?;
        unsafe { out(out_rho, boxed(EsdDensityMatrix(rho)), "out_rho") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_density_free(rho: *mut EsdDensityMatrix) {
    if !rho.is_null() {
        drop(unsafe { Box::from_raw(rho) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn esd_density_dim(rho: *const EsdDensityMatrix) -> usize {
    unsafe { rho.as_ref() }.map_or(0, |r| r.0.dim())
}

/// Row-major copy of the matrix.
#[no_mangle]
pub unsafe extern "C" fn esd_density_entries(
    rho: *const EsdDensityMatrix,
    buf: *mut EsdComplex,
    len: usize,
) -> EsdStatus {
    guard(|| {
        let r = unsafe { get(rho, "rho") }?;
        let m = r.0.matrix();
        let v: Vec<EsdComplex> = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)].into()))
            .collect();
        copy_out(&v, buf, len)
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_von_neumann_entropy(rho: *const EsdDensityMatrix, out_value: *mut f64) -> EsdStatus {
    guard(|| {
        let v = qcore::von_neumann_entropy(&unsafe { get(rho, "rho") }?.0)?;
        unsafe { out(out_value, v, "out_value") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_concurrence_pure(state: *const EsdPureState, out_value: *mut f64) -> EsdStatus {
    guard(|| {
        let v = measures::concurrence_pure(&unsafe { get(state, "state") }?.0)?;
        unsafe { out(out_value, v, "out_value") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_n_concurrence(state: *const EsdPureState, out_value: *mut f64) -> EsdStatus {
    guard(|| {
        let v = measures::n_concurrence(&unsafe { get(state, "state") }?.0)?;
        unsafe { out(out_value, v, "out_value") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_concurrence_mixed(rho: *const EsdDensityMatrix, out_value: *mut f64) -> EsdStatus {
    guard(|| {
        let v = measures::concurrence_mixed(&unsafe { get(rho, "rho") }?.0)?;
        unsafe { out(out_value, v, "out_value") }
    })
}

/// Wootters `Q`, which may be negative.
#[no_mangle]
pub unsafe extern "C" fn esd_q_auxiliary(rho: *const EsdDensityMatrix, out_value: *mut f64) -> EsdStatus {
    guard(|| {
        let v = measures::q_auxiliary(&unsafe { get(rho, "rho") }?.0)?;
        unsafe { out(out_value, v, "out_value") }
    })
}

/// Two-qubit discord; `opts` may be NULL for defaults.
#[no_mangle]
pub unsafe extern "C" fn esd_discord_two_qubit(
    rho: *const EsdDensityMatrix,
    opts: *const EsdDiscordOptions,
    out_value: *mut f64,
) -> EsdStatus {
    guard(|| {
        let o = match unsafe { opts.as_ref() } {
            Some(o) => DiscordOptions {
                grid: o.grid,
                tolerance: o.tolerance,
                max_iterations: o.max_iterations,
                restarts: o.restarts,
                seed: o.seed,
            },
            None => DiscordOptions::default(),
        };
        let d = measures::discord_two_qubit(&unsafe { get(rho, "rho") }?.0, &o)?;
        unsafe { out(out_value, d.value, "out_value") }
    })
}

/// Discord of a pure state across a two-block cut such as `"A1P1|A2P2"`.
#[no_mangle]
pub unsafe extern "C" fn esd_discord_pure(
    state: *const EsdPureState,
    partition: *const c_char,
    out_value: *mut f64,
) -> EsdStatus {
    guard(|| {
        let s = unsafe { get(state, "state") }?;
        let p = Partition::parse(unsafe { text(partition, "partition") }?, s.0.layout())?;
        let v = measures::discord_pure_bipartition(&s.0, &p)?;
        unsafe { out(out_value, v, "out_value") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_sigma(state: *const EsdPureState, out_sigma: *mut EsdSigma) -> EsdStatus {
    guard(|| {
        let s = measures::sigma_components(&unsafe { get(state, "state") }?.0)?;
        let v = EsdSigma {
            q_aa: s.q_aa,
            q_pp: s.q_pp,
            c4: s.c4,
            sigma: s.sigma,
        };
        unsafe { out(out_sigma, v, "out_sigma") }
    })
}

unsafe fn ge_options(opts: *const EsdGeOptions) -> GeOptions {
    match unsafe { opts.as_ref() } {
        Some(o) => GeOptions {
            restarts: o.restarts,
            max_iterations: o.max_iterations,
            tolerance: o.tolerance,
            seed: o.seed,
        },
        None => GeOptions::default(),
    }
}

/// Geometric entanglement for a fixed partition; `opts` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn esd_relative_ge(
    state: *const EsdPureState,
    partition: *const c_char,
    opts: *const EsdGeOptions,
    out_value: *mut f64,
) -> EsdStatus {
    guard(|| {
        let s = unsafe { get(state, "state") }?;
        let p = Partition::parse(unsafe { text(partition, "partition") }?, s.0.layout())?;
        let r = geoment::relative_ge(&s.0, &p, &unsafe { ge_options(opts) })?;
        unsafe { out(out_value, r.energy, "out_value") }
    })
}

/// Geometric entanglement maximized over partitions with `k` blocks.
#[no_mangle]
pub unsafe extern "C" fn esd_absolute_ge(
    state: *const EsdPureState,
    k: usize,
    opts: *const EsdGeOptions,
    out_value: *mut f64,
) -> EsdStatus {
    guard(|| {
        let s = unsafe { get(state, "state") }?;
        let r = geoment::absolute_ge(&s.0, k, &unsafe { ge_options(opts) })?;
        unsafe { out(out_value, r.energy, "out_value") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_ww_propagator_new(
    params: *const EsdWwParams,
    out_prop: *mut *mut EsdWwPropagator,
) -> EsdStatus {
    guard(|| {
        let p = unsafe { get(params, "params") }?;
        let prop = WwPropagator::from_params(&WwParams {
            modes: p.modes,
            gamma: p.gamma,
            half_bandwidth: p.half_bandwidth,
            atom_frequency: p.atom_frequency,
        })?;
        unsafe { out(out_prop, boxed(EsdWwPropagator(prop)), "out_prop") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_ww_propagator_free(prop: *mut EsdWwPropagator) {
    if !prop.is_null() {
        drop(unsafe { Box::from_raw(prop) });
    }
}

/// Excited-state amplitude `ξ(t)`.
#[no_mangle]
pub unsafe extern "C" fn esd_ww_xi(prop: *const EsdWwPropagator, t: f64, out_xi: *mut EsdComplex) -> EsdStatus {
    guard(|| {
        let p = unsafe { get(prop, "prop") }?;
        if !t.is_finite() {
            return Err(Error::InvalidInput("time must be finite".into()).into());
        }
        unsafe { out(out_xi, p.0.xi(t).into(), "out_xi") }
    })
}

/// Closed-form death time; `+inf` when the state never dies.
#[no_mangle]
pub unsafe extern "C" fn esd_death_time(theta: f64, gamma: f64, out_time: *mut f64) -> EsdStatus {
    guard(|| {
        let t = sudden(dynamics::esd_death_time(theta, gamma)?);
        unsafe { out(out_time, t, "out_time") }
    })
}

/// Closed-form birth time; `+inf` when photons never become entangled.
#[no_mangle]
pub unsafe extern "C" fn esd_birth_time(theta: f64, gamma: f64, out_time: *mut f64) -> EsdStatus {
    guard(|| {
        let t = sudden(dynamics::esb_birth_time(theta, gamma)?);
        unsafe { out(out_time, t, "out_time") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_death_time_numeric(
    theta: f64,
    prop: *const EsdWwPropagator,
    gamma: f64,
    out_time: *mut f64,
) -> EsdStatus {
    guard(|| {
        let p = unsafe { get(prop, "prop") }?;
        let t = sudden(dynamics::death_time_numeric(theta, &p.0, gamma)?);
        unsafe { out(out_time, t, "out_time") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_birth_time_numeric(
    theta: f64,
    prop: *const EsdWwPropagator,
    gamma: f64,
    out_time: *mut f64,
) -> EsdStatus {
    guard(|| {
        let p = unsafe { get(prop, "prop") }?;
        let t = sudden(dynamics::birth_time_numeric(theta, &p.0, gamma)?);
        unsafe { out(out_time, t, "out_time") }
    })
}

/// Lorentzian line of half-width `gamma` centred on `e`.
#[no_mangle]
pub unsafe extern "C" fn esd_spectrum(nu: f64, gamma: f64, e: f64, out_value: *mut f64) -> EsdStatus {
    guard(|| unsafe { out(out_value, dynamics::spectrum(nu, gamma, e)?, "out_value") })
}

#[no_mangle]
pub unsafe extern "C" fn esd_detection_probability(delta_nu: f64, gamma: f64, out_value: *mut f64) -> EsdStatus {
    guard(|| unsafe {
        out(
            out_value,
            dynamics::detection_probability(delta_nu, gamma)?,
            "out_value",
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn esd_bandwidth_threshold(theta: f64, out_value: *mut f64) -> EsdStatus {
    guard(|| unsafe { out(out_value, dynamics::bandwidth_threshold(theta)?, "out_value") })
}
