//! C ABI for the spinforge engine.
//!
//! All functions use the `sf_` prefix. Objects cross the boundary as
//! opaque handles created and freed by this library; numeric results are
//! written into caller-provided buffers. Functions that can fail return an
//! [`SfStatus`] code and record a message retrievable per thread with
//! [`sf_last_error_message`]. Panics are caught at the boundary and
//! reported as `SfStatusNumericalFailure`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spinforge::dynamics::{exp_decay, g2_model, rabi_signal, DecayParams, G2Params, RabiParams};
use spinforge::error::Error;
use spinforge::lineshape::{default_shells, isotope_lineshape, Profile};
use spinforge::nalgebra::Vector3;
use spinforge::sites::{effective_spin_params, Orbital, SiteDatabase};
use spinforge::spin::{
    build_hamiltonian, clock_transitions, eigensystem_at, transition_table_with, ClockOptions,
    FieldPoint, SpinParams, TransitionOptions,
};

/// Result codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    SfStatusOk = 0,
    SfStatusNullPointer = 1,
    SfStatusInvalidArgument = 2,
    SfStatusNumericalFailure = 3,
    SfStatusNotFound = 4,
    SfStatusBufferTooSmall = 5,
    SfStatusUtf8 = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> SfStatus {
    match err {
        Error::InvalidParameter(_) | Error::Parse(_) | Error::DimensionMismatch(_) => {
            SfStatus::SfStatusInvalidArgument
        }
        Error::UnknownSite { .. } => SfStatus::SfStatusNotFound,
        Error::NonHermitian { .. } | Error::Numerical(_) | Error::NonConvergence(_) => {
            SfStatus::SfStatusNumericalFailure
        }
        Error::Io(_) => SfStatus::SfStatusNotFound,
    }
}

/// Run a fallible body with panic containment.
fn guarded(body: impl FnOnce() -> Result<(), SfStatus>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SfStatus::SfStatusOk,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("panic inside spinforge");
            SfStatus::SfStatusNumericalFailure
        }
    }
}

fn fail(err: &Error) -> SfStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent error on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Opaque spin-model handle.
pub struct SfSpinParams {
    inner: SpinParams,
}

/// Opaque site-database handle.
pub struct SfSiteDb {
    inner: SiteDatabase,
}

/// One transition-table row.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SfTransition {
    pub level_i: usize,
    pub level_j: usize,
    pub freq_mhz: f64,
    pub intensity_parallel: f64,
    pub intensity_perp: f64,
    pub thermal_weight: f64,
}

/// One clock transition (df/dB = 0 point).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SfClockTransition {
    pub track_i: usize,
    pub track_j: usize,
    pub b_clock_tesla: f64,
    pub freq_mhz: f64,
    pub curvature_mhz_per_t2: f64,
}

unsafe fn c_str<'a>(ptr: *const c_char) -> Result<&'a str, SfStatus> {
    if ptr.is_null() {
        set_error("null string pointer");
        return Err(SfStatus::SfStatusNullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        SfStatus::SfStatusUtf8
    })
}

unsafe fn out_slot<'a, T>(ptr: *mut T) -> Result<&'a mut T, SfStatus> {
    if ptr.is_null() {
        set_error("null output pointer");
        return Err(SfStatus::SfStatusNullPointer);
    }
    Ok(&mut *ptr)
}

unsafe fn handle<'a, T>(ptr: *const T) -> Result<&'a T, SfStatus> {
    if ptr.is_null() {
        set_error("null handle");
        return Err(SfStatus::SfStatusNullPointer);
    }
    Ok(&*ptr)
}

/// Create a spin model. Arrays are length-3 (xx, yy, zz); angles are in
/// degrees; `gn_mun_mhz_per_t` is the nuclear gyromagnetic factor in
/// MHz/T (11.213 for the I = 7/2 vanadium nucleus).
///
/// # Safety
/// Array pointers must reference at least 3 readable doubles; `out` must
/// be a valid store location. Free the handle with
/// [`sf_spin_params_free`].
#[no_mangle]
pub unsafe extern "C" fn sf_spin_params_new(
    electron_spin: f64,
    nuclear_spin: f64,
    g_principal: *const f64,
    g_angles_deg: *const f64,
    a_principal_mhz: *const f64,
    a_angles_deg: *const f64,
    gn_mun_mhz_per_t: f64,
    out: *mut *mut SfSpinParams,
) -> SfStatus {
    guarded(|| {
        let slot = out_slot(out)?;
        for ptr in [g_principal, g_angles_deg, a_principal_mhz, a_angles_deg] {
            if ptr.is_null() {
                set_error("null array pointer");
                return Err(SfStatus::SfStatusNullPointer);
            }
        }
        let arr = |p: *const f64| [*p, *p.add(1), *p.add(2)];
        let params = SpinParams {
            s: electron_spin,
            i: nuclear_spin,
            g_principal: arr(g_principal),
            g_angles_deg: arr(g_angles_deg),
            a_principal_mhz: arr(a_principal_mhz),
            a_angles_deg: arr(a_angles_deg),
            gn_mun_mhz_per_t,
            g_rotation: None,
            a_rotation: None,
        };
        params.validate().map_err(|e| fail(&e))?;
        *slot = Box::into_raw(Box::new(SfSpinParams { inner: params }));
        Ok(())
    })
}

/// Release a spin-model handle.
///
/// # Safety
/// `params` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sf_spin_params_free(params: *mut SfSpinParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Hilbert-space dimension of the model (16 for S = 1/2, I = 7/2), or 0
/// on a null handle.
///
/// # Safety
/// `params` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sf_spin_params_dim(params: *const SfSpinParams) -> usize {
    match handle(params) {
        Ok(p) => p.inner.dim().unwrap_or(0),
        Err(_) => 0,
    }
}

/// Load the built-in site database.
///
/// # Safety
/// `out` must be a valid store location; free with [`sf_site_db_free`].
#[no_mangle]
pub unsafe extern "C" fn sf_site_db_builtin(out: *mut *mut SfSiteDb) -> SfStatus {
    guarded(|| {
        let slot = out_slot(out)?;
        let db = SiteDatabase::builtin().map_err(|e| fail(&e))?;
        *slot = Box::into_raw(Box::new(SfSiteDb { inner: db }));
        Ok(())
    })
}

/// Load a site database from a TOML file.
///
/// # Safety
/// `path` must be NUL-terminated; `out` as in [`sf_site_db_builtin`].
#[no_mangle]
pub unsafe extern "C" fn sf_site_db_load(path: *const c_char, out: *mut *mut SfSiteDb) -> SfStatus {
    guarded(|| {
        let slot = out_slot(out)?;
        let path = c_str(path)?;
        let db = SiteDatabase::load(path).map_err(|e| fail(&e))?;
        *slot = Box::into_raw(Box::new(SfSiteDb { inner: db }));
        Ok(())
    })
}

/// Release a database handle.
///
/// # Safety
/// `db` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sf_site_db_free(db: *mut SfSiteDb) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Resolve a site ("4H:beta") and orbital ("GS1", "GS2", "ES1") into a
/// spin-model handle, applying the documented defaults for entries the
/// table leaves unresolved.
///
/// # Safety
/// `db` must be a live handle; strings NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sf_site_params(
    db: *const SfSiteDb,
    site: *const c_char,
    orbital: *const c_char,
    out: *mut *mut SfSpinParams,
) -> SfStatus {
    guarded(|| {
        let db = handle(db)?;
        let slot = out_slot(out)?;
        let site = c_str(site)?;
        let orbital = Orbital::parse(c_str(orbital)?).map_err(|e| fail(&e))?;
        let record = db.inner.get_by_name(site).map_err(|e| fail(&e))?;
        let eff = effective_spin_params(record, orbital).map_err(|e| fail(&e))?;
        *slot = Box::into_raw(Box::new(SfSpinParams { inner: eff.params }));
        Ok(())
    })
}

/// Sorted energy levels (MHz) at a static field (tesla, lab frame).
/// `len` must equal the model dimension.
///
/// # Safety
/// `b_tesla` points to 3 doubles; `out_levels` to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sf_eigenlevels(
    params: *const SfSpinParams,
    b_tesla: *const f64,
    out_levels: *mut f64,
    len: usize,
) -> SfStatus {
    guarded(|| {
        let p = handle(params)?;
        if b_tesla.is_null() || out_levels.is_null() {
            set_error("null buffer");
            return Err(SfStatus::SfStatusNullPointer);
        }
        let dim = p.inner.dim().map_err(|e| fail(&e))?;
        if len != dim {
            set_error(&format!("buffer holds {len} levels, model has {dim}"));
            return Err(SfStatus::SfStatusBufferTooSmall);
        }
        let field = FieldPoint::new(*b_tesla, *b_tesla.add(1), *b_tesla.add(2));
        let h = build_hamiltonian(&p.inner, &field).map_err(|e| fail(&e))?;
        let es = eigensystem_at(&h, field).map_err(|e| fail(&e))?;
        for (k, level) in es.levels.iter().enumerate() {
            *out_levels.add(k) = *level;
        }
        Ok(())
    })
}

/// Magnetic-dipole transition table at a static field. Pass a negative
/// `temperature_k` to skip thermal weighting. Rows are written into `out`
/// (capacity `cap`); the full row count lands in `out_len` and the call
/// fails with `SfStatusBufferTooSmall` when it exceeds `cap`.
///
/// # Safety
/// `b_tesla` points to 3 doubles; `out` to `cap` rows; `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn sf_transitions(
    params: *const SfSpinParams,
    b_tesla: *const f64,
    temperature_k: f64,
    include_nuclear_dipole: bool,
    out: *mut SfTransition,
    cap: usize,
    out_len: *mut usize,
) -> SfStatus {
    guarded(|| {
        let p = handle(params)?;
        let len_slot = out_slot(out_len)?;
        if b_tesla.is_null() || (out.is_null() && cap > 0) {
            set_error("null buffer");
            return Err(SfStatus::SfStatusNullPointer);
        }
        let field = FieldPoint::new(*b_tesla, *b_tesla.add(1), *b_tesla.add(2));
        let h = build_hamiltonian(&p.inner, &field).map_err(|e| fail(&e))?;
        let es = eigensystem_at(&h, field).map_err(|e| fail(&e))?;
        let temperature = if temperature_k > 0.0 { Some(temperature_k) } else { None };
        let table = transition_table_with(
            &es,
            &p.inner,
            temperature,
            TransitionOptions { include_nuclear_dipole },
        )
        .map_err(|e| fail(&e))?;
        *len_slot = table.len();
        if table.len() > cap {
            set_error(&format!("table has {} rows, buffer holds {cap}", table.len()));
            return Err(SfStatus::SfStatusBufferTooSmall);
        }
        for (k, t) in table.iter().enumerate() {
            *out.add(k) = SfTransition {
                level_i: t.i,
                level_j: t.j,
                freq_mhz: t.freq_mhz,
                intensity_parallel: t.intensity_parallel,
                intensity_perp: t.intensity_perp,
                thermal_weight: t.thermal_weight,
            };
        }
        Ok(())
    })
}

/// Clock transitions (df/dB = 0) on a field range along `axis`. Buffer
/// semantics as in [`sf_transitions`].
///
/// # Safety
/// `axis` points to 3 doubles; `out` to `cap` rows; `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn sf_clock_transitions(
    params: *const SfSpinParams,
    axis: *const f64,
    b_start_tesla: f64,
    b_end_tesla: f64,
    out: *mut SfClockTransition,
    cap: usize,
    out_len: *mut usize,
) -> SfStatus {
    guarded(|| {
        let p = handle(params)?;
        let len_slot = out_slot(out_len)?;
        if axis.is_null() || (out.is_null() && cap > 0) {
            set_error("null buffer");
            return Err(SfStatus::SfStatusNullPointer);
        }
        let axis = Vector3::new(*axis, *axis.add(1), *axis.add(2));
        let found = clock_transitions(
            &p.inner,
            None,
            axis,
            b_start_tesla,
            b_end_tesla,
            ClockOptions::default(),
        )
        .map_err(|e| fail(&e))?;
        *len_slot = found.len();
        if found.len() > cap {
            set_error(&format!("{} clock transitions, buffer holds {cap}", found.len()));
            return Err(SfStatus::SfStatusBufferTooSmall);
        }
        for (k, c) in found.iter().enumerate() {
            *out.add(k) = SfClockTransition {
                track_i: c.track_i,
                track_j: c.track_j,
                b_clock_tesla: c.b_clock_t,
                freq_mhz: c.freq_mhz,
                curvature_mhz_per_t2: c.curvature_mhz_per_t2,
            };
        }
        Ok(())
    })
}

/// Damped Rabi population transfer at time `t_us` (angular frequencies in
/// rad/µs, decay in 1/µs).
#[no_mangle]
pub extern "C" fn sf_rabi_signal(t_us: f64, omega_r: f64, delta: f64, gamma: f64) -> f64 {
    rabi_signal(t_us, &RabiParams::new(omega_r, delta, gamma))
}

/// Photon autocorrelation g²(τ) = 1 − a·e^(−τ/τ1) + b·e^(−τ/τ2).
#[no_mangle]
pub extern "C" fn sf_g2(tau_us: f64, a: f64, b: f64, tau1_us: f64, tau2_us: f64) -> f64 {
    g2_model(tau_us, &G2Params { a, b, tau1_us, tau2_us })
}

/// baseline + amplitude·e^(−t/τ).
#[no_mangle]
pub extern "C" fn sf_exp_decay(t: f64, amplitude: f64, tau: f64, baseline: f64) -> f64 {
    exp_decay(t, &DecayParams { amplitude, tau, baseline })
}

/// Isotope-configuration lineshape with the default carbon/silicon shells
/// and Gaussian sub-peaks, evaluated on `grid_ghz` into `out_y`.
///
/// # Safety
/// `grid_ghz` and `out_y` must point to `len` readable/writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sf_isotope_lineshape_default(
    f0_ghz: f64,
    fwhm_ghz: f64,
    grid_ghz: *const f64,
    out_y: *mut f64,
    len: usize,
) -> SfStatus {
    guarded(|| {
        if grid_ghz.is_null() || out_y.is_null() {
            set_error("null buffer");
            return Err(SfStatus::SfStatusNullPointer);
        }
        let grid = std::slice::from_raw_parts(grid_ghz, len);
        let trace =
            isotope_lineshape(f0_ghz, &default_shells(), fwhm_ghz, Profile::Gaussian, grid, 1e-9)
                .map_err(|e| fail(&e))?;
        for (k, y) in trace.y.iter().enumerate() {
            *out_y.add(k) = *y;
        }
        Ok(())
    })
}
