//! Spin-Hamiltonian parameter recovery from ODMR peak positions.
//!
//! Observed (field, frequency) peak positions are compared against the
//! nearest modeled transition that is drivable in the stated B₁ geometry;
//! the residuals feed the bounded least-squares engine. Peak sets should
//! span the low-field region where hyperfine and Zeeman terms compete,
//! otherwise the transverse hyperfine components are barely identifiable
//! (the result then carries an identifiability warning).

use nalgebra::Vector3;

use super::least_squares::{least_squares, FitProblem, FitResult, ParamSpec};
use crate::error::{Error, Result};
use crate::spin::{
    build_hamiltonian, eigensystem_at, transition_table_with, FieldPoint, SpinParams,
    TransitionOptions,
};

/// Orientation of the microwave drive relative to the c-axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveGeometry {
    Parallel,
    Perpendicular,
}

/// One observed resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedPeak {
    pub b_t: f64,
    pub freq_mhz: f64,
}

/// Which spin parameters the fit may vary.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeMask {
    pub g_principal: [bool; 3],
    pub a_principal: [bool; 3],
    pub a_tilt: bool,
}

impl FreeMask {
    /// Vary g_zz and all hyperfine principal values.
    pub fn gzz_and_hyperfine() -> Self {
        FreeMask {
            g_principal: [false, false, true],
            a_principal: [true, true, true],
            a_tilt: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpinFitConfig {
    pub geometry: DriveGeometry,
    /// Static-field axis of the peak data.
    pub axis: Vector3<f64>,
    /// Transitions below this fraction of the strongest line at a field
    /// point are not considered pairing candidates.
    pub intensity_floor_rel: f64,
    pub g_bounds: (f64, f64),
    pub a_bounds_mhz: (f64, f64),
    pub tilt_bounds_deg: (f64, f64),
}

impl Default for SpinFitConfig {
    fn default() -> Self {
        SpinFitConfig {
            geometry: DriveGeometry::Parallel,
            axis: Vector3::z(),
            intensity_floor_rel: 1e-3,
            g_bounds: (0.0, 4.0),
            a_bounds_mhz: (0.0, 600.0),
            tilt_bounds_deg: (0.0, 90.0),
        }
    }
}

/// Fit free spin parameters to observed peak positions. Returns the
/// refined parameter set alongside the raw fit diagnostics.
pub fn fit_spin_params(
    peaks: &[ObservedPeak],
    init: &SpinParams,
    free: &FreeMask,
    config: &SpinFitConfig,
) -> Result<(SpinParams, FitResult)> {
    if peaks.is_empty() {
        return Err(Error::invalid("no observed peaks to fit"));
    }
    init.validate()?;

    let mut specs = Vec::new();
    for (name, free_k, init_k) in
        ["g_xx", "g_yy", "g_zz"].iter().zip(free.g_principal).zip(init.g_principal).map(
            |((n, f), i)| (*n, f, i),
        )
    {
        if free_k {
            specs.push(ParamSpec::new(name, init_k, config.g_bounds.0, config.g_bounds.1));
        }
    }
    for (name, free_k, init_k) in
        ["a_xx", "a_yy", "a_zz"].iter().zip(free.a_principal).zip(init.a_principal_mhz).map(
            |((n, f), i)| (*n, f, i),
        )
    {
        if free_k {
            specs.push(ParamSpec::new(name, init_k, config.a_bounds_mhz.0, config.a_bounds_mhz.1));
        }
    }
    if free.a_tilt {
        let tilt: f64 = init.a_angles_deg.iter().sum();
        specs.push(ParamSpec::new(
            "a_tilt",
            tilt,
            config.tilt_bounds_deg.0,
            config.tilt_bounds_deg.1,
        ));
    }
    if specs.is_empty() {
        return Err(Error::invalid("free mask releases no parameters"));
    }

    // unique field points, preserving first-seen order
    let mut fields: Vec<f64> = Vec::new();
    for p in peaks {
        if !fields.contains(&p.b_t) {
            fields.push(p.b_t);
        }
    }

    let problem = FitProblem::new(specs, |values: &[f64]| {
        let params = apply(init, free, values);
        let mut residuals = Vec::with_capacity(peaks.len());
        for &b in &fields {
            let freqs = drivable_frequencies(&params, b, config)?;
            for p in peaks.iter().filter(|p| p.b_t == b) {
                let nearest = freqs
                    .iter()
                    .map(|f| p.freq_mhz - f)
                    .min_by(|a, b| a.abs().total_cmp(&b.abs()))
                    .unwrap_or(p.freq_mhz);
                residuals.push(nearest);
            }
        }
        Ok(residuals)
    });

    let fit = least_squares(&problem)?;
    let refined = apply(init, free, &fit.estimates);
    Ok((refined, fit))
}

fn apply(init: &SpinParams, free: &FreeMask, values: &[f64]) -> SpinParams {
    let mut params = init.clone();
    let mut cursor = 0;
    for k in 0..3 {
        if free.g_principal[k] {
            params.g_principal[k] = values[cursor];
            cursor += 1;
        }
    }
    for k in 0..3 {
        if free.a_principal[k] {
            params.a_principal_mhz[k] = values[cursor];
            cursor += 1;
        }
    }
    if free.a_tilt {
        params.a_angles_deg = [0.0, values[cursor], 0.0];
    }
    params
}

/// Modeled transition frequencies at one field that pass the geometry
/// intensity floor. Falls back to the full table when everything is below
/// the floor, so residuals stay defined.
fn drivable_frequencies(params: &SpinParams, b_t: f64, config: &SpinFitConfig) -> Result<Vec<f64>> {
    let field = FieldPoint::new(0.0, 0.0, 0.0);
    let along = FieldPoint::along(config.axis, b_t);
    let _ = field;
    let h = build_hamiltonian(params, &along)?;
    let es = eigensystem_at(&h, along)?;
    let table = transition_table_with(&es, params, None, TransitionOptions::default())?;

    let strength = |t: &crate::spin::Transition| match config.geometry {
        DriveGeometry::Parallel => t.intensity_parallel,
        DriveGeometry::Perpendicular => t.intensity_perp,
    };
    let max = table.iter().map(strength).fold(0.0, f64::max);
    let floor = config.intensity_floor_rel * max;
    let mut freqs: Vec<f64> =
        table.iter().filter(|t| strength(t) >= floor && strength(t) > 0.0).map(|t| t.freq_mhz).collect();
    if freqs.is_empty() {
        freqs = table.iter().map(|t| t.freq_mhz).collect();
    }
    Ok(freqs)
}

/// Synthesize noiseless peak positions from known parameters: the
/// drivable transition frequencies at each field.
pub fn synthetic_peaks(
    params: &SpinParams,
    fields_t: &[f64],
    config: &SpinFitConfig,
) -> Result<Vec<ObservedPeak>> {
    let mut peaks = Vec::new();
    for &b in fields_t {
        for f in drivable_frequencies(params, b, config)? {
            peaks.push(ObservedPeak { b_t: b, freq_mhz: f });
        }
    }
    Ok(peaks)
}

/// Flatten an extracted [`super::peaks::PeakSet`] (slices keyed by field
/// in tesla, positions in MHz) into fit observations.
pub fn peaks_from_set(set: &super::peaks::PeakSet) -> Vec<ObservedPeak> {
    set.slices
        .iter()
        .flat_map(|(b_t, peaks)| {
            peaks.iter().map(|p| ObservedPeak { b_t: *b_t, freq_mhz: p.x })
        })
        .collect()
}
