//! Clock-transition search: fields where a transition frequency is
//! first-order insensitive to the magnetic field (df/dB = 0).
//!
//! Candidate extrema are located by slope sign changes of the tracked
//! pair frequency on a sweep grid, then refined by bisecting the central
//! finite-difference derivative, re-diagonalizing at each probe field and
//! re-identifying the two tracks by eigenvector overlap against the
//! nearest grid point.

use nalgebra::Vector3;

use super::hamiltonian::SpinParams;
use super::sweep::{field_sweep, FieldSweep};
use crate::error::{Error, Result};

/// One field point where df/dB vanishes for a tracked level pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockTransition {
    pub track_i: usize,
    pub track_j: usize,
    /// Clock field, tesla.
    pub b_clock_t: f64,
    /// Transition frequency at the clock field, MHz.
    pub freq_mhz: f64,
    /// d²f/dB² at the clock field, MHz/T².
    pub curvature_mhz_per_t2: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ClockOptions {
    /// Sweep grid size used for bracketing.
    pub n_grid: usize,
    /// Acceptance threshold on |df/dB| at the refined field, MHz/T
    /// (default 100 MHz/T = 0.1 MHz/mT).
    pub dfdb_tol_mhz_per_t: f64,
    /// Bisection width at which refinement stops, tesla.
    pub refine_tol_t: f64,
}

impl Default for ClockOptions {
    fn default() -> Self {
        ClockOptions { n_grid: 501, dfdb_tol_mhz_per_t: 100.0, refine_tol_t: 1e-7 }
    }
}

/// Find clock transitions for one tracked pair, or for all pairs.
pub fn clock_transitions(
    params: &SpinParams,
    pair: Option<(usize, usize)>,
    axis: Vector3<f64>,
    b_start_t: f64,
    b_end_t: f64,
    options: ClockOptions,
) -> Result<Vec<ClockTransition>> {
    let sweep = field_sweep(params, axis, b_start_t, b_end_t, options.n_grid)?;
    let dim = sweep.n_tracks();

    let pairs: Vec<(usize, usize)> = match pair {
        Some((i, j)) => {
            if i >= dim || j >= dim || i == j {
                return Err(Error::invalid(format!(
                    "track pair ({i}, {j}) out of range for {dim} tracks"
                )));
            }
            vec![(i.min(j), i.max(j))]
        }
        None => (0..dim).flat_map(|i| ((i + 1)..dim).map(move |j| (i, j))).collect(),
    };

    let mut found = Vec::new();
    for (i, j) in pairs {
        scan_pair(params, &sweep, i, j, &options, &mut found)?;
    }
    found.sort_by(|a, b| {
        a.b_clock_t
            .total_cmp(&b.b_clock_t)
            .then(a.track_i.cmp(&b.track_i))
            .then(a.track_j.cmp(&b.track_j))
    });
    Ok(found)
}

fn scan_pair(
    params: &SpinParams,
    sweep: &FieldSweep,
    track_i: usize,
    track_j: usize,
    options: &ClockOptions,
    out: &mut Vec<ClockTransition>,
) -> Result<()> {
    let n = sweep.n_points();
    let f: Vec<f64> = (0..n)
        .map(|p| sweep.tracked_energy(p, track_j) - sweep.tracked_energy(p, track_i))
        .collect();
    let step = sweep.b_values[1] - sweep.b_values[0];

    // slope of each grid interval; a sign change between adjacent
    // intervals brackets an extremum of the signed pair frequency
    let slopes: Vec<f64> = f.windows(2).map(|w| (w[1] - w[0]) / step).collect();
    let h = (step / 50.0).max(1e-8);

    let mut last_b = f64::NEG_INFINITY;
    for k in 0..slopes.len() - 1 {
        if slopes[k] == 0.0 && slopes[k + 1] == 0.0 {
            continue; // flat stretch, not an isolated extremum
        }
        if slopes[k] * slopes[k + 1] > 0.0 {
            continue;
        }
        // bracket between the two interval midpoints
        let mut lo = sweep.b_values[k] + 0.5 * step;
        let mut hi = sweep.b_values[k + 1] + 0.5 * step;
        let eval = |b: f64| pair_freq_at(params, sweep, track_i, track_j, b);
        let deriv = |b: f64| -> Result<f64> { Ok((eval(b + h)? - eval(b - h)?) / (2.0 * h)) };

        let mut d_lo = deriv(lo)?;
        let d_hi = deriv(hi)?;
        if d_lo * d_hi > 0.0 {
            continue; // grid noise, no true sign change
        }
        while hi - lo > options.refine_tol_t {
            let mid = 0.5 * (lo + hi);
            let d_mid = deriv(mid)?;
            if d_lo * d_mid <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                d_lo = d_mid;
            }
        }
        let b_clock = 0.5 * (lo + hi);
        if (b_clock - last_b).abs() < step * 0.5 {
            continue; // same extremum re-bracketed by the neighboring interval
        }
        let d_final = deriv(b_clock)?;
        if d_final.abs() >= options.dfdb_tol_mhz_per_t {
            continue;
        }
        let f_mid = eval(b_clock)?;
        let hc = (step * 0.5).max(1e-5);
        let second = (eval(b_clock + hc)? - 2.0 * f_mid + eval(b_clock - hc)?) / (hc * hc);
        let sign = if f_mid < 0.0 { -1.0 } else { 1.0 };
        out.push(ClockTransition {
            track_i,
            track_j,
            b_clock_t: b_clock,
            freq_mhz: f_mid.abs(),
            curvature_mhz_per_t2: sign * second,
        });
        last_b = b_clock;
    }
    Ok(())
}

/// Signed tracked-pair frequency at an arbitrary field.
fn pair_freq_at(
    params: &SpinParams,
    sweep: &FieldSweep,
    track_i: usize,
    track_j: usize,
    b_t: f64,
) -> Result<f64> {
    let (es, assign) = sweep.resolve_at(params, b_t)?;
    Ok(es.levels[assign[track_j]] - es.levels[assign[track_i]])
}
