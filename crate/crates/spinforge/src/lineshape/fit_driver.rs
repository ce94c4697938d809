//! Least-squares fitting of the isotope lineshape model to a measured
//! trace. Shell site counts and abundances stay fixed; the center
//! frequency, the per-shell shifts, the intrinsic width, and an overall
//! amplitude are free.

use super::{isotope_lineshape, IsotopeShell, Profile};
use crate::error::{Error, Result};
use crate::fit::least_squares::{least_squares, FitProblem, FitResult, ParamSpec};
use crate::trace::SpectrumTrace;

/// Initial values and bounds for [`fit_isotope_model`].
#[derive(Debug, Clone)]
pub struct IsotopeFitInit {
    pub f0_ghz: f64,
    /// One initial shift per shell, GHz/u.
    pub shifts_ghz_per_u: Vec<f64>,
    pub fwhm_ghz: f64,
    pub amplitude: f64,
}

/// The fitted isotope model.
#[derive(Debug, Clone)]
pub struct IsotopeFit {
    pub f0_ghz: f64,
    pub shifts_ghz_per_u: Vec<f64>,
    pub fwhm_ghz: f64,
    pub amplitude: f64,
    pub result: FitResult,
}

/// Fit (f0, per-shell shifts, FWHM, amplitude) to a trace. Non-convergence
/// surfaces as an error carrying the solver diagnostics.
pub fn fit_isotope_model(
    trace: &SpectrumTrace,
    shells: &[IsotopeShell],
    profile: Profile,
    init: &IsotopeFitInit,
    prob_floor: f64,
) -> Result<IsotopeFit> {
    if init.shifts_ghz_per_u.len() != shells.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} initial shifts for {} shells",
            init.shifts_ghz_per_u.len(),
            shells.len()
        )));
    }
    let span = trace.x.last().unwrap() - trace.x[0];
    let mut specs = vec![ParamSpec::new(
        "f0_ghz",
        init.f0_ghz,
        trace.x[0] - span,
        trace.x.last().unwrap() + span,
    )];
    for (k, &s) in init.shifts_ghz_per_u.iter().enumerate() {
        specs.push(ParamSpec::new(format!("shift_{}_ghz_per_u", shells[k].element), s, 0.0, 200.0));
    }
    specs.push(ParamSpec::new("fwhm_ghz", init.fwhm_ghz, 1e-3, span));
    specs.push(ParamSpec::new("amplitude", init.amplitude, 0.0, f64::INFINITY));

    let n_shells = shells.len();
    let problem = FitProblem::new(specs, |p: &[f64]| {
        let mut shells_now = shells.to_vec();
        for k in 0..n_shells {
            shells_now[k].shift_ghz_per_u = p[1 + k];
        }
        let model =
            isotope_lineshape(p[0], &shells_now, p[1 + n_shells], profile, &trace.x, prob_floor)?;
        let amp = p[2 + n_shells];
        Ok(model.y.iter().zip(&trace.y).map(|(m, y)| amp * m - y).collect())
    });

    let result = least_squares(&problem)?;
    if result.status != crate::fit::FitStatus::Converged {
        return Err(Error::NonConvergence(format!(
            "isotope fit stopped with status {:?} after {} iterations, cost {:.3e}, rms {:.3e}",
            result.status, result.iterations, result.cost, result.rms
        )));
    }
    Ok(IsotopeFit {
        f0_ghz: result.estimates[0],
        shifts_ghz_per_u: result.estimates[1..1 + n_shells].to_vec(),
        fwhm_ghz: result.estimates[1 + n_shells],
        amplitude: result.estimates[2 + n_shells],
        result,
    })
}
