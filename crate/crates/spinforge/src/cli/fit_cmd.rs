//! The `fit` subcommand: load a data CSV and an init file, run the model
//! fit, and emit a JSON result. Exit is nonzero on schema mismatch or
//! non-convergence, and no output file is written in either case.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::commands::{load_shells, resolve_spin_params};
use super::output::{emit_text, render_json, RunMeta};
use super::FitArgs;
use crate::dynamics::{exp_decay, g2_model, rabi_signal, DecayParams, G2Params, RabiParams};
use crate::error::{Error, Result};
use crate::fit::{
    fit_spin_params, least_squares, DriveGeometry, FitProblem, FitResult, FitStatus, FreeMask,
    ObservedPeak, ParamSpec, SpinFitConfig,
};
use crate::lineshape::{fit_isotope_model, IsotopeFitInit, Profile};
use crate::trace::{AxisUnit, SpectrumTrace};

/// Initial values and bounds, one table per parameter.
#[derive(Debug, Deserialize)]
struct InitFile {
    params: BTreeMap<String, InitParam>,
    #[serde(default)]
    model: ModelExtras,
}

#[derive(Debug, Deserialize)]
struct InitParam {
    init: f64,
    #[serde(default = "neg_inf")]
    lo: f64,
    #[serde(default = "pos_inf")]
    hi: f64,
}

fn neg_inf() -> f64 {
    f64::NEG_INFINITY
}
fn pos_inf() -> f64 {
    f64::INFINITY
}

/// Model-specific fixed settings.
#[derive(Debug, Default, Deserialize)]
struct ModelExtras {
    /// Fixed ensemble widths for the rabi model.
    #[serde(default)]
    detuning_std: f64,
    #[serde(default)]
    drive_frac_std: f64,
    /// Constant-rate dark-count fraction subtracted from g2 data before
    /// fitting.
    #[serde(default)]
    dark_fraction: f64,
    /// Drive geometry for the spin model: par or perp.
    geometry: Option<String>,
    /// Profile for the isotope model.
    profile: Option<String>,
}

/// JSON document written on success.
#[derive(Debug, Serialize)]
struct FitReport {
    model: String,
    status: FitStatus,
    iterations: usize,
    cost: f64,
    rms: f64,
    estimates: BTreeMap<String, f64>,
    ci95: BTreeMap<String, f64>,
    active_bounds: BTreeMap<String, bool>,
    identifiability_warning: Option<String>,
    config_hash: String,
    seed: u64,
}

impl FitReport {
    fn new(model: &str, result: &FitResult, meta: &RunMeta, seed: u64) -> Self {
        let map = |values: &[f64]| -> BTreeMap<String, f64> {
            result.names.iter().cloned().zip(values.iter().cloned()).collect()
        };
        FitReport {
            model: model.to_string(),
            status: result.status,
            iterations: result.iterations,
            cost: result.cost,
            rms: result.rms,
            estimates: map(&result.estimates),
            ci95: map(&result.ci95),
            active_bounds: result
                .names
                .iter()
                .cloned()
                .zip(result.active_bounds.iter().cloned())
                .collect(),
            identifiability_warning: result.identifiability_warning.clone(),
            config_hash: meta.config_hash.clone(),
            seed,
        }
    }
}

pub(super) fn fit(args: &FitArgs, meta: RunMeta, out: Option<&Path>) -> Result<()> {
    let init = read_init(&args.init)?;
    let result = match args.model.as_str() {
        "g2" => {
            let dark = init.model.dark_fraction;
            let transform = move |y: f64| {
                crate::dynamics::g2_correct_background(y, dark).unwrap_or(f64::NAN)
            };
            if dark > 0.0 {
                crate::dynamics::g2_correct_background(0.0, dark)?; // validate range
            }
            fit_closed_form_with(
                args,
                &init,
                &["tau_us", "g2"],
                &["a", "b", "tau1_us", "tau2_us"],
                |p, t| g2_model(t, &G2Params { a: p[0], b: p[1], tau1_us: p[2], tau2_us: p[3] }),
                transform,
            )?
        }
        "decay" => fit_closed_form(
            args,
            &init,
            &["t_ns", "intensity"],
            &["amplitude", "tau_ns", "baseline"],
            |p, t| exp_decay(t, &DecayParams { amplitude: p[0], tau: p[1], baseline: p[2] }),
        )?,
        "rabi" => {
            let extras = &init.model;
            let inhomogeneity = if extras.detuning_std > 0.0 || extras.drive_frac_std > 0.0 {
                Some(crate::dynamics::Inhomogeneity::new(
                    extras.detuning_std,
                    extras.drive_frac_std,
                ))
            } else {
                None
            };
            fit_closed_form(
                args,
                &init,
                &["t_us", "signal"],
                &["omega_r", "delta", "gamma"],
                move |p, t| {
                    let rp = RabiParams {
                        omega_r: p[0],
                        delta: p[1],
                        gamma: p[2],
                        inhomogeneity,
                        formula: Default::default(),
                    };
                    match inhomogeneity {
                        Some(_) => {
                            crate::dynamics::rabi_inhomogeneous(t, &rp).unwrap_or(f64::NAN)
                        }
                        None => rabi_signal(t, &rp),
                    }
                },
            )?
        }
        "isotope" => fit_isotope(args, &init)?,
        "spin" => fit_spin(args, &init)?,
        other => {
            return Err(Error::parse(format!(
                "unknown fit model '{other}'; expected g2, decay, rabi, isotope, or spin"
            )))
        }
    };

    let report = FitReport::new(&args.model, &result, &meta, meta.seed);
    if result.status != FitStatus::Converged {
        // machine-readable diagnostic on stderr, no output file
        eprintln!("{}", render_json(&report)?);
        return Err(Error::NonConvergence(format!(
            "fit stopped with status {:?} after {} iterations (cost {:.6e})",
            result.status, result.iterations, result.cost
        )));
    }
    emit_text(&render_json(&report)?, out)
}

fn read_init(path: &Path) -> Result<InitFile> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

/// Load a two-column CSV with an exact header (comment lines ignored).
fn read_xy(path: &Path, columns: &[&str; 2]) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let expected = format!("{},{}", columns[0], columns[1]);
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(format!("{}: no data", path.display())))?;
    if header != expected {
        return Err(Error::parse(format!(
            "{}: header '{header}' does not match the model schema '{expected}'",
            path.display()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, line) in lines.enumerate() {
        let mut fields = line.split(',');
        let (x, y) = match (fields.next(), fields.next(), fields.next()) {
            (Some(x), Some(y), None) => (x, y),
            _ => {
                return Err(Error::parse(format!(
                    "{}: row {} must have exactly 2 fields",
                    path.display(),
                    k + 2
                )))
            }
        };
        let parse = |v: &str| -> Result<f64> {
            v.trim()
                .parse()
                .map_err(|_| Error::parse(format!("{}: bad number '{v}'", path.display())))
        };
        xs.push(parse(x)?);
        ys.push(parse(y)?);
    }
    if xs.is_empty() {
        return Err(Error::parse(format!("{}: no data rows", path.display())));
    }
    Ok((xs, ys))
}

fn specs_for(init: &InitFile, names: &[&str]) -> Result<Vec<ParamSpec>> {
    for key in init.params.keys() {
        if !names.contains(&key.as_str()) {
            return Err(Error::parse(format!(
                "unknown parameter '{key}' in init file; this model has: {}",
                names.join(", ")
            )));
        }
    }
    names
        .iter()
        .map(|name| {
            let p = init.params.get(*name).ok_or_else(|| {
                Error::parse(format!("init file is missing parameter '{name}'"))
            })?;
            Ok(ParamSpec::new(*name, p.init, p.lo, p.hi))
        })
        .collect()
}

fn fit_closed_form(
    args: &FitArgs,
    init: &InitFile,
    columns: &[&str; 2],
    names: &[&str],
    model: impl Fn(&[f64], f64) -> f64,
) -> Result<FitResult> {
    fit_closed_form_with(args, init, columns, names, model, |y| y)
}

fn fit_closed_form_with(
    args: &FitArgs,
    init: &InitFile,
    columns: &[&str; 2],
    names: &[&str],
    model: impl Fn(&[f64], f64) -> f64,
    y_transform: impl Fn(f64) -> f64,
) -> Result<FitResult> {
    let (xs, ys) = read_xy(&args.data, columns)?;
    let ys: Vec<f64> = ys.into_iter().map(y_transform).collect();
    let specs = specs_for(init, names)?;
    let problem = FitProblem::new(specs, |p: &[f64]| {
        Ok(xs.iter().zip(&ys).map(|(x, y)| model(p, *x) - y).collect())
    });
    least_squares(&problem)
}

fn fit_isotope(args: &FitArgs, init: &InitFile) -> Result<FitResult> {
    let (xs, ys) = read_xy(&args.data, &["f_ghz", "intensity"])?;
    let shells = load_shells(None)?;
    let shift_names: Vec<String> =
        shells.iter().map(|s| format!("shift_{}_ghz_per_u", s.element)).collect();
    let mut names: Vec<&str> = vec!["f0_ghz"];
    names.extend(shift_names.iter().map(String::as_str));
    names.push("fwhm_ghz");
    names.push("amplitude");
    let specs = specs_for(init, &names)?;

    let profile = match &init.model.profile {
        Some(p) => super::commands::parse_profile(p)?,
        None => Profile::Gaussian,
    };
    let trace = SpectrumTrace::new(xs, ys, "frequency", AxisUnit::GigaHertz, "intensity")?;
    let fit_init = IsotopeFitInit {
        f0_ghz: specs[0].init,
        shifts_ghz_per_u: specs[1..1 + shells.len()].iter().map(|s| s.init).collect(),
        fwhm_ghz: specs[1 + shells.len()].init,
        amplitude: specs[2 + shells.len()].init,
    };
    let fitted = fit_isotope_model(&trace, &shells, profile, &fit_init, 1e-9)?;
    Ok(fitted.result)
}

fn fit_spin(args: &FitArgs, init: &InitFile) -> Result<FitResult> {
    let (bs_mt, fs_mhz) = read_xy(&args.data, &["b_mt", "f_mhz"])?;
    let base = resolve_spin_params(&args.source)?;
    let peaks: Vec<ObservedPeak> = bs_mt
        .iter()
        .zip(&fs_mhz)
        .map(|(b, f)| ObservedPeak { b_t: b * 1e-3, freq_mhz: *f })
        .collect();

    let mut free = FreeMask::default();
    let mut start = base.clone();
    let names = ["g_xx", "g_yy", "g_zz", "a_xx", "a_yy", "a_zz", "a_tilt"];
    for key in init.params.keys() {
        if !names.contains(&key.as_str()) {
            return Err(Error::parse(format!(
                "unknown parameter '{key}' in init file; the spin model has: {}",
                names.join(", ")
            )));
        }
    }
    for (k, name) in names.iter().enumerate().take(3) {
        if let Some(p) = init.params.get(*name) {
            free.g_principal[k] = true;
            start.g_principal[k] = p.init;
        }
    }
    for (k, name) in names.iter().enumerate().skip(3).take(3) {
        if let Some(p) = init.params.get(*name) {
            free.a_principal[k - 3] = true;
            start.a_principal_mhz[k - 3] = p.init;
        }
    }
    if let Some(p) = init.params.get("a_tilt") {
        free.a_tilt = true;
        start.a_angles_deg = [0.0, p.init, 0.0];
    }

    let geometry = match init.model.geometry.as_deref() {
        Some("perp") | Some("perpendicular") => DriveGeometry::Perpendicular,
        _ => DriveGeometry::Parallel,
    };
    let config = SpinFitConfig { geometry, ..SpinFitConfig::default() };
    let (_, result) = fit_spin_params(&peaks, &start, &free, &config)?;
    Ok(result)
}
