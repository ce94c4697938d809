//! Simulation subcommand implementations.

use std::fmt::Write as _;
use std::path::Path;

use super::output::{emit_text, CsvDocument, RunMeta};
use super::ranges::{parse_axis, parse_range, RangeKind};
use super::{
    ClockArgs, DynamicsArgs, DynamicsModel, EsrArgs, LevelsArgs, LineshapeArgs, OdmrArgs,
    SitesAction, SitesArgs, SpinSource,
};
use crate::dynamics::{
    exp_decay, g2_model, pulsed_odmr_spectrum, rabi_inhomogeneous, rabi_signal, DecayParams,
    G2Params, Inhomogeneity, RabiFormula, RabiParams,
};
use crate::error::{Error, Result};
use crate::fit::{esr_resonance_fields, DriveGeometry, EsrOptions};
use crate::lineshape::{default_shells, isotope_lineshape, IsotopeShell, Profile};
use crate::sites::{effective_spin_params, Orbital, SiteDatabase, SiteRecord};
use crate::spin::{
    build_hamiltonian, clock_transitions, eigensystem_at, field_sweep, transition_table_with,
    ClockOptions, FieldPoint, SpinParams, TransitionOptions,
};

/// Resolve spin parameters from --config (exact file) or --site/--orbital
/// (database with documented defaulting, warnings to stderr).
pub(super) fn resolve_spin_params(source: &SpinSource) -> Result<SpinParams> {
    if let Some(path) = &source.config {
        let text = std::fs::read_to_string(path)?;
        let params: SpinParams = toml::from_str(&text)
            .map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
        params.validate()?;
        return Ok(params);
    }
    let site = source
        .site
        .as_deref()
        .ok_or_else(|| Error::parse("either --site or --config is required"))?;
    let db = SiteDatabase::from_env_or_builtin()?;
    let record = db.get_by_name(site)?;
    let orbital = Orbital::parse(&source.orbital)?;
    let eff = effective_spin_params(record, orbital)?;
    for w in &eff.warnings {
        eprintln!("warning: {w}");
    }
    Ok(eff.params)
}

fn geometry(text: &str) -> Result<DriveGeometry> {
    match text.to_ascii_lowercase().as_str() {
        "par" | "parallel" => Ok(DriveGeometry::Parallel),
        "perp" | "perpendicular" => Ok(DriveGeometry::Perpendicular),
        other => Err(Error::parse(format!("geometry must be par or perp, got '{other}'"))),
    }
}

pub(super) fn sites(args: &SitesArgs, out: Option<&Path>) -> Result<()> {
    let db = SiteDatabase::from_env_or_builtin()?;
    let text = match &args.action {
        SitesAction::List => {
            let mut s = String::new();
            let _ = writeln!(s, "site      assignment  ES1-GS1 (nm)  GS2-GS1 (GHz)  tau (ns)");
            for site in &db.sites {
                let _ = writeln!(
                    s,
                    "{:<9} {:<11} {:<13} {:<14} {}",
                    site.name(),
                    site.assignment,
                    site.es1_gs1_nm,
                    site.gs2_gs1_ghz,
                    site.lifetime_ns,
                );
            }
            s
        }
        SitesAction::Show { name } => render_site(db.get_by_name(name)?),
    };
    emit_text(&text, out)
}

fn render_site(site: &SiteRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "site {} (assignment {})", site.name(), site.assignment);
    let _ = writeln!(s, "  ES1-GS1: {} nm", site.es1_gs1_nm);
    if let Some(f) = site.es1_gs1_ghz() {
        let _ = writeln!(s, "           = {f:.1} GHz (vacuum)");
    }
    let _ = writeln!(s, "  GS2-GS1: {} GHz", site.gs2_gs1_ghz);
    let _ = writeln!(s, "  ES2-ES1: {} GHz", site.es2_es1_ghz);
    let _ = writeln!(s, "  ES3-ES2: {} GHz", site.es3_es2_ghz);
    let _ = writeln!(s, "  DW bound: {} %", site.dw_percent);
    let _ = writeln!(s, "  lifetime: {} ns", site.lifetime_ns);
    for (name, orbital) in
        [("GS1", site.gs1.as_ref()), ("GS2", site.gs2.as_ref()), ("ES1", site.es1.as_ref())]
    {
        match orbital {
            None => {
                let _ = writeln!(s, "  {name}: unresolved");
            }
            Some(o) => {
                let _ = writeln!(
                    s,
                    "  {name}: g_xx,yy = {}, g_zz = {} | A = ({}, {}, {}) MHz | theta = ({}, {}, {}) deg",
                    o.g_perp, o.g_zz, o.a_mhz[0], o.a_mhz[1], o.a_mhz[2],
                    o.theta_deg[0], o.theta_deg[1], o.theta_deg[2],
                );
            }
        }
    }
    let _ = writeln!(s, "  markers: * literature, ** partially resolved, - unresolved");
    s
}

pub(super) fn levels(args: &LevelsArgs, meta: RunMeta, out: Option<&Path>) -> Result<()> {
    let params = resolve_spin_params(&args.source)?;
    let axis = parse_axis(&args.b_axis)?;
    let grid = parse_range(&args.b_range, RangeKind::Field)?;
    let sweep = field_sweep(&params, axis, grid.start, grid.end, grid.count)?;
    if sweep.grid_too_coarse() {
        eprintln!(
            "warning: eigenvector tracking overlap fell to {:.3}; grid may be too coarse",
            sweep.min_overlap
        );
    }

    let dim = sweep.n_tracks();
    let mut columns: Vec<String> = vec!["B_mT".into()];
    for t in 0..dim {
        columns.push(format!("level_{t:02}"));
    }
    for t in 0..dim {
        columns.push(format!("track_level_{t:02}"));
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut doc = CsvDocument::new(meta, &cols);
    doc.comment("units: B_mT in mT, level_* in MHz (tracked order)");
    doc.comment("track_level_*: index of the track's level in the sorted spectrum");
    doc.comment(format!("axis: {}", args.b_axis));
    doc.comment(format!("min-tracking-overlap: {:.6}", sweep.min_overlap));
    for p in 0..sweep.n_points() {
        let mut row = Vec::with_capacity(1 + 2 * dim);
        row.push(sweep.b_values[p] * 1e3);
        for t in 0..dim {
            row.push(sweep.tracked_energy(p, t));
        }
        for t in 0..dim {
            row.push(sweep.track_level[p][t] as f64);
        }
        doc.row(row);
    }
    doc.emit(out)
}

pub(super) fn odmr(args: &OdmrArgs, meta: RunMeta, out: Option<&Path>) -> Result<()> {
    let params = resolve_spin_params(&args.source)?;
    let axis = parse_axis(&args.b_axis)?;
    let b_grid = parse_range(&args.b_range, RangeKind::Field)?;
    let f_grid = parse_range(&args.f_range, RangeKind::FrequencyMhz)?;
    let geo = geometry(&args.geometry)?;
    if args.linewidth <= 0.0 || args.linewidth.is_nan() {
        return Err(Error::invalid("linewidth must be positive"));
    }
    let options = TransitionOptions { include_nuclear_dipole: args.nuclear_dipole };

    let mut doc = CsvDocument::new(meta, &["B_mT", "f_MHz", "intensity"]);
    doc.comment("units: B_mT in mT, f_MHz in MHz, intensity in (MHz/T)^2 per MHz");
    doc.comment(format!("geometry: {}", args.geometry));
    doc.comment(format!("linewidth_MHz: {}", args.linewidth));
    let gamma = 0.5 * args.linewidth;
    let freqs = f_grid.values();
    for b in b_grid.values() {
        let field = FieldPoint::along(axis, b);
        let h = build_hamiltonian(&params, &field)?;
        let es = eigensystem_at(&h, field)?;
        let table = transition_table_with(&es, &params, args.temperature, options)?;
        let lines: Vec<(f64, f64)> = table
            .iter()
            .map(|t| {
                let strength = match geo {
                    DriveGeometry::Parallel => t.intensity_parallel,
                    DriveGeometry::Perpendicular => t.intensity_perp,
                };
                (t.freq_mhz, strength * t.thermal_weight)
            })
            .filter(|(_, w)| *w > 0.0)
            .collect();
        for &f in &freqs {
            let intensity: f64 = lines
                .iter()
                .map(|(f0, w)| {
                    w * gamma / (std::f64::consts::PI * ((f - f0).powi(2) + gamma * gamma))
                })
                .sum();
            doc.row(vec![b * 1e3, f, intensity]);
        }
    }
    doc.emit(out)
}

pub(super) fn esr(args: &EsrArgs, meta: RunMeta, out: Option<&Path>) -> Result<()> {
    let params = resolve_spin_params(&args.source)?;
    let angles = parse_range(&args.angles, RangeKind::Angle)?;
    let b_grid = parse_range(&args.b_range, RangeKind::Field)?;
    let options = EsrOptions { min_intensity: args.min_intensity, ..EsrOptions::default() };

    let mut doc =
        CsvDocument::new(meta, &["angle_deg", "B_res_mT", "intensity", "track_i", "track_j"]);
    doc.comment("units: angle_deg in degrees from c-axis, B_res_mT in mT, intensity in (MHz/T)^2");
    doc.comment(format!("microwave_GHz: {}", args.f_mw));
    for angle in angles.values() {
        let resonances =
            esr_resonance_fields(&params, args.f_mw, angle, b_grid.start, b_grid.end, options)?;
        for r in resonances {
            doc.row(vec![
                angle,
                r.b_res_t * 1e3,
                r.intensity,
                r.track_i as f64,
                r.track_j as f64,
            ]);
        }
    }
    doc.emit(out)
}

pub(super) fn parse_profile(text: &str) -> Result<Profile> {
    let lowered = text.to_ascii_lowercase();
    if lowered == "gaussian" {
        return Ok(Profile::Gaussian);
    }
    if lowered == "lorentzian" {
        return Ok(Profile::Lorentzian);
    }
    if let Some(eta) = lowered.strip_prefix("pseudo-voigt:") {
        let eta: f64 =
            eta.parse().map_err(|_| Error::parse(format!("bad pseudo-voigt eta '{eta}'")))?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::parse("pseudo-voigt eta must lie in [0, 1]"));
        }
        return Ok(Profile::PseudoVoigt { eta });
    }
    Err(Error::parse(format!(
        "profile '{text}' not recognized; use gaussian, lorentzian, or pseudo-voigt:ETA"
    )))
}

pub(super) fn load_shells(path: Option<&Path>) -> Result<Vec<IsotopeShell>> {
    match path {
        None => Ok(default_shells()),
        Some(p) => {
            #[derive(serde::Deserialize)]
            struct ShellFile {
                shell: Vec<IsotopeShell>,
            }
            let text = std::fs::read_to_string(p)?;
            let file: ShellFile =
                toml::from_str(&text).map_err(|e| Error::parse(format!("{}: {e}", p.display())))?;
            Ok(file.shell)
        }
    }
}

pub(super) fn lineshape(args: &LineshapeArgs, meta: RunMeta, out: Option<&Path>) -> Result<()> {
    let shells = load_shells(args.shells.as_deref())?;
    let profile = parse_profile(&args.profile)?;
    let grid = parse_range(&args.grid, RangeKind::FrequencyGhz)?;
    let trace =
        isotope_lineshape(args.f0, &shells, args.fwhm, profile, &grid.values(), args.prob_floor)?;

    let mut doc = CsvDocument::new(meta, &["f_GHz", "intensity"]);
    doc.comment("units: f_GHz in GHz relative to the grid frame, intensity normalized to 1/GHz");
    if let Some(site) = &args.site {
        let db = SiteDatabase::from_env_or_builtin()?;
        let record = db.get_by_name(site)?;
        if let Some(f_abs) = record.es1_gs1_ghz() {
            doc.comment(format!(
                "site: {site}, ES1-GS1 = {} nm = {f_abs:.1} GHz absolute",
                record.es1_gs1_nm
            ));
        }
    }
    for (x, y) in trace.x.iter().zip(&trace.y) {
        doc.row(vec![*x, *y]);
    }
    doc.emit(out)
}

pub(super) fn clock(args: &ClockArgs, meta: RunMeta, out: Option<&Path>) -> Result<()> {
    let params = resolve_spin_params(&args.source)?;
    let axis = parse_axis(&args.b_axis)?;
    let grid = parse_range(&args.b_range, RangeKind::Field)?;
    let pair = match &args.pair {
        None => None,
        Some(text) => {
            let (i, j) = text
                .split_once(',')
                .ok_or_else(|| Error::parse(format!("pair '{text}' must look like 7,8")))?;
            let i: usize =
                i.trim().parse().map_err(|_| Error::parse(format!("bad track '{i}'")))?;
            let j: usize =
                j.trim().parse().map_err(|_| Error::parse(format!("bad track '{j}'")))?;
            Some((i, j))
        }
    };
    let options = ClockOptions {
        n_grid: grid.count,
        dfdb_tol_mhz_per_t: args.dfdb_tol * 1e3,
        ..ClockOptions::default()
    };
    let found = clock_transitions(&params, pair, axis, grid.start, grid.end, options)?;

    let mut doc = CsvDocument::new(
        meta,
        &["track_i", "track_j", "B_clock_mT", "f_MHz", "curvature_MHz_per_T2"],
    );
    doc.comment("units: B_clock_mT in mT, f_MHz in MHz, curvature in MHz/T^2");
    for c in found {
        doc.row(vec![
            c.track_i as f64,
            c.track_j as f64,
            c.b_clock_t * 1e3,
            c.freq_mhz,
            c.curvature_mhz_per_t2,
        ]);
    }
    doc.emit(out)
}

pub(super) fn dynamics(args: &DynamicsArgs, meta: RunMeta, out: Option<&Path>) -> Result<()> {
    match &args.model {
        DynamicsModel::Rabi(a) => {
            let grid = parse_range(&a.grid, RangeKind::TimeUs)?;
            let mut p = RabiParams::new(a.omega, a.delta, a.gamma);
            if a.symmetric_root {
                p.formula = RabiFormula::SymmetricDetuning;
            }
            if a.detuning_std > 0.0 || a.drive_frac_std > 0.0 {
                p.inhomogeneity = Some(Inhomogeneity::new(a.detuning_std, a.drive_frac_std));
            }
            p.validate()?;
            let mut doc = CsvDocument::new(meta, &["t_us", "signal"]);
            doc.comment("units: t_us in us, signal is a population in [0, 1]");
            for t in grid.values() {
                let v = match p.inhomogeneity {
                    Some(_) => rabi_inhomogeneous(t, &p)?,
                    None => rabi_signal(t, &p),
                };
                doc.row(vec![t, v]);
            }
            doc.emit(out)
        }
        DynamicsModel::G2(a) => {
            let grid = parse_range(&a.grid, RangeKind::TimeUs)?;
            let p = G2Params { a: a.a, b: a.b, tau1_us: a.tau1, tau2_us: a.tau2 };
            p.validate()?;
            let mut doc = CsvDocument::new(meta, &["tau_us", "g2"]);
            doc.comment("units: tau_us in us, g2 dimensionless");
            for tau in grid.values() {
                doc.row(vec![tau, g2_model(tau, &p)]);
            }
            doc.emit(out)
        }
        DynamicsModel::Decay(a) => {
            let grid = parse_range(&a.grid, RangeKind::TimeNs)?;
            let p = DecayParams { amplitude: a.amplitude, tau: a.tau, baseline: a.baseline };
            p.validate()?;
            let mut doc = CsvDocument::new(meta, &["t_ns", "intensity"]);
            doc.comment("units: t_ns in ns, intensity arbitrary");
            for t in grid.values() {
                doc.row(vec![t, exp_decay(t, &p)]);
            }
            doc.emit(out)
        }
        DynamicsModel::Podmr(a) => {
            let grid = parse_range(&a.f_range, RangeKind::FrequencyMhz)?;
            let mut p = RabiParams::new(a.omega, 0.0, a.gamma);
            if a.detuning_std > 0.0 || a.drive_frac_std > 0.0 {
                p.inhomogeneity = Some(Inhomogeneity::new(a.detuning_std, a.drive_frac_std));
            }
            let t_pi = a.t_pi.unwrap_or(std::f64::consts::PI / a.omega);
            let spectrum = pulsed_odmr_spectrum(&grid.values(), a.f0, &p, t_pi)?;
            let mut doc = CsvDocument::new(meta, &["f_MHz", "transfer"]);
            doc.comment("units: f_MHz in MHz, transfer is a population in [0, 1]");
            doc.comment(format!("t_pi_us: {t_pi}"));
            for (x, y) in spectrum.x.iter().zip(&spectrum.y) {
                doc.row(vec![*x, *y]);
            }
            doc.emit(out)
        }
    }
}
