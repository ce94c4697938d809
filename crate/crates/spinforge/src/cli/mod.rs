//! The `spinforge` command-line front end.
//!
//! Subcommands cover the site database (`sites`), level diagrams
//! (`levels`), ODMR maps (`odmr`), fixed-frequency ESR resonance fields
//! (`esr`), isotope lineshapes (`lineshape`), clock-transition tables
//! (`clock`), time-domain models (`dynamics`), and data fitting (`fit`).
//! Every data-emitting command writes `#`-annotated CSV (or JSON for fits)
//! atomically and byte-identically for identical invocations.
//!
//! Exit codes: 0 success, 2 usage or input-schema error, 3 numerical
//! failure, 4 I/O error.

mod commands;
mod fit_cmd;
mod output;
mod ranges;

pub use output::{CsvDocument, RunMeta};
pub use ranges::{parse_axis, parse_range, GridSpec, RangeKind};

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;

#[derive(Debug, Parser, Serialize)]
#[command(name = "spinforge", version, about = "Spin-resonance modeling for d1 defect qubits")]
pub struct Cli {
    /// RNG seed recorded in output metadata (required for reproducibility
    /// of any stochastic operation).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output file; stdout when omitted. Files are written atomically.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Inspect the built-in site parameter database.
    Sites(SitesArgs),
    /// Tracked energy levels over a field sweep (CSV).
    Levels(LevelsArgs),
    /// ODMR intensity map over field and drive frequency (CSV).
    Odmr(OdmrArgs),
    /// ESR resonance fields at fixed microwave frequency vs angle (CSV).
    Esr(EsrArgs),
    /// Isotope-configuration optical lineshape (CSV).
    Lineshape(LineshapeArgs),
    /// Clock transitions (df/dB = 0) over a field range (CSV).
    Clock(ClockArgs),
    /// Closed-form time-domain traces (CSV).
    Dynamics(DynamicsArgs),
    /// Fit a model to a data file (JSON result).
    Fit(FitArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SitesArgs {
    #[command(subcommand)]
    pub action: SitesAction,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum SitesAction {
    /// List all known sites.
    List,
    /// Show one site record with provenance flags, e.g. `show 4H:beta`.
    Show { name: String },
}

/// Options shared by the spin-Hamiltonian commands.
#[derive(Debug, Args, Serialize)]
pub struct SpinSource {
    /// Site name, e.g. 4H:beta.
    #[arg(long)]
    pub site: Option<String>,

    /// Orbital state (GS1, GS2, ES1).
    #[arg(long, default_value = "GS1")]
    pub orbital: String,

    /// TOML file with explicit spin parameters; overrides --site.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct LevelsArgs {
    #[command(flatten)]
    pub source: SpinSource,

    /// Sweep axis: x, y, z, or a 3-vector like 0,0,1.
    #[arg(long, default_value = "z")]
    pub b_axis: String,

    /// Field range, start:end[unit]:count (T, mT, G), e.g. 0:50mT:501.
    #[arg(long)]
    pub b_range: String,
}

#[derive(Debug, Args, Serialize)]
pub struct OdmrArgs {
    #[command(flatten)]
    pub source: SpinSource,

    #[arg(long, default_value = "z")]
    pub b_axis: String,

    /// Field range, e.g. 0:20mT:101.
    #[arg(long)]
    pub b_range: String,

    /// Drive-frequency range, e.g. 0:1000MHz:501.
    #[arg(long)]
    pub f_range: String,

    /// Microwave drive geometry relative to the c-axis: par or perp.
    #[arg(long, default_value = "par")]
    pub geometry: String,

    /// Lorentzian linewidth (FWHM) of each line, MHz.
    #[arg(long, default_value_t = 5.0)]
    pub linewidth: f64,

    /// Weight lines by Boltzmann population differences at this
    /// temperature (kelvin).
    #[arg(long)]
    pub temperature: Option<f64>,

    /// Include the nuclear dipole term in the drive operator.
    #[arg(long, default_value_t = false)]
    pub nuclear_dipole: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct EsrArgs {
    #[command(flatten)]
    pub source: SpinSource,

    /// Microwave frequency, GHz.
    #[arg(long, default_value_t = 9.7)]
    pub f_mw: f64,

    /// Angle sweep from the c-axis in degrees, e.g. 0:90:19.
    #[arg(long, default_value = "0:90:19")]
    pub angles: String,

    /// Field search range, e.g. 0:1T:801.
    #[arg(long)]
    pub b_range: String,

    /// Minimum transverse intensity to report, (MHz/T)^2.
    #[arg(long, default_value_t = 1.0)]
    pub min_intensity: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct LineshapeArgs {
    /// Center frequency of the unshifted line, GHz (grid frame).
    #[arg(long, default_value_t = 0.0)]
    pub f0: f64,

    /// Annotate output with a site's optical transition.
    #[arg(long)]
    pub site: Option<String>,

    /// TOML file overriding the default isotope shells.
    #[arg(long)]
    pub shells: Option<PathBuf>,

    /// Intrinsic sub-peak FWHM, GHz.
    #[arg(long, default_value_t = 2.0)]
    pub fwhm: f64,

    /// Profile: gaussian, lorentzian, or pseudo-voigt:ETA.
    #[arg(long, default_value = "gaussian")]
    pub profile: String,

    /// Frequency grid, e.g. -12:40GHz:1301.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,

    /// Configurations below this probability are pruned.
    #[arg(long, default_value_t = 1e-6)]
    pub prob_floor: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ClockArgs {
    #[command(flatten)]
    pub source: SpinSource,

    #[arg(long, default_value = "z")]
    pub b_axis: String,

    /// Field range, e.g. 0.5:50mT:501.
    #[arg(long)]
    pub b_range: String,

    /// Restrict to one tracked level pair, e.g. 7,8.
    #[arg(long)]
    pub pair: Option<String>,

    /// |df/dB| acceptance threshold, MHz/mT.
    #[arg(long, default_value_t = 0.1)]
    pub dfdb_tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DynamicsArgs {
    #[command(subcommand)]
    pub model: DynamicsModel,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum DynamicsModel {
    /// Damped Rabi oscillation vs time.
    Rabi(RabiArgs),
    /// Photon autocorrelation g²(τ).
    G2(G2Args),
    /// Exponential decay vs time.
    Decay(DecayArgs),
    /// Pulsed-ODMR spectrum vs drive frequency.
    Podmr(PodmrArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct RabiArgs {
    /// Rabi frequency, rad/us.
    #[arg(long)]
    pub omega: f64,
    /// Detuning, rad/us.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Decay rate, 1/us.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Gaussian detuning spread, rad/us.
    #[arg(long, default_value_t = 0.0)]
    pub detuning_std: f64,
    /// Gaussian fractional drive spread.
    #[arg(long, default_value_t = 0.0)]
    pub drive_frac_std: f64,
    /// Use the symmetric-detuning variant of the damping root.
    #[arg(long, default_value_t = false)]
    pub symmetric_root: bool,
    /// Time grid, e.g. 0:4us:801.
    #[arg(long)]
    pub grid: String,
}

#[derive(Debug, Args, Serialize)]
pub struct G2Args {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// Antibunching time, us.
    #[arg(long)]
    pub tau1: f64,
    /// Bunching time, us.
    #[arg(long)]
    pub tau2: f64,
    /// Delay grid, e.g. 0:20us:2001.
    #[arg(long)]
    pub grid: String,
}

#[derive(Debug, Args, Serialize)]
pub struct DecayArgs {
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Decay time, ns.
    #[arg(long)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.0)]
    pub baseline: f64,
    /// Time grid, e.g. 0:800ns:801.
    #[arg(long)]
    pub grid: String,
}

#[derive(Debug, Args, Serialize)]
pub struct PodmrArgs {
    /// Resonance center, MHz.
    #[arg(long)]
    pub f0: f64,
    /// Rabi frequency, rad/us.
    #[arg(long)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Inversion pulse length, us (defaults to pi/omega).
    #[arg(long)]
    pub t_pi: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub detuning_std: f64,
    #[arg(long, default_value_t = 0.0)]
    pub drive_frac_std: f64,
    /// Drive-frequency grid, e.g. 480:520MHz:401.
    #[arg(long)]
    pub f_range: String,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// Model id: g2, decay, rabi, isotope, or spin.
    #[arg(long)]
    pub model: String,

    /// Input data CSV matching the model's column schema.
    #[arg(long)]
    pub data: PathBuf,

    /// TOML file with initial values and bounds per parameter.
    #[arg(long)]
    pub init: PathBuf,

    /// Base spin parameters for the spin model.
    #[command(flatten)]
    pub source: SpinSource,
}

/// Parse the command line and execute; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::UnknownSite { .. }
        | Error::DimensionMismatch(_) => 2,
        Error::NonHermitian { .. } | Error::Numerical(_) | Error::NonConvergence(_) => 3,
        Error::Io(_) => 4,
    }
}

fn execute(cli: &Cli) -> crate::error::Result<()> {
    // the hash covers everything that determines output content; the
    // destination path is deliberately not part of it
    #[derive(Serialize)]
    struct CanonicalConfig<'a> {
        seed: u64,
        command: &'a Command,
    }
    let canonical = serde_json::to_string(&CanonicalConfig { seed: cli.seed, command: &cli.command })
        .map_err(|e| Error::Numerical(format!("config serialization: {e}")))?;
    let meta = |command: &str| RunMeta::new(command, &canonical, cli.seed);
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Sites(args) => commands::sites(args, out),
        Command::Levels(args) => commands::levels(args, meta("levels"), out),
        Command::Odmr(args) => commands::odmr(args, meta("odmr"), out),
        Command::Esr(args) => commands::esr(args, meta("esr"), out),
        Command::Lineshape(args) => commands::lineshape(args, meta("lineshape"), out),
        Command::Clock(args) => commands::clock(args, meta("clock"), out),
        Command::Dynamics(args) => commands::dynamics(args, meta("dynamics"), out),
        Command::Fit(args) => fit_cmd::fit(args, meta("fit"), out),
    }
}
