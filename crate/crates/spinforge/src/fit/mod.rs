//! Nonlinear least squares and spectroscopy fit drivers.

pub mod esr;
pub mod least_squares;
pub mod peaks;
pub mod spin_fit;

pub use esr::{esr_resonance_fields, EsrOptions, EsrResonance};
pub use least_squares::{least_squares, FitProblem, FitResult, FitStatus, Loss, ParamSpec};
pub use peaks::{extract_peaks, extract_peaks_1d, Peak, PeakSet};
pub use spin_fit::{
    fit_spin_params, peaks_from_set, synthetic_peaks, DriveGeometry, FreeMask, ObservedPeak,
    SpinFitConfig,
};
