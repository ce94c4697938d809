//! Spin-resonance modeling engine for d¹ transition-metal defects.
//!
//! The crate models the optical-spin spectroscopy of a single unpaired
//! electron (S = 1/2) coupled to a nuclear spin (I = 7/2 for ⁵¹V) through
//! anisotropic Zeeman and hyperfine interactions:
//!
//! ```text
//! H = μ_B B₀·g·S − μ_N g_N B₀·I + S·A·I
//! ```
//!
//! with all energies carried in frequency units (MHz). On top of the
//! 16-level Hamiltonian it provides:
//!
//! - eigen-level field sweeps with eigenvector-overlap tracking across
//!   avoided crossings ([`spin::field_sweep`]),
//! - magnetic-dipole transition tables for parallel/orthogonal drive
//!   geometries ([`spin::transition_table`]),
//! - clock-transition search (`df/dB = 0`, [`spin::clock_transitions`]),
//! - nearest-neighbor isotope-configuration lineshapes ([`lineshape`]),
//! - closed-form time-domain models: damped Rabi, pulsed ODMR, g²(τ),
//!   exponential decays ([`dynamics`]),
//! - a bounded Levenberg–Marquardt engine and spectroscopy fit drivers
//!   ([`fit`]),
//! - the built-in defect-site parameter database ([`sites`]) and the
//!   `spinforge` command-line front end ([`cli`]).
//!
//! Everything is a pure function of its inputs; identical inputs produce
//! bitwise-identical results on one platform.

pub mod cli;
pub mod consts;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod lineshape;
pub mod sites;
pub mod spin;
pub mod trace;

pub use error::{Error, Result};
pub use spin::{build_hamiltonian, eigensystem, EigenSystem, FieldPoint, SpinParams, Transition};
pub use trace::{AxisUnit, SpectrumTrace};

// vector and matrix types appear in the public API (sweep axes, tensors)
pub use nalgebra;
