//! Physical constants in frequency units (CODATA 2018, truncated to the
//! precision used throughout the crate).
//!
//! All Hamiltonian energies are stored divided by h, so magnetic couplings
//! carry MHz/T and thermal factors MHz/K.

/// Bohr magneton over Planck constant, MHz/T.
pub const MU_B_MHZ_PER_T: f64 = 13996.2449;

/// Boltzmann constant over Planck constant, MHz/K.
pub const KB_MHZ_PER_K: f64 = 20836.6;

/// Boltzmann constant over Planck constant, GHz/K.
pub const KB_GHZ_PER_K: f64 = KB_MHZ_PER_K * 1e-3;

/// Nuclear gyromagnetic factor of ⁵¹V: μ_N·g_N / h, MHz/T.
pub const GN_MUN_V51_MHZ_PER_T: f64 = 11.213;

/// Vacuum speed of light, m/s (exact).
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

/// Convert a vacuum wavelength in nm to a frequency in GHz.
pub fn nm_to_ghz(wavelength_nm: f64) -> f64 {
    SPEED_OF_LIGHT_M_PER_S / wavelength_nm
}
