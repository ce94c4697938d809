//! Boltzmann thermal populations.

use crate::consts::KB_GHZ_PER_K;
use crate::error::{Error, Result};

/// Normalized populations p_k ∝ exp(−Δ_k / (k_B T / h)) for level
/// splittings Δ_k in GHz above an arbitrary common reference.
pub fn boltzmann_weights(splittings_ghz: &[f64], temperature_k: f64) -> Result<Vec<f64>> {
    if temperature_k <= 0.0 || temperature_k.is_nan() {
        return Err(Error::invalid(format!(
            "temperature must be positive, got {temperature_k} K"
        )));
    }
    if splittings_ghz.is_empty() {
        return Err(Error::invalid("at least one level is required"));
    }
    let kt = KB_GHZ_PER_K * temperature_k;
    // subtract the minimum so the exponentials stay in range
    let min = splittings_ghz.iter().cloned().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = splittings_ghz.iter().map(|d| (-(d - min) / kt).exp()).collect();
    let norm: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / norm).collect())
}
