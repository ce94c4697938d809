//! Magnetic-dipole transition tables.
//!
//! The drive couples through the full magnetic-dipole vector operator
//!
//! ```text
//! V = μ_B g·S − μ_N g_N I        (MHz/T)
//! ```
//!
//! Intensities are squared matrix elements of the drive projection:
//! `intensity_parallel = |⟨i|V_z|j⟩|²` for B₁ ∥ c and
//! `intensity_perp = ½(|⟨i|V_x|j⟩|² + |⟨i|V_y|j⟩|²)` for B₁ ⊥ c.
//! The nuclear term is ~10³ weaker in amplitude than the electron term but
//! makes nuclear transitions drivable; it can be switched off.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eigen::EigenSystem;
use super::hamiltonian::SpinParams;
use super::thermal::boltzmann_weights;
use crate::consts::MU_B_MHZ_PER_T;
use crate::error::{Error, Result};

/// One |i⟩ → |j⟩ line of the transition table (i < j, levels sorted).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub i: usize,
    pub j: usize,
    /// |E_j − E_i|, MHz.
    pub freq_mhz: f64,
    /// Drive strength for B₁ ∥ c, (MHz/T)².
    pub intensity_parallel: f64,
    /// Drive strength for B₁ ⊥ c, (MHz/T)².
    pub intensity_perp: f64,
    /// Population-difference factor; 1 when no temperature was given.
    pub thermal_weight: f64,
}

/// Options for [`transition_table_with`].
#[derive(Debug, Clone, Copy)]
pub struct TransitionOptions {
    /// Include the −μ_N g_N I part of the dipole operator.
    pub include_nuclear_dipole: bool,
}

impl Default for TransitionOptions {
    fn default() -> Self {
        TransitionOptions { include_nuclear_dipole: true }
    }
}

/// Cartesian components of the magnetic-dipole operator V, MHz/T.
pub fn dipole_operator(
    params: &SpinParams,
    options: TransitionOptions,
) -> Result<[DMatrix<Complex64>; 3]> {
    let s_ops = params.electron_ops()?;
    let i_ops = params.nuclear_ops()?;
    let g = params.g_lab()?;
    let dim = params.dim()?;

    let mut v: [DMatrix<Complex64>; 3] = std::array::from_fn(|_| DMatrix::zeros(dim, dim));
    for (k, vk) in v.iter_mut().enumerate() {
        for b in 0..3 {
            let c = MU_B_MHZ_PER_T * g[(k, b)];
            if c != 0.0 {
                *vk += s_ops[b].scale(c);
            }
        }
        if options.include_nuclear_dipole {
            *vk -= i_ops[k].scale(params.gn_mun_mhz_per_t);
        }
    }
    Ok(v)
}

/// Transition table with the full dipole operator (nuclear term included).
pub fn transition_table(
    es: &EigenSystem,
    params: &SpinParams,
    temperature_k: Option<f64>,
) -> Result<Vec<Transition>> {
    transition_table_with(es, params, temperature_k, TransitionOptions::default())
}

/// Transition table over all level pairs i < j.
pub fn transition_table_with(
    es: &EigenSystem,
    params: &SpinParams,
    temperature_k: Option<f64>,
    options: TransitionOptions,
) -> Result<Vec<Transition>> {
    let dim = params.dim()?;
    if es.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "eigensystem dimension {} does not match parameter dimension {}",
            es.dim(),
            dim
        )));
    }

    let v = dipole_operator(params, options)?;
    // matrix elements in the eigenbasis: U† V U
    let in_basis: Vec<DMatrix<Complex64>> = v
        .iter()
        .map(|vk| es.states.adjoint() * vk * &es.states)
        .collect();

    let populations = match temperature_k {
        Some(t) => {
            let ghz: Vec<f64> = es.levels.iter().map(|e| e * 1e-3).collect();
            Some(boltzmann_weights(&ghz, t)?)
        }
        None => None,
    };

    let mut table = Vec::with_capacity(dim * (dim - 1) / 2);
    for i in 0..dim {
        for j in (i + 1)..dim {
            let par = in_basis[2][(i, j)].norm_sqr();
            let perp = 0.5 * (in_basis[0][(i, j)].norm_sqr() + in_basis[1][(i, j)].norm_sqr());
            let thermal_weight = match &populations {
                Some(p) => p[i] - p[j],
                None => 1.0,
            };
            table.push(Transition {
                i,
                j,
                freq_mhz: (es.levels[j] - es.levels[i]).abs(),
                intensity_parallel: par,
                intensity_perp: perp,
                thermal_weight,
            });
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{build_hamiltonian, eigensystem, FieldPoint};

    fn electron_only() -> TransitionOptions {
        TransitionOptions { include_nuclear_dipole: false }
    }

    #[test]
    fn selection_rules_isotropic_g() {
        // g = 2 iso, A = 0, B = 0.1 T ẑ: with the electron dipole alone,
        // exactly the 8 ΔmS = ±1, ΔmI = 0 transitions have perpendicular
        // intensity, all of equal strength (μ_B g / 2)².
        let mut p = SpinParams::v51([2.0; 3], [0.0; 3]);
        p.gn_mun_mhz_per_t = 0.0;
        let h = build_hamiltonian(&p, &FieldPoint::new(0.0, 0.0, 0.1)).unwrap();
        let es = eigensystem(&h).unwrap();
        let table = transition_table_with(&es, &p, None, electron_only()).unwrap();

        // |⟨Vx⟩|² = |⟨Vy⟩|² = (μ_B g /2)², so the ½-average equals one of them
        let expected = (MU_B_MHZ_PER_T * 2.0 * 0.5).powi(2);
        let nonzero: Vec<&Transition> =
            table.iter().filter(|t| t.intensity_perp > 1e-9).collect();
        assert_eq!(nonzero.len(), 8);
        for t in &nonzero {
            assert!(
                (t.intensity_perp - expected).abs() < 1e-6 * expected,
                "intensity {} vs {}",
                t.intensity_perp,
                expected
            );
        }
        // nuclear dipole adds lines, but only ~1e-6 of the electron scale
        let full = transition_table(&es, &SpinParams::v51([2.0; 3], [0.0; 3]), None).unwrap();
        let extra_max = full
            .iter()
            .filter(|t| {
                !nonzero
                    .iter()
                    .any(|n| n.i == t.i && n.j == t.j)
            })
            .map(|t| t.intensity_perp)
            .fold(0.0, f64::max);
        assert!(extra_max < 3e-6 * expected, "nuclear leakage {extra_max}");
    }

    #[test]
    fn zero_perpendicular_g_blocks_electron_transitions() {
        // g_xx = g_yy = 0: V_x and V_y act on the nucleus only, so any
        // electron-flipping pair has zero perpendicular intensity.
        let p = SpinParams::v51([0.0, 0.0, 1.748], [0.0; 3]);
        let h = build_hamiltonian(&p, &FieldPoint::new(0.0, 0.0, 0.2)).unwrap();
        let es = eigensystem(&h).unwrap();
        let table = transition_table(&es, &p, None).unwrap();
        // electron flips are the 8 largest-frequency lines here
        let mut sorted = table.clone();
        sorted.sort_by(|a, b| b.freq_mhz.total_cmp(&a.freq_mhz));
        for t in &sorted[..8] {
            assert!(t.intensity_perp < 1e-18, "perp {} on {} MHz", t.intensity_perp, t.freq_mhz);
        }
    }

    #[test]
    fn zero_hamiltonian_table_is_well_formed() {
        let p = SpinParams::v51([0.0; 3], [0.0; 3]);
        let h = build_hamiltonian(&p, &FieldPoint::new(0.0, 0.0, 0.0)).unwrap();
        let es = eigensystem(&h).unwrap();
        let table = transition_table(&es, &p, None).unwrap();
        assert_eq!(table.len(), 120);
        for t in &table {
            assert_eq!(t.freq_mhz, 0.0);
            assert!(t.intensity_parallel >= 0.0 && t.intensity_perp >= 0.0);
        }
    }

    #[test]
    fn intensity_is_index_symmetric() {
        let p = SpinParams::v51([0.5, 0.5, 1.87], [103.0, 188.0, 174.0]);
        let h = build_hamiltonian(&p, &FieldPoint::new(0.0, 0.0, 0.01)).unwrap();
        let es = eigensystem(&h).unwrap();
        let v = dipole_operator(&p, TransitionOptions::default()).unwrap();
        let vx = es.states.adjoint() * &v[0] * &es.states;
        for i in 0..16 {
            for j in 0..16 {
                assert!((vx[(i, j)].norm_sqr() - vx[(j, i)].norm_sqr()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn thermal_weight_orders_populations() {
        let p = SpinParams::v51([0.5, 0.5, 1.87], [103.0, 188.0, 174.0]);
        let h = build_hamiltonian(&p, &FieldPoint::new(0.0, 0.0, 0.5)).unwrap();
        let es = eigensystem(&h).unwrap();
        let table = transition_table(&es, &p, Some(3.3)).unwrap();
        for t in &table {
            assert!(t.thermal_weight >= 0.0 && t.thermal_weight <= 1.0);
        }
        // the widest splitting carries the largest population difference
        let max_f = table.iter().cloned().reduce(|a, b| if a.freq_mhz > b.freq_mhz { a } else { b }).unwrap();
        let max_w = table.iter().map(|t| t.thermal_weight).fold(0.0, f64::max);
        assert!((max_f.thermal_weight - max_w).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let p = SpinParams::v51([2.0; 3], [0.0; 3]);
        let h = build_hamiltonian(&p, &FieldPoint::new(0.0, 0.0, 0.1)).unwrap();
        let es = eigensystem(&h).unwrap();
        let mut other = p.clone();
        other.i = 0.5;
        assert!(transition_table(&es, &other, None).is_err());
    }
}
