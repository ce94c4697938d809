//! Optical lineshapes from nearest-neighbor isotope mass configurations.
//!
//! A substitutional defect on a silicon site sees two shells of neighbors:
//! 4 carbon nearest neighbors and 12 silicon next-nearest neighbors. Each
//! neighbor carries the majority isotope or a heavier minority isotope
//! with its natural abundance; every distinct occupation of the shells
//! shifts the optical transition linearly in the total mass excess. The
//! observed line is the probability-weighted sum of one intrinsic profile
//! per configuration, which produces the asymmetric tail and the duplicate
//! peak at higher frequency.

mod fit_driver;

pub use fit_driver::{fit_isotope_model, IsotopeFit, IsotopeFitInit};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::{AxisUnit, SpectrumTrace};

/// One isotope of a shell element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isotope {
    /// Mass offset from the majority isotope, atomic mass units.
    pub mass_offset_u: i32,
    /// Natural abundance as a fraction.
    pub abundance: f64,
}

/// A shell of equivalent neighbor sites of one element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopeShell {
    pub element: String,
    /// Number of equivalent sites in the shell.
    pub n_sites: u32,
    /// Isotope list; abundances must sum to 1.
    pub isotopes: Vec<Isotope>,
    /// Transition-frequency shift per unit mass excess, GHz/u.
    pub shift_ghz_per_u: f64,
}

impl IsotopeShell {
    pub fn validate(&self) -> Result<()> {
        if self.isotopes.is_empty() {
            return Err(Error::invalid(format!("shell {} has no isotopes", self.element)));
        }
        let sum: f64 = self.isotopes.iter().map(|i| i.abundance).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "shell {} abundances sum to {sum}, expected 1",
                self.element
            )));
        }
        if self.isotopes.iter().any(|i| !(0.0..=1.0).contains(&i.abundance)) {
            return Err(Error::invalid(format!(
                "shell {} has an abundance outside [0, 1]",
                self.element
            )));
        }
        if !self.shift_ghz_per_u.is_finite() {
            return Err(Error::invalid("shift per mass unit must be finite"));
        }
        Ok(())
    }
}

/// Default shells for a vanadium dopant on a silicon site: 4 carbon
/// nearest neighbors shifting 22 GHz/u and 12 silicon next-nearest
/// neighbors shifting 2 GHz/u.
pub fn default_shells() -> Vec<IsotopeShell> {
    vec![
        IsotopeShell {
            element: "C".into(),
            n_sites: 4,
            isotopes: vec![
                Isotope { mass_offset_u: 0, abundance: 0.9893 },
                Isotope { mass_offset_u: 1, abundance: 0.0107 },
            ],
            shift_ghz_per_u: 22.0,
        },
        IsotopeShell {
            element: "Si".into(),
            n_sites: 12,
            isotopes: vec![
                Isotope { mass_offset_u: 0, abundance: 0.92223 },
                Isotope { mass_offset_u: 1, abundance: 0.04685 },
                Isotope { mass_offset_u: 2, abundance: 0.03092 },
            ],
            shift_ghz_per_u: 2.0,
        },
    ]
}

/// One joint occupation of all shells.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotopeConfig {
    /// Occupation counts per shell, aligned with the shell's isotope list.
    pub occupations: Vec<Vec<u32>>,
    /// Total transition shift of this configuration, GHz.
    pub total_shift_ghz: f64,
    pub probability: f64,
}

/// The enumerated configuration distribution.
#[derive(Debug, Clone)]
pub struct ConfigurationSet {
    pub configs: Vec<IsotopeConfig>,
    /// Probability mass kept after pruning (1 when `prob_floor` = 0).
    pub retained_probability: f64,
}

/// Enumerate multinomial occupation vectors per shell and combine them
/// across shells. Configurations with probability below `prob_floor` are
/// pruned; the retained mass is reported. Output order is lexicographic in
/// the concatenated occupation vectors.
pub fn configuration_distribution(
    shells: &[IsotopeShell],
    prob_floor: f64,
) -> Result<ConfigurationSet> {
    if !(0.0..1.0).contains(&prob_floor) {
        return Err(Error::invalid(format!("prob_floor must lie in [0, 1), got {prob_floor}")));
    }
    for shell in shells {
        shell.validate()?;
    }

    // per-shell lists of (occupation, probability, shift)
    let mut per_shell: Vec<Vec<ShellConfig>> = Vec::with_capacity(shells.len());
    for shell in shells {
        let mut list = Vec::new();
        let mut occupation = vec![0u32; shell.isotopes.len()];
        enumerate_shell(shell, 0, shell.n_sites, &mut occupation, &mut list);
        list.sort_by(|a, b| a.0.cmp(&b.0));
        per_shell.push(list);
    }

    let mut configs = Vec::new();
    let mut retained = 0.0;
    let mut stack: Vec<usize> = vec![0; shells.len()];
    loop {
        let mut probability = 1.0;
        let mut shift = 0.0;
        let mut occupations = Vec::with_capacity(shells.len());
        for (s, &k) in stack.iter().enumerate() {
            let (occ, p, sh) = &per_shell[s][k];
            probability *= p;
            shift += sh;
            occupations.push(occ.clone());
        }
        if probability >= prob_floor && probability > 0.0 {
            retained += probability;
            configs.push(IsotopeConfig { occupations, total_shift_ghz: shift, probability });
        }

        // advance the mixed-radix counter (last shell fastest)
        let mut pos = shells.len();
        loop {
            if pos == 0 {
                return Ok(ConfigurationSet { configs, retained_probability: retained });
            }
            pos -= 1;
            stack[pos] += 1;
            if stack[pos] < per_shell[pos].len() {
                break;
            }
            stack[pos] = 0;
        }
    }
}

type ShellConfig = (Vec<u32>, f64, f64);

fn enumerate_shell(
    shell: &IsotopeShell,
    isotope_idx: usize,
    remaining: u32,
    occupation: &mut Vec<u32>,
    out: &mut Vec<ShellConfig>,
) {
    if isotope_idx == shell.isotopes.len() - 1 {
        occupation[isotope_idx] = remaining;
        let p = multinomial_probability(shell, occupation);
        let mass: i64 = occupation
            .iter()
            .zip(&shell.isotopes)
            .map(|(&n, iso)| n as i64 * iso.mass_offset_u as i64)
            .sum();
        out.push((occupation.clone(), p, shell.shift_ghz_per_u * mass as f64));
        return;
    }
    for n in 0..=remaining {
        occupation[isotope_idx] = n;
        enumerate_shell(shell, isotope_idx + 1, remaining - n, occupation, out);
    }
}

fn multinomial_probability(shell: &IsotopeShell, occupation: &[u32]) -> f64 {
    let mut p = factorial(shell.n_sites);
    for (&n, iso) in occupation.iter().zip(&shell.isotopes) {
        p *= iso.abundance.powi(n as i32) / factorial(n);
    }
    p
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Intrinsic sub-peak profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    Gaussian,
    Lorentzian,
    /// η·Lorentzian + (1−η)·Gaussian.
    PseudoVoigt { eta: f64 },
}

impl Profile {
    /// Unit-area profile of the given FWHM evaluated at offset x.
    pub fn evaluate(&self, x: f64, fwhm: f64) -> f64 {
        match self {
            Profile::Gaussian => {
                let sigma = fwhm / (8.0 * std::f64::consts::LN_2).sqrt();
                (-x * x / (2.0 * sigma * sigma)).exp()
                    / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            Profile::Lorentzian => {
                let gamma = fwhm / 2.0;
                gamma / (std::f64::consts::PI * (x * x + gamma * gamma))
            }
            Profile::PseudoVoigt { eta } => {
                eta * Profile::Lorentzian.evaluate(x, fwhm)
                    + (1.0 - eta) * Profile::Gaussian.evaluate(x, fwhm)
            }
        }
    }
}

/// Synthesize the isotope-configuration lineshape on a frequency grid
/// (GHz, same reference as `f0_ghz`). The trace integrates to the retained
/// configuration mass.
pub fn isotope_lineshape(
    f0_ghz: f64,
    shells: &[IsotopeShell],
    intrinsic_fwhm_ghz: f64,
    profile: Profile,
    grid_ghz: &[f64],
    prob_floor: f64,
) -> Result<SpectrumTrace> {
    if intrinsic_fwhm_ghz <= 0.0 || intrinsic_fwhm_ghz.is_nan() {
        return Err(Error::invalid(format!(
            "intrinsic FWHM must be positive, got {intrinsic_fwhm_ghz}"
        )));
    }
    if grid_ghz.is_empty() {
        return Err(Error::invalid("frequency grid must not be empty"));
    }
    let set = configuration_distribution(shells, prob_floor)?;
    let y: Vec<f64> = grid_ghz
        .iter()
        .map(|&x| {
            set.configs
                .iter()
                .map(|c| {
                    c.probability
                        * profile.evaluate(x - f0_ghz - c.total_shift_ghz, intrinsic_fwhm_ghz)
                })
                .sum()
        })
        .collect();
    SpectrumTrace::new(grid_ghz.to_vec(), y, "frequency", AxisUnit::GigaHertz, "intensity")
}
