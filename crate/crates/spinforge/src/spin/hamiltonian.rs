//! The electron–nuclear spin Hamiltonian.
//!
//! ```text
//! H = μ_B B₀·g·S − μ_N g_N B₀·I + S·A·I
//! ```
//!
//! built on the product space (2S+1)⊗(2I+1) with every term divided by h,
//! so the matrix is in MHz. All three terms are traceless, hence so is H.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operators::{identity, kron, spin_dim, spin_matrices};
use super::tensor::{rotate_tensor, rotate_tensor_explicit};
use crate::consts::{GN_MUN_V51_MHZ_PER_T, MU_B_MHZ_PER_T};
use crate::error::{Error, Result};

/// Full spin model of one orbital state.
///
/// Principal values are given in the tensor's own principal axis system;
/// `g_angles_deg` / `a_angles_deg` tilt those axes from the lab frame (see
/// [`super::tensor`] for the convention). Hyperfine principal values are
/// signed; database entries default to positive since only absolute values
/// are resolved experimentally.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinParams {
    /// Electron spin quantum number (1/2 here).
    pub s: f64,
    /// Nuclear spin quantum number (7/2 for ⁵¹V).
    pub i: f64,
    /// g-tensor principal values (g_xx, g_yy, g_zz), unitless.
    pub g_principal: [f64; 3],
    /// g-tensor principal-axis tilt angles, degrees.
    #[serde(default)]
    pub g_angles_deg: [f64; 3],
    /// Hyperfine principal values (A_xx, A_yy, A_zz), MHz.
    pub a_principal_mhz: [f64; 3],
    /// Hyperfine principal-axis tilt angles (θ_xx, θ_yy, θ_zz), degrees.
    #[serde(default)]
    pub a_angles_deg: [f64; 3],
    /// Nuclear gyromagnetic factor μ_N·g_N / h, MHz/T.
    pub gn_mun_mhz_per_t: f64,
    /// Explicit lab-frame rotation of the g principal axes; overrides
    /// `g_angles_deg` when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_rotation: Option<[[f64; 3]; 3]>,
    /// Explicit lab-frame rotation of the A principal axes; overrides
    /// `a_angles_deg` when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_rotation: Option<[[f64; 3]; 3]>,
}

impl SpinParams {
    /// Electron-only constructor with the ⁵¹V nuclear spin attached.
    pub fn v51(g_principal: [f64; 3], a_principal_mhz: [f64; 3]) -> Self {
        SpinParams {
            s: 0.5,
            i: 3.5,
            g_principal,
            g_angles_deg: [0.0; 3],
            a_principal_mhz,
            a_angles_deg: [0.0; 3],
            gn_mun_mhz_per_t: GN_MUN_V51_MHZ_PER_T,
            g_rotation: None,
            a_rotation: None,
        }
    }

    /// Hilbert-space dimension (2S+1)(2I+1).
    pub fn dim(&self) -> Result<usize> {
        Ok(spin_dim(self.s)? * spin_dim(self.i)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s <= 0.0 || self.i <= 0.0 {
            return Err(Error::invalid(format!(
                "spin quantum numbers must be positive, got S={}, I={}",
                self.s, self.i
            )));
        }
        spin_dim(self.s)?;
        spin_dim(self.i)?;
        for v in self
            .g_principal
            .iter()
            .chain(self.a_principal_mhz.iter())
            .chain(std::iter::once(&self.gn_mun_mhz_per_t))
        {
            if !v.is_finite() {
                return Err(Error::invalid("tensor components must be finite"));
            }
        }
        for a in self.g_angles_deg.iter().chain(self.a_angles_deg.iter()) {
            if !a.is_finite() || !(0.0..=180.0).contains(a) {
                return Err(Error::invalid(format!(
                    "tilt angles must lie in [0°, 180°], got {a}"
                )));
            }
        }
        Ok(())
    }

    /// Lab-frame g tensor.
    pub fn g_lab(&self) -> Result<Matrix3<f64>> {
        match &self.g_rotation {
            Some(r) => Ok(rotate_tensor_explicit(self.g_principal, &matrix3(r))),
            None => rotate_tensor(self.g_principal, self.g_angles_deg),
        }
    }

    /// Lab-frame hyperfine tensor, MHz.
    pub fn a_lab(&self) -> Result<Matrix3<f64>> {
        match &self.a_rotation {
            Some(r) => Ok(rotate_tensor_explicit(self.a_principal_mhz, &matrix3(r))),
            None => rotate_tensor(self.a_principal_mhz, self.a_angles_deg),
        }
    }

    /// Electron spin operators on the product space.
    pub fn electron_ops(&self) -> Result<[DMatrix<Complex64>; 3]> {
        let s_ops = spin_matrices(self.s)?;
        let i_dim = spin_dim(self.i)?;
        Ok(s_ops.map(|op| kron(&op, &identity(i_dim))))
    }

    /// Nuclear spin operators on the product space.
    pub fn nuclear_ops(&self) -> Result<[DMatrix<Complex64>; 3]> {
        let i_ops = spin_matrices(self.i)?;
        let s_dim = spin_dim(self.s)?;
        Ok(i_ops.map(|op| kron(&identity(s_dim), &op)))
    }
}

fn matrix3(r: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| r[i][j])
}

/// A static magnetic field in the lab frame (z = crystal c-axis), tesla.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub b: [f64; 3],
}

impl FieldPoint {
    pub fn new(bx: f64, by: f64, bz: f64) -> Self {
        FieldPoint { b: [bx, by, bz] }
    }

    pub fn along(axis: Vector3<f64>, magnitude_t: f64) -> Self {
        let u = axis.normalize() * magnitude_t;
        FieldPoint { b: [u.x, u.y, u.z] }
    }

    pub fn magnitude(&self) -> f64 {
        self.vector().norm()
    }

    pub fn vector(&self) -> Vector3<f64> {
        Vector3::new(self.b[0], self.b[1], self.b[2])
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("field components must be finite, got {:?}", self.b)));
        }
        Ok(())
    }
}

/// Build the lab-frame Hamiltonian matrix in MHz.
pub fn build_hamiltonian(params: &SpinParams, field: &FieldPoint) -> Result<DMatrix<Complex64>> {
    params.validate()?;
    field.validate()?;

    let s_ops = params.electron_ops()?;
    let i_ops = params.nuclear_ops()?;
    let g = params.g_lab()?;
    let a = params.a_lab()?;
    let b = field.vector();
    let dim = params.dim()?;

    let mut h = DMatrix::<Complex64>::zeros(dim, dim);

    // electron Zeeman: μ_B Σ_ab B_a g_ab S_b
    for ax in 0..3 {
        for bx in 0..3 {
            let c = MU_B_MHZ_PER_T * b[ax] * g[(ax, bx)];
            if c != 0.0 {
                h += s_ops[bx].scale(c);
            }
        }
    }

    // nuclear Zeeman: −μ_N g_N Σ_a B_a I_a
    for ax in 0..3 {
        let c = -params.gn_mun_mhz_per_t * b[ax];
        if c != 0.0 {
            h += i_ops[ax].scale(c);
        }
    }

    // hyperfine: Σ_ab S_a A_ab I_b
    for ax in 0..3 {
        for bx in 0..3 {
            let c = a[(ax, bx)];
            if c != 0.0 {
                h += (&s_ops[ax] * &i_ops[bx]).scale(c);
            }
        }
    }

    Ok(h)
}
