//! Angular-momentum operator matrices.
//!
//! Basis convention: |j, m⟩ ordered by descending m, so `Jz` is diagonal
//! with entries j, j−1, …, −j. `Jx` and `Jy` are assembled from the ladder
//! operators J± |j,m⟩ = √(j(j+1) − m(m±1)) |j,m±1⟩ and are Hermitian by
//! construction.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Validate a half-integer quantum number and return 2j as an integer.
pub(crate) fn two_j(j: f64) -> Result<u32> {
    if !j.is_finite() || j < 0.0 {
        return Err(Error::invalid(format!(
            "spin quantum number must be finite and >= 0, got {j}"
        )));
    }
    let twice = 2.0 * j;
    let rounded = twice.round();
    if (twice - rounded).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "spin quantum number must be a half-integer, got {j}"
        )));
    }
    Ok(rounded as u32)
}

/// Matrix dimension 2j+1 of the spin-j representation.
pub fn spin_dim(j: f64) -> Result<usize> {
    Ok(two_j(j)? as usize + 1)
}

/// Cartesian spin matrices (Jx, Jy, Jz) for a half-integer j.
pub fn spin_matrices(j: f64) -> Result<[DMatrix<Complex64>; 3]> {
    let tj = two_j(j)?;
    let dim = tj as usize + 1;
    let jj1 = j * (j + 1.0);

    let mut jz = DMatrix::<Complex64>::zeros(dim, dim);
    let mut jp = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim {
        let m = j - k as f64;
        jz[(k, k)] = Complex64::new(m, 0.0);
        if k > 0 {
            // raising operator: |j,m⟩ -> |j,m+1⟩, i.e. row k-1, column k
            jp[(k - 1, k)] = Complex64::new((jj1 - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();

    let jx = (&jp + &jm).scale(0.5);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    Ok([jx, jy, jz])
}

/// Kronecker (tensor) product A ⊗ B.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Identity matrix of the given dimension.
pub fn identity(dim: usize) -> DMatrix<Complex64> {
    DMatrix::identity(dim, dim)
}
