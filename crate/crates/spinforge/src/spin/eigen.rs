//! Hermitian eigendecomposition with a validated, sorted result.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hamiltonian::FieldPoint;
use crate::error::{Error, Result};

/// Sorted energy levels (MHz) and matching orthonormal eigenvectors of one
/// Hamiltonian evaluation.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Energies sorted ascending, MHz.
    pub levels: Vec<f64>,
    /// Eigenvectors as columns, column k belonging to `levels[k]`.
    pub states: DMatrix<Complex64>,
    /// Field at which the Hamiltonian was evaluated.
    pub field: FieldPoint,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    /// |⟨states[i] | other.states[j]⟩|².
    pub fn overlap(&self, i: usize, other: &EigenSystem, j: usize) -> f64 {
        self.states
            .column(i)
            .iter()
            .zip(other.states.column(j).iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// Diagonalize a Hermitian matrix, rejecting non-Hermitian input.
pub fn eigensystem(h: &DMatrix<Complex64>) -> Result<EigenSystem> {
    eigensystem_at(h, FieldPoint::new(0.0, 0.0, 0.0))
}

/// Diagonalize and record the field the matrix was built at.
pub fn eigensystem_at(h: &DMatrix<Complex64>, field: FieldPoint) -> Result<EigenSystem> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            h.nrows(),
            h.ncols()
        )));
    }
    let asymmetry = (h - h.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale = h.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if asymmetry > 1e-10 * scale.max(1.0) {
        return Err(Error::NonHermitian { asymmetry, scale });
    }

    // symmetrize to scrub rounding noise before factorizing
    let hs = (h + h.adjoint()).scale(0.5);
    let decomp = hs.symmetric_eigen();

    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| decomp.eigenvalues[a].total_cmp(&decomp.eigenvalues[b]));

    let levels: Vec<f64> = order.iter().map(|&k| decomp.eigenvalues[k]).collect();
    let mut states = DMatrix::<Complex64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        states.set_column(dst, &decomp.eigenvectors.column(src));
    }

    Ok(EigenSystem { levels, states, field })
}
