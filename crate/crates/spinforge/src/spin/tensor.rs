//! Principal-axis to lab-frame tensor rotation.
//!
//! Interaction tensors are specified by three principal values and three
//! tilt angles (θ_xx, θ_yy, θ_zz) in degrees. The tilt convention is a
//! single rotation of the principal frame about the lab x-axis by the
//! nonzero angle: R = Rx(θ). The three angle slots are alternative places
//! to write that single tilt; when more than one is nonzero the rotations
//! compose about the same axis, i.e. R = Rx(θ_xx + θ_yy + θ_zz). The
//! azimuth of the tilt is undetermined for a single defect site and can be
//! overridden with an explicit rotation matrix where it matters.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Rotation about the lab x-axis by an angle in degrees.
pub fn rotation_x(theta_deg: f64) -> Matrix3<f64> {
    let t = theta_deg.to_radians();
    let (s, c) = t.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Rotation implied by a (θ_xx, θ_yy, θ_zz) angle triple.
pub fn rotation_from_angles(angles_deg: [f64; 3]) -> Matrix3<f64> {
    rotation_x(angles_deg.iter().sum())
}

/// Rotate a diagonal principal tensor into the lab frame: R·diag(p)·Rᵀ.
pub fn rotate_tensor(principal: [f64; 3], angles_deg: [f64; 3]) -> Result<Matrix3<f64>> {
    for v in principal.iter().chain(angles_deg.iter()) {
        if !v.is_finite() {
            return Err(Error::invalid(format!(
                "tensor inputs must be finite, got principal {principal:?}, angles {angles_deg:?}"
            )));
        }
    }
    Ok(rotate_tensor_explicit(principal, &rotation_from_angles(angles_deg)))
}

/// Rotate a diagonal principal tensor by an explicit rotation matrix.
pub fn rotate_tensor_explicit(principal: [f64; 3], rotation: &Matrix3<f64>) -> Matrix3<f64> {
    let d = Matrix3::from_diagonal(&Vector3::new(principal[0], principal[1], principal[2]));
    let t = rotation * d * rotation.transpose();
    // enforce exact symmetry against rounding
    (t + t.transpose()).scale(0.5)
}
