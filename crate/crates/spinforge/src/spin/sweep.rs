//! Magnetic-field sweeps with eigenvector-overlap level tracking.
//!
//! Levels are tracked across field points by matching eigenvectors, not by
//! energy order, so anticrossings are followed smoothly. Track t starts as
//! the t-th lowest level at the first field point; at each subsequent point
//! every track is greedily assigned the eigenvector with the largest
//! squared overlap against its previous state. A per-step best overlap
//! below 0.5 flags the grid as too coarse for reliable tracking.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use super::eigen::{eigensystem_at, EigenSystem};
use super::hamiltonian::{build_hamiltonian, FieldPoint, SpinParams};
use crate::error::{Error, Result};

/// Result of a tracked field sweep.
#[derive(Debug, Clone)]
pub struct FieldSweep {
    /// Unit sweep axis in the lab frame.
    pub axis: Vector3<f64>,
    /// Signed field magnitudes along the axis, tesla.
    pub b_values: Vec<f64>,
    /// Eigen-decomposition at each field point (levels sorted ascending).
    pub systems: Vec<EigenSystem>,
    /// `track_level[point][track]` = index into `systems[point].levels`.
    pub track_level: Vec<Vec<usize>>,
    /// Smallest per-assignment squared overlap seen between adjacent points.
    pub min_overlap: f64,
}

impl FieldSweep {
    pub fn n_points(&self) -> usize {
        self.b_values.len()
    }

    pub fn n_tracks(&self) -> usize {
        self.track_level.first().map_or(0, Vec::len)
    }

    /// Energy of a track at one field point, MHz.
    pub fn tracked_energy(&self, point: usize, track: usize) -> f64 {
        self.systems[point].levels[self.track_level[point][track]]
    }

    /// Full energy curve of one track, MHz.
    pub fn tracked_curve(&self, track: usize) -> Vec<f64> {
        (0..self.n_points()).map(|p| self.tracked_energy(p, track)).collect()
    }

    /// Eigenvector of one track at one point.
    pub fn tracked_state(
        &self,
        point: usize,
        track: usize,
    ) -> nalgebra::DVectorView<'_, Complex64> {
        self.systems[point].states.column(self.track_level[point][track])
    }

    /// True when some adjacency step matched with overlap below 0.5.
    pub fn grid_too_coarse(&self) -> bool {
        self.min_overlap < 0.5
    }

    /// Diagonalize at an arbitrary field on the sweep axis and identify the
    /// tracks by eigenvector overlap against the nearest grid point.
    /// Returns the eigensystem and the level index of each track.
    pub fn resolve_at(
        &self,
        params: &SpinParams,
        b_t: f64,
    ) -> Result<(EigenSystem, Vec<usize>)> {
        let step = self.b_values[1] - self.b_values[0];
        let nearest = (((b_t - self.b_values[0]) / step).round() as isize)
            .clamp(0, self.n_points() as isize - 1) as usize;

        let field = FieldPoint::along(self.axis, b_t);
        let h = build_hamiltonian(params, &field)?;
        let es = eigensystem_at(&h, field)?;

        let reference = tracked_states(&self.systems[nearest], &self.track_level[nearest]);
        let (assign, _) = greedy_match(&reference, &es);
        Ok((es, assign))
    }
}

/// Greedy unique assignment of reference states (columns of `prev`) to the
/// eigenvectors of `next`, maximizing squared overlap. Returns the level
/// index chosen for each reference column and the smallest accepted
/// overlap.
pub(crate) fn greedy_match(
    prev: &DMatrix<Complex64>,
    next: &EigenSystem,
) -> (Vec<usize>, f64) {
    let n = prev.ncols();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for t in 0..n {
        for l in 0..n {
            let ov = prev
                .column(t)
                .iter()
                .zip(next.states.column(l).iter())
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
                .norm_sqr();
            pairs.push((ov, t, l));
        }
    }
    // deterministic: sort by overlap descending, then by indices
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut track_of = vec![usize::MAX; n];
    let mut level_used = vec![false; n];
    let mut assigned = 0;
    let mut min_overlap = f64::INFINITY;
    for (ov, t, l) in pairs {
        if track_of[t] != usize::MAX || level_used[l] {
            continue;
        }
        track_of[t] = l;
        level_used[l] = true;
        min_overlap = min_overlap.min(ov);
        assigned += 1;
        if assigned == n {
            break;
        }
    }
    (track_of, min_overlap)
}

/// Diagonalize along `n` equally spaced fields from `b_start` to `b_end`
/// (tesla) on the given axis and track levels by eigenvector overlap.
pub fn field_sweep(
    params: &SpinParams,
    axis: Vector3<f64>,
    b_start_t: f64,
    b_end_t: f64,
    n: usize,
) -> Result<FieldSweep> {
    if n < 2 {
        return Err(Error::invalid(format!("a sweep needs at least 2 points, got {n}")));
    }
    if !b_start_t.is_finite() || !b_end_t.is_finite() || b_end_t <= b_start_t {
        return Err(Error::invalid(format!(
            "field range must be finite and ordered, got [{b_start_t}, {b_end_t}] T"
        )));
    }
    if axis.norm() == 0.0 {
        return Err(Error::invalid("sweep axis must be a nonzero vector"));
    }
    let axis = axis.normalize();

    let step = (b_end_t - b_start_t) / (n - 1) as f64;
    let b_values: Vec<f64> = (0..n).map(|k| b_start_t + step * k as f64).collect();

    let mut systems = Vec::with_capacity(n);
    for &b in &b_values {
        let field = FieldPoint::along(axis, b);
        let h = build_hamiltonian(params, &field)?;
        systems.push(eigensystem_at(&h, field)?);
    }

    let dim = systems[0].dim();
    let mut track_level = Vec::with_capacity(n);
    track_level.push((0..dim).collect::<Vec<usize>>());
    let mut min_overlap = f64::INFINITY;

    for k in 1..n {
        let prev_states = tracked_states(&systems[k - 1], &track_level[k - 1]);
        let (assign, step_min) = greedy_match(&prev_states, &systems[k]);
        min_overlap = min_overlap.min(step_min);
        track_level.push(assign);
    }

    Ok(FieldSweep { axis, b_values, systems, track_level, min_overlap })
}

/// Columns of the eigenvector matrix reordered into track order.
pub(crate) fn tracked_states(es: &EigenSystem, track_level: &[usize]) -> DMatrix<Complex64> {
    let dim = es.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (t, &l) in track_level.iter().enumerate() {
        m.set_column(t, &es.states.column(l));
    }
    m
}
