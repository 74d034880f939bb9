//! Piecewise-linear reconstruction of the conserved variables.
//!
//! Cell gradients come from Green's formula with interface values taken as
//! the mean of the two adjacent cell averages, are limited componentwise with
//! minmod over the cell and its edge neighbors, and are finally scaled back
//! where a reconstructed depth would turn negative.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::SolverError;
use crate::mesh::{Neighbor, TriMesh};
use crate::state::{PhysParams, StateVec, NEGATIVE_DEPTH_TOL};

/// `(∂x, ∂y)` for each of the four conserved components.
pub type Gradient = [[f64; 2]; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct CellGradients {
    pub values: Vec<Gradient>,
}

impl CellGradients {
    pub fn zeros(cells: usize) -> Self {
        Self { values: vec![[[0.0; 2]; 4]; cells] }
    }
}

/// Inner traces `U_j(M_jk)` of every cell side. The outer trace of an
/// interior side is the neighbor's inner trace at the same side.
#[derive(Clone, Debug, PartialEq)]
pub struct MidpointStates {
    pub inner: Vec<[StateVec; 3]>,
}

impl MidpointStates {
    pub fn zeros(cells: usize) -> Self {
        Self { inner: vec![[[0.0; 4]; 3]; cells] }
    }

    /// Outer trace `U_jk(M_jk)`, or `None` on a boundary side.
    pub fn outer(&self, mesh: &TriMesh, cell: usize, side: usize) -> Option<StateVec> {
        match mesh.sides(cell)[side].neighbor {
            Neighbor::Cell { cell: nb, side: k } => Some(self.inner[nb][k]),
            Neighbor::Boundary(_) => None,
        }
    }
}

pub fn green_gauss_gradients(values: &[StateVec], mesh: &TriMesh) -> CellGradients {
    let mut out = CellGradients::zeros(values.len());
    green_gauss_gradients_into(values, mesh, &mut out);
    out
}

pub fn green_gauss_gradients_into(values: &[StateVec], mesh: &TriMesh, out: &mut CellGradients) {
    for (j, grad) in out.values.iter_mut().enumerate() {
        let own = &values[j];
        let mut g = [[0.0; 2]; 4];
        for side in mesh.sides(j) {
            let other = side.neighbor.cell().map_or(own, |nb| &values[nb]);
            let wx = 0.5 * side.length * side.normal[0];
            let wy = 0.5 * side.length * side.normal[1];
            for i in 0..4 {
                let s = own[i] + other[i];
                g[i][0] += wx * s;
                g[i][1] += wy * s;
            }
        }
        let inv = 1.0 / mesh.area(j);
        for gi in g.iter_mut() {
            gi[0] *= inv;
            gi[1] *= inv;
        }
        *grad = g;
    }
}

/// Zero if the candidates disagree in sign (or one is zero), otherwise the
/// candidate of smallest magnitude.
#[inline]
pub fn minmod(candidates: &[f64]) -> f64 {
    let Some((&first, rest)) = candidates.split_first() else {
        return 0.0;
    };
    if first == 0.0 {
        return 0.0;
    }
    let positive = first > 0.0;
    let mut best = first;
    for &x in rest {
        if x == 0.0 || (x > 0.0) != positive {
            return 0.0;
        }
        if x.abs() < best.abs() {
            best = x;
        }
    }
    best
}

pub fn minmod_limit(g: &CellGradients, mesh: &TriMesh) -> CellGradients {
    let mut out = CellGradients::zeros(g.values.len());
    minmod_limit_into(g, mesh, &mut out);
    out
}

pub fn minmod_limit_into(g: &CellGradients, mesh: &TriMesh, out: &mut CellGradients) {
    for (j, lim) in out.values.iter_mut().enumerate() {
        let mut set = [0usize; 4];
        set[0] = j;
        let mut n = 1;
        for side in mesh.sides(j) {
            if let Some(nb) = side.neighbor.cell() {
                set[n] = nb;
                n += 1;
            }
        }
        let mut buf = [0.0; 4];
        for i in 0..4 {
            for d in 0..2 {
                for (slot, &c) in buf.iter_mut().zip(&set[..n]) {
                    *slot = g.values[c][i][d];
                }
                lim[i][d] = minmod(&buf[..n]);
            }
        }
    }
}

#[inline]
pub(crate) fn trace(mean: &StateVec, grad: &Gradient, offset: [f64; 2]) -> StateVec {
    let mut u = *mean;
    for i in 0..4 {
        u[i] += grad[i][0] * offset[0] + grad[i][1] * offset[1];
    }
    u
}

pub fn evaluate_midpoint_states(values: &[StateVec], g: &CellGradients, mesh: &TriMesh) -> MidpointStates {
    let mut ms = MidpointStates::zeros(values.len());
    evaluate_midpoint_states_into(values, g, mesh, &mut ms);
    ms
}

pub fn evaluate_midpoint_states_into(values: &[StateVec], g: &CellGradients, mesh: &TriMesh, ms: &mut MidpointStates) {
    for (j, tr) in ms.inner.iter_mut().enumerate() {
        let c = mesh.centroid(j);
        for (k, side) in mesh.sides(j).iter().enumerate() {
            tr[k] = trace(&values[j], &g.values[j], [side.midpoint[0] - c[0], side.midpoint[1] - c[1]]);
        }
    }
}

/// Scales the reconstruction of each cell whose midpoint depth (or solute
/// content, when its average is nonnegative) would be negative by the single
/// factor that lifts the smallest such trace to zero. All four components of
/// the cell are scaled together. Returns the number of corrected cells.
pub fn positivity_correct(
    ms: &mut MidpointStates,
    g: &mut CellGradients,
    values: &[StateVec],
    p: &PhysParams,
) -> Result<usize, SolverError> {
    let mut corrected = 0;
    for (j, tr) in ms.inner.iter_mut().enumerate() {
        let mean = &values[j];
        let h_mean = mean[0] - p.delta * mean[3];
        if h_mean < -NEGATIVE_DEPTH_TOL {
            return Err(SolverError::Positivity { cell: j, depth: h_mean, time: f64::NAN });
        }
        let h_mean = h_mean.max(0.0);
        let mut alpha: f64 = 1.0;
        let h_min = tr.iter().map(|u| u[0] - p.delta * u[3]).fold(f64::INFINITY, f64::min);
        if h_min < 0.0 {
            alpha = h_mean / (h_mean - h_min);
        }
        if mean[3] >= 0.0 {
            let q4_min = tr.iter().map(|u| u[3]).fold(f64::INFINITY, f64::min);
            if q4_min < 0.0 {
                alpha = alpha.min(mean[3] / (mean[3] - q4_min));
            }
        }
        if alpha < 1.0 {
            corrected += 1;
            for t in tr.iter_mut() {
                for i in 0..4 {
                    t[i] = mean[i] + alpha * (t[i] - mean[i]);
                }
            }
            for gi in g.values[j].iter_mut() {
                gi[0] *= alpha;
                gi[1] *= alpha;
            }
        }
    }
    Ok(corrected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_structured_mesh, build_structured_mesh_with, Diagonal, Rect};

    #[test]
    fn minmod_examples() {
        assert_eq!(minmod(&[2.0, 3.0, 1.5]), 1.5);
        assert_eq!(minmod(&[-1.0, 2.0, 0.5]), 0.0);
        assert_eq!(minmod(&[-2.0, -3.0]), -2.0);
        assert_eq!(minmod(&[0.0, 1.0]), 0.0);
    }

    #[test]
    fn constant_field_has_zero_gradients() {
        let mesh = build_structured_mesh(6, 4, Rect::new(0.0, 3.0, 0.0, 2.0)).unwrap();
        let values = vec![[1.3, -0.2, 0.7, 0.4]; mesh.num_cells()];
        let g = green_gauss_gradients(&values, &mesh);
        for cell in &g.values {
            for gi in cell {
                assert!(gi[0].abs() < 1e-13 && gi[1].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn linear_field_gradient_on_interior_cells() {
        // On a uniform structured mesh the mean of two neighboring centroids
        // lies on the shared edge midpoint, so interior cells see U = x exactly.
        for &(nx, ny) in &[(20usize, 10usize), (40, 20)] {
            let mesh = build_structured_mesh_with(nx, ny, Rect::new(0.0, 2.0, 0.0, 1.0), Diagonal::Uniform).unwrap();
            let values: Vec<StateVec> = mesh.centroids().iter().map(|c| [c[0], 0.0, 0.0, 0.0]).collect();
            let g = green_gauss_gradients(&values, &mesh);
            let mut max_err: f64 = 0.0;
            for j in 0..mesh.num_cells() {
                if mesh.sides(j).iter().all(|s| !s.neighbor.is_boundary()) {
                    max_err = max_err.max((g.values[j][0][0] - 1.0).abs()).max(g.values[j][0][1].abs());
                }
            }
            assert!(max_err < 1e-12, "max error {max_err}");
        }
    }

    #[test]
    fn traces_follow_linear_reconstruction() {
        let mesh = build_structured_mesh(3, 2, Rect::new(0.0, 3.0, 0.0, 2.0)).unwrap();
        let values = vec![[1.0, 0.0, 0.0, 0.0]; mesh.num_cells()];
        let ms = evaluate_midpoint_states(&values, &CellGradients::zeros(mesh.num_cells()), &mesh);
        assert!(ms.inner.iter().flatten().all(|t| *t == [1.0, 0.0, 0.0, 0.0]));

        let t = trace(&[1.0, 0.0, 0.0, 0.0], &[[1.0, 0.0], [0.0; 2], [0.0; 2], [0.0; 2]], [0.1, 0.0]);
        assert!((t[0] - 1.1).abs() < 1e-15);
    }

    #[test]
    fn positivity_scaling_example() {
        // h̄ = 0.5 with traces {-0.1, 0.5, 1.1}: α = 0.5 / 0.6.
        let values = vec![[0.5, 0.0, 0.0, 0.0]];
        let mut ms =
            MidpointStates { inner: vec![[[-0.1, 0.0, 0.0, 0.0], [0.5, 0.0, 0.0, 0.0], [1.1, 0.0, 0.0, 0.0]]] };
        let mut g = CellGradients { values: vec![[[1.2, -0.6], [0.0; 2], [0.0; 2], [0.0; 2]]] };
        let p = PhysParams::default();
        assert_eq!(positivity_correct(&mut ms, &mut g, &values, &p).unwrap(), 1);
        let alpha = 0.5 / 0.6;
        assert!(ms.inner[0][0][0].abs() < 1e-15);
        assert!((ms.inner[0][2][0] - (0.5 + alpha * 0.6)).abs() < 1e-15);
        assert!((g.values[0][0][0] - 1.2 * alpha).abs() < 1e-15);
        assert!((alpha - 0.83333).abs() < 1e-5);

        let mut dry = MidpointStates { inner: vec![[[0.0; 4]; 3]] };
        let mut g0 = CellGradients::zeros(1);
        assert_eq!(positivity_correct(&mut dry, &mut g0, &[[0.0; 4]], &p).unwrap(), 0);

        let mut bad = MidpointStates { inner: vec![[[0.0; 4]; 3]] };
        assert!(positivity_correct(&mut bad, &mut g0, &[[-1.0, 0.0, 0.0, 0.0]], &p).is_err());
    }
}
