//! Bottom-slope and Manning friction source terms.

use crate::error::SolverError;
use crate::mesh::TriMesh;
use crate::reconstruction::{CellGradients, MidpointStates};
use crate::state::{desingularized_ratio, Bathymetry, PhysParams, StateVec};

/// Topography source `(S2, S3)` of one cell.
///
/// The pressure part integrates `½ g q1 h` over the cell boundary using the
/// cell's own midpoint traces, and the remainder subtracts `g q̄1` times the
/// reconstructed depth slope plus the exact bottom slope:
///
/// `S2 = g/(2|T|) Σ_k |Γ_k| cosθ_k q1(M_k) h(M_k) − g q̄1 (∂x h + ∂x Z) − ½ g h̄² ∂x r`.
///
/// The last term removes the density-gradient part of the boundary
/// integral, `½ g h² ∇r`, so the source stays consistent with `−g r h ∇Z`
/// when the concentration varies; it vanishes wherever `q4 / q1` is uniform.
/// `grads` must be the limited (and positivity-scaled) gradients that
/// produced `ms`.
pub fn topography_source(
    cell: usize,
    values: &[StateVec],
    ms: &MidpointStates,
    grads: &CellGradients,
    bathy: &Bathymetry,
    mesh: &TriMesh,
    p: &PhysParams,
) -> [f64; 2] {
    let mut boundary = [0.0; 2];
    for (side, t) in mesh.sides(cell).iter().zip(&ms.inner[cell]) {
        let h = (t[0] - p.delta * t[3]).max(0.0);
        let w = side.length * t[0] * h;
        boundary[0] += w * side.normal[0];
        boundary[1] += w * side.normal[1];
    }
    let g = &grads.values[cell];
    let dz = bathy.gradient(cell);
    let q = &values[cell];
    let h_mean = (q[0] - p.delta * q[3]).max(0.0);
    let c_mean = if h_mean > p.h_dry { desingularized_ratio(q[3], h_mean, p.epsilon) } else { 0.0 };
    let half = 0.5 * p.g / mesh.area(cell);
    let mut s = [0.0; 2];
    for (d, out) in s.iter_mut().enumerate() {
        let dh = g[0][d] - p.delta * g[3][d];
        // ½ g h̄² ∂r with ∂r = Δ (∂q4 − c̄ ∂h) / h̄.
        let density = 0.5 * p.g * p.delta * h_mean * (g[3][d] - c_mean * dh);
        *out = half * boundary[d] - p.g * q[0] * (dh + dz[d]) - density;
    }
    s
}

/// Fully implicit Manning friction on a momentum pair with frozen depth and
/// density. The momentum magnitude `m` solves `m + k m² = m*` with
/// `k = dt g n² h^(-7/3) / r²`; the direction is kept.
pub fn friction_implicit_update(q: [f64; 2], h: f64, r: f64, dt: f64, p: &PhysParams) -> [f64; 2] {
    if p.manning_n == 0.0 {
        return q;
    }
    if h <= p.h_dry {
        return [0.0, 0.0];
    }
    let k = dt * p.g * p.manning_n * p.manning_n * libm::pow(h, -7.0 / 3.0) / (r * r);
    let scale = friction_factor(libm::hypot(q[0], q[1]), k);
    [q[0] * scale, q[1] * scale]
}

/// Ratio `m / m*` for the root `m` of `m + k m² = m*`, in `[0, 1]`.
#[inline]
pub fn friction_factor(m_star: f64, k: f64) -> f64 {
    if m_star == 0.0 {
        return 0.0;
    }
    2.0 / (1.0 + libm::sqrt(1.0 + 4.0 * k * m_star))
}

/// Depth of the uniform friction–gravity balance over a constant slope,
/// `(n² q0² / (r0³ C))^(3/10)`.
pub fn steady_state_depth(q0: f64, manning_n: f64, slope: f64, r0: f64) -> Result<f64, SolverError> {
    if !(slope > 0.0) {
        return Err(SolverError::DegenerateProfile("slope magnitude C must be positive"));
    }
    if !(manning_n > 0.0) {
        return Err(SolverError::DegenerateProfile("Manning coefficient must be positive"));
    }
    if q0 == 0.0 || !q0.is_finite() {
        return Err(SolverError::DegenerateProfile("discharge must be nonzero"));
    }
    if !(r0 >= 1.0) {
        return Err(SolverError::DegenerateProfile("relative density must be at least 1"));
    }
    Ok(libm::pow(manning_n * manning_n * q0 * q0 / (r0 * r0 * r0 * slope), 0.3))
}

/// Uniform flow down a slope `∂x Z = −C` where gravity balances friction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyProfile {
    pub h0: f64,
    pub q0: f64,
    pub r0: f64,
    pub c0: f64,
    pub slope: f64,
}

impl SteadyProfile {
    pub fn new(q0: f64, manning_n: f64, slope: f64, c0: f64, delta: f64) -> Result<Self, SolverError> {
        let r0 = 1.0 + delta * c0;
        let h0 = steady_state_depth(q0, manning_n, slope, r0)?;
        Ok(Self { h0, q0, r0, c0, slope })
    }

    pub fn conserved(&self) -> StateVec {
        [self.h0 * self.r0, self.q0, 0.0, self.h0 * self.c0]
    }

    /// `h0^(10/3) C r0³ / (n² q0²) − 1`.
    pub fn balance_residual(&self, manning_n: f64) -> f64 {
        libm::pow(self.h0, 10.0 / 3.0) * self.slope * self.r0 * self.r0 * self.r0
            / (manning_n * manning_n * self.q0 * self.q0)
            - 1.0
    }
}
