//! Physical parameters, conserved and primitive states, and bottom topography.
//!
//! The conserved vector is `U = (q1, q2, q3, q4) = (h r, h u r, h v r, h c)`
//! with relative density `r = 1 + Δ c`. Depth follows in closed form as
//! `h = q1 − Δ q4`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::SolverError;
use crate::mesh::TriMesh;

/// Conserved 4-vector `(q1, q2, q3, q4)`.
pub type StateVec = [f64; 4];

/// Depth below which a state counts as numerically negative rather than
/// round-off around zero.
pub const NEGATIVE_DEPTH_TOL: f64 = 1e-12;

/// How the CFL number enters the time-step bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CflMode {
    /// `dt = cfl · (1/6) · min H / max a`.
    Multiply,
    /// `dt = cfl · min H / max a`.
    Replace,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysParams {
    /// Gravitational acceleration [m/s²].
    pub g: f64,
    /// Manning coefficient [m^(-1/3) s].
    pub manning_n: f64,
    /// Relative density of the constituent, `(ρ − ρw) / ρw`.
    pub delta: f64,
    pub cfl: f64,
    pub cfl_mode: CflMode,
    /// Desingularization constant [m⁴].
    pub epsilon: f64,
    /// Dry threshold [m].
    pub h_dry: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        Self {
            g: 9.81,
            manning_n: 0.0,
            delta: 0.0,
            cfl: 0.8,
            cfl_mode: CflMode::Multiply,
            epsilon: 1e-12,
            h_dry: 1e-10,
        }
    }
}

impl PhysParams {
    /// Desingularization constant tied to the mesh size, `(mean edge length)⁴`.
    pub fn mesh_epsilon(mesh: &TriMesh) -> f64 {
        let l = mesh.mean_edge_length();
        l * l * l * l
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let fail = |what: &str, v: f64| Err(SolverError::Config(format!("{what} (got {v})")));
        if !(self.g > 0.0 && self.g.is_finite()) {
            return fail("g must be positive", self.g);
        }
        if !(self.manning_n >= 0.0 && self.manning_n.is_finite()) {
            return fail("manning_n must be nonnegative", self.manning_n);
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return fail("delta must be nonnegative", self.delta);
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return fail("cfl must lie in (0, 1]", self.cfl);
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return fail("epsilon must be positive", self.epsilon);
        }
        if !(self.h_dry >= 0.0 && self.h_dry.is_finite()) {
            return fail("h_dry must be nonnegative", self.h_dry);
        }
        Ok(())
    }
}

/// Per-cell averages of the conserved variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservedField {
    pub values: Vec<StateVec>,
}

impl ConservedField {
    pub fn new(values: Vec<StateVec>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Area-weighted totals `Σ |T_j| U_j`.
    pub fn totals(&self, mesh: &TriMesh) -> StateVec {
        let mut t = [0.0; 4];
        for (u, &a) in self.values.iter().zip(mesh.areas()) {
            for i in 0..4 {
                t[i] += a * u[i];
            }
        }
        t
    }

    pub fn depth(&self, cell: usize, p: &PhysParams) -> f64 {
        let u = &self.values[cell];
        u[0] - p.delta * u[3]
    }

    pub fn primitives(&self, bathy: &Bathymetry, p: &PhysParams) -> Result<Vec<PrimitiveState>, SolverError> {
        self.values
            .iter()
            .enumerate()
            .map(|(j, u)| {
                primitive_from_conserved(u, bathy.center(j), p)
                    .map_err(|NegativeDepth(depth)| SolverError::Positivity { cell: j, depth, time: f64::NAN })
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimitiveState {
    pub h: f64,
    pub u: f64,
    pub v: f64,
    pub c: f64,
    pub r: f64,
    /// Surface elevation `h + Z`.
    pub w: f64,
}

/// Depth below `-NEGATIVE_DEPTH_TOL` encountered during recovery.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativeDepth(pub f64);

/// Division by a depth-like quantity that tends to zero with the depth:
/// `√2 · den · num / √(den⁴ + max(den⁴, ε))`. Where `den⁴ ≥ ε` this is
/// exactly `num / den` and is evaluated that way.
#[inline]
pub fn desingularized_ratio(num: f64, den: f64, epsilon: f64) -> f64 {
    let d2 = den * den;
    let d4 = d2 * d2;
    if d4 >= epsilon {
        num / den
    } else if den == 0.0 {
        0.0
    } else {
        core::f64::consts::SQRT_2 * den * num / libm::sqrt(d4 + epsilon)
    }
}

/// Depth and velocities of a conserved state; `h` clamped at zero and the
/// velocities zeroed at or below the dry threshold.
#[inline]
pub(crate) fn depth_and_velocity(q: &StateVec, p: &PhysParams) -> (f64, f64, f64) {
    let h = (q[0] - p.delta * q[3]).max(0.0);
    if h <= p.h_dry {
        return (h, 0.0, 0.0);
    }
    let c = desingularized_ratio(q[3], h, p.epsilon);
    let hr = h * (1.0 + p.delta * c);
    (h, desingularized_ratio(q[1], hr, p.epsilon), desingularized_ratio(q[2], hr, p.epsilon))
}

pub fn primitive_from_conserved(q: &StateVec, z: f64, p: &PhysParams) -> Result<PrimitiveState, NegativeDepth> {
    let h = q[0] - p.delta * q[3];
    if h < -NEGATIVE_DEPTH_TOL || h.is_nan() {
        return Err(NegativeDepth(h));
    }
    let h = h.max(0.0);
    if h <= p.h_dry {
        return Ok(PrimitiveState { h, u: 0.0, v: 0.0, c: 0.0, r: 1.0, w: h + z });
    }
    let c = desingularized_ratio(q[3], h, p.epsilon);
    let r = 1.0 + p.delta * c;
    let hr = h * r;
    Ok(PrimitiveState {
        h,
        u: desingularized_ratio(q[1], hr, p.epsilon),
        v: desingularized_ratio(q[2], hr, p.epsilon),
        c,
        r,
        w: h + z,
    })
}

/// `(h r, h u r, h v r, h c)` with `r = 1 + Δ c`; the stored `r` is not used.
pub fn conserved_from_primitive(s: &PrimitiveState, p: &PhysParams) -> StateVec {
    let r = 1.0 + p.delta * s.c;
    let hr = s.h * r;
    [hr, hr * s.u, hr * s.v, s.h * s.c]
}

/// Bottom elevation source.
#[derive(Clone, Debug, PartialEq)]
pub enum BathymetrySpec {
    Flat(f64),
    /// `Z = zx·x + zy·y + z0`.
    Plane {
        zx: f64,
        zy: f64,
        z0: f64,
    },
    /// One value per mesh vertex.
    Vertex(Vec<f64>),
}

/// Continuous piecewise-linear bottom interpolating vertex values.
#[derive(Clone, Debug, PartialEq)]
pub struct Bathymetry {
    vertex: Vec<f64>,
    center: Vec<f64>,
    midpoint: Vec<[f64; 3]>,
    gradient: Vec<[f64; 2]>,
}

impl Bathymetry {
    pub fn vertex_values(&self) -> &[f64] {
        &self.vertex
    }

    /// Cell value, the mean of the three vertex values.
    pub fn center(&self, cell: usize) -> f64 {
        self.center[cell]
    }

    pub fn centers(&self) -> &[f64] {
        &self.center
    }

    /// Value at the midpoint of side `side` of `cell`.
    pub fn midpoint(&self, cell: usize, side: usize) -> f64 {
        self.midpoint[cell][side]
    }

    /// Exact gradient of the linear interpolant over `cell`.
    pub fn gradient(&self, cell: usize) -> [f64; 2] {
        self.gradient[cell]
    }
}

pub fn build_bathymetry(mesh: &TriMesh, spec: &BathymetrySpec) -> Result<Bathymetry, SolverError> {
    let vertex: Vec<f64> = match spec {
        BathymetrySpec::Flat(z0) => alloc::vec![*z0; mesh.num_vertices()],
        BathymetrySpec::Plane { zx, zy, z0 } => mesh.vertices().iter().map(|v| zx * v[0] + zy * v[1] + z0).collect(),
        BathymetrySpec::Vertex(values) => {
            if values.len() != mesh.num_vertices() {
                return Err(SolverError::Config(format!(
                    "bathymetry has {} values for {} vertices",
                    values.len(),
                    mesh.num_vertices()
                )));
            }
            values.clone()
        }
    };
    if vertex.iter().any(|z| !z.is_finite()) {
        return Err(SolverError::Config("bathymetry contains non-finite values".into()));
    }
    let verts = mesh.vertices();
    let mut center = Vec::with_capacity(mesh.num_cells());
    let mut midpoint = Vec::with_capacity(mesh.num_cells());
    let mut gradient = Vec::with_capacity(mesh.num_cells());
    for (j, c) in mesh.cells().iter().enumerate() {
        let z = [vertex[c[0]], vertex[c[1]], vertex[c[2]]];
        center.push((z[0] + z[1] + z[2]) / 3.0);
        midpoint.push([0.5 * (z[0] + z[1]), 0.5 * (z[1] + z[2]), 0.5 * (z[2] + z[0])]);
        let (p0, p1, p2) = (verts[c[0]], verts[c[1]], verts[c[2]]);
        let (dz1, dz2) = (z[1] - z[0], z[2] - z[0]);
        let twice_area = 2.0 * mesh.area(j);
        gradient.push([
            (dz1 * (p2[1] - p0[1]) - dz2 * (p1[1] - p0[1])) / twice_area,
            (dz2 * (p1[0] - p0[0]) - dz1 * (p2[0] - p0[0])) / twice_area,
        ]);
    }
    Ok(Bathymetry { vertex, center, midpoint, gradient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_jittered_mesh, build_structured_mesh, Diagonal, Neighbor, Rect};

    fn params(delta: f64) -> PhysParams {
        PhysParams { delta, ..PhysParams::default() }
    }

    #[test]
    fn desingularized_ratio_examples() {
        assert_eq!(desingularized_ratio(1.0, 1.0, 1e-6), 1.0);
        assert_eq!(desingularized_ratio(3.5, 0.0, 1e-6), 0.0);
        let v = desingularized_ratio(1e-6, 1e-3, 1e-6);
        // √2 · 1e-3 · 1e-6 / √(1e-12 + 1e-6)
        let expect = 2f64.sqrt() * 1e-9 / (1e-12f64 + 1e-6).sqrt();
        assert!((v - expect).abs() < 1e-18);
        assert!((v - 1.41421e-6).abs() < 1e-11);
    }

    #[test]
    fn primitive_examples() {
        let p = params(0.1);
        let s = primitive_from_conserved(&[1.1, 0.0, 0.0, 1.0], 0.0, &p).unwrap();
        assert!((s.h - 1.0).abs() < 1e-15);
        assert!((s.c - 1.0).abs() < 1e-15);
        assert!((s.r - 1.1).abs() < 1e-15);
        assert_eq!((s.u, s.v), (0.0, 0.0));

        let s = primitive_from_conserved(&[0.0; 4], 2.0, &p).unwrap();
        assert_eq!((s.h, s.u, s.v, s.c, s.r, s.w), (0.0, 0.0, 0.0, 0.0, 1.0, 2.0));

        let h0 = libm::pow(10.0, -0.6);
        let s = primitive_from_conserved(&[h0, 0.1, 0.0, 0.0], 0.0, &p).unwrap();
        assert_eq!(s.r, 1.0);
        assert!((s.u - libm::pow(10.0, -0.4)).abs() < 1e-14);
        assert!((s.u - 0.398107).abs() < 1e-6);

        assert_eq!(primitive_from_conserved(&[0.0, 0.0, 0.0, 1.0], 0.0, &p), Err(NegativeDepth(-0.1)));
    }

    #[test]
    fn conserved_examples() {
        let p = params(0.1);
        let s = PrimitiveState { h: 1.0, u: 0.0, v: 0.0, c: 1.0, r: 1.1, w: 1.0 };
        let q = conserved_from_primitive(&s, &p);
        assert!((q[0] - 1.1).abs() < 1e-15 && q[3] == 1.0 && q[1] == 0.0);
        let dry = PrimitiveState { h: 0.0, u: 3.0, v: -1.0, c: 0.7, r: 1.07, w: 0.0 };
        assert_eq!(conserved_from_primitive(&dry, &p), [0.0; 4]);
        let s = PrimitiveState { h: 0.25119, u: 0.398107, v: 0.0, c: 0.0, r: 1.0, w: 0.25119 };
        let q = conserved_from_primitive(&s, &p);
        assert!((q[0] - 0.25119).abs() < 1e-12 && (q[1] - 0.1).abs() < 1e-5);
    }

    #[test]
    fn plane_and_flat_bathymetry() {
        let mesh = build_jittered_mesh(8, 5, Rect::new(0.0, 10.0, 0.0, 5.0), Diagonal::Uniform, 0.2, 11).unwrap();
        let b = build_bathymetry(&mesh, &BathymetrySpec::Plane { zx: 0.01, zy: 0.0, z0: 0.0 }).unwrap();
        for j in 0..mesh.num_cells() {
            let g = b.gradient(j);
            assert!((g[0] - 0.01).abs() < 1e-12 && g[1].abs() < 1e-12);
        }
        let f = build_bathymetry(&mesh, &BathymetrySpec::Flat(5.0)).unwrap();
        for j in 0..mesh.num_cells() {
            assert_eq!(f.gradient(j), [0.0, 0.0]);
            assert!((0..3).all(|k| f.midpoint(j, k) == 5.0));
        }
        assert!(build_bathymetry(&mesh, &BathymetrySpec::Vertex(alloc::vec![0.0; 3])).is_err());
    }

    #[test]
    fn quadratic_bathymetry_gradients() {
        // Z = x² sampled at x ∈ {0, 1, 2}: interpolants have slopes 1 and 3.
        let mesh = build_structured_mesh(2, 1, Rect::new(0.0, 2.0, 0.0, 1.0)).unwrap();
        let z: Vec<f64> = mesh.vertices().iter().map(|v| v[0] * v[0]).collect();
        let b = build_bathymetry(&mesh, &BathymetrySpec::Vertex(z)).unwrap();
        for j in 0..mesh.num_cells() {
            let expect = if mesh.centroid(j)[0] < 1.0 { 1.0 } else { 3.0 };
            let g = b.gradient(j);
            assert!((g[0] - expect).abs() < 1e-14 && g[1].abs() < 1e-14, "cell {j}: {g:?}");
        }
        for j in 0..mesh.num_cells() {
            for (k, side) in mesh.sides(j).iter().enumerate() {
                if let Neighbor::Cell { cell, side: s } = side.neighbor {
                    assert_eq!(b.midpoint(j, k), b.midpoint(cell, s));
                }
            }
        }
    }
}
