//! Physical fluxes, one-sided local speeds and the central-upwind flux
//! divergence.
//!
//! Each interior side is evaluated once; its normal flux is added to one
//! cell and subtracted from the other, so the scheme conserves `q1` and `q4`
//! to round-off.

use alloc::vec::Vec;

use crate::error::SolverError;
use crate::mesh::{BoundaryTag, Neighbor, TriMesh};
use crate::reconstruction::MidpointStates;
use crate::simulation::ghost_state;
use crate::state::{depth_and_velocity, PhysParams, PrimitiveState, StateVec};

/// One-sided local speeds of a side; both are nonnegative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EdgeSpeeds {
    pub a_in: f64,
    pub a_out: f64,
}

impl EdgeSpeeds {
    pub fn max(&self) -> f64 {
        self.a_in.max(self.a_out)
    }
}

/// Per-cell flux contribution to `dU/dt` (sources excluded).
pub type CellRhs = Vec<StateVec>;

/// Momentum is re-derived from the (possibly desingularized) velocities so
/// that the trace satisfies `q2 = q1 u`, `q3 = q1 v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct TracePoint {
    pub q: StateVec,
    pub h: f64,
    pub u: f64,
    pub v: f64,
}

#[inline]
pub(crate) fn trace_point(q: &StateVec, p: &PhysParams) -> TracePoint {
    let (h, u, v) = depth_and_velocity(q, p);
    TracePoint { q: [q[0], q[0] * u, q[0] * v, q[3]], h, u, v }
}

#[inline]
fn directional_flux(t: &TracePoint, n: [f64; 2], p: &PhysParams) -> StateVec {
    let un = t.u * n[0] + t.v * n[1];
    let pressure = 0.5 * p.g * t.q[0] * t.h;
    [t.q[0] * un, t.q[1] * un + pressure * n[0], t.q[2] * un + pressure * n[1], t.q[3] * un]
}

/// `F(U)` and `G(U)`; zero for dry states.
pub fn physical_flux(q: &StateVec, p: &PhysParams) -> (StateVec, StateVec) {
    let t = trace_point(q, p);
    (directional_flux(&t, [1.0, 0.0], p), directional_flux(&t, [0.0, 1.0], p))
}

#[inline]
fn speeds_from(h_in: f64, un_in: f64, h_out: f64, un_out: f64, g: f64) -> EdgeSpeeds {
    let c_in = libm::sqrt(g * h_in);
    let c_out = libm::sqrt(g * h_out);
    EdgeSpeeds {
        a_in: -(un_in - c_in).min(un_out - c_out).min(0.0),
        a_out: (un_in + c_in).max(un_out + c_out).max(0.0),
    }
}

/// `a_in = −min{u^θ_in − c̃_in, u^θ_out − c̃_out, 0}`,
/// `a_out = max{u^θ_in + c̃_in, u^θ_out + c̃_out, 0}` with `c̃ = √(g h)`.
pub fn local_speeds(inner: &PrimitiveState, outer: &PrimitiveState, normal: [f64; 2], p: &PhysParams) -> EdgeSpeeds {
    let un = |s: &PrimitiveState| s.u * normal[0] + s.v * normal[1];
    speeds_from(inner.h, un(inner), outer.h, un(outer), p.g)
}

/// Below this `a_in + a_out` the central average without diffusion is used.
const DEGENERATE_SPEED: f64 = 1e-12;

/// Central-upwind normal flux across a side with outward `normal` seen from
/// the inner cell.
pub fn numerical_flux(inner: &StateVec, outer: &StateVec, normal: [f64; 2], p: &PhysParams) -> (StateVec, EdgeSpeeds) {
    let ti = trace_point(inner, p);
    let to = trace_point(outer, p);
    let speeds = speeds_from(ti.h, ti.u * normal[0] + ti.v * normal[1], to.h, to.u * normal[0] + to.v * normal[1], p.g);
    let fi = directional_flux(&ti, normal, p);
    let fo = directional_flux(&to, normal, p);
    let sum = speeds.a_in + speeds.a_out;
    let mut out = [0.0; 4];
    if sum < DEGENERATE_SPEED {
        for i in 0..4 {
            out[i] = 0.5 * (fi[i] + fo[i]);
        }
    } else {
        let inv = 1.0 / sum;
        let diffusion = speeds.a_in * speeds.a_out * inv;
        for i in 0..4 {
            out[i] = (speeds.a_in * fo[i] + speeds.a_out * fi[i]) * inv - diffusion * (to.q[i] - ti.q[i]);
        }
    }
    (out, speeds)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FaceKind {
    Interior { cell: usize, side: usize },
    Boundary(BoundaryTag),
}

/// One side of the mesh, oriented outward from `cell`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Face {
    pub cell: usize,
    pub side: usize,
    pub kind: FaceKind,
}

/// Unique sides of a mesh plus, for every cell side, the face it maps to and
/// the orientation sign.
#[derive(Clone, Debug)]
pub struct FaceTable {
    pub faces: Vec<Face>,
    pub cell_faces: Vec<[(usize, f64); 3]>,
}

impl FaceTable {
    pub fn new(mesh: &TriMesh) -> Result<Self, SolverError> {
        let mut faces = Vec::with_capacity(2 * mesh.num_cells());
        let mut cell_faces = alloc::vec![[(usize::MAX, 0.0); 3]; mesh.num_cells()];
        for j in 0..mesh.num_cells() {
            for (k, side) in mesh.sides(j).iter().enumerate() {
                match side.neighbor {
                    Neighbor::Cell { cell, side: other } => {
                        if j < cell {
                            cell_faces[j][k] = (faces.len(), 1.0);
                            cell_faces[cell][other] = (faces.len(), -1.0);
                            faces.push(Face { cell: j, side: k, kind: FaceKind::Interior { cell, side: other } });
                        }
                    }
                    Neighbor::Boundary(Some(tag)) => {
                        cell_faces[j][k] = (faces.len(), 1.0);
                        faces.push(Face { cell: j, side: k, kind: FaceKind::Boundary(tag) });
                    }
                    Neighbor::Boundary(None) => {
                        return Err(SolverError::Config(alloc::format!(
                            "boundary side {k} of cell {j} has no boundary condition"
                        )));
                    }
                }
            }
        }
        Ok(Self { faces, cell_faces })
    }
}

/// Evaluates every face flux (`face_flux`, per unit length, oriented outward
/// from `face.cell`) and its speeds.
pub fn evaluate_faces(
    ms: &MidpointStates,
    table: &FaceTable,
    mesh: &TriMesh,
    p: &PhysParams,
    face_flux: &mut [StateVec],
    speeds: &mut [EdgeSpeeds],
) {
    for (f, face) in table.faces.iter().enumerate() {
        let side = &mesh.sides(face.cell)[face.side];
        let inner = &ms.inner[face.cell][face.side];
        let outer = match face.kind {
            FaceKind::Interior { cell, side } => ms.inner[cell][side],
            FaceKind::Boundary(tag) => ghost_state(inner, side.normal, tag),
        };
        let (h, s) = numerical_flux(inner, &outer, side.normal, p);
        face_flux[f] = h;
        speeds[f] = s;
    }
}

/// Gathers face fluxes into `rhs_j = −(1/|T_j|) Σ_k |Γ_jk| H_jk`.
pub fn gather_flux_divergence(table: &FaceTable, mesh: &TriMesh, face_flux: &[StateVec], rhs: &mut [StateVec]) {
    for (j, out) in rhs.iter_mut().enumerate() {
        let mut acc = [0.0; 4];
        for (k, &(f, sign)) in table.cell_faces[j].iter().enumerate() {
            let w = sign * mesh.sides(j)[k].length;
            for i in 0..4 {
                acc[i] += w * face_flux[f][i];
            }
        }
        let inv = -1.0 / mesh.area(j);
        for i in 0..4 {
            out[i] = acc[i] * inv;
        }
    }
}

/// Flux and numerical-diffusion part of the semi-discrete right-hand side.
/// Returns the per-cell divergence and the per-face speeds.
pub fn assemble_flux_divergence(
    ms: &MidpointStates,
    table: &FaceTable,
    mesh: &TriMesh,
    p: &PhysParams,
) -> (CellRhs, Vec<EdgeSpeeds>) {
    let mut face_flux = alloc::vec![[0.0; 4]; table.faces.len()];
    let mut speeds = alloc::vec![EdgeSpeeds::default(); table.faces.len()];
    evaluate_faces(ms, table, mesh, p, &mut face_flux, &mut speeds);
    let mut rhs = alloc::vec![[0.0; 4]; mesh.num_cells()];
    gather_flux_divergence(table, mesh, &face_flux, &mut rhs);
    (rhs, speeds)
}
