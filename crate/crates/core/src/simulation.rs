//! Forward-Euler time integration, boundary ghosts and diagnostics.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::SolverError;
use crate::flux::{evaluate_faces, gather_flux_divergence, EdgeSpeeds, FaceTable};
use crate::mesh::{BoundaryTag, TriMesh};
use crate::reconstruction::{
    evaluate_midpoint_states_into, green_gauss_gradients_into, minmod_limit_into, positivity_correct, CellGradients,
    MidpointStates,
};
use crate::sources::{friction_implicit_update, topography_source};
use crate::state::{depth_and_velocity, Bathymetry, CflMode, ConservedField, PhysParams, StateVec, NEGATIVE_DEPTH_TOL};

/// Outer state for a boundary side. Outflow copies the inner trace; a wall
/// mirrors the momentum about the side (normal part negated, tangential kept).
pub fn ghost_state(inner: &StateVec, normal: [f64; 2], tag: BoundaryTag) -> StateVec {
    match tag {
        BoundaryTag::Outflow => *inner,
        BoundaryTag::Wall => {
            let qn = inner[1] * normal[0] + inner[2] * normal[1];
            [inner[0], inner[1] - 2.0 * qn * normal[0], inner[2] - 2.0 * qn * normal[1], inner[3]]
        }
    }
}

/// Speeds below this count as a still or dry state for the time step.
const STILL_SPEED: f64 = 1e-14;

/// `dt = cfl · (1/6) · min H / max a` (or without the 1/6 in
/// [`CflMode::Replace`]), falling back to `dt_max` when nothing moves.
pub fn compute_dt(speeds: &[EdgeSpeeds], mesh: &TriMesh, p: &PhysParams, dt_max: f64) -> f64 {
    compute_dt_with_height(speeds, mesh.min_height(), p, dt_max)
}

fn compute_dt_with_height(speeds: &[EdgeSpeeds], min_height: f64, p: &PhysParams, dt_max: f64) -> f64 {
    let a_max = speeds.iter().map(EdgeSpeeds::max).fold(0.0, f64::max);
    if a_max < STILL_SPEED {
        return dt_max;
    }
    let factor = match p.cfl_mode {
        CflMode::Multiply => p.cfl / 6.0,
        CflMode::Replace => p.cfl,
    };
    factor * min_height / a_max
}

/// Global quantities recorded after every step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub step: usize,
    /// `Σ |T_j| q̄1`.
    pub mass: f64,
    /// `Σ |T_j| q̄4`.
    pub solute: f64,
    pub max_speed: f64,
    pub min_depth: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunState {
    pub t: f64,
    pub steps: usize,
    pub field: ConservedField,
}

impl RunState {
    pub fn new(field: ConservedField) -> Self {
        Self { t: 0.0, steps: 0, field }
    }
}

pub fn diagnostics(state: &RunState, mesh: &TriMesh, p: &PhysParams) -> Diagnostics {
    let totals = state.field.totals(mesh);
    let mut max_speed: f64 = 0.0;
    let mut min_depth = f64::INFINITY;
    for q in &state.field.values {
        let (_, u, v) = depth_and_velocity(q, p);
        max_speed = max_speed.max(libm::hypot(u, v));
        min_depth = min_depth.min(q[0] - p.delta * q[3]);
    }
    Diagnostics { t: state.t, step: state.steps, mass: totals[0], solute: totals[3], max_speed, min_depth }
}

/// Reusable buffers and precomputed connectivity for one mesh.
pub struct Solver<'a> {
    mesh: &'a TriMesh,
    bathy: &'a Bathymetry,
    params: PhysParams,
    dt_max: f64,
    faces: FaceTable,
    min_height: f64,
    raw: CellGradients,
    limited: CellGradients,
    traces: MidpointStates,
    face_flux: Vec<StateVec>,
    speeds: Vec<EdgeSpeeds>,
    rhs: Vec<StateVec>,
}

/// Outcome of one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub max_speed: f64,
    pub corrected_cells: usize,
}

impl<'a> Solver<'a> {
    pub fn new(mesh: &'a TriMesh, bathy: &'a Bathymetry, params: PhysParams, dt_max: f64) -> Result<Self, SolverError> {
        params.validate()?;
        if !(dt_max > 0.0) {
            return Err(SolverError::Config(alloc::format!("dt_max must be positive (got {dt_max})")));
        }
        let faces = FaceTable::new(mesh)?;
        let n = mesh.num_cells();
        Ok(Self {
            mesh,
            bathy,
            params,
            dt_max,
            min_height: mesh.min_height(),
            raw: CellGradients::zeros(n),
            limited: CellGradients::zeros(n),
            traces: MidpointStates::zeros(n),
            face_flux: vec![[0.0; 4]; faces.faces.len()],
            speeds: vec![EdgeSpeeds::default(); faces.faces.len()],
            rhs: vec![[0.0; 4]; n],
            faces,
        })
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn mesh(&self) -> &TriMesh {
        self.mesh
    }

    /// Face speeds of the last evaluated right-hand side.
    pub fn speeds(&self) -> &[EdgeSpeeds] {
        &self.speeds
    }

    pub fn midpoint_states(&self) -> &MidpointStates {
        &self.traces
    }

    pub fn limited_gradients(&self) -> &CellGradients {
        &self.limited
    }

    /// Reconstruction and face fluxes for `values`; leaves the flux
    /// divergence in `self.rhs`.
    fn prepare(&mut self, values: &[StateVec], t: f64) -> Result<usize, SolverError> {
        for (j, q) in values.iter().enumerate() {
            let h = q[0] - self.params.delta * q[3];
            if h < -NEGATIVE_DEPTH_TOL || h.is_nan() {
                return Err(SolverError::Positivity { cell: j, depth: h, time: t });
            }
        }
        green_gauss_gradients_into(values, self.mesh, &mut self.raw);
        minmod_limit_into(&self.raw, self.mesh, &mut self.limited);
        evaluate_midpoint_states_into(values, &self.limited, self.mesh, &mut self.traces);
        let corrected =
            positivity_correct(&mut self.traces, &mut self.limited, values, &self.params).map_err(|e| match e {
                SolverError::Positivity { cell, depth, .. } => SolverError::Positivity { cell, depth, time: t },
                other => other,
            })?;
        evaluate_faces(&self.traces, &self.faces, self.mesh, &self.params, &mut self.face_flux, &mut self.speeds);
        gather_flux_divergence(&self.faces, self.mesh, &self.face_flux, &mut self.rhs);
        Ok(corrected)
    }

    /// Semi-discrete right-hand side: flux divergence plus topography
    /// source, friction excluded.
    pub fn explicit_rhs(&mut self, values: &[StateVec]) -> Result<Vec<StateVec>, SolverError> {
        self.prepare(values, f64::NAN)?;
        let mut out = self.rhs.clone();
        for (j, r) in out.iter_mut().enumerate() {
            let s = topography_source(j, values, &self.traces, &self.limited, self.bathy, self.mesh, &self.params);
            r[1] += s[0];
            r[2] += s[1];
        }
        Ok(out)
    }

    /// Time step the CFL rule gives for `values`.
    pub fn stable_dt(&mut self, values: &[StateVec]) -> Result<f64, SolverError> {
        self.prepare(values, f64::NAN)?;
        Ok(compute_dt_with_height(&self.speeds, self.min_height, &self.params, self.dt_max))
    }

    /// Advances `state` by one forward-Euler step, never past `t_stop`.
    pub fn step(&mut self, state: &mut RunState, t_stop: f64) -> Result<StepReport, SolverError> {
        let corrected = self.prepare(&state.field.values, state.t)?;
        let mut dt = compute_dt_with_height(&self.speeds, self.min_height, &self.params, self.dt_max);
        let remaining = t_stop - state.t;
        let clipped = dt >= remaining;
        if clipped {
            dt = remaining.max(0.0);
        }
        let p = self.params;
        let mut max_speed: f64 = 0.0;
        for j in 0..self.mesh.num_cells() {
            let s = topography_source(j, &state.field.values, &self.traces, &self.limited, self.bathy, self.mesh, &p);
            let r = &self.rhs[j];
            let q = &mut state.field.values[j];
            q[0] += dt * r[0];
            q[1] += dt * (r[1] + s[0]);
            q[2] += dt * (r[2] + s[1]);
            q[3] += dt * r[3];
            let h = q[0] - p.delta * q[3];
            let rho = if h > p.h_dry { q[0] / h } else { 1.0 };
            let m = friction_implicit_update([q[1], q[2]], h, rho, dt, &p);
            q[1] = m[0];
            q[2] = m[1];
            if !(q[0].is_finite() && q[1].is_finite() && q[2].is_finite() && q[3].is_finite()) {
                return Err(SolverError::NonFinite { cell: j, step: state.steps + 1 });
            }
            let (_, u, v) = depth_and_velocity(q, &p);
            max_speed = max_speed.max(libm::hypot(u, v));
        }
        state.t = if clipped { t_stop } else { state.t + dt };
        state.steps += 1;
        Ok(StepReport { dt, max_speed, corrected_cells: corrected })
    }
}

/// Snapshot schedule and stopping time of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunControls {
    pub t_end: f64,
    pub dt_max: f64,
    /// Snapshot cadence; `None` for none beyond the explicit times.
    pub snapshot_every: Option<f64>,
    pub snapshot_times: Vec<f64>,
}

impl RunControls {
    /// Sorted output times in `(0, t_end]`, always ending with `t_end`.
    pub fn output_times(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self.snapshot_times.iter().copied().filter(|&t| t > 0.0 && t < self.t_end).collect();
        if let Some(every) = self.snapshot_every.filter(|&e| e > 0.0) {
            let mut n = 1usize;
            loop {
                let t = every * n as f64;
                if t >= self.t_end * (1.0 - 1e-12) {
                    break;
                }
                times.push(t);
                n += 1;
            }
        }
        if self.t_end > 0.0 {
            times.push(self.t_end);
        }
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * self.t_end.max(1.0));
        times
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub step: usize,
    pub field: ConservedField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub history: Vec<Diagnostics>,
    pub final_state: RunState,
}

/// Integrates to `controls.t_end`, calling `on_snapshot` with the initial
/// state and every scheduled output time (each hit exactly).
pub fn run(
    mesh: &TriMesh,
    bathy: &Bathymetry,
    params: PhysParams,
    initial: ConservedField,
    controls: &RunControls,
    mut on_snapshot: impl FnMut(&RunState),
) -> Result<RunOutput, SolverError> {
    if !(controls.t_end >= 0.0 && controls.t_end.is_finite()) {
        return Err(SolverError::Config(alloc::format!("t_end must be nonnegative (got {})", controls.t_end)));
    }
    let mut solver = Solver::new(mesh, bathy, params, controls.dt_max)?;
    let mut state = RunState::new(initial);
    let mut history = vec![diagnostics(&state, mesh, &params)];
    on_snapshot(&state);
    for stop in controls.output_times() {
        while state.t < stop {
            solver.step(&mut state, stop)?;
            history.push(diagnostics(&state, mesh, &params));
        }
        on_snapshot(&state);
    }
    Ok(RunOutput { history, final_state: state })
}

/// Area-weighted error norms of a per-cell field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// `L1 = Σ|T||e| / Σ|T|`, `L2 = √(Σ|T|e² / Σ|T|)`, `L∞ = max|e|`.
pub fn error_norms(computed: &[f64], reference: &[f64], mesh: &TriMesh) -> Result<ErrorNorms, SolverError> {
    if computed.len() != reference.len() || computed.len() != mesh.num_cells() {
        return Err(SolverError::Config(alloc::format!(
            "field lengths {} and {} do not match {} cells",
            computed.len(),
            reference.len(),
            mesh.num_cells()
        )));
    }
    let (mut l1, mut l2, mut linf, mut area) = (0.0, 0.0, 0.0f64, 0.0);
    for ((c, r), a) in computed.iter().zip(reference).zip(mesh.areas()) {
        let e = (c - r).abs();
        l1 += a * e;
        l2 += a * e * e;
        linf = linf.max(e);
        area += a;
    }
    Ok(ErrorNorms { l1: l1 / area, l2: libm::sqrt(l2 / area), linf })
}
