//! Built-in scenario generators: uniform flow down a slope, a partial dam
//! break over a dry bed, and a lake at rest over a bump.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::SolverError;
use crate::mesh::{
    build_jittered_mesh, build_structured_mesh_with, classify_boundaries, BoundaryTag, BoxSide, Diagonal, Point, Rect,
    TriMesh,
};
use crate::simulation::{run, RunControls, RunOutput, RunState};
use crate::sources::SteadyProfile;
use crate::state::{build_bathymetry, Bathymetry, BathymetrySpec, ConservedField, PhysParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    Example1,
    Example2,
    LakeAtRest,
    SteadyCustom,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Example1 => "example1",
            ScenarioKind::Example2 => "example2",
            ScenarioKind::LakeAtRest => "lake_at_rest",
            ScenarioKind::SteadyCustom => "steady_custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "example1" => Some(ScenarioKind::Example1),
            "example2" => Some(ScenarioKind::Example2),
            "lake_at_rest" => Some(ScenarioKind::LakeAtRest),
            "steady_custom" => Some(ScenarioKind::SteadyCustom),
            _ => None,
        }
    }
}

/// Which `(h0, r0)` pairing the sloped steady flow uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example1Mode {
    /// Clean water (`c0 = 0`, `r0 = 1`), giving `h0 = 0.251189`.
    PaperValue,
    /// `c0 = 1`, `r0 = 1 + Δ`, with `h0` from the balance.
    Consistent,
}

impl Example1Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Example1Mode::PaperValue => "paper_value",
            Example1Mode::Consistent => "consistent",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper_value" => Some(Example1Mode::PaperValue),
            "consistent" => Some(Example1Mode::Consistent),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeshSpec {
    /// Structured rectangle split, with interior vertices jittered by
    /// `jitter` times the shortest edge (0 for none).
    Structured { nx: usize, ny: usize, domain: Rect, diagonal: Diagonal, jitter: f64, seed: u64 },
    /// A mesh loaded elsewhere.
    Provided(TriMesh),
}

#[derive(Clone, Debug, PartialEq)]
pub enum BottomSpec {
    Table(BathymetrySpec),
    /// `Z = base + amplitude · ½(1 + cos(π ρ / radius))` for `ρ < radius`.
    CosineBump {
        center: Point,
        radius: f64,
        amplitude: f64,
        base: f64,
    },
}

impl BottomSpec {
    fn resolve(&self, mesh: &TriMesh) -> BathymetrySpec {
        match self {
            BottomSpec::Table(spec) => spec.clone(),
            BottomSpec::CosineBump { center, radius, amplitude, base } => BathymetrySpec::Vertex(
                mesh.vertices()
                    .iter()
                    .map(|v| {
                        let rho = libm::hypot(v[0] - center[0], v[1] - center[1]);
                        if rho < *radius {
                            base + amplitude * 0.5 * (1.0 + libm::cos(core::f64::consts::PI * rho / radius))
                        } else {
                            *base
                        }
                    })
                    .collect(),
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialCondition {
    /// Constant conserved state built from depth, discharges `q2 = h u r`,
    /// `q3 = h v r` and concentration.
    Uniform { h: f64, q2: f64, q3: f64, c: f64 },
    /// Flat surface `w` at rest with constant concentration.
    Surface { w: f64, c: f64 },
    /// Still water split by the line `x = x_dam`.
    DamBreak { x_dam: f64, h_up: f64, c_up: f64, h_down: f64, c_down: f64 },
}

/// Internal wall along `x = x` with an opening of `breach_width` centered
/// at `y = breach_center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DamWall {
    pub x: f64,
    pub breach_center: f64,
    pub breach_width: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub mesh: MeshSpec,
    pub bottom: BottomSpec,
    pub params: PhysParams,
    /// Fixed desingularization constant; `None` ties it to the mesh size.
    pub epsilon: Option<f64>,
    pub initial: InitialCondition,
    pub boundary: Vec<(BoxSide, BoundaryTag)>,
    pub dam: Option<DamWall>,
    pub controls: RunControls,
    pub output_dir: String,
    /// Exact solution of the sloped-flow cases.
    pub steady: Option<SteadyProfile>,
}

/// Everything a run needs, built from a [`Scenario`].
#[derive(Clone, Debug)]
pub struct Setup {
    pub mesh: TriMesh,
    pub bathy: Bathymetry,
    pub params: PhysParams,
    pub field: ConservedField,
}

impl Setup {
    pub fn run(&self, controls: &RunControls, on_snapshot: impl FnMut(&RunState)) -> Result<RunOutput, SolverError> {
        run(&self.mesh, &self.bathy, self.params, self.field.clone(), controls, on_snapshot)
    }
}

const EXAMPLE1_DOMAIN: Rect = Rect::new(0.0, 10.0, 0.0, 5.0);
const EXAMPLE2_DOMAIN: Rect = Rect::new(0.0, 500.0, 0.0, 300.0);

fn check_scale(scale: f64) -> Result<(), SolverError> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(SolverError::Config(alloc::format!("resolution scale must be positive (got {scale})")))
    }
}

fn sloped_flow(
    kind: ScenarioKind,
    profile: SteadyProfile,
    params: PhysParams,
    nx: usize,
    ny: usize,
    domain: Rect,
) -> Scenario {
    Scenario {
        kind,
        mesh: MeshSpec::Structured { nx, ny, domain, diagonal: Diagonal::Uniform, jitter: 0.1, seed: 1 },
        bottom: BottomSpec::Table(BathymetrySpec::Plane { zx: -profile.slope, zy: 0.0, z0: profile.slope * domain.x1 }),
        params,
        epsilon: None,
        initial: InitialCondition::Uniform { h: profile.h0, q2: profile.q0, q3: 0.0, c: profile.c0 },
        boundary: vec![
            (BoxSide::XMin, BoundaryTag::Outflow),
            (BoxSide::XMax, BoundaryTag::Outflow),
            (BoxSide::YMin, BoundaryTag::Wall),
            (BoxSide::YMax, BoundaryTag::Wall),
        ],
        dam: None,
        controls: RunControls { t_end: 100.0, dt_max: 1.0, snapshot_every: None, snapshot_times: vec![] },
        output_dir: String::from("out"),
        steady: Some(profile),
    }
}

/// Uniform flow down the `[0, 10] × [0, 5]` slope with `q0 = 0.1`,
/// `n = 0.1`, slope magnitude `0.01` and `Δ = 0.1`. The mean cell area is
/// `2·10⁻³ · scale`.
pub fn make_example1(scale: f64, mode: Example1Mode) -> Result<Scenario, SolverError> {
    check_scale(scale)?;
    let params = PhysParams { manning_n: 0.1, delta: 0.1, ..PhysParams::default() };
    let c0 = match mode {
        Example1Mode::PaperValue => 0.0,
        Example1Mode::Consistent => 1.0,
    };
    let profile = SteadyProfile::new(0.1, params.manning_n, 0.01, c0, params.delta)?;
    let cells = EXAMPLE1_DOMAIN.area() / (2e-3 * scale);
    let ny = (libm::round(libm::sqrt(cells / 4.0)) as usize).max(1);
    Ok(sloped_flow(ScenarioKind::Example1, profile, params, 2 * ny, ny, EXAMPLE1_DOMAIN))
}

/// Sloped steady flow with arbitrary balance parameters.
pub fn make_steady_custom(
    q0: f64,
    manning_n: f64,
    slope: f64,
    c0: f64,
    delta: f64,
    nx: usize,
    ny: usize,
    domain: Rect,
) -> Result<Scenario, SolverError> {
    let params = PhysParams { manning_n, delta, ..PhysParams::default() };
    let profile = SteadyProfile::new(q0, manning_n, slope, c0, delta)?;
    Ok(sloped_flow(ScenarioKind::SteadyCustom, profile, params, nx, ny, domain))
}

/// Grid dimensions for the dam break: `x = 250` and the default breach
/// edges `y = 112.5, 187.5` fall on vertex lines.
fn example2_dims(scale: f64) -> (usize, usize) {
    let cells = EXAMPLE2_DOMAIN.area() / (4.68 * scale);
    let ny = ((libm::round(libm::sqrt(0.3 * cells) / 8.0) as usize).max(1)) * 8;
    let nx = ((libm::round(cells / (4.0 * ny as f64)) as usize).max(1)) * 2;
    (nx, ny)
}

/// Partial dam break over a dry flat bed in a closed 500 × 300 basin. Mean
/// cell area is `4.68 · scale`.
pub fn make_example2(scale: f64) -> Result<Scenario, SolverError> {
    make_example2_with(scale, 250.0, 75.0)
}

pub fn make_example2_with(scale: f64, x_dam: f64, breach_width: f64) -> Result<Scenario, SolverError> {
    check_scale(scale)?;
    let domain = EXAMPLE2_DOMAIN;
    if !(breach_width > 0.0 && breach_width < domain.height()) {
        return Err(SolverError::Config(alloc::format!(
            "breach width {breach_width} must lie in (0, {})",
            domain.height()
        )));
    }
    if !(x_dam > domain.x0 && x_dam < domain.x1) {
        return Err(SolverError::Config(alloc::format!("dam position {x_dam} outside the domain")));
    }
    let (nx, ny) = example2_dims(scale);
    Ok(Scenario {
        kind: ScenarioKind::Example2,
        mesh: MeshSpec::Structured { nx, ny, domain, diagonal: Diagonal::Mirrored, jitter: 0.0, seed: 0 },
        bottom: BottomSpec::Table(BathymetrySpec::Flat(0.0)),
        params: PhysParams { manning_n: 0.1, delta: 0.1, ..PhysParams::default() },
        epsilon: Some(1e-12),
        initial: InitialCondition::DamBreak { x_dam, h_up: 10.0, c_up: 1.0, h_down: 0.0, c_down: 0.0 },
        boundary: vec![(BoxSide::All, BoundaryTag::Wall)],
        dam: Some(DamWall { x: x_dam, breach_center: 0.5 * (domain.y0 + domain.y1), breach_width }),
        controls: RunControls { t_end: 25.0, dt_max: 1.0, snapshot_every: None, snapshot_times: vec![5.0, 25.0] },
        output_dir: String::from("out"),
        steady: None,
    })
}

/// Closed `[0, 2] × [0, 1]` basin with a still surface at `w = 1` over a
/// cosine bump of the given amplitude centered at `(1, 0.5)`.
pub fn make_lake_at_rest(amplitude: f64) -> Result<Scenario, SolverError> {
    let surface = 1.0;
    if !(amplitude >= 0.0 && amplitude < surface) {
        return Err(SolverError::Config(alloc::format!(
            "bump amplitude {amplitude} must lie in [0, {surface}) to keep the bump submerged"
        )));
    }
    Ok(Scenario {
        kind: ScenarioKind::LakeAtRest,
        mesh: MeshSpec::Structured {
            nx: 40,
            ny: 20,
            domain: Rect::new(0.0, 2.0, 0.0, 1.0),
            diagonal: Diagonal::Uniform,
            jitter: 0.0,
            seed: 0,
        },
        bottom: BottomSpec::CosineBump { center: [1.0, 0.5], radius: 0.4, amplitude, base: 0.0 },
        params: PhysParams { manning_n: 0.0, delta: 0.1, ..PhysParams::default() },
        epsilon: None,
        initial: InitialCondition::Surface { w: surface, c: 0.5 },
        boundary: vec![(BoxSide::All, BoundaryTag::Wall)],
        dam: None,
        controls: RunControls { t_end: 10.0, dt_max: 1.0, snapshot_every: None, snapshot_times: vec![] },
        output_dir: String::from("out"),
        steady: None,
    })
}

pub fn make_scenario(kind: ScenarioKind, scale: f64, mode: Example1Mode) -> Result<Scenario, SolverError> {
    match kind {
        ScenarioKind::Example1 => make_example1(scale, mode),
        ScenarioKind::Example2 => make_example2(scale),
        ScenarioKind::LakeAtRest => make_lake_at_rest(0.2),
        ScenarioKind::SteadyCustom => {
            let ny = (libm::round(libm::sqrt(EXAMPLE1_DOMAIN.area() / (2e-3 * scale) / 4.0)) as usize).max(1);
            make_steady_custom(0.1, 0.1, 0.01, 1.0, 0.1, 2 * ny, ny, EXAMPLE1_DOMAIN)
        }
    }
}

impl Scenario {
    pub fn build_mesh(&self) -> Result<TriMesh, SolverError> {
        let raw = match &self.mesh {
            MeshSpec::Structured { nx, ny, domain, diagonal, jitter, seed } => {
                if *jitter > 0.0 {
                    build_jittered_mesh(*nx, *ny, *domain, *diagonal, *jitter, *seed)?
                } else {
                    build_structured_mesh_with(*nx, *ny, *domain, *diagonal)?
                }
            }
            MeshSpec::Provided(mesh) => mesh.clone(),
        };
        let mut mesh = classify_boundaries(&raw, &self.boundary, None)?;
        if let Some(dam) = self.dam {
            let tol = 1e-9 * mesh.bounding_box().diagonal();
            let half = 0.5 * dam.breach_width;
            mesh = mesh.with_internal_walls(|m| (m[0] - dam.x).abs() <= tol && (m[1] - dam.breach_center).abs() > half);
        }
        Ok(mesh)
    }

    fn check_initial(&self) -> Result<(), SolverError> {
        let bad = |what: &str| Err(SolverError::Config(alloc::format!("initial condition: {what}")));
        match self.initial {
            InitialCondition::Uniform { h, c, .. } => {
                if !(h >= 0.0) {
                    return bad("depth must be nonnegative");
                }
                if !(c >= 0.0) {
                    return bad("concentration must be nonnegative");
                }
            }
            InitialCondition::Surface { c, .. } => {
                if !(c >= 0.0) {
                    return bad("concentration must be nonnegative");
                }
            }
            InitialCondition::DamBreak { h_up, c_up, h_down, c_down, .. } => {
                if !(h_up >= 0.0 && h_down >= 0.0) {
                    return bad("depths must be nonnegative");
                }
                if !(c_up >= 0.0 && c_down >= 0.0) {
                    return bad("concentrations must be nonnegative");
                }
            }
        }
        Ok(())
    }

    pub fn instantiate(&self) -> Result<Setup, SolverError> {
        self.check_initial()?;
        let mesh = self.build_mesh()?;
        let bathy = build_bathymetry(&mesh, &self.bottom.resolve(&mesh))?;
        let params =
            PhysParams { epsilon: self.epsilon.unwrap_or_else(|| PhysParams::mesh_epsilon(&mesh)), ..self.params };
        params.validate()?;
        let delta = params.delta;
        let state = |h: f64, q2: f64, q3: f64, c: f64| [h * (1.0 + delta * c), q2, q3, h * c];
        let values = (0..mesh.num_cells())
            .map(|j| match self.initial {
                InitialCondition::Uniform { h, q2, q3, c } => state(h, q2, q3, c),
                InitialCondition::Surface { w, c } => state((w - bathy.center(j)).max(0.0), 0.0, 0.0, c),
                InitialCondition::DamBreak { x_dam, h_up, c_up, h_down, c_down } => {
                    if mesh.centroid(j)[0] < x_dam {
                        state(h_up, 0.0, 0.0, c_up)
                    } else {
                        state(h_down, 0.0, 0.0, c_down)
                    }
                }
            })
            .collect();
        Ok(Setup { mesh, bathy, params, field: ConservedField::new(values) })
    }

    /// Builds and integrates the scenario, collecting every snapshot.
    pub fn run(&self) -> Result<(Setup, RunOutput, Vec<RunState>), SolverError> {
        let setup = self.instantiate()?;
        let mut snapshots = Vec::new();
        let out = setup.run(&self.controls, |s| snapshots.push(s.clone()))?;
        Ok((setup, out, snapshots))
    }
}
