//! Sectioned `key = value` run configuration.
//!
//! Parsing is two-pass: `[run]` selects a generator whose scenario supplies
//! every default, then the remaining sections override individual fields.
//! [`RunConfig::dump`] writes the fully resolved form, which parses back to
//! the same configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use swft_core::mesh::{BoundaryTag, BoxSide, Diagonal, Rect};
use swft_core::scenarios::{
    make_example1, make_example2, make_lake_at_rest, make_steady_custom, BottomSpec, DamWall, Example1Mode,
    InitialCondition, MeshSpec, Scenario, ScenarioKind,
};
use swft_core::simulation::RunControls;
use swft_core::sources::SteadyProfile;
use swft_core::state::{BathymetrySpec, CflMode, PhysParams};

use crate::error::Error;

/// Environment variable that replaces `[output] dir` at run time.
pub const OUT_DIR_ENV: &str = "SWFT_OUT_DIR";

const SECTIONS: &[(&str, &[&str])] = &[
    ("run", &["scenario", "scale", "mode", "q0", "slope", "c0"]),
    ("mesh", &["file", "nx", "ny", "x0", "x1", "y0", "y1", "diagonal", "jitter", "seed", "bathymetry"]),
    ("physics", &["g", "manning_n", "delta", "cfl", "cfl_mode", "epsilon", "h_dry"]),
    ("initial", &["kind", "h", "q2", "q3", "c", "w", "x_dam", "h_up", "c_up", "h_down", "c_down"]),
    ("boundary", &["x_min", "x_max", "y_min", "y_max", "dam", "dam_x", "breach_center", "breach_width"]),
    ("time", &["t_end", "dt_max", "snapshot_every", "snapshot_times"]),
    ("output", &["dir", "formats", "diagnostics"]),
];

#[derive(Clone, Debug, PartialEq)]
pub enum MeshSource {
    Structured { nx: usize, ny: usize, domain: Rect, diagonal: Diagonal, jitter: f64, seed: u64 },
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub enum BottomSource {
    Flat(f64),
    Plane {
        zx: f64,
        zy: f64,
        z0: f64,
    },
    Bump {
        cx: f64,
        cy: f64,
        radius: f64,
        amplitude: f64,
        base: f64,
    },
    /// One elevation per mesh vertex.
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Epsilon {
    /// `(mean edge length)⁴`.
    Mesh,
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyParams {
    pub q0: f64,
    pub slope: f64,
    pub c0: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    pub dir: String,
    pub csv: bool,
    pub vtk: bool,
    /// Per-step diagnostics table.
    pub diagnostics: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub scale: f64,
    pub mode: Example1Mode,
    pub steady: Option<SteadyParams>,
    pub mesh: MeshSource,
    pub bottom: BottomSource,
    pub params: PhysParams,
    pub epsilon: Epsilon,
    pub initial: InitialCondition,
    /// Tags of the `x_min, x_max, y_min, y_max` sides.
    pub boundary: [BoundaryTag; 4],
    pub dam: Option<DamWall>,
    pub time: RunControls,
    pub output: OutputConfig,
    /// Directory that relative file paths are resolved against.
    pub base_dir: PathBuf,
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries {
    map: BTreeMap<(String, String), Entry>,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

impl Entries {
    fn parse(text: &str) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        let mut section: Option<&str> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            if let Some(name) = s.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| err(line, "unterminated section header"))?.trim();
                if !SECTIONS.iter().any(|(sec, _)| *sec == name) {
                    return Err(err(line, format!("unknown section [{name}]")));
                }
                section = Some(SECTIONS.iter().find(|(sec, _)| *sec == name).unwrap().0);
                continue;
            }
            let sec = section.ok_or_else(|| err(line, "key outside of any section"))?;
            let (key, value) = s.split_once('=').ok_or_else(|| err(line, "expected `key = value`"))?;
            let key = key.trim();
            let keys = SECTIONS.iter().find(|(name, _)| *name == sec).unwrap().1;
            if !keys.contains(&key) {
                return Err(err(line, format!("unknown key `{key}` in [{sec}]")));
            }
            let id = (sec.to_string(), key.to_string());
            if let Some(prev) = map.get(&id) {
                let prev: &Entry = prev;
                return Err(err(line, format!("duplicate key `{key}` (first set on line {})", prev.line)));
            }
            map.insert(id, Entry { line, value: value.trim().to_string() });
        }
        Ok(Self { map })
    }

    fn get(&self, sec: &str, key: &str) -> Option<&Entry> {
        self.map.get(&(sec.to_string(), key.to_string()))
    }

    fn with<T>(&self, sec: &str, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, Error> {
        match self.get(sec, key) {
            None => Ok(None),
            Some(e) => parse(&e.value).map(Some).map_err(|m| err(e.line, format!("[{sec}] {key}: {m}"))),
        }
    }

    fn num(&self, sec: &str, key: &str) -> Result<Option<f64>, Error> {
        self.with(sec, key, parse_f64)
    }

    fn set_num(&self, sec: &str, key: &str, slot: &mut f64) -> Result<(), Error> {
        if let Some(v) = self.num(sec, key)? {
            *slot = v;
        }
        Ok(())
    }

    fn line(&self, sec: &str, key: &str) -> usize {
        self.get(sec, key).map_or(0, |e| e.line)
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("`{s}` is not true/false")),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| parse_f64(t.trim())).collect()
}

fn parse_tag(s: &str) -> Result<BoundaryTag, String> {
    s.parse().map_err(|_| format!("`{s}` is not wall/outflow"))
}

fn parse_bottom(s: &str) -> Result<BottomSource, String> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| format!("`{s}`: expected kind:values"))?;
    let nums = |n: usize| -> Result<Vec<f64>, String> {
        let v = parse_list(rest)?;
        if v.len() == n {
            Ok(v)
        } else {
            Err(format!("`{kind}` takes {n} values, got {}", v.len()))
        }
    };
    match kind.trim() {
        "flat" => Ok(BottomSource::Flat(nums(1)?[0])),
        "plane" => {
            let v = nums(3)?;
            Ok(BottomSource::Plane { zx: v[0], zy: v[1], z0: v[2] })
        }
        "bump" => {
            let v = nums(5)?;
            Ok(BottomSource::Bump { cx: v[0], cy: v[1], radius: v[2], amplitude: v[3], base: v[4] })
        }
        "file" if !rest.trim().is_empty() => Ok(BottomSource::File(PathBuf::from(rest.trim()))),
        other => Err(format!("unknown bathymetry kind `{other}` (flat, plane, bump, file)")),
    }
}

/// Shortest representation that parses back to the same `f64`.
fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(", ")
}

fn diagonal_str(d: Diagonal) -> &'static str {
    match d {
        Diagonal::Uniform => "uniform",
        Diagonal::Mirrored => "mirrored",
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base)
    }

    /// Parses `text`; relative paths are taken relative to `base_dir`.
    pub fn parse(text: &str, base_dir: PathBuf) -> Result<Self, Error> {
        let e = Entries::parse(text)?;
        let scenario = match e.get("run", "scenario") {
            None => return Err(err(0, "[run] scenario is required")),
            Some(en) => ScenarioKind::parse(&en.value).ok_or_else(|| {
                err(
                    en.line,
                    format!("unknown scenario `{}` (example1, example2, lake_at_rest, steady_custom)", en.value),
                )
            })?,
        };
        let scale = e.num("run", "scale")?.unwrap_or(10.0);
        if !(scale > 0.0) {
            return Err(err(e.line("run", "scale"), "[run] scale must be positive"));
        }
        let mode = e
            .with("run", "mode", |s| {
                Example1Mode::parse(s).ok_or_else(|| format!("`{s}` is not paper_value/consistent"))
            })?
            .unwrap_or(Example1Mode::PaperValue);
        for key in ["q0", "slope", "c0"] {
            if scenario != ScenarioKind::SteadyCustom && e.get("run", key).is_some() {
                return Err(err(e.line("run", key), format!("[run] {key} only applies to steady_custom")));
            }
        }

        let generated =
            |line: usize, r: Result<Scenario, swft_core::SolverError>| r.map_err(|x| err(line, x.to_string()));
        let run_line = e.line("run", "scenario");
        let (base, steady) = match scenario {
            ScenarioKind::Example1 => {
                let s = generated(run_line, make_example1(scale, mode))?;
                let prof = s.steady.expect("sloped scenario");
                (s, Some(SteadyParams { q0: prof.q0, slope: prof.slope, c0: prof.c0 }))
            }
            ScenarioKind::Example2 => (generated(run_line, make_example2(scale))?, None),
            ScenarioKind::LakeAtRest => (generated(run_line, make_lake_at_rest(0.2))?, None),
            ScenarioKind::SteadyCustom => {
                let reference = generated(run_line, make_example1(scale, Example1Mode::Consistent))?;
                let prof = reference.steady.expect("sloped scenario");
                let sp = SteadyParams {
                    q0: e.num("run", "q0")?.unwrap_or(prof.q0),
                    slope: e.num("run", "slope")?.unwrap_or(prof.slope),
                    c0: e.num("run", "c0")?.unwrap_or(prof.c0),
                };
                let n = e.num("physics", "manning_n")?.unwrap_or(reference.params.manning_n);
                let delta = e.num("physics", "delta")?.unwrap_or(reference.params.delta);
                let MeshSpec::Structured { nx, ny, domain, .. } = reference.mesh else { unreachable!() };
                let s = make_steady_custom(sp.q0, n, sp.slope, sp.c0, delta, nx, ny, domain)
                    .map_err(|x| err(e.line("run", "q0").max(run_line), x.to_string()))?;
                (s, Some(sp))
            }
        };
        let mut cfg = Self::from_scenario(&base, scale, mode, steady, base_dir)?;
        cfg.apply(&e)?;
        cfg.check(&e)?;
        Ok(cfg)
    }

    fn from_scenario(
        s: &Scenario,
        scale: f64,
        mode: Example1Mode,
        steady: Option<SteadyParams>,
        base_dir: PathBuf,
    ) -> Result<Self, Error> {
        let mesh = match &s.mesh {
            MeshSpec::Structured { nx, ny, domain, diagonal, jitter, seed } => MeshSource::Structured {
                nx: *nx,
                ny: *ny,
                domain: *domain,
                diagonal: *diagonal,
                jitter: *jitter,
                seed: *seed,
            },
            MeshSpec::Provided(_) => return Err(err(0, "generators always produce structured meshes")),
        };
        let bottom = match &s.bottom {
            BottomSpec::Table(BathymetrySpec::Flat(z)) => BottomSource::Flat(*z),
            BottomSpec::Table(BathymetrySpec::Plane { zx, zy, z0 }) => {
                BottomSource::Plane { zx: *zx, zy: *zy, z0: *z0 }
            }
            BottomSpec::CosineBump { center, radius, amplitude, base } => {
                BottomSource::Bump { cx: center[0], cy: center[1], radius: *radius, amplitude: *amplitude, base: *base }
            }
            BottomSpec::Table(BathymetrySpec::Vertex(_)) => {
                return Err(err(0, "unexpected per-vertex generator bottom"))
            }
        };
        let mut boundary = [BoundaryTag::Wall; 4];
        for (side, tag) in &s.boundary {
            let idx: &[usize] = match side {
                BoxSide::All => &[0, 1, 2, 3],
                BoxSide::XMin => &[0],
                BoxSide::XMax => &[1],
                BoxSide::YMin => &[2],
                BoxSide::YMax => &[3],
            };
            for &i in idx {
                boundary[i] = *tag;
            }
        }
        Ok(Self {
            scenario: s.kind,
            scale,
            mode,
            steady,
            mesh,
            bottom,
            params: s.params,
            epsilon: s.epsilon.map_or(Epsilon::Mesh, Epsilon::Fixed),
            initial: s.initial,
            boundary,
            dam: s.dam,
            time: s.controls.clone(),
            output: OutputConfig { dir: s.output_dir.clone(), csv: true, vtk: true, diagnostics: true },
            base_dir,
        })
    }

    fn apply(&mut self, e: &Entries) -> Result<(), Error> {
        // [mesh]
        if let Some(path) = e.with("mesh", "file", |s| Ok(PathBuf::from(s)))? {
            for key in ["nx", "ny", "x0", "x1", "y0", "y1", "diagonal", "jitter", "seed"] {
                if e.get("mesh", key).is_some() {
                    return Err(err(e.line("mesh", key), format!("[mesh] {key} conflicts with [mesh] file")));
                }
            }
            self.mesh = MeshSource::File(path);
        }
        if let MeshSource::Structured { nx, ny, domain, diagonal, jitter, seed } = &mut self.mesh {
            if let Some(v) = e.with("mesh", "nx", parse_usize)? {
                *nx = v;
            }
            if let Some(v) = e.with("mesh", "ny", parse_usize)? {
                *ny = v;
            }
            e.set_num("mesh", "x0", &mut domain.x0)?;
            e.set_num("mesh", "x1", &mut domain.x1)?;
            e.set_num("mesh", "y0", &mut domain.y0)?;
            e.set_num("mesh", "y1", &mut domain.y1)?;
            if let Some(d) = e.with("mesh", "diagonal", |s| match s {
                "uniform" => Ok(Diagonal::Uniform),
                "mirrored" => Ok(Diagonal::Mirrored),
                _ => Err(format!("`{s}` is not uniform/mirrored")),
            })? {
                *diagonal = d;
            }
            e.set_num("mesh", "jitter", jitter)?;
            if let Some(v) = e.with("mesh", "seed", |s| s.parse::<u64>().map_err(|_| format!("`{s}` is not a seed")))? {
                *seed = v;
            }
        }
        if let Some(b) = e.with("mesh", "bathymetry", parse_bottom)? {
            self.bottom = b;
        }

        // [physics]
        let p = &mut self.params;
        e.set_num("physics", "g", &mut p.g)?;
        e.set_num("physics", "manning_n", &mut p.manning_n)?;
        e.set_num("physics", "delta", &mut p.delta)?;
        e.set_num("physics", "cfl", &mut p.cfl)?;
        e.set_num("physics", "h_dry", &mut p.h_dry)?;
        if let Some(m) = e.with("physics", "cfl_mode", |s| match s {
            "multiply" => Ok(CflMode::Multiply),
            "replace" => Ok(CflMode::Replace),
            _ => Err(format!("`{s}` is not multiply/replace")),
        })? {
            p.cfl_mode = m;
        }
        if let Some(eps) = e.with("physics", "epsilon", |s| match s {
            "mesh" => Ok(Epsilon::Mesh),
            _ => parse_f64(s).map(Epsilon::Fixed),
        })? {
            self.epsilon = eps;
        }

        // [initial]
        if let Some(kind) = e.get("initial", "kind") {
            self.initial = match kind.value.as_str() {
                "uniform" => InitialCondition::Uniform { h: 1.0, q2: 0.0, q3: 0.0, c: 0.0 },
                "surface" => InitialCondition::Surface { w: 1.0, c: 0.0 },
                "dam_break" => {
                    InitialCondition::DamBreak { x_dam: 0.0, h_up: 1.0, c_up: 0.0, h_down: 0.0, c_down: 0.0 }
                }
                other => {
                    return Err(err(kind.line, format!("unknown initial kind `{other}` (uniform, surface, dam_break)")))
                }
            };
            if let (InitialCondition::DamBreak { x_dam, .. }, Some(d)) = (&mut self.initial, self.dam) {
                *x_dam = d.x;
            }
        }
        let allowed: &[&str] = match &mut self.initial {
            InitialCondition::Uniform { h, q2, q3, c } => {
                e.set_num("initial", "h", h)?;
                e.set_num("initial", "q2", q2)?;
                e.set_num("initial", "q3", q3)?;
                e.set_num("initial", "c", c)?;
                &["kind", "h", "q2", "q3", "c"]
            }
            InitialCondition::Surface { w, c } => {
                e.set_num("initial", "w", w)?;
                e.set_num("initial", "c", c)?;
                &["kind", "w", "c"]
            }
            InitialCondition::DamBreak { x_dam, h_up, c_up, h_down, c_down } => {
                e.set_num("initial", "x_dam", x_dam)?;
                e.set_num("initial", "h_up", h_up)?;
                e.set_num("initial", "c_up", c_up)?;
                e.set_num("initial", "h_down", h_down)?;
                e.set_num("initial", "c_down", c_down)?;
                &["kind", "x_dam", "h_up", "c_up", "h_down", "c_down"]
            }
        };
        for ((sec, key), entry) in &e.map {
            if sec == "initial" && !allowed.contains(&key.as_str()) {
                return Err(err(entry.line, format!("[initial] {key} does not apply to this initial kind")));
            }
        }

        // [boundary]
        for (i, key) in ["x_min", "x_max", "y_min", "y_max"].iter().enumerate() {
            if let Some(tag) = e.with("boundary", key, parse_tag)? {
                self.boundary[i] = tag;
            }
        }
        if let Some(on) = e.with("boundary", "dam", parse_bool)? {
            self.dam = match (on, self.dam) {
                (false, _) => None,
                (true, Some(d)) => Some(d),
                (true, None) => Some(DamWall { x: 0.0, breach_center: 0.0, breach_width: 0.0 }),
            };
        }
        match &mut self.dam {
            Some(d) => {
                e.set_num("boundary", "dam_x", &mut d.x)?;
                e.set_num("boundary", "breach_center", &mut d.breach_center)?;
                e.set_num("boundary", "breach_width", &mut d.breach_width)?;
            }
            None => {
                for key in ["dam_x", "breach_center", "breach_width"] {
                    if e.get("boundary", key).is_some() {
                        return Err(err(e.line("boundary", key), format!("[boundary] {key} needs dam = true")));
                    }
                }
            }
        }

        // [time]
        e.set_num("time", "t_end", &mut self.time.t_end)?;
        e.set_num("time", "dt_max", &mut self.time.dt_max)?;
        if let Some(v) =
            e.with("time", "snapshot_every", |s| if s == "none" { Ok(None) } else { parse_f64(s).map(Some) })?
        {
            self.time.snapshot_every = v;
        }
        if let Some(v) = e.with("time", "snapshot_times", parse_list)? {
            self.time.snapshot_times = v;
        }

        // [output]
        if let Some(dir) = e.with("output", "dir", |s| Ok(s.to_string()))? {
            self.output.dir = dir;
        }
        if let Some((csv, vtk)) = e.with("output", "formats", |s| {
            let mut f = (false, false);
            for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                match t {
                    "csv" => f.0 = true,
                    "vtk" => f.1 = true,
                    "none" => {}
                    _ => return Err(format!("unknown format `{t}` (csv, vtk)")),
                }
            }
            Ok(f)
        })? {
            self.output.csv = csv;
            self.output.vtk = vtk;
        }
        if let Some(v) = e.with("output", "diagnostics", parse_bool)? {
            self.output.diagnostics = v;
        }
        Ok(())
    }

    fn check(&self, e: &Entries) -> Result<(), Error> {
        let p = &self.params;
        let fail = |sec: &str, key: &str, m: &str| Err(err(e.line(sec, key), format!("[{sec}] {key}: {m}")));
        if !(p.cfl > 0.0 && p.cfl <= 1.0) {
            return fail("physics", "cfl", "must satisfy 0 < cfl <= 1");
        }
        if !(p.g > 0.0) {
            return fail("physics", "g", "must be positive");
        }
        if p.manning_n < 0.0 {
            return fail("physics", "manning_n", "must be nonnegative");
        }
        if p.delta < 0.0 {
            return fail("physics", "delta", "must be nonnegative");
        }
        if p.h_dry < 0.0 {
            return fail("physics", "h_dry", "must be nonnegative");
        }
        if let Epsilon::Fixed(v) = self.epsilon {
            if !(v > 0.0) {
                return fail("physics", "epsilon", "must be positive");
            }
        }
        if let MeshSource::Structured { nx, ny, domain, jitter, .. } = &self.mesh {
            if *nx == 0 || *ny == 0 {
                return fail("mesh", if *nx == 0 { "nx" } else { "ny" }, "must be at least 1");
            }
            if !(domain.x1 > domain.x0 && domain.y1 > domain.y0) {
                return fail("mesh", "x1", "domain must have x1 > x0 and y1 > y0");
            }
            if !(0.0..0.5).contains(jitter) {
                return fail("mesh", "jitter", "must lie in [0, 0.5)");
            }
        }
        if !(self.time.t_end >= 0.0) {
            return fail("time", "t_end", "must be nonnegative");
        }
        if !(self.time.dt_max > 0.0) {
            return fail("time", "dt_max", "must be positive");
        }
        if matches!(self.time.snapshot_every, Some(v) if v <= 0.0) {
            return fail("time", "snapshot_every", "must be positive");
        }
        if let Some(d) = self.dam {
            if let MeshSource::Structured { domain, .. } = &self.mesh {
                if !(d.breach_width > 0.0 && d.breach_width < domain.height()) {
                    return fail("boundary", "breach_width", "breach must be narrower than the domain");
                }
                if !(d.x > domain.x0 && d.x < domain.x1) {
                    return fail("boundary", "dam_x", "dam must lie inside the domain");
                }
            }
        }
        if let InitialCondition::Uniform { h, c, .. } = self.initial {
            if h < 0.0 || c < 0.0 {
                return fail("initial", "h", "depth and concentration must be nonnegative");
            }
        }
        if self.output.dir.is_empty() {
            return fail("output", "dir", "must not be empty");
        }
        Ok(())
    }

    fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    /// Output directory, honoring [`OUT_DIR_ENV`].
    pub fn output_dir(&self) -> PathBuf {
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.resolve(Path::new(&self.output.dir)),
        }
    }

    /// Builds the scenario, reading mesh and bathymetry files as needed.
    pub fn scenario(&self) -> Result<Scenario, Error> {
        let mesh = match &self.mesh {
            MeshSource::Structured { nx, ny, domain, diagonal, jitter, seed } => MeshSpec::Structured {
                nx: *nx,
                ny: *ny,
                domain: *domain,
                diagonal: *diagonal,
                jitter: *jitter,
                seed: *seed,
            },
            MeshSource::File(path) => MeshSpec::Provided(crate::meshio::read_mesh(&self.resolve(path))?),
        };
        let bottom = match &self.bottom {
            BottomSource::Flat(z) => BottomSpec::Table(BathymetrySpec::Flat(*z)),
            BottomSource::Plane { zx, zy, z0 } => {
                BottomSpec::Table(BathymetrySpec::Plane { zx: *zx, zy: *zy, z0: *z0 })
            }
            BottomSource::Bump { cx, cy, radius, amplitude, base } => {
                BottomSpec::CosineBump { center: [*cx, *cy], radius: *radius, amplitude: *amplitude, base: *base }
            }
            BottomSource::File(path) => {
                BottomSpec::Table(BathymetrySpec::Vertex(crate::meshio::read_vertex_values(&self.resolve(path))?))
            }
        };
        let tags = self.boundary;
        let boundary = if tags.iter().all(|&t| t == tags[0]) {
            vec![(BoxSide::All, tags[0])]
        } else {
            vec![(BoxSide::XMin, tags[0]), (BoxSide::XMax, tags[1]), (BoxSide::YMin, tags[2]), (BoxSide::YMax, tags[3])]
        };
        let steady = match self.steady {
            Some(sp) => Some(SteadyProfile::new(sp.q0, self.params.manning_n, sp.slope, sp.c0, self.params.delta)?),
            None => None,
        };
        Ok(Scenario {
            kind: self.scenario,
            mesh,
            bottom,
            params: self.params,
            epsilon: match self.epsilon {
                Epsilon::Mesh => None,
                Epsilon::Fixed(v) => Some(v),
            },
            initial: self.initial,
            boundary,
            dam: self.dam,
            controls: self.time.clone(),
            output_dir: self.output_dir().to_string_lossy().into_owned(),
            steady,
        })
    }

    /// Canonical text form with every key resolved.
    pub fn dump(&self) -> String {
        let mut o = String::new();
        let kv = |o: &mut String, k: &str, v: String| {
            let _ = writeln!(o, "{k} = {v}");
        };
        o.push_str("[run]\n");
        kv(&mut o, "scenario", self.scenario.as_str().to_string());
        kv(&mut o, "scale", fmt_f64(self.scale));
        kv(&mut o, "mode", self.mode.as_str().to_string());
        if let (ScenarioKind::SteadyCustom, Some(sp)) = (self.scenario, self.steady) {
            kv(&mut o, "q0", fmt_f64(sp.q0));
            kv(&mut o, "slope", fmt_f64(sp.slope));
            kv(&mut o, "c0", fmt_f64(sp.c0));
        }

        o.push_str("\n[mesh]\n");
        match &self.mesh {
            MeshSource::Structured { nx, ny, domain, diagonal, jitter, seed } => {
                kv(&mut o, "nx", nx.to_string());
                kv(&mut o, "ny", ny.to_string());
                kv(&mut o, "x0", fmt_f64(domain.x0));
                kv(&mut o, "x1", fmt_f64(domain.x1));
                kv(&mut o, "y0", fmt_f64(domain.y0));
                kv(&mut o, "y1", fmt_f64(domain.y1));
                kv(&mut o, "diagonal", diagonal_str(*diagonal).to_string());
                kv(&mut o, "jitter", fmt_f64(*jitter));
                kv(&mut o, "seed", seed.to_string());
            }
            MeshSource::File(path) => kv(&mut o, "file", path.display().to_string()),
        }
        let bottom = match &self.bottom {
            BottomSource::Flat(z) => format!("flat:{}", fmt_f64(*z)),
            BottomSource::Plane { zx, zy, z0 } => format!("plane:{}", fmt_list(&[*zx, *zy, *z0])),
            BottomSource::Bump { cx, cy, radius, amplitude, base } => {
                format!("bump:{}", fmt_list(&[*cx, *cy, *radius, *amplitude, *base]))
            }
            BottomSource::File(path) => format!("file:{}", path.display()),
        };
        kv(&mut o, "bathymetry", bottom);

        o.push_str("\n[physics]\n");
        let p = &self.params;
        kv(&mut o, "g", fmt_f64(p.g));
        kv(&mut o, "manning_n", fmt_f64(p.manning_n));
        kv(&mut o, "delta", fmt_f64(p.delta));
        kv(&mut o, "cfl", fmt_f64(p.cfl));
        kv(
            &mut o,
            "cfl_mode",
            match p.cfl_mode {
                CflMode::Multiply => "multiply",
                CflMode::Replace => "replace",
            }
            .to_string(),
        );
        kv(
            &mut o,
            "epsilon",
            match self.epsilon {
                Epsilon::Mesh => "mesh".to_string(),
                Epsilon::Fixed(v) => fmt_f64(v),
            },
        );
        kv(&mut o, "h_dry", fmt_f64(p.h_dry));

        o.push_str("\n[initial]\n");
        match self.initial {
            InitialCondition::Uniform { h, q2, q3, c } => {
                kv(&mut o, "kind", "uniform".into());
                kv(&mut o, "h", fmt_f64(h));
                kv(&mut o, "q2", fmt_f64(q2));
                kv(&mut o, "q3", fmt_f64(q3));
                kv(&mut o, "c", fmt_f64(c));
            }
            InitialCondition::Surface { w, c } => {
                kv(&mut o, "kind", "surface".into());
                kv(&mut o, "w", fmt_f64(w));
                kv(&mut o, "c", fmt_f64(c));
            }
            InitialCondition::DamBreak { x_dam, h_up, c_up, h_down, c_down } => {
                kv(&mut o, "kind", "dam_break".into());
                kv(&mut o, "x_dam", fmt_f64(x_dam));
                kv(&mut o, "h_up", fmt_f64(h_up));
                kv(&mut o, "c_up", fmt_f64(c_up));
                kv(&mut o, "h_down", fmt_f64(h_down));
                kv(&mut o, "c_down", fmt_f64(c_down));
            }
        }

        o.push_str("\n[boundary]\n");
        for (key, tag) in ["x_min", "x_max", "y_min", "y_max"].iter().zip(self.boundary) {
            kv(&mut o, key, tag.as_str().to_string());
        }
        match self.dam {
            Some(d) => {
                kv(&mut o, "dam", "true".into());
                kv(&mut o, "dam_x", fmt_f64(d.x));
                kv(&mut o, "breach_center", fmt_f64(d.breach_center));
                kv(&mut o, "breach_width", fmt_f64(d.breach_width));
            }
            None => kv(&mut o, "dam", "false".into()),
        }

        o.push_str("\n[time]\n");
        kv(&mut o, "t_end", fmt_f64(self.time.t_end));
        kv(&mut o, "dt_max", fmt_f64(self.time.dt_max));
        kv(&mut o, "snapshot_every", self.time.snapshot_every.map_or_else(|| "none".to_string(), fmt_f64));
        kv(&mut o, "snapshot_times", fmt_list(&self.time.snapshot_times));

        o.push_str("\n[output]\n");
        kv(&mut o, "dir", self.output.dir.clone());
        let formats: Vec<&str> = [(self.output.csv, "csv"), (self.output.vtk, "vtk")]
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, n)| *n)
            .collect();
        kv(&mut o, "formats", if formats.is_empty() { "none".to_string() } else { formats.join(", ") });
        kv(&mut o, "diagnostics", self.output.diagnostics.to_string());
        o
    }
}
