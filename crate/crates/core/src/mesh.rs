//! Triangulations and the geometric quantities the finite-volume scheme consumes.
//!
//! Every cell is stored counterclockwise. Side `k` of a cell runs from its
//! vertex `k` to vertex `k + 1 (mod 3)`, so its outward unit normal is the edge
//! vector rotated clockwise by a quarter turn.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::MeshError;

pub type Point = [f64; 2];

/// Boundary condition attached to a boundary side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    Wall,
    Outflow,
}

impl BoundaryTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryTag::Wall => "wall",
            BoundaryTag::Outflow => "outflow",
        }
    }
}

impl core::str::FromStr for BoundaryTag {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "wall" => Ok(BoundaryTag::Wall),
            "outflow" => Ok(BoundaryTag::Outflow),
            other => Err(MeshError::InvalidInput(format!("unknown boundary tag `{other}`"))),
        }
    }
}

/// What lies across a cell side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Neighbor {
    /// Interior side shared with `cell`, where it is that cell's side `side`.
    Cell { cell: usize, side: usize },
    /// Boundary side; `None` until boundaries are classified.
    Boundary(Option<BoundaryTag>),
}

impl Neighbor {
    pub fn cell(&self) -> Option<usize> {
        match *self {
            Neighbor::Cell { cell, .. } => Some(cell),
            Neighbor::Boundary(_) => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, Neighbor::Boundary(_))
    }
}

/// Geometry of one side of one cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellSide {
    pub vertices: [usize; 2],
    pub length: f64,
    /// Outward unit normal `(cos θ, sin θ)`.
    pub normal: [f64; 2],
    pub midpoint: Point,
    /// Triangle height over this side, `2|T| / |Γ|`.
    pub height: f64,
    pub neighbor: Neighbor,
}

/// Immutable triangulation with per-cell and per-side geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point>,
    cells: Vec<[usize; 3]>,
    areas: Vec<f64>,
    centroids: Vec<Point>,
    sides: Vec<[CellSide; 3]>,
}

/// Axis-aligned rectangle `(x0, x1) × (y0, y1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diagonal(&self) -> f64 {
        libm::hypot(self.width(), self.height())
    }
}

/// How each rectangle of a structured mesh is split into two triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagonal {
    /// Every rectangle split lower-left to upper-right.
    Uniform,
    /// Lower-left to upper-right below the horizontal centerline, mirrored
    /// (upper-left to lower-right) above it.
    Mirrored,
}

fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

impl TriMesh {
    /// Builds the mesh and all geometry from raw vertices and counterclockwise
    /// cells.
    pub fn new(vertices: Vec<Point>, cells: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        check_indices(&vertices, &cells)?;
        check_duplicates(&vertices)?;
        for (j, c) in cells.iter().enumerate() {
            let (a, b, d) = (vertices[c[0]], vertices[c[1]], vertices[c[2]]);
            let area = signed_area(a, b, d);
            let scale = dist2(a, b).max(dist2(b, d)).max(dist2(d, a));
            if !(area > 1e-14 * scale) {
                let message = if area < 0.0 {
                    "clockwise vertex order".to_string()
                } else {
                    format!("degenerate triangle (area {area:e})")
                };
                return Err(MeshError::Geometry { cell: j, message });
            }
        }
        let neighbors = build_adjacency(&cells, true)?;
        Ok(Self::assemble(vertices, cells, neighbors))
    }

    /// Computes geometry without validating orientation, duplicates or
    /// manifoldness. Inverted cells get negative areas; use
    /// [`validate_mesh`] to inspect the result.
    pub fn from_raw_unchecked(vertices: Vec<Point>, cells: Vec<[usize; 3]>) -> Self {
        let neighbors =
            build_adjacency(&cells, false).unwrap_or_else(|_| vec![[Neighbor::Boundary(None); 3]; cells.len()]);
        Self::assemble(vertices, cells, neighbors)
    }

    fn assemble(vertices: Vec<Point>, cells: Vec<[usize; 3]>, neighbors: Vec<[Neighbor; 3]>) -> Self {
        let mut areas = Vec::with_capacity(cells.len());
        let mut centroids = Vec::with_capacity(cells.len());
        let mut sides = Vec::with_capacity(cells.len());
        for (c, nb) in cells.iter().zip(neighbors.iter()) {
            let p = [vertices[c[0]], vertices[c[1]], vertices[c[2]]];
            let area = signed_area(p[0], p[1], p[2]);
            areas.push(area);
            centroids.push([(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0]);
            let side = |k: usize| {
                let (a, b) = (p[k], p[(k + 1) % 3]);
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                let length = libm::hypot(dx, dy);
                CellSide {
                    vertices: [c[k], c[(k + 1) % 3]],
                    length,
                    normal: [dy / length, -dx / length],
                    midpoint: [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])],
                    height: 2.0 * area / length,
                    neighbor: nb[k],
                }
            };
            sides.push([side(0), side(1), side(2)]);
        }
        Self { vertices, cells, areas, centroids, sides }
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[[usize; 3]] {
        &self.cells
    }

    pub fn area(&self, cell: usize) -> f64 {
        self.areas[cell]
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn centroid(&self, cell: usize) -> Point {
        self.centroids[cell]
    }

    pub fn centroids(&self) -> &[Point] {
        &self.centroids
    }

    pub fn sides(&self, cell: usize) -> &[CellSide; 3] {
        &self.sides[cell]
    }

    pub fn all_sides(&self) -> &[[CellSide; 3]] {
        &self.sides
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Smallest triangle height over all cell sides.
    pub fn min_height(&self) -> f64 {
        self.sides.iter().flat_map(|s| s.iter().map(|side| side.height)).fold(f64::INFINITY, f64::min)
    }

    /// Mean length over all cell sides.
    pub fn mean_edge_length(&self) -> f64 {
        let n = 3 * self.sides.len();
        if n == 0 {
            return 0.0;
        }
        self.sides.iter().flat_map(|s| s.iter().map(|side| side.length)).sum::<f64>() / n as f64
    }

    pub fn bounding_box(&self) -> Rect {
        let mut r = Rect::new(f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            r.x0 = r.x0.min(v[0]);
            r.x1 = r.x1.max(v[0]);
            r.y0 = r.y0.min(v[1]);
            r.y1 = r.y1.max(v[1]);
        }
        r
    }

    /// Divergence-identity residuals `(Σ|Γ|cosθ, Σ|Γ|sinθ)` of a cell.
    pub fn identity_residual(&self, cell: usize) -> [f64; 2] {
        let mut r = [0.0; 2];
        for side in &self.sides[cell] {
            r[0] += side.length * side.normal[0];
            r[1] += side.length * side.normal[1];
        }
        r
    }

    pub fn perimeter(&self, cell: usize) -> f64 {
        self.sides[cell].iter().map(|s| s.length).sum()
    }

    /// Iterator over `(cell, side index, tag)` for every boundary side.
    pub fn boundary_sides(&self) -> impl Iterator<Item = (usize, usize, Option<BoundaryTag>)> + '_ {
        self.sides.iter().enumerate().flat_map(|(j, s)| {
            s.iter().enumerate().filter_map(move |(k, side)| match side.neighbor {
                Neighbor::Boundary(tag) => Some((j, k, tag)),
                Neighbor::Cell { .. } => None,
            })
        })
    }

    /// Turns the interior sides whose midpoint satisfies `is_wall` into
    /// wall-tagged boundary sides on both adjacent cells.
    pub fn with_internal_walls(mut self, is_wall: impl Fn(Point) -> bool) -> Self {
        for j in 0..self.sides.len() {
            for k in 0..3 {
                let side = self.sides[j][k];
                if let Neighbor::Cell { cell, side: other } = side.neighbor {
                    if is_wall(side.midpoint) {
                        self.sides[j][k].neighbor = Neighbor::Boundary(Some(BoundaryTag::Wall));
                        self.sides[cell][other].neighbor = Neighbor::Boundary(Some(BoundaryTag::Wall));
                    }
                }
            }
        }
        self
    }

    /// For each cell, the cell whose centroid is its mirror image about the
    /// line `y = axis`, or `None` if some cell has no partner.
    pub fn mirror_partners(&self, axis: f64) -> Option<Vec<usize>> {
        let tol = 1e-9 * self.bounding_box().diagonal();
        let key = |p: Point| (libm::round(p[0] / tol) as i64, libm::round(p[1] / tol) as i64);
        let index: BTreeMap<(i64, i64), usize> = self.centroids.iter().enumerate().map(|(j, &c)| (key(c), j)).collect();
        self.centroids
            .iter()
            .map(|c| {
                let (kx, ky) = key([c[0], 2.0 * axis - c[1]]);
                // Rounding may land on a neighboring key.
                (-1..=1).flat_map(|dx| (-1..=1).map(move |dy| (kx + dx, ky + dy))).find_map(|k| index.get(&k).copied())
            })
            .collect()
    }

    /// Returns a copy with every vertex mapped through `f`. Cells whose
    /// orientation flips are reoriented.
    pub fn map_vertices(&self, f: impl Fn(Point) -> Point) -> Result<Self, MeshError> {
        let vertices: Vec<Point> = self.vertices.iter().map(|&v| f(v)).collect();
        let cells =
            self.cells
                .iter()
                .map(|&c| {
                    if signed_area(vertices[c[0]], vertices[c[1]], vertices[c[2]]) < 0.0 {
                        [c[0], c[2], c[1]]
                    } else {
                        c
                    }
                })
                .collect();
        TriMesh::new(vertices, cells)
    }
}

fn dist2(a: Point, b: Point) -> f64 {
    (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1])
}

fn check_indices(vertices: &[Point], cells: &[[usize; 3]]) -> Result<(), MeshError> {
    for (j, c) in cells.iter().enumerate() {
        if c.iter().any(|&v| v >= vertices.len()) {
            return Err(MeshError::Geometry {
                cell: j,
                message: format!("vertex index out of range (mesh has {} vertices)", vertices.len()),
            });
        }
        if c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
            return Err(MeshError::Geometry { cell: j, message: "repeated vertex".to_string() });
        }
    }
    if let Some(i) = vertices.iter().position(|v| !v[0].is_finite() || !v[1].is_finite()) {
        return Err(MeshError::InvalidInput(format!("vertex {i} has a non-finite coordinate")));
    }
    Ok(())
}

fn check_duplicates(vertices: &[Point]) -> Result<(), MeshError> {
    const TOL: f64 = 1e-12;
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| vertices[a][0].total_cmp(&vertices[b][0]));
    for (n, &a) in order.iter().enumerate() {
        for &b in &order[n + 1..] {
            if vertices[b][0] - vertices[a][0] > TOL {
                break;
            }
            if (vertices[b][1] - vertices[a][1]).abs() <= TOL {
                return Err(MeshError::DuplicateVertex { first: a.min(b), second: a.max(b) });
            }
        }
    }
    Ok(())
}

fn build_adjacency(cells: &[[usize; 3]], strict: bool) -> Result<Vec<[Neighbor; 3]>, MeshError> {
    let mut edges: Vec<((usize, usize), usize, usize)> = Vec::with_capacity(3 * cells.len());
    for (j, c) in cells.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (c[k], c[(k + 1) % 3]);
            edges.push(((a.min(b), a.max(b)), j, k));
        }
    }
    edges.sort_unstable();
    let mut neighbors = vec![[Neighbor::Boundary(None); 3]; cells.len()];
    let mut i = 0;
    while i < edges.len() {
        let mut end = i + 1;
        while end < edges.len() && edges[end].0 == edges[i].0 {
            end += 1;
        }
        match end - i {
            1 => {}
            2 => {
                let (_, ja, ka) = edges[i];
                let (_, jb, kb) = edges[i + 1];
                neighbors[ja][ka] = Neighbor::Cell { cell: jb, side: kb };
                neighbors[jb][kb] = Neighbor::Cell { cell: ja, side: ka };
            }
            _ if strict => return Err(MeshError::NonManifoldEdge(edges[i].0 .0, edges[i].0 .1)),
            _ => {}
        }
        i = end;
    }
    Ok(neighbors)
}

fn structured_vertices(nx: usize, ny: usize, domain: Rect) -> Vec<Point> {
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        let y = domain.y0 + domain.height() * (j as f64 / ny as f64);
        for i in 0..=nx {
            let x = domain.x0 + domain.width() * (i as f64 / nx as f64);
            vertices.push([x, y]);
        }
    }
    vertices
}

fn structured_cells(nx: usize, ny: usize, diagonal: Diagonal) -> Vec<[usize; 3]> {
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut cells = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        let mirrored = diagonal == Diagonal::Mirrored && 2 * j >= ny && ny % 2 == 0;
        for i in 0..nx {
            let (ll, lr, ur, ul) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if mirrored {
                cells.push([ll, lr, ul]);
                cells.push([lr, ur, ul]);
            } else {
                cells.push([ll, lr, ur]);
                cells.push([ll, ur, ul]);
            }
        }
    }
    cells
}

fn check_structured(nx: usize, ny: usize, domain: Rect) -> Result<(), MeshError> {
    if nx == 0 || ny == 0 {
        return Err(MeshError::InvalidInput("nx and ny must be at least 1".to_string()));
    }
    if !(domain.x1 > domain.x0 && domain.y1 > domain.y0) {
        return Err(MeshError::InvalidInput(format!(
            "degenerate rectangle ({}, {}) x ({}, {})",
            domain.x0, domain.x1, domain.y0, domain.y1
        )));
    }
    Ok(())
}

/// `nx × ny` rectangles, each cut into two triangles. The diagonal pattern is
/// mirrored about the horizontal centerline when `ny` is even, so the mesh is
/// mirror-symmetric about it.
pub fn build_structured_mesh(nx: usize, ny: usize, domain: Rect) -> Result<TriMesh, MeshError> {
    build_structured_mesh_with(nx, ny, domain, Diagonal::Mirrored)
}

pub fn build_structured_mesh_with(
    nx: usize,
    ny: usize,
    domain: Rect,
    diagonal: Diagonal,
) -> Result<TriMesh, MeshError> {
    check_structured(nx, ny, domain)?;
    TriMesh::new(structured_vertices(nx, ny, domain), structured_cells(nx, ny, diagonal))
}

/// Structured mesh whose interior vertices are displaced at random by at most
/// `fraction` times the shortest edge length. Boundary vertices stay put.
pub fn build_jittered_mesh(
    nx: usize,
    ny: usize,
    domain: Rect,
    diagonal: Diagonal,
    fraction: f64,
    seed: u64,
) -> Result<TriMesh, MeshError> {
    check_structured(nx, ny, domain)?;
    if !(0.0..0.5).contains(&fraction) {
        return Err(MeshError::InvalidInput(format!("jitter fraction {fraction} outside [0, 0.5)")));
    }
    let mut vertices = structured_vertices(nx, ny, domain);
    let dx = domain.width() / nx as f64;
    let dy = domain.height() / ny as f64;
    let max_shift = fraction * dx.min(dy) / core::f64::consts::SQRT_2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for j in 1..ny {
        for i in 1..nx {
            let v = &mut vertices[j * (nx + 1) + i];
            v[0] += max_shift * rng.gen_range(-1.0..=1.0);
            v[1] += max_shift * rng.gen_range(-1.0..=1.0);
        }
    }
    TriMesh::new(vertices, structured_cells(nx, ny, diagonal))
}

/// Parses the whitespace-separated mesh text format: a `NV NT` header, `NV`
/// vertex lines `x y`, then `NT` cell lines `v1 v2 v3` with 1-based indices.
/// Lines starting with `#` are ignored. Clockwise cells are reoriented.
pub fn load_mesh_text(content: &str) -> Result<TriMesh, MeshError> {
    let mut lines = content
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let parse_err = |line: usize, message: alloc::string::String| MeshError::Parse { line, message };
    let (line, header) = lines.next().ok_or_else(|| parse_err(0, "missing `NV NT` header".to_string()))?;
    let counts: Vec<&str> = header.split_whitespace().collect();
    if counts.len() != 2 {
        return Err(parse_err(line, "header must contain exactly two counts `NV NT`".to_string()));
    }
    let nv: usize = counts[0].parse().map_err(|_| parse_err(line, format!("invalid vertex count `{}`", counts[0])))?;
    let nt: usize = counts[1].parse().map_err(|_| parse_err(line, format!("invalid cell count `{}`", counts[1])))?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, text) =
            lines.next().ok_or_else(|| parse_err(0, format!("expected {nv} vertices, file ended early")))?;
        let xs: Vec<&str> = text.split_whitespace().collect();
        if xs.len() != 2 {
            return Err(parse_err(line, "vertex line must contain `x y`".to_string()));
        }
        let x: f64 = xs[0].parse().map_err(|_| parse_err(line, format!("invalid coordinate `{}`", xs[0])))?;
        let y: f64 = xs[1].parse().map_err(|_| parse_err(line, format!("invalid coordinate `{}`", xs[1])))?;
        vertices.push([x, y]);
    }

    let mut cells = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (line, text) =
            lines.next().ok_or_else(|| parse_err(0, format!("expected {nt} cells, file ended early")))?;
        let ids: Vec<&str> = text.split_whitespace().collect();
        if ids.len() != 3 {
            return Err(parse_err(line, "cell line must contain three vertex indices".to_string()));
        }
        let mut cell = [0usize; 3];
        for (slot, tok) in cell.iter_mut().zip(ids) {
            let v: usize = tok.parse().map_err(|_| parse_err(line, format!("invalid vertex index `{tok}`")))?;
            if v == 0 || v > nv {
                return Err(parse_err(line, format!("vertex index {v} out of range 1..={nv}")));
            }
            *slot = v - 1;
        }
        let area = signed_area(vertices[cell[0]], vertices[cell[1]], vertices[cell[2]]);
        if area == 0.0 || !area.is_finite() {
            return Err(parse_err(line, "zero-area cell".to_string()));
        }
        if area < 0.0 {
            cell.swap(1, 2);
        }
        cells.push(cell);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "unexpected trailing content".to_string()));
    }
    TriMesh::new(vertices, cells)
}

/// Side of the bounding box a boundary rule applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxSide {
    All,
    XMin,
    XMax,
    YMin,
    YMax,
}

/// Assigns a tag to every boundary side according to which bounding-box side
/// its midpoint lies on (within `tol`). Each boundary side must match exactly
/// one rule. `tol = None` uses `1e-9` times the bounding-box diagonal.
pub fn classify_boundaries(
    mesh: &TriMesh,
    rules: &[(BoxSide, BoundaryTag)],
    tol: Option<f64>,
) -> Result<TriMesh, MeshError> {
    let bb = mesh.bounding_box();
    let tol = tol.unwrap_or(1e-9 * bb.diagonal());
    let on_side = |side: BoxSide, p: Point| match side {
        BoxSide::All => {
            (p[0] - bb.x0).abs() <= tol
                || (p[0] - bb.x1).abs() <= tol
                || (p[1] - bb.y0).abs() <= tol
                || (p[1] - bb.y1).abs() <= tol
        }
        BoxSide::XMin => (p[0] - bb.x0).abs() <= tol,
        BoxSide::XMax => (p[0] - bb.x1).abs() <= tol,
        BoxSide::YMin => (p[1] - bb.y0).abs() <= tol,
        BoxSide::YMax => (p[1] - bb.y1).abs() <= tol,
    };
    let mut out = mesh.clone();
    for j in 0..out.sides.len() {
        for k in 0..3 {
            let side = &mut out.sides[j][k];
            if !side.neighbor.is_boundary() {
                continue;
            }
            let p = side.midpoint;
            let mut matched = rules.iter().filter(|(s, _)| on_side(*s, p));
            let (_, tag) =
                matched.next().ok_or(MeshError::Boundary { x: p[0], y: p[1], reason: "matches no boundary rule" })?;
            if matched.next().is_some() {
                return Err(MeshError::Boundary { x: p[0], y: p[1], reason: "matches more than one boundary rule" });
            }
            side.neighbor = Neighbor::Boundary(Some(*tag));
        }
    }
    Ok(out)
}

/// Summary statistics and sanity checks of a triangulation.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshBuildReport {
    pub cells: usize,
    pub vertices: usize,
    pub wall_edges: usize,
    pub outflow_edges: usize,
    pub untagged_edges: usize,
    pub min_area: f64,
    pub max_area: f64,
    pub min_height: f64,
    /// Largest `|Σ|Γ|cosθ|` or `|Σ|Γ|sinθ|` over all cells.
    pub max_identity_residual: f64,
    /// Same residual divided by the cell perimeter.
    pub max_relative_identity_residual: f64,
    pub negative_area_cells: usize,
}

impl MeshBuildReport {
    pub fn boundary_edges(&self) -> usize {
        self.wall_edges + self.outflow_edges + self.untagged_edges
    }
}

pub fn validate_mesh(mesh: &TriMesh) -> MeshBuildReport {
    let mut report = MeshBuildReport {
        cells: mesh.num_cells(),
        vertices: mesh.num_vertices(),
        wall_edges: 0,
        outflow_edges: 0,
        untagged_edges: 0,
        min_area: f64::INFINITY,
        max_area: f64::NEG_INFINITY,
        min_height: f64::INFINITY,
        max_identity_residual: 0.0,
        max_relative_identity_residual: 0.0,
        negative_area_cells: 0,
    };
    for (_, _, tag) in mesh.boundary_sides() {
        match tag {
            Some(BoundaryTag::Wall) => report.wall_edges += 1,
            Some(BoundaryTag::Outflow) => report.outflow_edges += 1,
            None => report.untagged_edges += 1,
        }
    }
    for j in 0..mesh.num_cells() {
        let area = mesh.area(j);
        report.min_area = report.min_area.min(area);
        report.max_area = report.max_area.max(area);
        if area < 0.0 {
            report.negative_area_cells += 1;
        }
        for side in mesh.sides(j) {
            report.min_height = report.min_height.min(side.height);
        }
        let r = mesh.identity_residual(j);
        let res = r[0].abs().max(r[1].abs());
        report.max_identity_residual = report.max_identity_residual.max(res);
        report.max_relative_identity_residual = report.max_relative_identity_residual.max(res / mesh.perimeter(j));
    }
    report
}
