//! Snapshot files: per-cell CSV tables, legacy VTK unstructured grids and
//! the run's time index and diagnostics tables.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use swft_core::simulation::{Diagnostics, RunState};
use swft_core::state::{ConservedField, PrimitiveState};
use swft_core::{Bathymetry, PhysParams, TriMesh};

use crate::config::OutputConfig;
use crate::error::Error;

pub const CSV_HEADER: &str = "cell,x,y,area,h,w,u,v,c,r,q1,q2,q3,q4";

/// One parsed row of a cell table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellRow {
    pub cell: usize,
    pub x: f64,
    pub y: f64,
    pub area: f64,
    pub prim: PrimitiveState,
    pub q: [f64; 4],
}

fn primitives(field: &ConservedField, bathy: &Bathymetry, p: &PhysParams) -> Result<Vec<PrimitiveState>, Error> {
    Ok(field.primitives(bathy, p)?)
}

/// Cell table with 17 significant digits, enough to recover every `f64`.
pub fn cell_csv(mesh: &TriMesh, bathy: &Bathymetry, p: &PhysParams, field: &ConservedField) -> Result<String, Error> {
    let prims = primitives(field, bathy, p)?;
    let mut o = String::with_capacity(256 * mesh.num_cells());
    o.push_str(CSV_HEADER);
    o.push('\n');
    for (j, (s, q)) in prims.iter().zip(&field.values).enumerate() {
        let c = mesh.centroid(j);
        let _ = write!(o, "{j}");
        for v in [c[0], c[1], mesh.area(j), s.h, s.w, s.u, s.v, s.c, s.r, q[0], q[1], q[2], q[3]] {
            let _ = write!(o, ",{v:.16e}");
        }
        o.push('\n');
    }
    Ok(o)
}

pub fn parse_cell_csv(text: &str) -> Result<Vec<CellRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        _ => return Err(format!("expected header `{CSV_HEADER}`")),
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let line_no = n + 2;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 14 {
            return Err(format!("line {line_no}: expected 14 columns, got {}", fields.len()));
        }
        let cell: usize = fields[0].parse().map_err(|_| format!("line {line_no}: bad cell index `{}`", fields[0]))?;
        let mut v = [0.0; 13];
        for (slot, f) in v.iter_mut().zip(&fields[1..]) {
            *slot = f.parse().map_err(|_| format!("line {line_no}: `{f}` is not a number"))?;
        }
        rows.push(CellRow {
            cell,
            x: v[0],
            y: v[1],
            area: v[2],
            prim: PrimitiveState { h: v[3], w: v[4], u: v[5], v: v[6], c: v[7], r: v[8] },
            q: [v[9], v[10], v[11], v[12]],
        });
    }
    Ok(rows)
}

pub fn read_cell_csv(path: &Path) -> Result<Vec<CellRow>, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_cell_csv(&text).map_err(|m| Error::format(path, m))
}

/// Conserved field stored in a cell table.
pub fn field_from_rows(rows: &[CellRow]) -> ConservedField {
    ConservedField::new(rows.iter().map(|r| r.q).collect())
}

/// Legacy ASCII unstructured grid; point heights are the bottom elevation.
pub fn cell_vtk(
    mesh: &TriMesh,
    bathy: &Bathymetry,
    p: &PhysParams,
    field: &ConservedField,
    title: &str,
) -> Result<String, Error> {
    let prims = primitives(field, bathy, p)?;
    let (nv, nc) = (mesh.num_vertices(), mesh.num_cells());
    let mut o = String::with_capacity(128 * (nv + nc));
    let _ = writeln!(o, "# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET UNSTRUCTURED_GRID");
    let _ = writeln!(o, "POINTS {nv} double");
    for (v, z) in mesh.vertices().iter().zip(bathy.vertex_values()) {
        let _ = writeln!(o, "{:.16e} {:.16e} {:.16e}", v[0], v[1], z);
    }
    let _ = writeln!(o, "CELLS {nc} {}", 4 * nc);
    for c in mesh.cells() {
        let _ = writeln!(o, "3 {} {} {}", c[0], c[1], c[2]);
    }
    let _ = writeln!(o, "CELL_TYPES {nc}");
    for _ in 0..nc {
        o.push_str("5\n");
    }
    let _ = writeln!(o, "CELL_DATA {nc}");
    let scalars: [(&str, fn(&PrimitiveState) -> f64); 3] = [("h", |s| s.h), ("w", |s| s.w), ("c", |s| s.c)];
    for (name, get) in scalars {
        let _ = writeln!(o, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for s in &prims {
            let _ = writeln!(o, "{:.16e}", get(s));
        }
    }
    o.push_str("VECTORS velocity double\n");
    for s in &prims {
        let _ = writeln!(o, "{:.16e} {:.16e} 0", s.u, s.v);
    }
    Ok(o)
}

/// Named cell arrays of a legacy VTK file written by [`cell_vtk`]; vectors
/// are split into `name_x`, `name_y`, `name_z`.
pub fn parse_vtk_cell_data(text: &str) -> Result<Vec<(String, Vec<f64>)>, String> {
    let mut tokens = text.split_whitespace();
    let mut n = None;
    while let Some(t) = tokens.next() {
        if t == "CELL_DATA" {
            n = Some(tokens.next().and_then(|c| c.parse::<usize>().ok()).ok_or("bad CELL_DATA count")?);
            break;
        }
    }
    let n = n.ok_or("no CELL_DATA section")?;
    let num = |tokens: &mut std::str::SplitWhitespace<'_>| -> Result<f64, String> {
        let t = tokens.next().ok_or("truncated data")?;
        t.parse().map_err(|_| format!("`{t}` is not a number"))
    };
    let mut out = Vec::new();
    while let Some(kind) = tokens.next() {
        let name = tokens.next().ok_or("missing array name")?.to_string();
        match kind {
            "SCALARS" => {
                let _ty = tokens.next();
                let _comp = tokens.next();
                if tokens.next() != Some("LOOKUP_TABLE") {
                    return Err("expected LOOKUP_TABLE".into());
                }
                let _table = tokens.next();
                let v = (0..n).map(|_| num(&mut tokens)).collect::<Result<Vec<_>, _>>()?;
                out.push((name, v));
            }
            "VECTORS" => {
                let _ty = tokens.next();
                let mut comps = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
                for _ in 0..n {
                    for c in comps.iter_mut() {
                        c.push(num(&mut tokens)?);
                    }
                }
                for (axis, c) in ["x", "y", "z"].iter().zip(comps) {
                    out.push((format!("{name}_{axis}"), c));
                }
            }
            other => return Err(format!("unsupported section `{other}`")),
        }
    }
    Ok(out)
}

pub fn diagnostics_csv(history: &[Diagnostics]) -> String {
    let mut o = String::from("step,t,mass,solute,max_speed,min_depth\n");
    for d in history {
        let _ = writeln!(
            o,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            d.step, d.t, d.mass, d.solute, d.max_speed, d.min_depth
        );
    }
    o
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes snapshots as they arrive; the first failure is kept and reported
/// by [`SnapshotWriter::finish`].
pub struct SnapshotWriter<'a> {
    dir: PathBuf,
    mesh: &'a TriMesh,
    bathy: &'a Bathymetry,
    params: PhysParams,
    config: OutputConfig,
    index: String,
    count: usize,
    failure: Option<Error>,
}

impl<'a> SnapshotWriter<'a> {
    pub fn new(
        dir: &Path,
        mesh: &'a TriMesh,
        bathy: &'a Bathymetry,
        params: PhysParams,
        config: OutputConfig,
    ) -> Result<Self, Error> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            mesh,
            bathy,
            params,
            config,
            index: String::from("snapshot,t,step\n"),
            count: 0,
            failure: None,
        })
    }

    pub fn record(&mut self, state: &RunState) {
        if self.failure.is_none() {
            if let Err(e) = self.try_record(state) {
                self.failure = Some(e);
            }
        }
    }

    fn try_record(&mut self, state: &RunState) -> Result<(), Error> {
        let stem = format!("snap_{:04}", self.count);
        if self.config.csv {
            let text = cell_csv(self.mesh, self.bathy, &self.params, &state.field)?;
            write(&self.dir.join(format!("{stem}.csv")), &text)?;
        }
        if self.config.vtk {
            let title = format!("t = {} step {}", state.t, state.steps);
            let text = cell_vtk(self.mesh, self.bathy, &self.params, &state.field, &title)?;
            write(&self.dir.join(format!("{stem}.vtk")), &text)?;
        }
        let _ = writeln!(self.index, "{},{:.16e},{}", self.count, state.t, state.steps);
        self.count += 1;
        Ok(())
    }

    /// Writes the time index and, if enabled, the diagnostics table.
    pub fn finish(self, history: &[Diagnostics]) -> Result<usize, Error> {
        if let Some(e) = self.failure {
            return Err(e);
        }
        write(&self.dir.join("times.csv"), &self.index)?;
        if self.config.diagnostics {
            write(&self.dir.join("diagnostics.csv"), &diagnostics_csv(history))?;
        }
        Ok(self.count)
    }
}
