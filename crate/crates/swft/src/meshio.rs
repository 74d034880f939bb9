//! Mesh and per-vertex value files.

use std::path::Path;

use swft_core::mesh::load_mesh_text;
use swft_core::TriMesh;

use crate::error::Error;

/// Reads the `NV NT` / vertices / 1-based cells text format.
pub fn read_mesh(path: &Path) -> Result<TriMesh, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_mesh_text(&text).map_err(|e| Error::format(path, e.to_string()))
}

/// Writes `mesh` in the format read by [`read_mesh`].
pub fn mesh_text(mesh: &TriMesh) -> String {
    let mut o = format!("{} {}\n", mesh.num_vertices(), mesh.num_cells());
    for v in mesh.vertices() {
        o.push_str(&format!("{:.17e} {:.17e}\n", v[0], v[1]));
    }
    for c in mesh.cells() {
        o.push_str(&format!("{} {} {}\n", c[0] + 1, c[1] + 1, c[2] + 1));
    }
    o
}

/// One number per non-comment line or whitespace-separated token.
pub fn read_vertex_values(path: &Path) -> Result<Vec<f64>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let v: f64 =
                tok.parse().map_err(|_| Error::format(path, format!("line {}: `{tok}` is not a number", n + 1)))?;
            out.push(v);
        }
    }
    Ok(out)
}
