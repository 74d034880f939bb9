//! Error tables against the uniform steady profile.

use std::fmt::Write as _;

use swft_core::simulation::{error_norms, ErrorNorms};
use swft_core::sources::SteadyProfile;
use swft_core::{Bathymetry, ConservedField, PhysParams, TriMesh};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyErrors {
    pub h: ErrorNorms,
    pub q2: ErrorNorms,
    pub c: ErrorNorms,
}

impl SteadyErrors {
    pub fn rows(&self) -> [(&'static str, ErrorNorms); 3] {
        [("h", self.h), ("q2", self.q2), ("c", self.c)]
    }

    pub fn max(&self) -> f64 {
        self.rows().iter().map(|(_, n)| n.l1.max(n.l2).max(n.linf)).fold(0.0, f64::max)
    }
}

/// Norms of `h − h0`, `q2 − q0` and `c − c0` over all cells, with
/// `c = q4 / h` taken exactly (zero on dry cells) so that coarse meshes with a
/// large desingularization constant still report the transported ratio.
pub fn steady_errors(
    mesh: &TriMesh,
    bathy: &Bathymetry,
    p: &PhysParams,
    field: &ConservedField,
    profile: &SteadyProfile,
) -> Result<SteadyErrors, Error> {
    let prims = field.primitives(bathy, p)?;
    let n = mesh.num_cells();
    let norms = |values: Vec<f64>, reference: f64| error_norms(&values, &vec![reference; n], mesh);
    Ok(SteadyErrors {
        h: norms(prims.iter().map(|s| s.h).collect(), profile.h0)?,
        q2: norms(field.values.iter().map(|q| q[1]).collect(), profile.q0)?,
        c: norms(
            prims.iter().zip(&field.values).map(|(s, q)| if s.h > 0.0 { q[3] / s.h } else { 0.0 }).collect(),
            profile.c0,
        )?,
    })
}

pub fn format_table(e: &SteadyErrors) -> String {
    let mut o = format!("{:<4} {:>12} {:>12} {:>12}\n", "", "L1", "L2", "Linf");
    for (name, n) in e.rows() {
        let _ = writeln!(o, "{name:<4} {:>12.4e} {:>12.4e} {:>12.4e}", n.l1, n.l2, n.linf);
    }
    o
}
