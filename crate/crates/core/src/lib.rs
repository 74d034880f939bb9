//! Central-upwind finite-volume solver for two-dimensional shallow water
//! flow with a transported solute that changes the fluid density, on
//! unstructured triangular meshes.
//!
//! The conserved variables are `(h r, h u r, h v r, h c)` with relative
//! density `r = 1 + Δ c`. One forward-Euler step reconstructs linear
//! traces, evaluates the central-upwind flux on every face, adds the
//! well-balanced bottom-slope source and applies Manning friction
//! implicitly.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod flux;
pub mod mesh;
pub mod reconstruction;
pub mod scenarios;
pub mod simulation;
pub mod sources;
pub mod state;

pub use error::{MeshError, SolverError};
pub use mesh::{BoundaryTag, Rect, TriMesh};
pub use simulation::{run, RunControls, RunOutput, RunState, Solver};
pub use state::{Bathymetry, BathymetrySpec, ConservedField, PhysParams, StateVec};
