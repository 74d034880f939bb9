use alloc::string::String;

/// Errors raised while constructing or loading a triangulation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cell {cell}: {message}")]
    Geometry { cell: usize, message: String },
    #[error("vertices {first} and {second} coincide")]
    DuplicateVertex { first: usize, second: usize },
    #[error("edge ({0}, {1}) is shared by more than two cells")]
    NonManifoldEdge(usize, usize),
    #[error("boundary edge with midpoint ({x}, {y}) {reason}")]
    Boundary { x: f64, y: f64, reason: &'static str },
}

/// Errors raised by state conversions, configuration of physics or solver steps.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("negative depth {depth:e} in cell {cell} at t = {time}")]
    Positivity { cell: usize, depth: f64, time: f64 },
    #[error("non-finite value in cell {cell} at step {step}")]
    NonFinite { cell: usize, step: usize },
    #[error("degenerate steady profile: {0}")]
    DegenerateProfile(&'static str),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}
