use thiserror::Error;

use crate::simplicial::Simplex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("support points are affinely dependent")]
    AffineDegeneracy,
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("all points are collinear; no triangles")]
    DegenerateInput { simplices: Vec<Simplex> },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("{simplex:?} (radius {radius}) is too large to embed in the torus of period {period}")]
    PeriodicRadius { simplex: Simplex, radius: f64, period: f64 },
    #[error("periodic triangulation is inconsistent: {0}")]
    PeriodicTriangulation(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("flow did not stabilize within {0} iterations")]
    IterationLimitExceeded(usize),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("chain is not supported in the complex at this rank")]
    NotInComplex,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error(
        "image of loop for interval {interval} needs a simplex outside the filtration; \
         increase the sampling density or check the map"
    )]
    LipschitzOverflow { interval: usize },
    #[error("radius {0} is beyond the last critical value")]
    OutOfRange(f64),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Coord(#[from] CoordError),
}

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("invalid sample: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Top-level error of the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn is_lipschitz_overflow(&self) -> bool {
        matches!(self, Error::Eigen(EigenError::LipschitzOverflow { .. }))
    }
}
