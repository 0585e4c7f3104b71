//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures raised by the algebra, geometry, solver and archive layers.
///
/// The variants are deliberately fine grained: the command line front end maps
/// them onto stable exit codes, and the continuation driver uses them to decide
/// whether a sweep should stop or retry with a smaller angle step.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("vacuum reached: density base {base:.6e} is not positive")]
    VacuumReached { base: f64 },

    #[error("non-positive density {0}")]
    NonpositiveDensity(f64),

    #[error("no compression across the incident shock (rho1 = {rho1} <= rho0 = {rho0})")]
    NoCompression { rho0: f64, rho1: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("wedge angle {theta_deg:.6} deg is below the detachment angle")]
    DetachedWedgeAngle { theta_deg: f64 },

    #[error("weak and strong reflection roots could not be separated at {theta_deg:.6} deg")]
    RootSeparationFailure { theta_deg: f64 },

    #[error("bracketing failure: {0}")]
    BracketingFailure(String),

    #[error("zero vector in {0}")]
    ZeroVector(&'static str),

    #[error("sonic arc degenerates: |P1 - P4| = {0:.3e}")]
    DegenerateSonicArc(f64),

    #[error("folded mesh: Jacobian changes sign at cell ({i}, {j})")]
    FoldedMesh { i: usize, j: usize },

    #[error("computational domains do not overlap")]
    EmptyOverlap,

    #[error("ellipticity lost outside the cutoff band (worst Mach {mach:.6} at ({x:.6}, {y:.6}))")]
    EllipticityLost { mach: f64, x: f64, y: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("shock is no longer a graph in the cone direction: {0}")]
    GraphPropertyLost(String),

    #[error("attached shock detected: foot at xi1 = {foot:.6e} > -{threshold:.3e}")]
    AttachedShockDetected { foot: f64, threshold: f64 },

    #[error("too few shock samples ({0}); at least 5 are needed")]
    TooFewSamples(usize),

    #[error("linear solver failure: {0}")]
    LinearSolver(String),

    #[error("archive error: {0}")]
    Archive(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Archive(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Archive(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Archive(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
