use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("could not parse configuration: {0}")]
    Parse(String),
    #[error("configuration has no singular points")]
    Empty,
    #[error("a has {a} entries but c has {c}")]
    LengthMismatch { a: usize, c: usize },
    #[error("non-finite value in {field}")]
    NonFinite { field: &'static str },
    #[error("a[{index}] is the origin")]
    OriginSingularity { index: usize },
    #[error("a[{index}] has modulus {modulus} >= 1")]
    OutsideDisk { index: usize, modulus: f64 },
    #[error("a[{i}] and a[{j}] coincide")]
    DuplicatePoint { i: usize, j: usize },
    #[error("points {points:?} of (0, a_1, ..) are collinear")]
    CollinearTriple { points: [usize; 3] },
    #[error("c[{index}] = {value} must be > -1 and nonzero")]
    BadExponent { index: usize, value: f64 },
    #[error("scale N = {0} must be finite and positive")]
    BadScale(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SzegoError {
    #[error("configuration is not generic at a[{index}]: {reason}")]
    NonGeneric { index: usize, reason: String },
    #[error("arc between labels {j} and {k} has only {points} points; raise the grid")]
    DegenerateArc { j: usize, k: usize, points: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BranchError {
    #[error("point lies on the cut {cut}")]
    OnCut { cut: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("argument lies on the negative real axis or at zero")]
    OnNegativeAxis,
    #[error("contour passes through a zero near {re} + {im}i")]
    ContourThroughZero { re: f64, im: f64 },
    #[error("zero search did not converge: {0}")]
    NotConverged(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("exact moments need positive integer exponents, got c[{index}] = {value}")]
    NonIntegerExponent { index: usize, value: f64 },
    #[error("quadrature did not reach the target accuracy (estimate {estimate:e})")]
    QuadratureNotConverged { estimate: f64 },
    #[error("moment matrix is ill conditioned (estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("root finder did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("moment matrix of size {size} cannot give degree {degree}")]
    DegreeOutOfRange { size: usize, degree: usize },
    #[error("unknown moment method {0:?}")]
    UnknownMethod(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Szego(#[from] SzegoError),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("unknown asymptotic formula {0:?}")]
    UnknownFormula(String),
}

impl Error {
    pub fn is_non_generic(&self) -> bool {
        matches!(self, Error::Szego(SzegoError::NonGeneric { .. }))
    }
}
