use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid circline: {0}")]
    InvalidCircline(String),
    #[error("invalid disk: {0}")]
    InvalidDisk(String),
    #[error("degenerate Moebius map (ad - bc = 0)")]
    DegenerateMoebius,
    #[error("point {0} is not in the disk")]
    PointOutsideDisk(String),
    #[error("point at infinity is not allowed here; use a Moebius chart")]
    InfinitePoint,
    #[error("identical boundaries")]
    IdenticalBoundaries,
    #[error("nested disks: {0}")]
    NestedDisks(String),
    #[error("intersection has empty interior: {0}")]
    EmptyInterior(String),
    #[error("pole of the normalizing map lies on the avoid set at {0}")]
    PoleOnAvoidSet(String),
    #[error("resolvent at spectrum (sigma = {0})")]
    ResolventAtSpectrum(String),
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid rational function: {0}")]
    InvalidRational(String),
    #[error("pole on X at {0}")]
    PoleOnX(String),
    #[error("function unbounded on X (infinity belongs to X)")]
    UnboundedOnX,
    #[error("spectrum not in the interior of the disks")]
    SpectrumNotInterior,
    #[error("point {0} is not on the disk boundary")]
    NotOnBoundary(String),
    #[error("exterior radius underflow after enlargement")]
    RadiusUnderflow,
    #[error("quadrature did not converge after {panels} panels (error estimate {error:e})")]
    QuadratureNonConvergence { panels: usize, error: f64 },
    #[error("degenerate tessellation: {0}")]
    DegenerateTessellation(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
