use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("all points lie on one line (within {tolerance:e}); hull is degenerate")]
    DegenerateHull { tolerance: f64 },
    #[error("hull has {count} vertices, above the cap of {cap}")]
    HullTooComplex { count: usize, cap: usize },
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("polygon is not strictly convex and counter-clockwise at vertex {index}")]
    NotConvex { index: usize },
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("similarity scale {0} is outside (0, 1)")]
    InvalidScale(f64),
    #[error("envelope of an empty family")]
    EmptyFamily,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IfsError {
    #[error("an IFS needs at least 2 maps, got {0}")]
    TooFewMaps(usize),
    #[error("too many maps ({0}); words index maps with u16")]
    TooManyMaps(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("attractor hull did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("enumeration needs {needed} entries, above the cap of {cap}")]
    ResourceLimit { needed: u128, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DimensionError {
    #[error("need at least {needed} scales, got {got}")]
    InsufficientScales { needed: usize, got: usize },
    #[error("box sizes span {decades:.2} decades, need at least {needed}")]
    InsufficientSpan { decades: f64, needed: f64 },
    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("box sizes must be positive and strictly decreasing")]
    UnorderedScales,
    #[error("fitted slope {0} is outside [0, 2]")]
    SlopeOutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Ifs(#[from] IfsError),
}

impl From<GeometryError> for DimensionError {
    fn from(e: GeometryError) -> Self {
        DimensionError::Ifs(IfsError::Geometry(e))
    }
}
