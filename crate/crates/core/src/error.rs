use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate polygon")]
    DegeneratePolygon,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not convex")]
    NonConvex,
    #[error("polygon vertices are not counterclockwise")]
    Clockwise,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("degenerate profile")]
    DegenerateProfile,
    #[error("aperture out of range: {0}")]
    ApertureOutOfRange(f64),
    #[error("abscissa out of range: {0}")]
    AbscissaOutOfRange(f64),
    #[error("need at least {min} knots, got {got}")]
    TooFewKnots { min: usize, got: usize },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("sliced body has no slices")]
    EmptySlices,
    #[error("infeasible pins: {0}")]
    InfeasiblePins(String),
    #[error("budget {got} is below the minimum of {min} evaluations")]
    BudgetTooSmall { min: u64, got: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
