use thiserror::Error;

/// Errors raised by curve construction, measurement and planning.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("expected {expected} coordinates per point, row {row} has {found}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{kind} curve needs at least {min} samples, got {found}")]
    TooFewSamples {
        kind: &'static str,
        min: usize,
        found: usize,
    },
    #[error("consecutive samples {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("tangent at sample {0} has zero norm")]
    ZeroTangent(usize),
    #[error("non-finite coordinate at sample {0}")]
    NonFinite(usize),
    #[error("tangent list has {found} entries for {expected} points")]
    TangentCount { expected: usize, found: usize },
    #[error("sample indices must differ (got {0} twice)")]
    SameIndex(usize),
    #[error("window half-width {h} is below twice the largest spacing {spacing}")]
    WindowTooSmall { h: f64, spacing: f64 },
    #[error("operation requires a closed curve")]
    NotClosed,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("target lies inside the forbidden region of the start frame")]
    TargetInObstacle,
    #[error("target coincides with the start point")]
    TargetAtStart,
    #[error("clamped polyline is infeasible: {0}")]
    Infeasible(String),
    #[error("curvature {found} exceeds the cap {cap}")]
    CurvatureAboveCap { found: f64, cap: f64 },
    #[error("unknown fixture kind `{0}`")]
    UnknownFixture(String),
    #[error("malformed document: {0}")]
    Document(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
