use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("ground set size {n} exceeds the limit {max}")]
    GroundTooLarge { n: u32, max: u32 },
    #[error("element {element} is outside the ground set [{n}]")]
    ElementOutOfRange { element: u32, n: u32 },
    #[error("families live on different ground sets ({left} vs {right})")]
    GroundMismatch { left: u32, right: u32 },
    #[error("level {level} is outside 0..={n}")]
    LevelOutOfRange { level: u32, n: u32 },
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("family is not increasing")]
    NotIncreasing,
    #[error("families must be all increasing or all decreasing")]
    NotMonotone,
    #[error("family is not intersecting")]
    NotIntersecting,
    #[error("families are not cross-intersecting")]
    NotCrossIntersecting,
    #[error("family is not uniform")]
    NotUniform,
    #[error("probability {0} is outside the admissible range {1}")]
    ProbabilityOutOfRange(String, &'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown checker `{0}`")]
    UnknownChecker(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        LabError::InvalidParameter(msg.into())
    }
}
