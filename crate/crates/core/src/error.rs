use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("map {map} sends point {point} to {target}, which is not a point index (m = {m})")]
    MapOutOfRange { map: usize, point: usize, target: usize, m: usize },
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("label {label} out of range for n = {n}")]
    BadLabel { label: usize, n: usize },
    #[error("exhaustive scan refused: {size} exceeds the guard of {guard}")]
    GuardExceeded { size: usize, guard: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("elements belong to different covering spaces")]
    MismatchedSpaces,
    #[error("invalid infinite tail: {0}")]
    InvalidTail(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
