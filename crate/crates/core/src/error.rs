use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("payoff is not strictly concave in own action: {0}")]
    NonConcave(String),
    #[error("regularity conditions RC1-RC3 do not hold: {0}")]
    RcViolated(String),
    #[error("empty set")]
    EmptySet,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("unsupported class: {0}")]
    UnsupportedClass(String),
    #[error("unsupported objective: {0}")]
    UnsupportedObjective(String),
    #[error("commitment structure is not simple: {0}")]
    NotSimple(String),
    #[error("commitment structure does not cover the action space: {0}")]
    NotCovering(String),
    #[error("no pure-strategy equilibrium in some subgame")]
    NoEquilibrium,
    #[error("unknown family: {0}")]
    UnknownFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
