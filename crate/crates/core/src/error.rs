use thiserror::Error;

use crate::formula::{Formula, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("formula `{0}` is not in the closure set")]
    NotInSigma(Formula),
    #[error("closure set has {0} formulas; at most 64 are supported")]
    SigmaTooLarge(usize),
    #[error("operands are typed over different closure sets")]
    SigmaMismatch,
    #[error("unknown moment `{0}`")]
    UnknownMoment(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("malformed labelled system: {0}")]
    MalformedSystem(String),
    #[error("relation is not a total function: world `{0}` has {1} successors")]
    NotFunctional(String, usize),
    #[error("closure set has {size} formulas, over the budget of {budget}")]
    Budget { size: usize, budget: usize },
    #[error("internal check failed on the witness: {0}")]
    WitnessRejected(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
