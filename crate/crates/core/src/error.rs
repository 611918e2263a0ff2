use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("series constant term must be 1, got {0}")]
    ConstantTerm(String),
    #[error("series composition needs an inner series with zero constant term")]
    NonzeroInnerConstant,
    #[error("cannot invert a series with zero constant term")]
    ZeroConstant,
    #[error("pole: {0}")]
    Pole(String),
    #[error("majorant domain error: 1 - G <= 0 at child path {path:?}")]
    MajorantDomain { path: Vec<usize> },
    #[error("derivative of order {0} vanishes at the evaluation point")]
    VanishingDerivative(usize),
    #[error("root finder did not converge after {iterations} iterations (max correction {correction:e})")]
    NonConvergence { iterations: usize, correction: f64 },
    #[error("smallest root not found among numeric roots")]
    BetaNotFound,
    #[error("{0} numeric roots fall inside the beta enclosure")]
    BetaMultiple(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
