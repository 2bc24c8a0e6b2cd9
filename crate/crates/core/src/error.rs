use thiserror::Error;

use crate::calculus::CalculusError;
use crate::charts::ChartError;
use crate::fields::FieldError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("bounds {0} are not inside the domain of the case")]
    BoundsOutsideDomain(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
