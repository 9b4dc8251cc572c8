use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence is empty")]
    EmptySequence,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown sequence family `{0}`")]
    UnknownFamily(String),

    #[error("malformed custom sequence: {0}")]
    MalformedCustom(String),

    #[error("custom sequence has {got} values but index {upto} was requested")]
    CustomTooShort { upto: usize, got: usize },

    #[error("sequence is not admissible at index {index} (z = {value})")]
    Inadmissible { index: usize, value: BigInt },

    #[error(
        "full form would hold {requested} vertices, above the budget of {budget}; \
         use the condensed form or raise the budget"
    )]
    BudgetExceeded { requested: BigUint, budget: usize },

    #[error(
        "vertex {vertex}: {paths} paths of length {path_length} do not give an integral \
         number of new vertices"
    )]
    IntegralityViolation {
        vertex: VertexId,
        path_length: usize,
        paths: u64,
    },

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
