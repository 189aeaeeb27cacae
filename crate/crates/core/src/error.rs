use thiserror::Error;

use crate::grid::{Edge, NodeId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: edge references undeclared node {node}")]
    UndeclaredNode { line: usize, node: NodeId },

    #[error("line {line}: node {node} declared more than once")]
    DuplicateNode { line: usize, node: NodeId },

    #[error("node {0} is not part of the network")]
    UnknownNode(NodeId),

    #[error("edge {0} has no capacity entry")]
    MissingCapacity(Edge),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    /// Exhaustive enumeration would exceed the configured limit.
    #[error("enumeration of {count} candidates exceeds the limit of {limit}; use the greedy oracle instead")]
    EnumerationLimit { count: u128, limit: u128 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::EnumerationLimit { .. })
    }
}
