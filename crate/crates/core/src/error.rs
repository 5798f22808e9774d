use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("state `{0}` has no outgoing edge")]
    SinkState(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("edge `{edge}` has {found} weights, expected {expected}")]
    DimensionMismatch {
        edge: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("dimension index {index} out of range 1..={dim}")]
    BadDimension { index: usize, dim: usize },
    #[error("zero denominator in threshold")]
    ZeroDenominator,
    #[error("weight arithmetic overflowed")]
    Overflow,
    #[error("restriction leaves state `{0}` without a successor")]
    Restriction(String),
    #[error("invalid play: {0}")]
    InvalidPlay(String),
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("game has player-2 state `{0}` but a one-player game is required")]
    NotOnePlayer(String),
    #[error("malformed strategy: {0}")]
    MalformedStrategy(String),
    #[error("{count} candidate strategies exceed the limit of {limit}")]
    TooManyStrategies { count: u128, limit: u128 },
    #[error("capped arena has {size} positions, above the limit of {limit}")]
    ArenaTooLarge { size: u128, limit: u128 },
    #[error("objective not supported here: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("system is infeasible")]
    Infeasible,
    #[error("witness does not match the graph: {0}")]
    WitnessMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
