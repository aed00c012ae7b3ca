use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid weight: {which}_{index} is zero")]
    InvalidWeight { which: &'static str, index: usize },

    #[error("singular triangle: zero diagonal entry in row {row}")]
    SingularTriangle { row: usize },

    #[error("operator is not a strict triangle: {0}")]
    NotTriangle(String),

    #[error("unsupported row evaluation: {0}")]
    UnsupportedRow(String),

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("unsupported class in table {table}: {source_space} -> {target}")]
    UnsupportedClass {
        table: u8,
        source_space: String,
        target: String,
    },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("invalid truncation schedule: {0}")]
    InvalidSchedule(String),

    #[error("row evaluation bound exceeded: rows up to {needed} requested, operator valid up to {limit}")]
    RowBoundExceeded { needed: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
