use thiserror::Error;

use crate::design::ColumnLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("no implemented Hadamard construction of order {0}")]
    NoConstruction(usize),

    #[error("run count {0} is not a multiple of 4")]
    NotMultipleOfFour(usize),

    #[error("matrix is not Hadamard")]
    NotHadamard,

    #[error("matrix is not normalized: first column is not all +1")]
    NotNormalized,

    #[error("invalid entry {value} at row {row}, column {col}: entries must be +1 or -1")]
    InvalidEntry { row: usize, col: usize, value: i64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("duplicate column label {0}")]
    DuplicateLabel(ColumnLabel),

    #[error("column index {index} out of range for {cols} columns")]
    ColumnOutOfRange { index: usize, cols: usize },

    #[error("invalid column subset: {0}")]
    InvalidSubset(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("J3 = {j3} with n = {n} does not give an integral d in [0, n/4]")]
    NonIntegralD { n: usize, j3: i64 },

    #[error("the starting array is not an orthogonal array of strength 2")]
    NotOrthogonalArray,

    #[error("{family} needs q in {allowed}, got q = {q} with n = {n}")]
    UnsupportedColumnCount { family: &'static str, n: usize, q: usize, allowed: &'static str },

    #[error("{n} runs and {m} columns is not supersaturated (need n <= m)")]
    NotSupersaturated { n: usize, m: usize },

    #[error("label {0} is not a column of the design")]
    LabelNotFound(ColumnLabel),

    #[error("starting array column labels must all be main effects, found {0}")]
    NonMainStartColumn(ColumnLabel),

    #[error("need at least two columns, got {0}")]
    TooFewColumns(usize),

    #[error("no decomposition m = a(n-1) ± r with a >= 1 and 0 <= r <= n/2 for n = {n}, m = {m}")]
    NoDecomposition { n: usize, m: usize },

    #[error("no closed form for {family} with n = {n}, q = {q}")]
    UncoveredCase { family: &'static str, n: usize, q: usize },

    #[error("closed form for {family} with n = {n}, q = {q} requires d")]
    MissingD { family: &'static str, n: usize, q: usize },

    #[error("direct E(s^2) = {direct} disagrees with the closed form {closed}")]
    ClosedFormMismatch { direct: String, closed: String },

    #[error("line {line}, column {column}: {message}")]
    Csv { line: usize, column: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
