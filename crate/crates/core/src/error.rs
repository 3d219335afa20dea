use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix {matrix} has no rows or no columns")]
    EmptyMatrix { matrix: &'static str },

    #[error("matrix {matrix} has a negative entry {value} at ({row}, {col})")]
    NegativeEntry {
        matrix: &'static str,
        row: usize,
        col: usize,
        value: f64,
    },

    #[error("matrix {matrix} has a non-finite entry at ({row}, {col})")]
    NonFinite {
        matrix: &'static str,
        row: usize,
        col: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index ({i}, {j}) out of range for a {n} x {d} model")]
    IndexOutOfRange { i: usize, j: usize, n: usize, d: usize },

    #[error("degenerate model: the expected edge count is zero")]
    DegenerateModel,

    #[error("operation requires a square model or edge list (Y = X)")]
    NotSquare,

    #[error("alias table needs at least one positive weight")]
    AllZeroWeights,

    #[error("weight {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weight {index} is not finite")]
    NonFiniteWeight { index: usize },

    #[error("expected edge count {0} exceeds the supported maximum 2^62")]
    ModelTooLarge(f64),

    #[error("gave up after {0} consecutive self-loop rejections")]
    RejectionStall(u64),

    #[error("block probability {value} at ({row}, {col}) must lie in [0, 1)")]
    ProbabilityOutOfRange { row: usize, col: usize, value: f64 },

    #[error("block label {label} at node {node} is out of range for {blocks} blocks")]
    LabelOutOfRange { node: usize, label: usize, blocks: usize },

    #[error("degree parameter theta[{index}] = {value} must be positive")]
    NonPositiveTheta { index: usize, value: f64 },

    #[error("membership row {row} sums to {sum}, expected 1")]
    SimplexViolation { row: usize, sum: f64 },

    #[error("overlap matrix entry ({row}, {col}) = {value} is not 0 or 1")]
    NonBinaryEntry { row: usize, col: usize, value: f64 },

    #[error("all node weights are zero")]
    AllZero,

    #[error("the -ln(1-B) Bernoulli transform only applies to the plain SBM")]
    UnsupportedMeanFunction,

    #[error("dense oracle refused a {rows} x {cols} matrix (limit 1e8 cells)")]
    TooLarge { rows: usize, cols: usize },

    #[error("rate {value} at ({row}, {col}) exceeds 1 and cannot be a Bernoulli probability")]
    ProbabilityOverflow { row: usize, col: usize, value: f64 },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{requested} factor entries exceed the memory cap of {cap}")]
    ResourceLimit { requested: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
