use thiserror::Error;

use crate::tree::Tree;

pub type Result<T> = std::result::Result<T, BhvError>;

#[derive(Debug, Error)]
pub enum BhvError {
    #[error("leaf universes differ: {0} vs {1} leaves")]
    LeafCountMismatch(usize, usize),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("splits {0} and {1} are incompatible")]
    IncompatibleSplits(String, String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("newick error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("label dictionary: {0}")]
    Label(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("topology is not a sub-topology of the tree: {0}")]
    NotSubTopology(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("Fréchet mean solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        best: Box<Tree>,
        residual: f64,
        iterations: usize,
    },

    #[error("samples are not paired: {0} vs {1} trees")]
    UnpairedSamples(usize, usize),

    #[error("mean topologies differ and cannot be compared: {0} vs {1}")]
    IncomparableTopologies(String, String),
}

impl BhvError {
    /// True for errors caused by malformed or inconsistent input data.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, BhvError::NonConvergence { .. })
    }
}
