use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },

    #[error("invalid network: {0}")]
    Validation(String),

    /// Components are listed with 1-based node numbers.
    #[error("network is disconnected: {} components {:?}", components.len(), components)]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("element has zero impedance")]
    DegenerateElement,

    #[error("node {node} out of range 1..={node_count}")]
    InvalidNode { node: usize, node_count: usize },

    #[error("matrix is not symmetric (max |L - L^T| = {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    Convergence { sweeps: usize },

    #[error("degenerate cluster construction failed (vector norm {norm:e})")]
    DegenerateConstruction { norm: f64 },

    #[error("no zero mode overlaps the constant vector (best overlap {overlap})")]
    NoTrivialZero { overlap: f64 },

    #[error("ring is within {deviation:e} of its resonance; product identity is ill-conditioned")]
    NearSingular { deviation: f64 },
}
