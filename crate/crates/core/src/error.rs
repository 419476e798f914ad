use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} is out of range for a hypergraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex {0} appears more than once in an edge")]
    RepeatedVertex(usize),

    #[error("edge arity {found} where {expected} was required")]
    Arity { expected: usize, found: usize },

    #[error("invalid embedding: {0}")]
    Embedding(String),

    #[error("{n} qubits exceeds the dense-matrix cap of {cap}")]
    TooManyQubits { n: usize, cap: usize },

    #[error(
        "numerical rank is unstable: gap ratio {gap_ratio:.3e} at tentative rank {rank}; \
         use the field backend"
    )]
    UnstableRank { gap_ratio: f64, rank: u64 },

    #[error("modulus {0} is too small; the field backend needs a prime above 2^60")]
    PrimeTooSmall(u64),

    #[error("no sign change of the bound for alpha in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
