use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lattice is degenerate (determinant zero)")]
    Degenerate,

    #[error("lattice is not even")]
    OddLattice,

    #[error("lattice is not definite")]
    Indefinite,

    #[error("lattice has rank zero")]
    EmptyLattice,

    #[error("sublattices live in different ambient lattices")]
    AmbientMismatch,

    #[error("glue vector does not lie in the dual lattice")]
    GlueOutsideDual,

    #[error("glue subgroup is not totally isotropic: {0}")]
    NonIsotropicGlue(String),

    #[error("glued lattice is not even and integral: {0}")]
    BadOverlattice(String),

    #[error("glue order mismatch: declared {declared}, realised index {actual}")]
    GlueOrderMismatch { declared: u64, actual: String },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("unsupported characteristic p = {0} (expected 5, 7 or 11)")]
    UnsupportedPrime(u64),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
