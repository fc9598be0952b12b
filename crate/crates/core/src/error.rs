use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid simple type {0}")]
    InvalidType(String),

    #[error("not a root: {0}")]
    NotARoot(String),

    #[error("root string through ±α is degenerate")]
    DegenerateString,

    #[error("bracket table is not antisymmetric at ({0}, {1})")]
    Antisymmetry(usize, usize),

    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),

    #[error("invariant form is degenerate")]
    DegenerateForm,

    #[error("algebra carries no root annotations")]
    MissingRoots,

    #[error("subspace is not closed: {0}")]
    NotClosed(String),

    #[error("restriction leaves the seaweed on arguments {0:?}")]
    Restriction(Vec<usize>),

    #[error("cochain is not a cocycle")]
    NotCocycle,

    #[error("context mismatch: {0}")]
    Context(String),

    #[error("section is not a complement to the center: {0}")]
    Section(String),
}

pub type Result<T> = std::result::Result<T, Error>;
