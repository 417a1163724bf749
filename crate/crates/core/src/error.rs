use thiserror::Error;

/// Errors produced by the quaternion algebra, factorizations and pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero: quaternion has zero norm")]
    DivisionByZero,

    #[error("invalid rotor: norm {norm} is not 1 (or vector is not pure)")]
    InvalidRotor { norm: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not a complex adjoint (symmetry defect {defect:e})")]
    NotAdjoint { defect: f64 },

    #[error("rank error: {0}")]
    Rank(String),

    #[error("pass budget {0} is below the minimum of 2")]
    PassBudget(usize),

    #[error("bound precondition violated: {0}")]
    BoundPrecondition(String),

    #[error("mask error: {0}")]
    Mask(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;
