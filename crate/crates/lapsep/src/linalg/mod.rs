//! Dense linear algebra kernel: exact rational symmetric matrices, complex
//! floating matrices, Jacobi eigensolves, one-sided Jacobi singular values,
//! block partial transpose, realignment, partial trace, and exact PSD
//! certification.

mod dense;
mod eigen;
mod rational;

pub(crate) use dense::kron_vec;
pub use dense::ComplexDenseMatrix;
pub use eigen::{
    singular_values, symmetric_eigendecomposition, symmetric_eigenvalues, Spectrum, SymmetricEigen,
    JACOBI_CONVERGENCE,
};
pub use rational::{exact_psd_check, PsdCertificate, RationalSymmetricMatrix};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension {n} does not match tensor split {p}x{q}")]
    DimensionMismatch { n: usize, p: usize, q: usize },

    #[error("matrix is not real symmetric (deviation {0:e})")]
    NotSymmetric(f64),

    #[error("vector is zero")]
    ZeroVector,

    #[error("vector length {len} does not match dimension {dim}")]
    VectorLength { len: usize, dim: usize },
}

/// Exact rational from an integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational n/d.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
