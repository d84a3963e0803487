//! Generalized singular value calculus on the matrix algebra `M_n` with
//! normalized trace, plus an executable suite of logarithmic-submajorization
//! and Fuglede–Kadison determinant inequalities.
//!
//! Layout:
//! - [`matrix`]: dense complex matrices, arithmetic, text serialization
//! - [`decomp`]: Jacobi eigen/SVD, polar decomposition, contraction factors
//! - [`scalar`]: scalar function descriptors and matrix functional calculus
//! - [`mu`]: step functions, log-integral curves, determinants, submajorization
//! - [`checks`]: every inequality statement as an executable check
//! - [`sampler`]: counter-based deterministic random input generators
//! - [`witness`]: witness file serialization for replay

pub mod checks;
pub mod decomp;
pub mod matrix;
pub mod mu;
pub mod sampler;
pub mod scalar;
pub mod witness;

pub use checks::{CheckResult, StatementId, StatementParams};
pub use decomp::{hermitian_eigen, operator_norm, polar, svd, HermitianEigen, SingularSpectrum};
pub use matrix::ComplexMatrix;
pub use mu::{
    fk_determinant, lambda_curve, log_submajorize, mu, mu_left, rearrange_function,
    shifted_log_curve, trace_of_function, CheckMargin, Continuity, LambdaCurve, StepFunction,
};
pub use scalar::{apply_scalar_function, ScalarFunction, ScalarKind};

/// Margin tolerance for inequality checks, in log units.
pub const SLACK_TOL: f64 = 1e-8;

/// Values below this are treated as exact zero when taking logarithms.
pub const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NonConvergence(usize),
    #[error("matrix is not Hermitian (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    NotHermitian { residual: f64, tolerance: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("2x2 operator block is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsdBlock { min_eigenvalue: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operator norm {norm} exceeds 1: not a contraction")]
    NotContraction { norm: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid statement parameters: {0}")]
    InvalidStatementParams(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
