use thiserror::Error;

use crate::factor::FeasibilityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("Jacobi iteration did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("no contraction witness for the block matrix (residual {residual:.3e}, norm {norm:.3e})")]
    NoWitness { residual: f64, norm: f64 },
    #[error("matrix is not quadratic (residual {residual:.3e})")]
    NotQuadratic { residual: f64 },
    #[error("numerical rank is ambiguous: singular value {value:.3e} near cutoff {cutoff:.3e}")]
    RankAmbiguous { value: f64, cutoff: f64 },
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("not a product of two positive contractions: bound {:.6e}, norm {:.6e}", .0.bound, .0.p_norm)]
    Infeasible(FeasibilityReport),
    #[error("(2,1) block does not vanish (residual {residual:.3e})")]
    NotUpperTriangular { residual: f64 },
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
    #[error("cannot parse input: {0}")]
    Parse(String),
    #[error("invalid generator input: {0}")]
    InvalidSpec(String),
}
