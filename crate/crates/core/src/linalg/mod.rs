//! Dense complex linear algebra: the matrix type, Hermitian eigensolver,
//! SVD, and positivity tests everything else is built on.

mod eig;
mod matrix;
mod positivity;
mod svd;

pub use eig::{hermitian_eig, HermitianEig, JACOBI_MAX_SWEEPS, JACOBI_RELATIVE_OFF};
pub use matrix::ComplexMatrix;
pub use positivity::{
    block_positivity_witness, contraction_check, min_eigenvalue, operator_norm, psd_check, sqrt_psd,
};
pub use svd::{svd, Svd, RANK_EPS};

pub(crate) use svd::complete_orthonormal;

/// Checked matrix product `A·B`.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    a.matmul(b)
}
