//! Norms, positivity and contraction tests, PSD square roots, and the
//! contraction witness for positivity of a 2×2 block operator.

use super::{hermitian_eig, svd, ComplexMatrix, RANK_EPS};
use crate::error::{Error, Result};

/// Tolerance handed to the eigensolver when the input has been symmetrized
/// already and only needs the Hermitian precondition to pass.
const SYMMETRIZED: f64 = 1e-6;

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    Ok(svd(a)?.max_singular_value())
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    h.ensure_square()?;
    Ok(hermitian_eig(&h.hermitian_part(), SYMMETRIZED)?.min_eigenvalue())
}

/// True iff `H` is Hermitian within `tol·max(1, ‖H‖_F)` and the smallest
/// eigenvalue of its Hermitian part is at least `−tol`.
pub fn psd_check(h: &ComplexMatrix, tol: f64) -> Result<bool> {
    h.ensure_square()?;
    if h.hermitian_defect() > tol * h.frobenius_norm().max(1.0) {
        return Ok(false);
    }
    Ok(min_eigenvalue(h)? >= -tol)
}

/// True iff `‖A‖ ≤ 1 + tol`.
pub fn contraction_check(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(operator_norm(a)? <= 1.0 + tol)
}

/// Square root of a PSD matrix; eigenvalues below zero (round-off) are
/// clamped first.
pub fn sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    h.ensure_square()?;
    Ok(hermitian_eig(&h.hermitian_part(), SYMMETRIZED)?.map(|x| x.max(0.0).sqrt()))
}

/// `(H^{1/2}, pinv(H^{1/2}))`. The rank cutoff is applied to the eigenvalues
/// of `H` itself: round-off of size ε in a zero eigenvalue would survive as
/// √ε in the root and blow up its pseudo-inverse.
fn root_and_pinv_root(h: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let e = hermitian_eig(&h.hermitian_part(), SYMMETRIZED)?;
    let cutoff = h.rows() as f64 * RANK_EPS * e.max_eigenvalue().max(0.0);
    let root = e.map(|x| x.max(0.0).sqrt());
    let pinv = e.map(|x| if x > cutoff { 1.0 / x.sqrt() } else { 0.0 });
    Ok((root, pinv))
}

/// Finds a contraction `D` with `A12 = A11^{1/2} · D · A22^{1/2}`.
///
/// Such a `D` exists exactly when `[[A11, A12], [A12*, A22]]` is positive
/// semidefinite. The candidate is `pinv(A11^{1/2}) · A12 · pinv(A22^{1/2})`;
/// it is accepted when the factorization residual is at most
/// `tol·max(1, ‖block‖_F)` and `‖D‖ ≤ 1 + tol`.
pub fn block_positivity_witness(
    a11: &ComplexMatrix,
    a12: &ComplexMatrix,
    a22: &ComplexMatrix,
    tol: f64,
) -> Result<ComplexMatrix> {
    a11.ensure_square()?;
    a22.ensure_square()?;
    if a12.rows() != a11.rows() || a12.cols() != a22.rows() {
        return Err(Error::DimensionMismatch("off-diagonal block does not match diagonal blocks".into()));
    }
    for diag in [a11, a22] {
        if !psd_check(diag, tol)? {
            return Err(Error::NotPsd { min_eigenvalue: min_eigenvalue(diag)? });
        }
    }
    let (s11, p11) = root_and_pinv_root(a11)?;
    let (s22, p22) = root_and_pinv_root(a22)?;
    let d = &(&p11 * a12) * &p22;
    let residual = a12.distance(&(&(&s11 * &d) * &s22));
    let norm = operator_norm(&d)?;
    let scale = (a11.frobenius_norm().powi(2) + 2.0 * a12.frobenius_norm().powi(2) + a22.frobenius_norm().powi(2))
        .sqrt()
        .max(1.0);
    if residual <= tol * scale && norm <= 1.0 + tol {
        Ok(d)
    } else {
        Err(Error::NoWitness { residual, norm })
    }
}
