use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{contraction_check, psd_check, ComplexMatrix};

/// Independent checks on a claimed factorization `T = A·B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub a_psd: bool,
    pub a_contraction: bool,
    pub b_psd: bool,
    pub b_contraction: bool,
    /// `‖A·B − T‖_F`.
    pub product_residual: f64,
    pub tolerance: f64,
    /// All four flags, and `product_residual ≤ tolerance·max(1, ‖T‖_F)`.
    pub pass: bool,
}

pub fn verify_certificate(
    t: &ComplexMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<VerificationReport> {
    t.ensure_square()?;
    let n = t.rows();
    if [a.rows(), a.cols(), b.rows(), b.cols()].iter().any(|&d| d != n) {
        return Err(Error::DimensionMismatch(format!(
            "target is {n}x{n}, factors are {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let product_residual = a.matmul(b)?.distance(t);
    let a_psd = psd_check(a, tol)?;
    let a_contraction = contraction_check(a, tol)?;
    let b_psd = psd_check(b, tol)?;
    let b_contraction = contraction_check(b, tol)?;
    let pass = a_psd
        && a_contraction
        && b_psd
        && b_contraction
        && product_residual <= tol * t.frobenius_norm().max(1.0);
    Ok(VerificationReport { a_psd, a_contraction, b_psd, b_contraction, product_residual, tolerance: tol, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_passes() {
        let i = ComplexMatrix::identity(3);
        let r = verify_certificate(&i, &i, &i, 1e-9).unwrap();
        assert!(r.pass && r.product_residual == 0.0);
    }

    #[test]
    fn diagonal_guess_misses_the_coupling() {
        let t = ComplexMatrix::from_real(2, 2, &[0.36, 0.12, 0.0, 0.64]).unwrap();
        let r = verify_certificate(&t, &ComplexMatrix::from_diag(&[0.36, 0.64]), &ComplexMatrix::identity(2), 1e-9).unwrap();
        assert!(!r.pass);
        assert!((r.product_residual - 0.12).abs() < 1e-15);
        assert!(r.a_psd && r.a_contraction && r.b_psd && r.b_contraction);
    }

    #[test]
    fn flags_catch_bad_factors() {
        let t = ComplexMatrix::from_diag(&[-0.5, 0.5]);
        let r = verify_certificate(&t, &ComplexMatrix::from_diag(&[-0.5, 0.5]), &ComplexMatrix::identity(2), 1e-9).unwrap();
        assert!(!r.a_psd && r.a_contraction && !r.pass);
        let big = ComplexMatrix::identity(2).scale_real(2.0);
        let r = verify_certificate(&big, &big, &ComplexMatrix::identity(2), 1e-9).unwrap();
        assert!(r.a_psd && !r.a_contraction);
    }

    #[test]
    fn shape_mismatch() {
        let i = ComplexMatrix::identity(2);
        assert!(verify_certificate(&i, &ComplexMatrix::identity(3), &i, 1e-9).is_err());
    }
}
