//! Factors of the diagonal blocks of a block upper-triangular product.
//!
//! If `T = A·B` with `T₂₁ = 0`, write `A₁₂ = A₁^{1/2}·D·A₂^{1/2}` with `D` a
//! contraction and let `Π` project onto `range(A₂^{1/2})`. Then
//! `T₁ = [A₁^{1/2}(I − K*K)A₁^{1/2}]·B₁` with `K = Π·D*`, and the same
//! construction on the adjoint pair gives `T₂`.

use crate::error::{Error, Result};
use crate::linalg::{sqrt_psd, svd, ComplexMatrix};

use super::certificate::{verify_certificate, VerificationReport};

/// Relative singular value cutoff for the pseudo-inverses and range
/// projection here, scaled by the block dimension.
pub const BLOCK_RANK_EPS: f64 = 1e-10;

/// A certified pair `target = first · second`.
#[derive(Debug, Clone)]
pub struct FactorPair {
    pub target: ComplexMatrix,
    pub first: ComplexMatrix,
    pub second: ComplexMatrix,
    pub report: VerificationReport,
}

/// `(pinv(M), projection onto range(M))` for Hermitian PSD `M`.
fn pinv_and_range(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let s = svd(m)?;
    let cutoff = m.rows() as f64 * BLOCK_RANK_EPS * s.max_singular_value();
    let rank = s.rank_with_cutoff(cutoff);
    let u = s.left.block(0, 0, m.rows(), rank);
    Ok((s.pseudo_inverse_with_cutoff(cutoff), &u * &u.adjoint()))
}

/// First factor for the leading block; the second is `B₁` itself.
fn leading_first_factor(a: &ComplexMatrix, split: usize) -> Result<ComplexMatrix> {
    let n = a.rows();
    let m = n - split;
    let root1 = sqrt_psd(&a.block(0, 0, split, split))?;
    let root2 = sqrt_psd(&a.block(split, split, m, m))?;
    let (pinv1, _) = pinv_and_range(&root1)?;
    let (pinv2, range2) = pinv_and_range(&root2)?;
    let d = &(&pinv1 * &a.block(0, split, split, m)) * &pinv2;
    let k = &range2 * &d.adjoint();
    let inner = &ComplexMatrix::identity(split) - &(&k.adjoint() * &k);
    Ok((&(&root1 * &inner) * &root1).hermitian_part())
}

/// Block swap `J` moving the last `n − split` coordinates to the front.
fn swap_permutation(n: usize, split: usize) -> ComplexMatrix {
    let m = n - split;
    ComplexMatrix::from_fn(n, n, |i, j| {
        let hit = if i < m { j == split + i } else { j == i - m };
        if hit { 1.0.into() } else { 0.0.into() }
    })
}

/// Certified factor pairs for `T₁` and `T₂` where `T = A·B` is block upper
/// triangular at `split`.
pub fn diagonal_block_factors(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    split: usize,
    tol: f64,
) -> Result<(FactorPair, FactorPair)> {
    a.ensure_square()?;
    let n = a.rows();
    if b.rows() != n || b.cols() != n {
        return Err(Error::DimensionMismatch("factors must have equal square shapes".into()));
    }
    if split == 0 || split >= n {
        return Err(Error::Domain(format!("split {split} must lie strictly between 0 and {n}")));
    }
    let t = a.matmul(b)?;
    let lower = t.block(split, 0, n - split, split).frobenius_norm();
    if lower > tol * t.frobenius_norm().max(1.0) {
        return Err(Error::NotUpperTriangular { residual: lower });
    }
    let m = n - split;

    let t1 = t.block(0, 0, split, split);
    let first1 = leading_first_factor(a, split)?;
    let second1 = b.block(0, 0, split, split);

    // T* = B·A; conjugating by J puts T₂* in the leading block.
    let j = swap_permutation(n, split);
    let b_swapped = b.conjugate_by(&j)?;
    let t2 = t.block(split, split, m, m);
    let f = leading_first_factor(&b_swapped, m)?;
    let first2 = a.block(split, split, m, m);

    let pair = |target: ComplexMatrix, first: ComplexMatrix, second: ComplexMatrix| -> Result<FactorPair> {
        let report = verify_certificate(&target, &first, &second, tol)?;
        if !report.pass {
            return Err(Error::CertificateFailed(format!("diagonal block factors: {report:?}")));
        }
        Ok(FactorPair { target, first, second, report })
    };
    Ok((pair(t1, first1, second1)?, pair(t2, first2, f)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_block;

    #[test]
    fn identity_pair() {
        let i = ComplexMatrix::identity(3);
        for split in 1..3 {
            let (p1, p2) = diagonal_block_factors(&i, &i, split, 1e-9).unwrap();
            assert!(p1.first.distance(&ComplexMatrix::identity(split)) < 1e-14);
            assert!(p2.report.pass);
        }
    }

    #[test]
    fn lifted_block() {
        let f = factor_block(0.36, 0.64, &ComplexMatrix::from_diag(&[0.05]), 1e-9).unwrap();
        let (p1, p2) = diagonal_block_factors(&f.a, &f.b, 1, 1e-9).unwrap();
        assert!((p1.target[(0, 0)].re - 0.36).abs() < 1e-14);
        assert!((p2.target[(0, 0)].re - 0.64).abs() < 1e-14);
        assert!(p1.report.product_residual < 1e-12 && p2.report.product_residual < 1e-12);
    }

    #[test]
    fn diagonal_factors() {
        let (a, b) = (0.3, 0.9);
        let (p1, p2) =
            diagonal_block_factors(&ComplexMatrix::from_diag(&[a, 1.0]), &ComplexMatrix::from_diag(&[1.0, b]), 1, 1e-9)
                .unwrap();
        assert!((p1.target[(0, 0)].re - a).abs() < 1e-15 && (p2.target[(0, 0)].re - b).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_factor() {
        // Rank-one A against B = diag(0, 1).
        let f = factor_block(0.0, 0.5, &ComplexMatrix::from_diag(&[0.3, 0.0]), 1e-9).unwrap();
        let (p1, p2) = diagonal_block_factors(&f.a, &f.b, 2, 1e-9).unwrap();
        assert!(p1.report.pass && p2.report.pass);
    }

    #[test]
    fn lower_block_must_vanish() {
        let a = ComplexMatrix::from_real(2, 2, &[0.5, 0.2, 0.2, 0.5]).unwrap();
        assert!(matches!(
            diagonal_block_factors(&a, &ComplexMatrix::identity(2), 1, 1e-9),
            Err(Error::NotUpperTriangular { .. })
        ));
        assert!(diagonal_block_factors(&a, &a, 0, 1e-9).is_err());
    }
}
