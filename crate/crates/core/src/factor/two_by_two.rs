//! Closed-form factorization of `[[a, z], [0, b]]` into two real symmetric
//! positive contractions.

use serde::Serialize;

use super::bound::{feasibility_bound, FeasibilityReport};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Round-off allowed below zero in the λ-discriminant before the inputs are
/// declared inconsistent.
pub const CLAMP_AUDIT: f64 = 1e-12;

/// Which construction produced the factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorCase {
    /// `diag(a, 1) · diag(1, b)`, used when the bound is (numerically) zero.
    Diagonal,
    /// `min(a, b) = 0`: a rank-one `A` against `B = diag(0, 1)`.
    RankOne,
    /// `0 < a ≠ b < 1`: `A` with spectrum `{1, λ₁}`, `B` with spectrum `{1, λ₂}`.
    Interior,
}

/// Symmetric 2×2 factors `A = [[a11, a12], [a12, a22]]`, `B` likewise, with
/// `A·B = [[a, z], [0, b]]`.
///
/// `lambda1 ≥ lambda2` are the roots of
/// `λ² − (a + b − z²/((1−a)(1−b)))·λ + ab` and `gamma = a/λ₁`. The
/// eigenvalue identities `σ(A) = {1, λ₁}`, `σ(B) = {1, λ₂}` hold in the
/// [`FactorCase::Interior`] branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Factor2x2 {
    pub a_entries: [f64; 3],
    pub b_entries: [f64; 3],
    pub lambda1: f64,
    pub lambda2: f64,
    pub gamma: f64,
    pub case: FactorCase,
    /// Set when `a > b` and the factors come from the mirrored instance.
    pub reflected: bool,
}

fn symmetric(e: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[e[0], e[1], e[1], e[2]]).expect("finite entries")
}

impl Factor2x2 {
    pub fn a_matrix(&self) -> ComplexMatrix {
        symmetric(self.a_entries)
    }

    pub fn b_matrix(&self) -> ComplexMatrix {
        symmetric(self.b_entries)
    }

    /// Real product `A·B` as a row-major array.
    pub fn product(&self) -> [f64; 4] {
        let [a11, a12, a22] = self.a_entries;
        let [b11, b12, b22] = self.b_entries;
        [a11 * b11 + a12 * b12, a11 * b12 + a12 * b22, a12 * b11 + a22 * b12, a12 * b12 + a22 * b22]
    }

    /// `‖A·B − [[a, z], [0, b]]‖_F`.
    pub fn residual(&self, a: f64, b: f64, z: f64) -> f64 {
        let p = self.product();
        let target = [a, z, 0.0, b];
        p.iter().zip(target).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
    }

    /// Factors of the mirrored target `[[b, z], [0, a]]`: with `J` the swap,
    /// `A·B = C` gives `(J·B·J)·(J·A·J) = J·Cᵀ·J`.
    fn mirrored(self) -> Self {
        let swap = |e: [f64; 3]| [e[2], e[1], e[0]];
        Self { a_entries: swap(self.b_entries), b_entries: swap(self.a_entries), reflected: !self.reflected, ..self }
    }
}

/// Roots `λ₁ ≥ λ₂` of the λ-polynomial for `0 < a < b < 1`, together with
/// `λ₁ − a`. With `d = b − a` and `s = z²/((1−a)(1−b))` the discriminant is
/// `d² − s·(2(a+b) − s)` and `λ₁ − a = (d − s + √disc)/2`; both forms avoid
/// the cancellation in `trace² − 4ab` when `a` and `b` are close.
fn lambda_roots(a: f64, b: f64, s: f64) -> Result<(f64, f64, f64)> {
    let d = b - a;
    let mut disc = d * d - s * (2.0 * (a + b) - s);
    if disc < 0.0 {
        if disc < -CLAMP_AUDIT {
            return Err(Error::Domain(format!("negative discriminant {disc:.3e}")));
        }
        disc = 0.0;
    }
    // s ≤ (√b − √a)² ≤ d on the feasible set, so no term cancels.
    let above_a = ((d - s).max(0.0) + disc.sqrt()) / 2.0;
    let lambda1 = a + above_a;
    Ok((lambda1, a * b / lambda1, above_a))
}

/// Factors `[[a, z], [0, b]]` (`a, b ∈ [0, 1]`, `z ≥ 0`) as `A·B` with `A`,
/// `B` real symmetric positive contractions, `a12 ≥ 0` and `b12 ≤ 0` when
/// `a ≤ b` (signs swap for `a > b`).
///
/// Fails with [`Error::Infeasible`] when `z` exceeds the feasibility bound by
/// more than `tol`; inside that slack `z` is clamped to the bound.
pub fn factor_2x2(a: f64, b: f64, z: f64, tol: f64) -> Result<Factor2x2> {
    for (name, x) in [("a", a), ("b", b)] {
        if !(x >= -tol && x <= 1.0 + tol) {
            return Err(Error::Domain(format!("{name} = {x} is outside [0, 1]")));
        }
    }
    if !(z >= -tol) || !z.is_finite() {
        return Err(Error::Domain(format!("z = {z} must be nonnegative")));
    }
    let (a, b, z) = (a.clamp(0.0, 1.0), b.clamp(0.0, 1.0), z.max(0.0));
    let bound = feasibility_bound(a, b)?;
    if z > bound + tol {
        let report = FeasibilityReport::evaluate(a.into(), b.into(), z, tol);
        return Err(Error::Infeasible(report));
    }
    let z = z.min(bound);
    if a > b {
        return Ok(factor_ordered(b, a, z, bound, tol)?.mirrored());
    }
    factor_ordered(a, b, z, bound, tol)
}

fn factor_ordered(a: f64, b: f64, z: f64, bound: f64, tol: f64) -> Result<Factor2x2> {
    debug_assert!(a <= b);
    if bound <= tol {
        // The residual of this branch is z ≤ bound ≤ tol.
        let lambda1 = b;
        return Ok(Factor2x2 {
            a_entries: [a, 0.0, 1.0],
            b_entries: [1.0, 0.0, b],
            lambda1,
            lambda2: a,
            gamma: if lambda1 > 0.0 { a / lambda1 } else { 0.0 },
            case: FactorCase::Diagonal,
            reflected: false,
        });
    }
    if a == 0.0 {
        // bound > 0 forces 0 < b < 1 here.
        return Ok(Factor2x2 {
            a_entries: [z * z / b, z, b],
            b_entries: [0.0, 0.0, 1.0],
            lambda1: b - z * z / (1.0 - b),
            lambda2: 0.0,
            gamma: 0.0,
            case: FactorCase::RankOne,
            reflected: false,
        });
    }

    let slope = z * z / ((1.0 - a) * (1.0 - b));
    let (lambda1, lambda2, above_a) = lambda_roots(a, b, slope)?;
    let gamma = a / lambda1;
    let one_minus_gamma = above_a / lambda1;
    // (1 − a) − γ(1 − b), written as a sum of nonnegative terms.
    let denom = (b - a) + one_minus_gamma * (1.0 - b);
    let a3 = (b - a) / denom;
    // b − λ₁ = q(b)/(b − λ₂) with q(b) = b·slope and b − λ₂ = b(1 − γ).
    let headroom = if slope == 0.0 { 0.0 } else { slope / one_minus_gamma };
    if !(headroom >= 0.0) || !headroom.is_finite() {
        return Err(Error::Domain(format!("b − λ₁ = {headroom:.3e} is not a valid headroom")));
    }
    // a3 − λ₁ = (b − λ₁)(1 − a)/denom and 1 − a3 = (1 − b)(1 − γ)/denom.
    let a3_minus_l1 = headroom * (1.0 - a) / denom;
    let one_minus_a3 = (1.0 - b) * one_minus_gamma / denom;
    let a1 = one_minus_a3 + lambda1;
    let a2 = (one_minus_a3 * a3_minus_l1).sqrt();
    let a4 = (lambda2 / (gamma * gamma) + a2 * a2) / a3;
    Ok(Factor2x2 {
        a_entries: [a1, a2, a3],
        b_entries: [gamma * a3, -gamma * a2, gamma * a4],
        lambda1,
        lambda2,
        gamma,
        case: FactorCase::Interior,
        reflected: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{contraction_check, hermitian_eig, psd_check};

    const TOL: f64 = 1e-9;

    fn assert_certified(f: &Factor2x2, a: f64, b: f64, z: f64, slack: f64) {
        assert!(f.residual(a, b, z) <= slack, "residual {} for {f:?}", f.residual(a, b, z));
        for m in [f.a_matrix(), f.b_matrix()] {
            assert!(psd_check(&m, 1e-10).unwrap() && contraction_check(&m, 1e-10).unwrap(), "{m:?}");
        }
    }

    #[test]
    fn counterexample_is_infeasible() {
        match factor_2x2(0.36, 0.64, 0.12, TOL) {
            Err(Error::Infeasible(r)) => assert!((r.bound - 0.096).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_branches_are_diagonal() {
        for (a, b) in [(0.4, 0.4), (0.3, 1.0), (0.0, 0.0), (1.0, 1.0)] {
            let f = factor_2x2(a, b, 0.0, TOL).unwrap();
            assert_eq!(f.case, FactorCase::Diagonal);
            assert_eq!((f.a_entries, f.b_entries), ([a, 0.0, 1.0], [1.0, 0.0, b]));
        }
        assert!(matches!(factor_2x2(0.4, 0.4, 1e-3, TOL), Err(Error::Infeasible(_))));
        assert!(matches!(factor_2x2(0.5, 1.0, 1e-3, TOL), Err(Error::Infeasible(_))));
    }

    #[test]
    fn zero_coupling_gives_diagonal_factors_everywhere() {
        for (a, b) in [(0.2, 0.7), (0.0, 0.5), (0.9, 0.1)] {
            let f = factor_2x2(a, b, 0.0, TOL).unwrap();
            assert_eq!(f.a_entries[1], 0.0);
            assert_eq!(f.b_entries[1], 0.0);
            assert_certified(&f, a, b, 0.0, 1e-15);
        }
    }

    #[test]
    fn rank_one_case() {
        // z²/b = 0.09/0.5; A has eigenvalues {0, 0.68}.
        let f = factor_2x2(0.0, 0.5, 0.3, TOL).unwrap();
        assert_eq!(f.case, FactorCase::RankOne);
        let [a11, a12, a22] = f.a_entries;
        assert!((a11 - 0.18).abs() < 1e-15 && a12 == 0.3 && a22 == 0.5);
        assert_eq!(f.b_entries, [0.0, 0.0, 1.0]);
        assert_eq!(f.product(), [0.0, 0.3, 0.0, 0.5]);
        assert_certified(&f, 0.0, 0.5, 0.3, 1e-15);
    }

    #[test]
    fn interior_case_on_the_boundary() {
        // Hand evaluation: λ₁ = λ₂ = 0.48, γ = 0.75, a3 = 0.28/0.37,
        // a1 = 1.48 − a3, a2 = √((1 − a3)(a3 − 0.48)).
        let f = factor_2x2(0.36, 0.64, 0.096, TOL).unwrap();
        assert_eq!(f.case, FactorCase::Interior);
        assert!((f.lambda1 - 0.48).abs() < 1e-7 && (f.lambda2 - 0.48).abs() < 1e-7);
        assert!((f.gamma - 0.75).abs() < 1e-7);
        let a3 = 28.0 / 37.0;
        let a2 = ((1.0 - a3) * (a3 - 0.48f64)).sqrt();
        let exact = [1.48 - a3, a2, a3, 0.75 * a3, -0.75 * a2, 1.48 - 0.75 * a3];
        for (got, want) in f.a_entries.iter().chain(&f.b_entries).zip(&exact) {
            assert!((got - want).abs() < 1e-7, "{f:?}");
        }
        // Six-digit reference values; the off-diagonal and last entries are
        // rounded a few units in the sixth place away from the exact ones.
        let rounded = [0.723243, 0.259463, 0.756757, 0.567568, -0.194597, 0.912434];
        for (got, want) in f.a_entries.iter().chain(&f.b_entries).zip(&rounded) {
            assert!((got - want).abs() < 5e-6, "{f:?}");
        }
        let b = f.b_matrix();
        assert!((b.trace().re - 1.48).abs() < 1e-7);
        assert_certified(&f, 0.36, 0.64, 0.096, 1e-14);
    }

    #[test]
    fn interior_spectra() {
        let (a, b, z) = (0.2, 0.7, 0.1);
        let f = factor_2x2(a, b, z, TOL).unwrap();
        let ea = hermitian_eig(&f.a_matrix(), 1e-12).unwrap().eigenvalues;
        let eb = hermitian_eig(&f.b_matrix(), 1e-12).unwrap().eigenvalues;
        assert!((ea[0] - f.lambda1).abs() < 1e-12 && (ea[1] - 1.0).abs() < 1e-12);
        assert!((eb[0] - f.lambda2).abs() < 1e-12 && (eb[1] - 1.0).abs() < 1e-12);
        assert!(f.a_entries[1] >= 0.0 && f.b_entries[1] <= 0.0);
        assert_certified(&f, a, b, z, 1e-14);
    }

    #[test]
    fn reflected_order() {
        for (a, b, z) in [(0.64, 0.36, 0.09), (0.5, 0.0, 0.3), (0.9, 0.05, 0.05)] {
            let f = factor_2x2(a, b, z, TOL).unwrap();
            assert!(f.reflected);
            assert!(f.a_entries[1] <= 0.0 && f.b_entries[1] >= 0.0);
            assert_certified(&f, a, b, z, 1e-14);
        }
    }

    #[test]
    fn slack_above_bound_is_clamped() {
        let bound = feasibility_bound(0.2, 0.7).unwrap();
        let f = factor_2x2(0.2, 0.7, bound + 0.5e-9, TOL).unwrap();
        assert!(f.residual(0.2, 0.7, bound + 0.5e-9) <= 10.0 * TOL);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(factor_2x2(-0.5, 0.5, 0.0, TOL), Err(Error::Domain(_))));
        assert!(matches!(factor_2x2(0.5, 0.2, -1.0, TOL), Err(Error::Domain(_))));
        assert!(matches!(factor_2x2(0.5, 0.2, f64::NAN, TOL), Err(Error::Domain(_))));
    }
}
