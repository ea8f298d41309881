//! Factorization of quadratic matrices into two positive contractions.
//!
//! The pipeline is: detect `(a, b)`, bring `T` to canonical form, test
//! `‖P‖` against [`feasibility_bound`], factor each eigenvalue of `P` with
//! the scalar closed forms of [`factor_2x2`], lift the scalar maps to `P`
//! through its eigenbasis, and conjugate back.

mod bound;
mod two_by_two;

pub use bound::{feasibility_bound, FeasibilityReport};
pub use two_by_two::{factor_2x2, Factor2x2, FactorCase, CLAMP_AUDIT};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, min_eigenvalue, psd_check, ComplexMatrix};
use crate::quadratic::{canonicalize, detect_quadratic, CanonicalForm, QuadraticParams};
use crate::verify::{verify_certificate, VerificationReport};

/// Default tolerance for feasibility comparisons and certificates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `T = A·B` with both factors certified positive contractions.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub report: VerificationReport,
}

fn certify(target: &ComplexMatrix, a: ComplexMatrix, b: ComplexMatrix, tol: f64) -> Result<Factorization> {
    let report = verify_certificate(target, &a, &b, tol)?;
    if !report.pass {
        return Err(Error::CertificateFailed(format!("{report:?}")));
    }
    Ok(Factorization { a, b, report })
}

/// `[[aI, P], [0, bI]]`.
pub fn coupled_block(a: f64, b: f64, p: &ComplexMatrix) -> ComplexMatrix {
    let r = p.rows();
    let mut t = ComplexMatrix::zeros(2 * r, 2 * r);
    for i in 0..r {
        t[(i, i)] = a.into();
        t[(r + i, r + i)] = b.into();
    }
    t.set_block(0, r, p);
    t
}

/// Factors `[[aI, P], [0, bI]]` for Hermitian PSD `P` by applying the scalar
/// maps of [`factor_2x2`] to the eigenvalues of `P`.
pub fn factor_block(a: f64, b: f64, p: &ComplexMatrix, tol: f64) -> Result<Factorization> {
    p.ensure_square()?;
    if !psd_check(p, tol)? {
        return Err(Error::NotPsd { min_eigenvalue: min_eigenvalue(p)? });
    }
    let bound = feasibility_bound(a, b)?;
    let eig = hermitian_eig(p, tol)?;
    let z: Vec<f64> = eig.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
    let p_norm = z.last().copied().unwrap_or(0.0);
    if p_norm > bound + tol {
        return Err(Error::Infeasible(FeasibilityReport::evaluate(a.into(), b.into(), p_norm, tol)));
    }
    let scalar: Vec<Factor2x2> = z.iter().map(|&zk| factor_2x2(a, b, zk, tol)).collect::<Result<_>>()?;
    let lift = |pick: &dyn Fn(&Factor2x2) -> f64| eig.assemble(&scalar.iter().map(pick).collect::<Vec<_>>());
    let a_mat = ComplexMatrix::from_blocks(
        &lift(&|f| f.a_entries[0]),
        &lift(&|f| f.a_entries[1]),
        &lift(&|f| f.a_entries[1]),
        &lift(&|f| f.a_entries[2]),
    )?;
    let b_mat = ComplexMatrix::from_blocks(
        &lift(&|f| f.b_entries[0]),
        &lift(&|f| f.b_entries[1]),
        &lift(&|f| f.b_entries[1]),
        &lift(&|f| f.b_entries[2]),
    )?;
    certify(&coupled_block(a, b, p), a_mat, b_mat, tol)
}

fn unit_interval_real(z: Complex64) -> f64 {
    z.re.clamp(0.0, 1.0)
}

/// Eigenvalues this close to zero are detection round-off; treating them as
/// exact zeros selects the rank-one closed form, whose bound is larger.
pub const ZERO_SNAP: f64 = 1e-14;

fn snap_zero(x: f64) -> f64 {
    if x.abs() <= ZERO_SNAP { 0.0 } else { x }
}

/// `(U·(aI ⊕ bI ⊕ A_block)·U*, U·(I ⊕ I ⊕ B_block)·U*)`.
pub fn assemble_full_factors(
    form: &CanonicalForm,
    block_a: &ComplexMatrix,
    block_b: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let expected = 2 * form.r;
    for m in [block_a, block_b] {
        if m.rows() != expected || m.cols() != expected {
            return Err(Error::DimensionMismatch(format!(
                "block is {}x{}, canonical form needs {expected}x{expected}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let a = unit_interval_real(form.params.a);
    let b = unit_interval_real(form.params.b);
    let scalars = ComplexMatrix::from_diag(
        &std::iter::repeat(a).take(form.d1).chain(std::iter::repeat(b).take(form.d2)).collect::<Vec<_>>(),
    );
    let ones = ComplexMatrix::identity(form.d1 + form.d2);
    let full_a = ComplexMatrix::direct_sum(&[&scalars, block_a]).conjugate_by(&form.unitary)?;
    let full_b = ComplexMatrix::direct_sum(&[&ones, block_b]).conjugate_by(&form.unitary)?;
    Ok((full_a.hermitian_part(), full_b.hermitian_part()))
}

/// Everything the decision procedure learns about `T` without building
/// factors.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub params: QuadraticParams,
    pub form: CanonicalForm,
    pub feasibility: FeasibilityReport,
}

/// Detects, canonicalizes and evaluates feasibility.
pub fn analyze(t: &ComplexMatrix, tol: f64) -> Result<Analysis> {
    let params = detect_quadratic(t, tol)?;
    let form = canonicalize(t, &params, tol)?;
    let feasibility = FeasibilityReport::evaluate(params.a, params.b, form.p_norm(), tol);
    Ok(Analysis { params, form, feasibility })
}

/// Decides whether a quadratic `T` is a product of two positive contractions
/// and, if so, builds a certified pair.
pub fn factor_quadratic(t: &ComplexMatrix, tol: f64) -> Result<Factorization> {
    let analysis = analyze(t, tol)?;
    factor_analyzed(t, &analysis, tol)
}

/// Second half of [`factor_quadratic`] for callers that already hold the analysis.
pub fn factor_analyzed(t: &ComplexMatrix, analysis: &Analysis, tol: f64) -> Result<Factorization> {
    let feas = &analysis.feasibility;
    if !feas.feasible {
        return Err(Error::Infeasible(*feas));
    }
    let form = &analysis.form;
    let p = ComplexMatrix::from_diag(&form.p_values);
    let (block_a, block_b) = if form.r > 0 {
        let f = factor_block(snap_zero(feas.a), snap_zero(feas.b), &p, tol)?;
        (f.a, f.b)
    } else {
        (ComplexMatrix::zeros(0, 0), ComplexMatrix::zeros(0, 0))
    };
    let (a, b) = assemble_full_factors(form, &block_a, &block_b)?;
    certify(t, a, b, tol)
}
