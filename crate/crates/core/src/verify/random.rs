//! Seeded random instances: unitaries, PSD contractions, and quadratic
//! matrices with prescribed canonical data.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{complete_orthonormal, ComplexMatrix};
use crate::quadratic::{CanonicalForm, QuadraticParams};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Orthonormalized complex Gaussian matrix.
pub fn random_unitary_with(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, rng);
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &columns {
                let c: Complex64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (y, x) in v.iter_mut().zip(q) {
                    *y -= c * x;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            break;
        }
        columns.push(v.into_iter().map(|z| z / norm).collect());
    }
    complete_orthonormal(&mut columns, n);
    ComplexMatrix::from_columns(n, &columns)
}

pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(n, &mut seeded_rng(seed))
}

/// `W·diag(λ)·W*` with Haar-like `W` and the given spectrum.
pub fn hermitian_with_spectrum(spectrum: &[f64], rng: &mut impl Rng) -> ComplexMatrix {
    let w = random_unitary_with(spectrum.len(), rng);
    ComplexMatrix::from_diag(spectrum).conjugate_by(&w).expect("square").hermitian_part()
}

/// Positive contraction with eigenvalues uniform in `[0, 1]`.
pub fn random_psd_contraction(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let spectrum: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    hermitian_with_spectrum(&spectrum, rng)
}

/// `U₀·(aI_{d1} ⊕ bI_{d2} ⊕ [[aI_r, diag(p)], [0, bI_r]])·U₀*` for a seeded
/// random unitary `U₀`.
pub fn random_quadratic(d1: usize, d2: usize, r: usize, a: f64, b: f64, p_spec: &[f64], seed: u64) -> Result<ComplexMatrix> {
    if p_spec.len() != r {
        return Err(Error::InvalidSpec(format!("{} coupling values for r = {r}", p_spec.len())));
    }
    if p_spec.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
        return Err(Error::InvalidSpec("coupling values must be finite and strictly positive".into()));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidSpec("a and b must be finite".into()));
    }
    let n = d1 + d2 + 2 * r;
    if n == 0 {
        return Err(Error::InvalidSpec("empty matrix".into()));
    }
    let mut p_values = p_spec.to_vec();
    p_values.sort_by(|x, y| y.total_cmp(x));
    let form = CanonicalForm {
        params: QuadraticParams { a: a.into(), b: b.into(), residual: 0.0 },
        d1,
        d2,
        r,
        p_values,
        unitary: random_unitary(n, seed),
    };
    Ok(crate::quadratic::assemble_from_canonical(&form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::{canonicalize, detect_quadratic};

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(6, 9);
        assert!((&u.adjoint() * &u).distance(&ComplexMatrix::identity(6)) < 1e-13);
        assert_eq!(u, random_unitary(6, 9));
    }

    #[test]
    fn scalar_instance_stays_scalar() {
        let t = random_quadratic(4, 0, 0, 0.3, 0.9, &[], 2).unwrap();
        assert!(t.distance(&ComplexMatrix::identity(4).scale_real(0.3)) < 1e-14);
    }

    #[test]
    fn canonical_data_survives_conjugation() {
        let t = random_quadratic(0, 0, 1, 0.36, 0.64, &[0.12], 4).unwrap();
        let q = detect_quadratic(&t, 1e-9).unwrap();
        assert!((q.a - 0.36).norm() < 1e-12 && (q.b - 0.64).norm() < 1e-12);
        let f = canonicalize(&t, &q, 1e-9).unwrap();
        assert!((f.p_values[0] - 0.12).abs() < 1e-12);
    }

    #[test]
    fn construction_identity() {
        let (a, b) = (0.25, 0.8);
        let t = random_quadratic(2, 3, 2, a, b, &[0.1, 0.4], 8).unwrap();
        let q = &(&(&t * &t) - &t.scale_real(a + b)) + &ComplexMatrix::identity(t.rows()).scale_real(a * b);
        assert!(q.frobenius_norm() <= 1e-10);
    }

    #[test]
    fn invalid_specs() {
        assert!(random_quadratic(1, 0, 1, 0.1, 0.2, &[0.0], 0).is_err());
        assert!(random_quadratic(1, 0, 2, 0.1, 0.2, &[0.3], 0).is_err());
        assert!(random_quadratic(0, 0, 0, 0.1, 0.2, &[], 0).is_err());
    }

    #[test]
    fn psd_contraction_spectrum() {
        let mut rng = seeded_rng(1);
        let m = random_psd_contraction(5, &mut rng);
        assert!(crate::linalg::psd_check(&m, 1e-12).unwrap());
        assert!(crate::linalg::contraction_check(&m, 1e-12).unwrap());
    }
}
