//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius mass, relative to `‖H‖_F`, at which a sweep stops.
pub const JACOBI_RELATIVE_OFF: f64 = 1e-14;
/// Hard cap on full sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// `H = vectors · diag(eigenvalues) · vectors*` with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Functional calculus: `W · diag(f(λ)) · W*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        self.assemble(&values)
    }

    /// `W · diag(values) · W*` for any real spectrum aligned with the eigenvectors.
    pub fn assemble(&self, values: &[f64]) -> ComplexMatrix {
        let w = &self.vectors;
        let n = w.rows();
        let k = values.len();
        assert_eq!(k, w.cols(), "one value per eigenvector");
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..k).map(|m| w[(i, m)] * w[(j, m)].conj() * values[m]).sum()
        })
    }
}

/// A unitary 2×2 rotation acting on coordinates `(p, q)`:
/// `V = [[c, s], [−s·conj(e), c·conj(e)]]` where `e` is the phase of the
/// off-diagonal entry being annihilated.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PlaneRotation {
    pub c: f64,
    pub s: f64,
    pub phase: Complex64,
    /// tan of the real rotation angle; diagonal entries move by `∓t·|g|`.
    pub t: f64,
}

impl PlaneRotation {
    /// Rotation diagonalizing the Hermitian 2×2 `[[alpha, g], [conj g, beta]]`
    /// through `V*·M·V`. `g` must be nonzero.
    pub fn annihilating(alpha: f64, beta: f64, g: Complex64) -> Self {
        let r = g.norm();
        let phase = g / r;
        let theta = (beta - alpha) / (2.0 * r);
        let t = if theta.abs() > 1e150 {
            0.5 / theta
        } else {
            theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        Self { c, s: t * c, phase, t }
    }

    /// `M ← M·V` on columns `p`, `q`.
    pub fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let ec = self.phase.conj();
        for k in 0..m.rows() {
            let xp = m[(k, p)];
            let xq = m[(k, q)];
            m[(k, p)] = xp * self.c - xq * ec * self.s;
            m[(k, q)] = xp * self.s + xq * ec * self.c;
        }
    }

    /// `M ← V*·M` on rows `p`, `q`.
    pub fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let e = self.phase;
        for k in 0..m.cols() {
            let xp = m[(p, k)];
            let xq = m[(q, k)];
            m[(p, k)] = xp * self.c - xq * e * self.s;
            m[(q, k)] = xp * self.s + xq * e * self.c;
        }
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input may deviate from Hermitian by at most `tol·‖H‖_F` in Frobenius
/// norm; its Hermitian part is what gets diagonalized. Eigenvalues come back
/// ascending, ties kept in the order the sweep left them.
pub fn hermitian_eig(h: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    h.ensure_square()?;
    let norm = h.frobenius_norm();
    let defect = h.hermitian_defect();
    if defect > tol * norm {
        return Err(Error::NotHermitian { defect });
    }
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let target = JACOBI_RELATIVE_OFF * norm;

    let mut converged = off_diagonal_norm(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                if g.norm() == 0.0 {
                    continue;
                }
                let (alpha, beta) = (a[(p, p)].re, a[(q, q)].re);
                let rot = PlaneRotation::annihilating(alpha, beta, g);
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                rot.apply_right(&mut v, p, q);
                let r = g.norm();
                a[(p, p)] = Complex64::new(alpha - rot.t * r, 0.0);
                a[(q, q)] = Complex64::new(beta + rot.t * r, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= target;
    }

    let raw: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]));
    let eigenvalues = order.iter().map(|&i| raw[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { eigenvalues, vectors })
}
