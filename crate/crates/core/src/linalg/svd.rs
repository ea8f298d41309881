//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

use num_complex::Complex64;

use super::eig::PlaneRotation;
use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative size below which singular values count as zero:
/// `σ ≤ max(rows, cols) · RANK_EPS · σ_max`.
pub const RANK_EPS: f64 = 1e-12;

const ORTHOGONALITY_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;

/// Full SVD `X = left · diag(singular_values) · right*`.
///
/// `left` is `rows×rows`, `right` is `cols×cols`, and there are
/// `min(rows, cols)` singular values in descending order. Left vectors beyond
/// the numerical rank are an orthonormal completion.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right: ComplexMatrix,
}

impl Svd {
    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Cutoff at or below which a singular value is treated as zero.
    pub fn rank_cutoff(&self) -> f64 {
        let dim = self.left.rows().max(self.right.rows()) as f64;
        dim * RANK_EPS * self.max_singular_value()
    }

    pub fn rank(&self) -> usize {
        self.rank_with_cutoff(self.rank_cutoff())
    }

    pub fn rank_with_cutoff(&self, cutoff: f64) -> usize {
        self.singular_values.iter().take_while(|&&s| s > cutoff).count()
    }

    /// Whether any singular value sits below the cutoff (reported but zeroed).
    pub fn is_rank_deficient(&self) -> bool {
        self.rank() < self.left.rows().max(self.right.rows())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.left.rows(), self.right.rows());
        ComplexMatrix::from_fn(m, n, |i, j| {
            self.singular_values
                .iter()
                .enumerate()
                .map(|(k, &s)| self.left[(i, k)] * self.right[(j, k)].conj() * s)
                .sum()
        })
    }

    /// Moore–Penrose pseudo-inverse, dropping singular values `≤ cutoff`.
    pub fn pseudo_inverse_with_cutoff(&self, cutoff: f64) -> ComplexMatrix {
        let (m, n) = (self.left.rows(), self.right.rows());
        let rank = self.rank_with_cutoff(cutoff);
        ComplexMatrix::from_fn(n, m, |i, j| {
            (0..rank).map(|k| self.right[(i, k)] * self.left[(j, k)].conj() / self.singular_values[k]).sum()
        })
    }

    pub fn pseudo_inverse(&self) -> ComplexMatrix {
        self.pseudo_inverse_with_cutoff(self.rank_cutoff())
    }
}

/// Computes the full SVD of any matrix.
pub fn svd(x: &ComplexMatrix) -> Result<Svd> {
    if x.rows() < x.cols() {
        let t = svd_tall(&x.adjoint())?;
        return Ok(Svd { left: t.right, singular_values: t.singular_values, right: t.left });
    }
    svd_tall(x)
}

fn svd_tall(x: &ComplexMatrix) -> Result<Svd> {
    let (m, n) = (x.rows(), x.cols());
    debug_assert!(m >= n);
    let mut w = x.clone();
    let mut v = ComplexMatrix::identity(n);
    let negligible = (1e-18 * x.frobenius_norm()).powi(2);

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut g) = (0.0, 0.0, Complex64::new(0.0, 0.0));
                for k in 0..m {
                    let (xp, xq) = (w[(k, p)], w[(k, q)]);
                    alpha += xp.norm_sqr();
                    beta += xq.norm_sqr();
                    g += xp.conj() * xq;
                }
                if g.norm() <= ORTHOGONALITY_EPS * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                let rot = PlaneRotation::annihilating(alpha, beta, g);
                rot.apply_right(&mut w, p, q);
                rot.apply_right(&mut v, p, q);
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| (0..m).map(|k| w[(k, j)].norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let right = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let cutoff = m.max(n) as f64 * RANK_EPS * sigma_max;
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for (k, &j) in order.iter().enumerate() {
        if singular_values[k] <= cutoff || singular_values[k] == 0.0 {
            break;
        }
        let s = singular_values[k];
        columns.push((0..m).map(|i| w[(i, j)] / s).collect());
    }
    complete_orthonormal(&mut columns, m);
    Ok(Svd { left: ComplexMatrix::from_columns(m, &columns), singular_values, right })
}

fn project_out(vec: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let coeff: Complex64 = b.iter().zip(vec.iter()).map(|(x, y)| x.conj() * y).sum();
        for (y, x) in vec.iter_mut().zip(b) {
            *y -= coeff * x;
        }
    }
}

/// Extends orthonormal `columns` to a basis of `C^dim` with Gram–Schmidt on
/// the standard basis, picking at each step the candidate with the largest
/// remaining component.
pub(crate) fn complete_orthonormal(columns: &mut Vec<Vec<Complex64>>, dim: usize) {
    while columns.len() < dim {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for i in 0..dim {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[i] = Complex64::new(1.0, 0.0);
            project_out(&mut e, columns);
            project_out(&mut e, columns);
            let norm = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().map_or(true, |(b, _)| norm > *b) {
                best = Some((norm, e));
            }
        }
        let (norm, mut e) = best.expect("dimension is positive");
        for z in e.iter_mut() {
            *z /= norm;
        }
        columns.push(e);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_has_zero_singular_values() {
        let s = svd(&ComplexMatrix::zeros(3, 2)).unwrap();
        assert_eq!(s.singular_values, vec![0.0, 0.0]);
        assert!((&s.left.adjoint() * &s.left).distance(&ComplexMatrix::identity(3)) < 1e-14);
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn diagonal_values_descend() {
        let s = svd(&ComplexMatrix::from_diag(&[1.0, 2.0])).unwrap();
        assert_eq!(s.singular_values, vec![2.0, 1.0]);
    }

    #[test]
    fn rank_one_nilpotent() {
        let z = 0.37;
        let x = ComplexMatrix::from_real(2, 2, &[0.0, z, 0.0, 0.0]).unwrap();
        let s = svd(&x).unwrap();
        assert!((s.singular_values[0] - z).abs() < 1e-15);
        assert_eq!(s.singular_values[1], 0.0);
        assert!(s.is_rank_deficient());
        assert!(s.reconstruct().distance(&x) < 1e-15);
    }

    #[test]
    fn wide_matrix_uses_adjoint() {
        let x = ComplexMatrix::from_real(2, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, -1.0]).unwrap();
        let s = svd(&x).unwrap();
        assert_eq!((s.left.rows(), s.right.rows(), s.singular_values.len()), (2, 3, 2));
        assert!(s.reconstruct().distance(&x) < 1e-14);
        let pinv = s.pseudo_inverse();
        assert!((&(&x * &pinv) * &x).distance(&x) < 1e-14);
    }

    #[test]
    fn tiny_singular_values_are_resolved() {
        // The Gram route would floor these at about 1e-8.
        let x = ComplexMatrix::from_diag(&[1.0, 1e-13, 0.0]);
        let s = svd(&x).unwrap();
        assert!((s.singular_values[1] - 1e-13).abs() < 1e-25);
        assert_eq!(s.rank(), 1);
    }
}
