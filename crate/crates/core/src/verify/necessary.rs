use serde::Serialize;

use crate::error::Result;
use crate::linalg::{hermitian_eig, operator_norm, ComplexMatrix};

/// Known necessary conditions for `T` to be a product of two positive
/// contractions. Passing all three proves nothing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NecessaryConditions {
    /// `Re T ⪰ −I/8`.
    pub real_part_ok: bool,
    /// `−I/4 ⪯ Im T ⪯ I/4`.
    pub imaginary_part_ok: bool,
    /// `‖T‖ ≤ 1`.
    pub contraction_ok: bool,
    pub min_real_eigenvalue: f64,
    pub imaginary_spectrum: (f64, f64),
    pub norm: f64,
}

impl NecessaryConditions {
    pub fn all_pass(&self) -> bool {
        self.real_part_ok && self.imaginary_part_ok && self.contraction_ok
    }
}

pub fn necessary_conditions(t: &ComplexMatrix, tol: f64) -> Result<NecessaryConditions> {
    t.ensure_square()?;
    let re = hermitian_eig(&t.hermitian_part(), 1e-6)?;
    let im = hermitian_eig(&t.imaginary_part(), 1e-6)?;
    let norm = operator_norm(t)?;
    let min_real_eigenvalue = re.min_eigenvalue();
    let imaginary_spectrum = (im.min_eigenvalue(), im.max_eigenvalue());
    Ok(NecessaryConditions {
        real_part_ok: min_real_eigenvalue >= -0.125 - tol,
        imaginary_part_ok: imaginary_spectrum.0 >= -0.25 - tol && imaginary_spectrum.1 <= 0.25 + tol,
        contraction_ok: norm <= 1.0 + tol,
        min_real_eigenvalue,
        imaginary_spectrum,
        norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_passes() {
        assert!(necessary_conditions(&ComplexMatrix::identity(3), 1e-9).unwrap().all_pass());
    }

    #[test]
    fn counterexample_passes_every_check() {
        let t = ComplexMatrix::from_real(2, 2, &[0.36, 0.12, 0.0, 0.64]).unwrap();
        assert!(necessary_conditions(&t, 1e-9).unwrap().all_pass());
    }

    #[test]
    fn imaginary_scalar_fails() {
        let t = ComplexMatrix::identity(2).scale(Complex64::new(0.0, 0.5));
        let c = necessary_conditions(&t, 1e-9).unwrap();
        assert!(!c.imaginary_part_ok && c.real_part_ok && c.contraction_ok);
    }

    #[test]
    fn negative_real_part_fails() {
        let c = necessary_conditions(&ComplexMatrix::from_diag(&[-0.2, 0.5]), 1e-9).unwrap();
        assert!(!c.real_part_ok);
    }
}
