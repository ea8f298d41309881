//! Decide whether a quadratic matrix is a product of two positive
//! contractions and, when it is, build the two factors with a certificate.
//!
//! A matrix `T` is quadratic when `(T − aI)(T − bI) = 0`. Up to unitary
//! similarity it is `aI ⊕ bI ⊕ [[aI, P], [0, bI]]` with `P` strictly
//! positive, and it factors as `A·B` with `0 ⪯ A, B ⪯ I` exactly when
//! `a, b ∈ [0, 1]` and `‖P‖ ≤ |√a − √b|·√((1−a)(1−b))`.
//!
//! ```
//! use qfactor::{factor_quadratic, ComplexMatrix, Error};
//!
//! let t = ComplexMatrix::from_real(2, 2, &[0.36, 0.09, 0.0, 0.64]).unwrap();
//! let f = factor_quadratic(&t, 1e-9).unwrap();
//! assert!(f.report.pass);
//!
//! let too_coupled = ComplexMatrix::from_real(2, 2, &[0.36, 0.12, 0.0, 0.64]).unwrap();
//! assert!(matches!(factor_quadratic(&too_coupled, 1e-9), Err(Error::Infeasible(_))));
//! ```

pub mod commands;
pub mod error;
pub mod factor;
pub mod linalg;
pub mod quadratic;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use factor::{
    analyze, assemble_full_factors, factor_2x2, factor_block, factor_quadratic, feasibility_bound, Factor2x2,
    FeasibilityReport, Factorization, DEFAULT_TOL,
};
pub use linalg::ComplexMatrix;
pub use quadratic::{assemble_from_canonical, canonicalize, detect_quadratic, CanonicalForm, QuadraticParams};
pub use verify::{diagonal_block_factors, necessary_conditions, oracle_2x2, random_quadratic, verify_certificate};
