//! Independent checks: certificates, necessary conditions, a brute-force
//! 2×2 oracle, diagonal-block factor extraction, and instance generators.

mod blocks;
mod certificate;
mod necessary;
mod oracle;
mod random;

pub use blocks::{diagonal_block_factors, FactorPair, BLOCK_RANK_EPS};
pub use certificate::{verify_certificate, VerificationReport};
pub use necessary::{necessary_conditions, NecessaryConditions};
pub use oracle::{oracle_2x2, OracleResult, REFINE_STEP_FLOOR};
pub use random::{
    gaussian_matrix, hermitian_with_spectrum, random_psd_contraction, random_quadratic, random_unitary,
    random_unitary_with, seeded_rng,
};
