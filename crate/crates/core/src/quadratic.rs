//! Detection of quadratic matrices and their unitary canonical form
//! `aI ⊕ bI ⊕ [[aI, P], [0, bI]]` with `P` diagonal and strictly positive.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{svd, ComplexMatrix, Svd, RANK_EPS};

/// Default detection tolerance, applied as `tol·max(1, ‖T‖_F²)`.
pub const DEFAULT_DETECTION_TOL: f64 = 1e-9;

/// Roots closer than this (relative to `max(1, |a+b|)`) are merged into a
/// double root, which is how the nilpotent case `(T − aI)² = 0` is found.
const DOUBLE_ROOT_GAP: f64 = 1e-6;

/// Scalars with `(T − aI)(T − bI) = 0`, ordered so that `a ≤ b`
/// lexicographically on `(Re, Im)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticParams {
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub a: Complex64,
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub b: Complex64,
    /// `‖T² − (a+b)T + abI‖_F`.
    pub residual: f64,
}

impl QuadraticParams {
    fn ordered(x: Complex64, y: Complex64, residual: f64) -> Self {
        let (a, b) = if (x.re, x.im) <= (y.re, y.im) { (x, y) } else { (y, x) };
        Self { a, b, residual }
    }

    pub fn is_double_root(&self) -> bool {
        self.a == self.b
    }
}

fn quadratic_residual(t: &ComplexMatrix, t2: &ComplexMatrix, a: Complex64, b: Complex64) -> f64 {
    let s = a + b;
    let p = a * b;
    (&(t2 - &t.scale(s)) + &ComplexMatrix::identity(t.rows()).scale(p)).frobenius_norm()
}

/// Identifies `(a, b)` from the minimal polynomial by least squares on
/// `T² = s·T − p·I`.
pub fn detect_quadratic(t: &ComplexMatrix, tol: f64) -> Result<QuadraticParams> {
    t.ensure_square()?;
    let n = t.rows();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let norm = t.frobenius_norm();
    let t2 = t.matmul(t)?;
    let mean = t.trace() / n as f64;
    if t.shift(-mean).frobenius_norm() <= tol * norm.max(1.0) {
        let residual = quadratic_residual(t, &t2, mean, mean);
        return Ok(QuadraticParams { a: mean, b: mean, residual });
    }

    // Work with the traceless part C = T − μI so that the roots come out
    // with errors on the scale of their gap rather than of ‖T‖. C is
    // orthogonal to I, so projecting vec(C²) onto span(vec C, vec I) gives
    // C² = s·C − p·I directly.
    let c = t.shift(-mean);
    let c2 = c.matmul(&c)?;
    let inner = |x: &ComplexMatrix, y: &ComplexMatrix| -> Complex64 {
        x.as_slice().iter().zip(y.as_slice()).map(|(u, v)| u.conj() * v).sum()
    };
    let s = inner(&c, &c2) / c.frobenius_norm().powi(2);
    let p = -(&c2 - &c.scale(s)).trace() / n as f64;

    let disc = s * s - p * 4.0;
    let gap = DOUBLE_ROOT_GAP * (s + mean * 2.0).norm().max(1.0);
    let (x, y) = if disc.norm() <= gap * gap {
        (s / 2.0, s / 2.0)
    } else {
        let root = disc.sqrt();
        let big = if (s + root).norm() >= (s - root).norm() { (s + root) / 2.0 } else { (s - root) / 2.0 };
        let small = if big.norm() > 0.0 { p / big } else { s - big };
        (big, small)
    };
    let (x, y) = (x + mean, y + mean);
    let residual = quadratic_residual(t, &t2, x, y);
    if residual > tol * norm.powi(2).max(1.0) {
        return Err(Error::NotQuadratic { residual });
    }
    Ok(QuadraticParams::ordered(x, y, residual))
}

/// Unitary canonical form of a quadratic matrix.
///
/// `unitary* · T · unitary = aI_{d1} ⊕ bI_{d2} ⊕ [[aI_r, diag(p)], [0, bI_r]]`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub params: QuadraticParams,
    pub d1: usize,
    pub d2: usize,
    pub r: usize,
    /// Strictly positive, descending.
    pub p_values: Vec<f64>,
    pub unitary: ComplexMatrix,
}

impl CanonicalForm {
    pub fn dim(&self) -> usize {
        self.d1 + self.d2 + 2 * self.r
    }

    /// `‖P‖`, zero when there is no coupled part.
    pub fn p_norm(&self) -> f64 {
        self.p_values.first().copied().unwrap_or(0.0)
    }

    /// The block matrix `aI ⊕ bI ⊕ [[aI, P], [0, bI]]` itself.
    pub fn canonical_matrix(&self) -> ComplexMatrix {
        let (a, b) = (self.params.a, self.params.b);
        let (d1, d2, r) = (self.d1, self.d2, self.r);
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        for i in 0..d1 {
            m[(i, i)] = a;
        }
        for i in d1..d1 + d2 {
            m[(i, i)] = b;
        }
        let base = d1 + d2;
        for (k, &p) in self.p_values.iter().enumerate() {
            m[(base + k, base + k)] = a;
            m[(base + r + k, base + r + k)] = b;
            m[(base + k, base + r + k)] = Complex64::new(p, 0.0);
        }
        m
    }
}

/// Rank of `s` with an explicit cutoff, failing when some singular value
/// lies in `(cutoff, 10·cutoff]`.
fn rank_unambiguous(s: &Svd, cutoff: f64) -> Result<usize> {
    if let Some(&value) = s.singular_values.iter().find(|&&v| v > cutoff && v <= 10.0 * cutoff) {
        return Err(Error::RankAmbiguous { value, cutoff });
    }
    Ok(s.rank_with_cutoff(cutoff))
}

/// Computes the canonical form of a matrix already accepted by
/// [`detect_quadratic`].
///
/// With `M = ker(T − aI)`, `T` is `[[aI, X], [0, bI]]` on `M ⊕ M⊥`. The SVD
/// `X = UΣV*` splits `M` into `range(X)` and its complement, and `M⊥` into
/// `ker(X)⊥` and `ker(X)`; the positive singular values are `P`.
pub fn canonicalize(t: &ComplexMatrix, params: &QuadraticParams, tol: f64) -> Result<CanonicalForm> {
    t.ensure_square()?;
    let n = t.rows();
    let a = params.a;
    let shifted = t.shift(-a);
    if params.is_double_root() && shifted.frobenius_norm() <= tol * t.frobenius_norm().max(1.0) {
        return Ok(CanonicalForm {
            params: *params,
            d1: n,
            d2: 0,
            r: 0,
            p_values: Vec::new(),
            unitary: ComplexMatrix::identity(n),
        });
    }

    let outer = svd(&shifted)?;
    let scale = outer.max_singular_value();
    let rank = rank_unambiguous(&outer, outer.rank_cutoff())?;
    let k = n - rank;
    let kernel = outer.right.block(0, rank, n, k);
    let complement = outer.right.block(0, 0, n, rank);

    let coupling = kernel.adjoint().matmul(t)?.matmul(&complement)?;
    let inner = svd(&coupling)?;
    let cutoff = (k.max(rank) as f64) * RANK_EPS * scale;
    let r = if k == 0 || rank == 0 { 0 } else { rank_unambiguous(&inner, cutoff)? };
    let d1 = k - r;
    let d2 = rank - r;

    let m_basis = kernel.matmul(&inner.left)?;
    let c_basis = complement.matmul(&inner.right)?;
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    columns.extend((r..k).map(|j| m_basis.column(j)));
    columns.extend((r..rank).map(|j| c_basis.column(j)));
    columns.extend((0..r).map(|j| m_basis.column(j)));
    columns.extend((0..r).map(|j| c_basis.column(j)));
    normalize_phases(&mut columns, d1 + d2, r);
    let unitary = ComplexMatrix::from_columns(n, &columns);

    let form = CanonicalForm {
        params: *params,
        d1,
        d2,
        r,
        p_values: inner.singular_values[..r].to_vec(),
        unitary,
    };
    let mismatch = form.unitary.adjoint().matmul(t)?.matmul(&form.unitary)?.distance(&form.canonical_matrix());
    if mismatch > tol.sqrt() * t.frobenius_norm().max(1.0) {
        return Err(Error::NotQuadratic { residual: mismatch });
    }
    Ok(form)
}

/// Rotates each basis vector so its largest entry is real and positive.
/// The two vectors of a coupled pair share one phase, which keeps `P` real.
fn normalize_phases(columns: &mut [Vec<Complex64>], scalar: usize, r: usize) {
    let phase_of = |v: &[Complex64]| {
        let pivot = v.iter().copied().fold(Complex64::new(0.0, 0.0), |best, x| if x.norm() > best.norm() { x } else { best });
        if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { Complex64::new(1.0, 0.0) }
    };
    for col in &mut columns[..scalar] {
        let e = phase_of(col);
        col.iter_mut().for_each(|x| *x *= e);
    }
    let first = scalar;
    for j in 0..r {
        let e = phase_of(&columns[first + j]);
        for idx in [first + j, first + r + j] {
            columns[idx].iter_mut().for_each(|x| *x *= e);
        }
    }
}

/// `unitary · (aI ⊕ bI ⊕ [[aI, P], [0, bI]]) · unitary*`.
pub fn assemble_from_canonical(form: &CanonicalForm) -> ComplexMatrix {
    form.canonical_matrix().conjugate_by(&form.unitary).expect("canonical form dimensions agree")
}
