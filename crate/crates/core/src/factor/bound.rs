use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `‖P‖` for which `[[aI, P], [0, bI]]` is a product of two positive
/// contractions: `|√a − √b|·√((1−a)(1−b))`.
pub fn feasibility_bound(a: f64, b: f64) -> Result<f64> {
    for (name, x) in [("a", a), ("b", b)] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("{name} = {x} is outside [0, 1]")));
        }
    }
    Ok((a.sqrt() - b.sqrt()).abs() * ((1.0 - a) * (1.0 - b)).sqrt())
}

/// Verdict of the factorability test for given spectral data and `‖P‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub a: f64,
    pub b: f64,
    pub p_norm: f64,
    pub bound: f64,
    pub feasible: bool,
    /// `bound − p_norm`; when the spectrum leaves `[0, 1]` it is minus the
    /// distance of the worse eigenvalue from that interval instead.
    pub margin: f64,
    pub spectrum_in_unit_interval: bool,
}

fn excursion(z: Complex64) -> f64 {
    let re = if z.re < 0.0 {
        -z.re
    } else if z.re > 1.0 {
        z.re - 1.0
    } else {
        0.0
    };
    re.hypot(z.im)
}

impl FeasibilityReport {
    /// Evaluates the test. Eigenvalues within `tol` of `[0, 1]` are clamped
    /// onto it, and `feasible ⇔ margin ≥ −tol`.
    pub fn evaluate(a: Complex64, b: Complex64, p_norm: f64, tol: f64) -> Self {
        let worst = excursion(a).max(excursion(b));
        if worst > tol {
            return Self {
                a: a.re,
                b: b.re,
                p_norm,
                bound: 0.0,
                feasible: false,
                margin: -worst,
                spectrum_in_unit_interval: false,
            };
        }
        let (a, b) = (a.re.clamp(0.0, 1.0), b.re.clamp(0.0, 1.0));
        let bound = feasibility_bound(a, b).expect("clamped into the unit interval");
        let margin = bound - p_norm;
        Self { a, b, p_norm, bound, feasible: margin >= -tol, margin, spectrum_in_unit_interval: true }
    }
}
