//! Browser bindings for the static demo page in `www/`.
//!
//! Every function returns plain numbers or a JSON string so the page needs
//! no generated glue beyond what `wasm-bindgen` emits.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qfactor::commands::{cmd_factor, error_report};
use qfactor::report::{parse_matrix, to_json, MatrixDocument};
use qfactor::{factor_2x2, feasibility_bound, Factor2x2};

/// Row-major `(steps+1)²` samples of the feasibility bound over `[0, 1]²`;
/// entry `i·(steps+1) + j` is the bound at `a = i/steps`, `b = j/steps`.
#[wasm_bindgen]
pub fn bound_grid(steps: usize) -> Vec<f64> {
    let steps = steps.clamp(1, 1000);
    let mut out = Vec::with_capacity((steps + 1) * (steps + 1));
    for i in 0..=steps {
        for j in 0..=steps {
            let (a, b) = (i as f64 / steps as f64, j as f64 / steps as f64);
            out.push(feasibility_bound(a, b).expect("grid stays in the unit square"));
        }
    }
    out
}

#[derive(Serialize)]
struct Explorer {
    feasible: bool,
    bound: f64,
    message: Option<String>,
    factors: Option<Factor2x2>,
    a: Option<MatrixDocument>,
    b: Option<MatrixDocument>,
    residual: Option<f64>,
}

/// Factors `[[a, z], [0, b]]` with the closed forms and reports the result
/// as JSON: bound, factor entries, λ₁, λ₂ and the product residual.
#[wasm_bindgen]
pub fn explore_2x2(a: f64, b: f64, z: f64, tol: f64) -> String {
    let bound = feasibility_bound(a.clamp(0.0, 1.0), b.clamp(0.0, 1.0)).unwrap_or(0.0);
    let empty = |message: String| Explorer {
        feasible: false,
        bound,
        message: Some(message),
        factors: None,
        a: None,
        b: None,
        residual: None,
    };
    let view = match factor_2x2(a, b, z, tol) {
        Ok(f) => Explorer {
            feasible: true,
            bound,
            message: None,
            factors: Some(f),
            a: Some(MatrixDocument::from_matrix(&f.a_matrix())),
            b: Some(MatrixDocument::from_matrix(&f.b_matrix())),
            residual: Some(f.residual(a, b, z)),
        },
        Err(e) => empty(e.to_string()),
    };
    to_json(&view)
}

/// Runs the full factorization on a pasted matrix (JSON document or plain
/// text) and returns the same report the command-line tool prints.
#[wasm_bindgen]
pub fn factor_text(text: &str, tol: f64) -> String {
    match parse_matrix(text) {
        Ok(t) => cmd_factor(&t, tol).to_json(),
        Err(e) => error_report("factor", e.to_string()).to_json(),
    }
}
