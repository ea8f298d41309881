//! Command implementations behind the `qfactor` binary. Each returns a
//! [`RunReport`] whose verdict fixes the process exit code.

use serde::Serialize;

use crate::error::Error;
use crate::factor::{analyze, factor_analyzed, feasibility_bound, Analysis, FeasibilityReport};
use crate::linalg::ComplexMatrix;
use crate::quadratic::{detect_quadratic, QuadraticParams};
use crate::report::{MatrixDocument, RunReport, Verdict};
use crate::verify::{oracle_2x2, random_quadratic, verify_certificate, OracleResult, VerificationReport};

/// Oracle residual at or below which the instance counts as factorable.
pub const ORACLE_FEASIBLE_RESIDUAL: f64 = 1e-6;
/// Oracle residual at or above which the instance counts as obstructed.
pub const ORACLE_INFEASIBLE_RESIDUAL: f64 = 1e-4;

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalSummary {
    pub d1: usize,
    pub d2: usize,
    pub r: usize,
    pub p_values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckPayload {
    pub params: QuadraticParams,
    pub canonical: CanonicalSummary,
    pub feasibility: FeasibilityReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorPayload {
    pub params: QuadraticParams,
    pub canonical: CanonicalSummary,
    pub feasibility: FeasibilityReport,
    pub a: MatrixDocument,
    pub b: MatrixDocument,
    pub certificate: VerificationReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalPayload {
    pub params: QuadraticParams,
    pub canonical: CanonicalSummary,
    pub unitary: MatrixDocument,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundPayload {
    pub a: f64,
    pub b: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleClass {
    Feasible,
    Infeasible,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct OraclePayload {
    pub a: f64,
    pub b: f64,
    pub z: f64,
    pub bound: f64,
    pub classification: OracleClass,
    pub oracle: OracleResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenPayload {
    pub matrix: MatrixDocument,
    pub d1: usize,
    pub d2: usize,
    pub r: usize,
    pub a: f64,
    pub b: f64,
    pub p_values: Vec<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorPayload {
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Check(CheckPayload),
    Factor(Box<FactorPayload>),
    Canonical(CanonicalPayload),
    Bound(BoundPayload),
    Oracle(OraclePayload),
    Verify(VerificationReport),
    Gen(GenPayload),
    Error(ErrorPayload),
}

pub type Report = RunReport<Payload>;

fn report(command: &str, verdict: Verdict, payload: Payload) -> Report {
    RunReport { command: command.to_owned(), verdict, payload }
}

/// Report for a failure that happened before any computation, such as an
/// unreadable input file.
pub fn error_report(command: &str, message: impl Into<String>) -> Report {
    report(command, Verdict::Error, Payload::Error(ErrorPayload { message: message.into() }))
}

fn failure(command: &str, err: Error) -> Report {
    let verdict = match err {
        Error::NotQuadratic { .. } => Verdict::NotQuadratic,
        Error::Infeasible(_) => Verdict::Infeasible,
        _ => Verdict::Error,
    };
    report(command, verdict, Payload::Error(ErrorPayload { message: err.to_string() }))
}

fn summary(analysis: &Analysis) -> CanonicalSummary {
    let f = &analysis.form;
    CanonicalSummary { d1: f.d1, d2: f.d2, r: f.r, p_values: f.p_values.clone() }
}

fn check_payload(analysis: &Analysis) -> CheckPayload {
    CheckPayload { params: analysis.params, canonical: summary(analysis), feasibility: analysis.feasibility }
}

/// Decision only: quadratic parameters, canonical data and the feasibility verdict.
pub fn cmd_check(t: &ComplexMatrix, tol: f64) -> Report {
    match analyze(t, tol) {
        Ok(analysis) => {
            let verdict = if analysis.feasibility.feasible { Verdict::Ok } else { Verdict::Infeasible };
            report("check", verdict, Payload::Check(check_payload(&analysis)))
        }
        Err(e) => failure("check", e),
    }
}

pub fn cmd_factor(t: &ComplexMatrix, tol: f64) -> Report {
    let analysis = match analyze(t, tol) {
        Ok(a) => a,
        Err(e) => return failure("factor", e),
    };
    if !analysis.feasibility.feasible {
        return report("factor", Verdict::Infeasible, Payload::Check(check_payload(&analysis)));
    }
    match factor_analyzed(t, &analysis, tol) {
        Ok(f) => report(
            "factor",
            Verdict::Ok,
            Payload::Factor(Box::new(FactorPayload {
                params: analysis.params,
                canonical: summary(&analysis),
                feasibility: analysis.feasibility,
                a: MatrixDocument::from_matrix(&f.a),
                b: MatrixDocument::from_matrix(&f.b),
                certificate: f.report,
            })),
        ),
        Err(e) => failure("factor", e),
    }
}

pub fn cmd_canonical(t: &ComplexMatrix, tol: f64) -> Report {
    let result = detect_quadratic(t, tol).and_then(|params| {
        let form = crate::quadratic::canonicalize(t, &params, tol)?;
        Ok(CanonicalPayload {
            params,
            canonical: CanonicalSummary { d1: form.d1, d2: form.d2, r: form.r, p_values: form.p_values.clone() },
            unitary: MatrixDocument::from_matrix(&form.unitary),
        })
    });
    match result {
        Ok(p) => report("canonical", Verdict::Ok, Payload::Canonical(p)),
        Err(e) => failure("canonical", e),
    }
}

pub fn cmd_bound(a: f64, b: f64) -> Report {
    match feasibility_bound(a, b) {
        Ok(bound) => report("bound", Verdict::Ok, Payload::Bound(BoundPayload { a, b, bound })),
        Err(e) => failure("bound", e),
    }
}

/// CSV `a,b,bound` over the `(steps+1)²` grid spanning `a_range × b_range`.
pub fn bound_sweep_csv(a_range: (f64, f64), b_range: (f64, f64), steps: usize) -> crate::Result<String> {
    for (lo, hi) in [a_range, b_range] {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::Domain(format!("range {lo}:{hi} must be increasing inside [0, 1]")));
        }
    }
    if steps == 0 {
        return Err(Error::Domain("a sweep needs at least one step".into()));
    }
    let at = |(lo, hi): (f64, f64), k: usize| if k == steps { hi } else { lo + (hi - lo) * k as f64 / steps as f64 };
    let mut out = String::from("a,b,bound\n");
    for i in 0..=steps {
        for j in 0..=steps {
            let (a, b) = (at(a_range, i), at(b_range, j));
            let bound = feasibility_bound(a, b)?;
            out.push_str(&format!("{a:.16e},{b:.16e},{bound:.16e}\n"));
        }
    }
    Ok(out)
}

pub fn cmd_oracle(a: f64, b: f64, z: f64, budget: u64, seed: u64) -> Report {
    let bound = match feasibility_bound(a, b) {
        Ok(x) => x,
        Err(e) => return failure("oracle", e),
    };
    match oracle_2x2(a, b, z, budget, seed) {
        Ok(oracle) => {
            let classification = if oracle.best_residual <= ORACLE_FEASIBLE_RESIDUAL {
                OracleClass::Feasible
            } else if oracle.best_residual >= ORACLE_INFEASIBLE_RESIDUAL {
                OracleClass::Infeasible
            } else {
                OracleClass::Inconclusive
            };
            let verdict = if classification == OracleClass::Infeasible { Verdict::Infeasible } else { Verdict::Ok };
            report("oracle", verdict, Payload::Oracle(OraclePayload { a, b, z, bound, classification, oracle }))
        }
        Err(e) => failure("oracle", e),
    }
}

/// A failing certificate is reported with verdict `error`.
pub fn cmd_verify(t: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Report {
    match verify_certificate(t, a, b, tol) {
        Ok(r) => report("verify", if r.pass { Verdict::Ok } else { Verdict::Error }, Payload::Verify(r)),
        Err(e) => failure("verify", e),
    }
}

pub fn cmd_gen(d1: usize, d2: usize, r: usize, a: f64, b: f64, p_spec: &[f64], seed: u64) -> Report {
    match random_quadratic(d1, d2, r, a, b, p_spec, seed) {
        Ok(t) => {
            let mut p_values = p_spec.to_vec();
            p_values.sort_by(|x, y| y.total_cmp(x));
            report(
                "gen",
                Verdict::Ok,
                Payload::Gen(GenPayload { matrix: MatrixDocument::from_matrix(&t), d1, d2, r, a, b, p_values, seed }),
            )
        }
        Err(e) => failure("gen", e),
    }
}
