//! Brute-force search for real symmetric positive contractions `A`, `B`
//! with `A·B ≈ [[a, z], [0, b]]`, independent of the closed forms.
//!
//! Each factor is `R(θ)·diag(s, t)·R(θ)ᵀ` with `θ ∈ [0, π)` and
//! `s, t ∈ [0, 1]`. A full grid of `⌊budget^{1/6}⌋` points per parameter is
//! scanned, the best few grid points are refined by cyclic coordinate
//! descent, and the winners are polished by Levenberg–Marquardt steps in
//! the unconstrained coordinates `s = sin²u`, `t = sin²v`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Parameter step at which coordinate descent stops.
pub const REFINE_STEP_FLOOR: f64 = 1e-12;
/// Grid points handed to the local refinement.
const CANDIDATES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub best_residual: f64,
    /// `(θ_A, s_A, t_A, θ_B, s_B, t_B)`.
    pub parameters: [f64; 6],
    pub evaluations: u64,
}

/// Symmetric entries `(m11, m12, m22)` of `R(θ)·diag(s, t)·R(θ)ᵀ`.
fn rotated(theta: f64, s: f64, t: f64) -> [f64; 3] {
    let (sn, c) = theta.sin_cos();
    [s * c * c + t * sn * sn, (s - t) * c * sn, s * sn * sn + t * c * c]
}

fn squared_residual(m: &[f64; 3], n: &[f64; 3], target: &[f64; 4]) -> f64 {
    let p = [
        m[0] * n[0] + m[1] * n[1],
        m[0] * n[1] + m[1] * n[2],
        m[1] * n[0] + m[2] * n[1],
        m[1] * n[1] + m[2] * n[2],
    ];
    p.iter().zip(target).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn objective(x: &[f64; 6], target: &[f64; 4]) -> f64 {
    squared_residual(&rotated(x[0], x[1], x[2]), &rotated(x[3], x[4], x[5]), target)
}

/// Levenberg–Marquardt iterations per polished candidate.
const POLISH_ITERATIONS: usize = 200;

fn residual_vector(y: &[f64; 6], target: &[f64; 4]) -> [f64; 4] {
    let sq = |u: f64| u.sin().powi(2);
    let m = rotated(y[0], sq(y[1]), sq(y[2]));
    let n = rotated(y[3], sq(y[4]), sq(y[5]));
    [
        m[0] * n[0] + m[1] * n[1] - target[0],
        m[0] * n[1] + m[1] * n[2] - target[1],
        m[1] * n[0] + m[2] * n[1] - target[2],
        m[1] * n[1] + m[2] * n[2] - target[3],
    ]
}

fn norm_sq(r: &[f64; 4]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Solves the symmetric positive definite 4×4 system `m·x = rhs` by
/// Gaussian elimination without pivoting.
fn solve4(mut m: [[f64; 4]; 4], mut rhs: [f64; 4]) -> Option<[f64; 4]> {
    for k in 0..4 {
        if !(m[k][k] > 0.0) {
            return None;
        }
        for i in k + 1..4 {
            let f = m[i][k] / m[k][k];
            for j in k..4 {
                m[i][j] -= f * m[k][j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    let mut x = [0.0; 4];
    for k in (0..4).rev() {
        let tail: f64 = (k + 1..4).map(|j| m[k][j] * x[j]).sum();
        x[k] = (rhs[k] - tail) / m[k][k];
    }
    Some(x)
}

/// Levenberg–Marquardt on the 4 residuals in the 6 unconstrained
/// coordinates, with minimum-norm steps `δ = −Jᵀ(JJᵀ + μI)⁻¹r` and a
/// central-difference Jacobian. Returns the final squared residual, the
/// point in `(θ, s, t)` form, and the evaluations spent.
fn polish(x: &[f64; 6], f0: f64, target: &[f64; 4]) -> (f64, [f64; 6], u64) {
    let to_angle = |s: f64| s.clamp(0.0, 1.0).sqrt().asin();
    let mut y = [x[0], to_angle(x[1]), to_angle(x[2]), x[3], to_angle(x[4]), to_angle(x[5])];
    let mut r = residual_vector(&y, target);
    let mut f = norm_sq(&r);
    let mut mu = 1e-3;
    let mut spent = 1u64;
    for _ in 0..POLISH_ITERATIONS {
        if f == 0.0 {
            break;
        }
        let mut jac = [[0.0; 6]; 4];
        for j in 0..6 {
            let h = 1e-7;
            let (mut up, mut down) = (y, y);
            up[j] += h;
            down[j] -= h;
            let (ru, rd) = (residual_vector(&up, target), residual_vector(&down, target));
            for i in 0..4 {
                jac[i][j] = (ru[i] - rd[i]) / (2.0 * h);
            }
        }
        spent += 12;
        let mut improved = false;
        while mu < 1e12 {
            let mut m = [[0.0; 4]; 4];
            for i in 0..4 {
                for k in 0..4 {
                    m[i][k] = (0..6).map(|j| jac[i][j] * jac[k][j]).sum::<f64>();
                }
                m[i][i] += mu;
            }
            let Some(w) = solve4(m, r) else { break };
            let mut trial = y;
            for j in 0..6 {
                trial[j] -= (0..4).map(|i| jac[i][j] * w[i]).sum::<f64>();
            }
            let rt = residual_vector(&trial, target);
            spent += 1;
            if norm_sq(&rt) < f {
                y = trial;
                r = rt;
                f = norm_sq(&rt);
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    let sq = |u: f64| u.sin().powi(2);
    let point = [y[0], sq(y[1]), sq(y[2]), y[3], sq(y[4]), sq(y[5])];
    if f < f0 {
        (f, point, spent)
    } else {
        (f0, *x, spent)
    }
}

/// Largest `k ≥ 2` with `k⁶ ≤ budget`.
fn grid_points(budget: u64) -> usize {
    let mut k = 2usize;
    while ((k + 1) as u64).pow(6) <= budget {
        k += 1;
    }
    k
}

pub fn oracle_2x2(a: f64, b: f64, z: f64, budget: u64, seed: u64) -> Result<OracleResult> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(Error::Domain(format!("(a, b) = ({a}, {b}) must lie in [0, 1]²")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("z = {z} must be nonnegative")));
    }
    if budget < 10_000 {
        return Err(Error::Domain(format!("budget {budget} is below 10^4")));
    }
    let target = [a, z, 0.0, b];
    let k = grid_points(budget);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase: f64 = rng.gen();
    let theta_step = PI / k as f64;
    let unit_step = 1.0 / (k - 1) as f64;

    let mut params = Vec::with_capacity(k * k * k);
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                params.push([(i as f64 + phase) * theta_step, j as f64 * unit_step, l as f64 * unit_step]);
            }
        }
    }
    let mats: Vec<[f64; 3]> = params.iter().map(|p| rotated(p[0], p[1], p[2])).collect();

    let mut best: Vec<(f64, usize, usize)> = Vec::with_capacity(CANDIDATES + 1);
    for (ia, ma) in mats.iter().enumerate() {
        for (ib, mb) in mats.iter().enumerate() {
            let f = squared_residual(ma, mb, &target);
            if best.len() < CANDIDATES || f < best[best.len() - 1].0 {
                let pos = best.partition_point(|e| e.0 <= f);
                best.insert(pos, (f, ia, ib));
                best.truncate(CANDIDATES);
            }
        }
    }
    let mut evaluations = (mats.len() * mats.len()) as u64;

    let initial = [theta_step, unit_step, unit_step, theta_step, unit_step, unit_step];
    let mut winner = (f64::INFINITY, [0.0; 6]);
    // Grid scan and refinement each spend about one budget.
    let refine_cap = budget / CANDIDATES as u64;
    for &(f0, ia, ib) in &best {
        let (pa, pb) = (params[ia], params[ib]);
        let mut x = [pa[0], pa[1], pa[2], pb[0], pb[1], pb[2]];
        let mut f = f0;
        let mut steps = initial;
        let mut spent = 0u64;
        while f > 0.0 && steps.iter().any(|&s| s >= REFINE_STEP_FLOOR) && spent < refine_cap {
            for i in 0..6 {
                if steps[i] < REFINE_STEP_FLOOR {
                    continue;
                }
                let mut moved = false;
                for dir in [1.0, -1.0] {
                    let mut y = x;
                    y[i] += dir * steps[i];
                    if i % 3 != 0 {
                        y[i] = y[i].clamp(0.0, 1.0);
                    }
                    if y[i] == x[i] {
                        continue;
                    }
                    let fy = objective(&y, &target);
                    spent += 1;
                    if fy < f {
                        x = y;
                        f = fy;
                        moved = true;
                        break;
                    }
                }
                steps[i] = if moved { (steps[i] * 2.0).min(initial[i]) } else { steps[i] * 0.5 };
            }
        }
        let (f, x, polished) = polish(&x, f, &target);
        evaluations += spent + polished;
        if f < winner.0 {
            winner = (f, x);
        }
    }

    let (f, mut x) = winner;
    for i in [0, 3] {
        x[i] = x[i].rem_euclid(PI);
    }
    Ok(OracleResult { best_residual: f.sqrt(), parameters: x, evaluations })
}
