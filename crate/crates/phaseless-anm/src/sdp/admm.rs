//! Operator-splitting solver on the augmented dual.
//!
//! For min ⟨C,X⟩ s.t. A(X) = b, X ⪰ 0 the dual is max b'y s.t.
//! A*(y) + S = C, S ⪰ 0. Alternating minimization of the augmented
//! Lagrangian L(y, S, X) = −b'y + ⟨X, A*(y)+S−C⟩ + (1/2μ)‖A*(y)+S−C‖²
//! gives three closed-form updates per sweep:
//!
//!   (A A*) y = μ(b − A(X)) + A(C − S)
//!   V = C − A*(y) − μX,   S = Π₊(V),   X = (S − V)/μ
//!
//! A A* is factored once per problem; each sweep costs one triangular solve
//! plus one PSD-cone projection per block. X is PSD by construction. The
//! penalty μ is rebalanced from the primal/dual residual ratio.

use std::time::{Duration, Instant};

use super::lapack::CholeskyFactor;
use super::{
    psd_project, Constraint, HermitianMatrix, LinearFunctional, SdpProblem, SdpSolution,
    SolveStatus,
};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub time_limit: Option<Duration>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-7, max_iters: 50_000, time_limit: None }
    }
}

pub fn solve(problem: &SdpProblem, tol: f64, max_iters: usize) -> SdpSolution {
    solve_with_options(problem, &SolveOptions { tol, max_iters, ..Default::default() })
}

pub fn solve_with_options(problem: &SdpProblem, opts: &SolveOptions) -> SdpSolution {
    let start = Instant::now();
    let dims = problem.block_dims();

    // Row-normalize constraints; a zero functional with nonzero rhs is
    // structurally inconsistent.
    let mut funcs: Vec<LinearFunctional> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    for Constraint { functional, rhs } in problem.constraints() {
        let nrm = functional.norm();
        if nrm < 1e-14 {
            if rhs.abs() > 1e-12 {
                return infeasible_solution(problem, start);
            }
            continue;
        }
        let mut f = functional.clone();
        f.scale_by(1.0 / nrm);
        funcs.push(f);
        b.push(rhs / nrm);
    }
    let p = funcs.len();

    let mut c_mat: Vec<HermitianMatrix> = dims.iter().map(|&d| HermitianMatrix::zeros(d)).collect();
    problem.objective().scatter(1.0, &mut c_mat);
    for m in &mut c_mat {
        m.resymmetrize();
    }
    let c_norm = c_mat.iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>().sqrt();
    let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut x: Vec<HermitianMatrix> = dims.iter().map(|&d| HermitianMatrix::zeros(d)).collect();
    let mut s: Vec<HermitianMatrix> = x.clone();
    let mut y = vec![0.0f64; p];

    if p == 0 {
        // unconstrained: X = 0 is optimal for any C ⪰ 0 objective; project
        // the trivial candidate and report
        let objective_value = problem.objective().value(&x);
        return SdpSolution {
            blocks: x,
            objective_value,
            primal_residual: 0.0,
            dual_residual: 0.0,
            gap: 0.0,
            status: SolveStatus::Optimal,
            iterations: 0,
            solve_seconds: start.elapsed().as_secs_f64(),
            averaged_objective_trace: vec![objective_value],
        };
    }

    // Gram matrix of the normalized constraint functionals, factored once.
    let mut gram = vec![0.0f64; p * p];
    for i in 0..p {
        gram[i * p + i] = 1.0; // unit-norm rows
        for j in 0..i {
            let g = funcs[i].dot(&funcs[j]);
            gram[i * p + j] = g;
            gram[j * p + i] = g;
        }
    }
    let chol = match CholeskyFactor::new(p, &gram) {
        Ok(c) => c,
        Err(_) => return infeasible_solution(problem, start),
    };

    // the 1/4 factor is empirical: across the recovery formulations the
    // iteration count is far more forgiving of a μ below the data-scale
    // ratio than above it
    let mut mu = (0.25 * c_norm / (1.0 + b_norm)).clamp(1e-4, 1e4);
    let mut ax = vec![0.0f64; p];
    let mut rhs = vec![0.0f64; p];
    let mut x_avg: Vec<HermitianMatrix> = x.clone();
    let mut trace = Vec::new();

    let mut pri = f64::INFINITY;
    let mut dua = f64::INFINITY;
    let mut gap = f64::INFINITY;
    let mut iter = 0;

    let mut best: Option<(f64, Vec<HermitianMatrix>, f64, f64, f64)> = None;

    'sweeps: while iter < opts.max_iters {
        iter += 1;

        for (i, f) in funcs.iter().enumerate() {
            ax[i] = f.value(&x);
        }
        for i in 0..p {
            rhs[i] = mu * (b[i] - ax[i]) + funcs[i].value(&c_mat) - funcs[i].value(&s);
        }
        y.copy_from_slice(&rhs);
        if chol.solve(&mut y).is_err() {
            break;
        }

        // V = C − A*(y) − μX
        let mut v: Vec<HermitianMatrix> = c_mat.clone();
        for (bi, block) in v.iter_mut().enumerate() {
            let xb = &x[bi];
            for (vv, xv) in block.data_mut().iter_mut().zip(xb.data()) {
                *vv -= mu * xv;
            }
        }
        for (i, f) in funcs.iter().enumerate() {
            f.scatter(-y[i], &mut v);
        }
        for block in v.iter_mut() {
            block.resymmetrize();
        }

        let mut dual_sq = 0.0;
        let mut s_change_sq = 0.0;
        for bi in 0..dims.len() {
            let proj = match psd_project(&v[bi]) {
                Ok(pm) => pm,
                Err(_) => break 'sweeps,
            };
            let mut x_new = proj.sub(&v[bi]);
            for e in x_new.data_mut().iter_mut() {
                *e /= mu;
            }
            // dual-feasibility residual: A*y + S_new − C = μ(X_new − X_old)
            dual_sq += x_new.sub(&x[bi]).frobenius_norm().powi(2) * mu * mu;
            s_change_sq += proj.sub(&s[bi]).frobenius_norm().powi(2);
            s[bi] = proj;
            x[bi] = x_new;
        }

        // running average iterate (diagnostic)
        let w_new = 1.0 / iter as f64;
        for (avg, cur) in x_avg.iter_mut().zip(&x) {
            for (a, b_) in avg.data_mut().iter_mut().zip(b_data(cur)) {
                *a = *a * (1.0 - w_new) + b_ * w_new;
            }
        }

        // residuals
        let mut pri_max: f64 = 0.0;
        for (i, f) in funcs.iter().enumerate() {
            let r = (f.value(&x) - b[i]).abs() / (1.0 + b[i].abs());
            pri_max = pri_max.max(r);
        }
        pri = pri_max;
        dua = dual_sq.sqrt() / (1.0 + c_norm);
        let pobj = problem.objective().value(&x);
        let dobj: f64 = b.iter().zip(&y).map(|(bi, yi)| bi * yi).sum();
        gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());

        // Merit trace on the running-average iterate. The raw iterates are
        // infeasible for the equality constraints until convergence, so the
        // plain objective climbs toward the optimum from below; the
        // exact-penalty merit ⟨C,X̄⟩ + ρ·‖A(X̄)−b‖₂ with ρ above the dual
        // multiplier norm is the quantity the method actually descends, and
        // it is monotone nonincreasing on the averaged iterate.
        if iter % 25 == 0 || iter == 1 {
            let pobj_avg = problem.objective().value(&x_avg);
            let res_avg: f64 = funcs
                .iter()
                .zip(&b)
                .map(|(f, bi)| (f.value(&x_avg) - bi).powi(2))
                .sum::<f64>()
                .sqrt();
            let rho = 2.0 * (1.0 + y.iter().map(|v| v * v).sum::<f64>().sqrt());
            trace.push(pobj_avg + rho * res_avg);
        }

        let score = pri.max(dua).max(gap);
        if best.as_ref().map_or(true, |(bs, ..)| score < *bs) {
            best = Some((score, x.clone(), pri, dua, gap));
        }

        if pri <= opts.tol && dua <= opts.tol && gap <= opts.tol {
            break;
        }

        // Penalty rebalancing from the splitting's own residual pair: its
        // coupling residual A*y + S − C = μ·ΔX against its dual residual
        // (1/μ)·‖ΔS‖. (The SDP-level primal residual is no guide: X is
        // exactly feasible by construction.) Adaptation is restricted to a
        // short burn-in with a wide trigger; late μ changes were observed
        // to oscillate and undo thousands of iterations of tail progress.
        if iter % 100 == 0 && iter <= 300 {
            let split_pri = dual_sq.sqrt();
            let split_dua = s_change_sq.sqrt() / mu;
            if split_pri > 100.0 * split_dua {
                mu = (mu / 4.0).max(1e-6);
            } else if split_dua > 100.0 * split_pri {
                mu = (mu * 4.0).min(1e6);
            }
        }

        if let Some(limit) = opts.time_limit {
            if start.elapsed() > limit {
                break;
            }
        }

        // divergence heuristic
        if iter % 100 == 0 {
            let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if y_norm > 1e12 && pri > 1e-3 {
                return infeasible_solution(problem, start);
            }
        }
    }

    let converged = pri <= opts.tol && dua <= opts.tol && gap <= opts.tol;
    let (blocks, pri, dua, gap) = if converged {
        (x, pri, dua, gap)
    } else if let Some((_, bx, bp, bd, bg)) = best {
        (bx, bp, bd, bg)
    } else {
        (x, pri, dua, gap)
    };
    let objective_value = problem.objective().value(&blocks);
    SdpSolution {
        blocks,
        objective_value,
        primal_residual: pri,
        dual_residual: dua,
        gap,
        status: if converged { SolveStatus::Optimal } else { SolveStatus::MaxIters },
        iterations: iter,
        solve_seconds: start.elapsed().as_secs_f64(),
        averaged_objective_trace: trace,
    }
}

fn b_data(m: &HermitianMatrix) -> impl Iterator<Item = num_complex::Complex64> + '_ {
    m.data().iter().copied()
}

fn infeasible_solution(problem: &SdpProblem, start: Instant) -> SdpSolution {
    let blocks: Vec<HermitianMatrix> =
        problem.block_dims().iter().map(|&d| HermitianMatrix::zeros(d)).collect();
    SdpSolution {
        objective_value: problem.objective().value(&blocks),
        blocks,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        gap: f64::INFINITY,
        status: SolveStatus::Infeasible,
        iterations: 0,
        solve_seconds: start.elapsed().as_secs_f64(),
        averaged_objective_trace: Vec::new(),
    }
}

/// Independent re-verification of a solution against the raw problem data:
/// per-constraint residuals and the minimum eigenvalue over all blocks.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Certification {
    pub max_constraint_residual: f64,
    pub min_eigenvalue: f64,
    pub ok: bool,
}

pub fn verify(problem: &SdpProblem, solution: &SdpSolution, tol: f64) -> Certification {
    let mut max_res: f64 = 0.0;
    for Constraint { functional, rhs } in problem.constraints() {
        let nrm = functional.norm().max(1e-14);
        let res = (functional.value(&solution.blocks) - rhs).abs() / (nrm * (1.0 + rhs.abs()));
        max_res = max_res.max(res);
    }
    let min_eig = solution
        .blocks
        .iter()
        .map(|bl| bl.min_eigenvalue().unwrap_or(f64::NEG_INFINITY))
        .fold(f64::INFINITY, f64::min);
    let scale = solution
        .blocks
        .iter()
        .map(|bl| bl.frobenius_norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    Certification {
        max_constraint_residual: max_res,
        min_eigenvalue: min_eig,
        ok: max_res <= 10.0 * tol && min_eig >= -10.0 * tol * scale,
    }
}
