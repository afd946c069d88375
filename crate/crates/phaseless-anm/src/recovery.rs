//! The four recovery formulations.
//!
//! - [`solve_phaseless_anm`]: squared atomic norm minimization over the
//!   lifted variable Q = XXᴴ with magnitude constraints Tr(A_r Q) = b_r²,
//!   the convex relaxation
//!
//!   ```text
//!   minimize (1/m)·Tr(Toep(u'))
//!   s.t.     Toep(u') − Q ⪰ 0,  Q ⪰ 0,  Tr(A_r Q) = b_r².
//!   ```
//!
//!   The intermediate nonconvex program — minimizing (1/m)·s·Tr(Toep(u))
//!   over the block matrix [[Toep(u), X],[Xᴴ, s]] ⪰ 0 with |⟨a_r, X⟩| = b_r —
//!   motivates this relaxation via the Schur complement and the substitution
//!   u' = s·u, Q = XXᴴ; it is documented here but never solved directly.
//! - [`squared_atomic_norm`]: the same Toeplitz program with Q held fixed to
//!   a given rank-1 Gram matrix; its optimal value is ‖X‖²_𝒜.
//! - [`standard_anm`]: the full-phase baseline
//!   min ½(Tr(Toep(u))/m + s) s.t. [[Toep(u), X],[Xᴴ, s]] ⪰ 0 with X known.
//! - [`phaselift`]: trace-norm minimization min Tr(W), Tr(A_r W) = b_r²,
//!   W ⪰ 0, followed by rank-1 eigen-extraction.
//! - [`q_complete`]: the direct path for structured mask data: with every
//!   X_j ≠ 0, the diagonal and superdiagonal of Q determine X by forward
//!   propagation, no optimization needed.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measurement::{HermitianBand, MeasurementSet};
use crate::sdp::{
    self, Certification, HermitianMatrix, LinearFunctional, SdpProblem, SdpSolution, SolveOptions,
    SolveStatus, ToeplitzVector,
};
use crate::signal::{FourierVector, FrequencyWindow};

/// λ₂/λ₁ at or below this counts as rank-1.
pub const RANK1_RATIO_THRESHOLD: f64 = 1e-3;

/// Diagonal entries at or below this fraction of the largest count as zero
/// in [`q_complete`].
pub const ZERO_DIAG_FRACTION: f64 = 1e-10;

pub const DEFAULT_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ITERS: usize = 50_000;

/// Solver telemetry attached to every SDP-backed recovery.
#[derive(Debug, Clone, Serialize)]
pub struct SolverDiagnostics {
    pub objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub status: String,
    pub iterations: usize,
    pub solve_seconds: f64,
    pub top_eigenvalues: [f64; 2],
    pub certification: Certification,
}

fn diagnostics_for(
    problem: &SdpProblem,
    sol: &SdpSolution,
    tol: f64,
    top_block: &HermitianMatrix,
) -> Result<SolverDiagnostics> {
    let eigs = top_block.eigenvalues()?;
    let n = eigs.len();
    let top = [eigs[n - 1], if n > 1 { eigs[n - 2] } else { 0.0 }];
    Ok(SolverDiagnostics {
        objective: sol.objective_value,
        primal_residual: sol.primal_residual,
        dual_residual: sol.dual_residual,
        gap: sol.gap,
        status: format!("{:?}", sol.status).to_lowercase(),
        iterations: sol.iterations,
        solve_seconds: sol.solve_seconds,
        top_eigenvalues: top,
        certification: sdp::verify(problem, sol, tol),
    })
}

/// Output of the phaseless ANM relaxation.
#[derive(Debug, Clone)]
pub struct PhaselessAnmSolution {
    pub q_hat: HermitianMatrix,
    pub u_hat: ToeplitzVector,
    pub objective: f64,
    pub diagnostics: SolverDiagnostics,
}

impl PhaselessAnmSolution {
    pub fn eigenvalue_ratio(&self) -> f64 {
        let [l1, l2] = self.diagnostics.top_eigenvalues;
        if l1 <= 0.0 {
            0.0
        } else {
            (l2 / l1).max(0.0)
        }
    }
}

/// Appends the equality constraints forcing Σ_blocks X_b (+ `offset`) to be
/// Toeplitz: consecutive entries along every diagonal agree.
fn add_toeplitz_coupling(
    constraints: &mut Vec<(LinearFunctional, f64)>,
    m: usize,
    blocks: &[usize],
    offset: Option<&HermitianMatrix>,
) {
    for d in 0..m - 1 {
        for j in 0..m - 1 - d {
            // (j, j+d) vs (j+1, j+d+1)
            let (r0, c0, r1, c1) = (j, j + d, j + 1, j + d + 1);
            let mut re = LinearFunctional::new();
            for &bl in blocks {
                re.add(bl, r0, c0, Complex64::ONE);
                re.add(bl, r1, c1, -Complex64::ONE);
            }
            let factor = if d == 0 { 1.0 } else { 2.0 };
            let rhs_re = offset
                .map(|k| factor * (k.get(r1, c1).re - k.get(r0, c0).re))
                .unwrap_or(0.0);
            constraints.push((re, rhs_re));
            if d > 0 {
                let mut im = LinearFunctional::new();
                for &bl in blocks {
                    im.add(bl, r0, c0, Complex64::I);
                    im.add(bl, r1, c1, -Complex64::I);
                }
                let rhs_im =
                    offset.map(|k| 2.0 * (k.get(r1, c1).im - k.get(r0, c0).im)).unwrap_or(0.0);
                constraints.push((im, rhs_im));
            }
        }
    }
}

/// Magnitude constraint Tr(A_r X_block) = b_r² with A_r = a_r·a_rᴴ.
fn magnitude_constraint(block: usize, a: &[Complex64], b: f64) -> (LinearFunctional, f64) {
    let mut f = LinearFunctional::new();
    for j in 0..a.len() {
        f.add(block, j, j, Complex64::new(a[j].norm_sqr(), 0.0));
        for l in j + 1..a.len() {
            f.add(block, j, l, a[j] * a[l].conj());
        }
    }
    (f, b * b)
}

/// Mean of each diagonal of Σ_blocks X_b; the solver leaves tiny Toeplitz
/// violations of order the tolerance.
fn toeplitz_generator_from(blocks: &[&HermitianMatrix], m: usize) -> ToeplitzVector {
    let mut u = Vec::with_capacity(m);
    for d in 0..m {
        let mut acc = Complex64::ZERO;
        for j in 0..m - d {
            for b in blocks {
                acc += b.get(j + d, j);
            }
        }
        acc /= (m - d) as f64;
        if d == 0 {
            acc = Complex64::new(acc.re, 0.0);
        }
        u.push(acc);
    }
    ToeplitzVector::new(u).expect("u₀ forced real")
}

/// Solves the phaseless ANM relaxation for the given magnitude measurements.
pub fn solve_phaseless_anm(
    ms: &MeasurementSet,
    window: FrequencyWindow,
    tol: f64,
) -> Result<PhaselessAnmSolution> {
    solve_phaseless_anm_with(
        ms,
        window,
        &SolveOptions { tol, max_iters: DEFAULT_MAX_ITERS, ..Default::default() },
    )
}

/// [`solve_phaseless_anm`] with explicit solver options (iteration and
/// wall-clock budgets).
pub fn solve_phaseless_anm_with(
    ms: &MeasurementSet,
    window: FrequencyWindow,
    opts: &SolveOptions,
) -> Result<PhaselessAnmSolution> {
    let m = ms.m();
    if window.size() != m {
        return Err(Error::InvalidWindow(format!(
            "window size {} does not match measurement length {m}",
            window.size()
        )));
    }
    if m < 2 {
        return Err(Error::InvalidWindow("phaseless ANM needs m ≥ 2".into()));
    }
    if ms.is_empty() {
        return Err(Error::InvalidMeasurement("at least one measurement required".into()));
    }

    // normalize the data scale (Q lives at scale²) so the iterates and the
    // objective are O(1) regardless of signal energy
    let bmax = ms.magnitudes().iter().copied().fold(0.0f64, f64::max);
    let scale = if bmax > 0.0 { bmax } else { 1.0 };

    // blocks: 0 = Q, 1 = S with Toep(u') = Q + S
    let mut objective = LinearFunctional::new();
    let w = 1.0 / m as f64;
    for b in 0..2 {
        for j in 0..m {
            objective.add(b, j, j, Complex64::new(w, 0.0));
        }
    }
    let mut constraints = Vec::new();
    add_toeplitz_coupling(&mut constraints, m, &[0, 1], None);
    for (a, &b) in ms.vectors().iter().zip(ms.magnitudes()) {
        constraints.push(magnitude_constraint(0, a, b / scale));
    }
    let problem = SdpProblem::new(vec![m, m], objective, constraints)?;
    let sol = sdp::solve_with_options(&problem, opts);
    let mut diagnostics = diagnostics_for(&problem, &sol, opts.tol, &sol.blocks[0])?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::SolverFailure(format!(
            "phaseless ANM: {} after {} iterations (primal {:.2e}, dual {:.2e}, gap {:.2e})",
            diagnostics.status,
            sol.iterations,
            sol.primal_residual,
            sol.dual_residual,
            sol.gap
        )));
    }
    let s2 = scale * scale;
    let mut q_hat = sol.blocks[0].clone();
    for e in q_hat.data_mut() {
        *e *= s2;
    }
    let u_scaled = toeplitz_generator_from(&[&sol.blocks[0], &sol.blocks[1]], m);
    let u_hat = ToeplitzVector::new(
        u_scaled.first_column().iter().map(|v| v * s2).collect(),
    )?;
    diagnostics.objective *= s2;
    diagnostics.top_eigenvalues = [
        diagnostics.top_eigenvalues[0] * s2,
        diagnostics.top_eigenvalues[1] * s2,
    ];
    Ok(PhaselessAnmSolution {
        q_hat,
        u_hat,
        objective: sol.objective_value * s2,
        diagnostics,
    })
}

/// Optimal value of min (1/m)·Tr(Toep(u)) s.t. Toep(u) − Q ⪰ 0 for a rank-1
/// PSD Q = XXᴴ; equals ‖X‖²_𝒜.
pub fn squared_atomic_norm(q: &HermitianMatrix, tol: f64) -> Result<f64> {
    squared_atomic_norm_with(
        q,
        &SolveOptions { tol, max_iters: DEFAULT_MAX_ITERS, ..Default::default() },
    )
    .map(|(v, _)| v)
}

/// [`squared_atomic_norm`] with explicit solver options; also returns the
/// solver telemetry when an SDP solve was actually needed (the zero and 1×1
/// cases are closed-form).
pub fn squared_atomic_norm_with(
    q: &HermitianMatrix,
    opts: &SolveOptions,
) -> Result<(f64, Option<SolverDiagnostics>)> {
    let m = q.dim();
    let scale = q.frobenius_norm();
    if scale == 0.0 {
        return Ok((0.0, None));
    }
    let eigs = q.eigenvalues()?;
    let lmax = eigs[m - 1];
    if eigs[0] < -opts.tol.max(1e-9) * lmax.max(1.0) {
        return Err(Error::NotPsd(eigs[0]));
    }
    let ratio = if m > 1 { (eigs[m - 2] / lmax).max(0.0) } else { 0.0 };
    if ratio > RANK1_RATIO_THRESHOLD {
        return Err(Error::NotRankOne { ratio, threshold: RANK1_RATIO_THRESHOLD });
    }
    if m == 1 {
        // Toep(u) = [u₀] ⪰ Q means u₀ ≥ Q₀₀, so the value is Q₀₀ = |X₀|²
        return Ok((q.get(0, 0).re, None));
    }

    // block 0 = M := Toep(u) − Q ⪰ 0; M + Q must be Toeplitz
    let mut objective = LinearFunctional::new();
    let w = 1.0 / m as f64;
    for j in 0..m {
        objective.add(0, j, j, Complex64::new(w, 0.0));
    }
    let mut constraints = Vec::new();
    add_toeplitz_coupling(&mut constraints, m, &[0], Some(q));
    let problem = SdpProblem::new(vec![m], objective, constraints)?;
    let sol = sdp::solve_with_options(&problem, opts);
    let diagnostics = diagnostics_for(&problem, &sol, opts.tol, &sol.blocks[0])?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::SolverFailure(format!(
            "squared atomic norm evaluation: {:?} (primal {:.2e}, gap {:.2e})",
            sol.status, sol.primal_residual, sol.gap
        )));
    }
    Ok((sol.objective_value + q.trace() / m as f64, Some(diagnostics)))
}

/// Full-phase atomic norm minimization with X observed exactly.
/// Returns the Toeplitz generator û and the atomic norm ‖X‖_𝒜.
pub fn standard_anm(x_obs: &FourierVector, tol: f64) -> Result<(ToeplitzVector, f64)> {
    standard_anm_with(
        x_obs,
        &SolveOptions { tol, max_iters: DEFAULT_MAX_ITERS, ..Default::default() },
    )
    .map(|(u, v, _)| (u, v))
}

/// [`standard_anm`] with explicit solver options; also returns solver
/// telemetry.
pub fn standard_anm_with(
    x_obs: &FourierVector,
    opts: &SolveOptions,
) -> Result<(ToeplitzVector, f64, SolverDiagnostics)> {
    let m = x_obs.len();
    // block 0 = Z of dimension m+1 = [[Toep(u), X],[Xᴴ, s]]
    let dim = m + 1;
    let mut objective = LinearFunctional::new();
    let w = 0.5 / m as f64;
    for j in 0..m {
        objective.add(0, j, j, Complex64::new(w, 0.0));
    }
    objective.add(0, m, m, Complex64::new(0.5, 0.0));

    let mut constraints = Vec::new();
    if m > 1 {
        add_toeplitz_coupling(&mut constraints, m, &[0], None);
    }
    for (j, &xj) in x_obs.values().iter().enumerate() {
        let mut re = LinearFunctional::new();
        re.add(0, j, m, Complex64::ONE); // value = 2·Re Z[j,m]
        constraints.push((re, 2.0 * xj.re));
        let mut im = LinearFunctional::new();
        im.add(0, j, m, Complex64::I); // value = 2·Im Z[j,m]
        constraints.push((im, 2.0 * xj.im));
    }
    let problem = SdpProblem::new(vec![dim], objective, constraints)?;
    let sol = sdp::solve_with_options(&problem, opts);
    let diagnostics = diagnostics_for(&problem, &sol, opts.tol, &sol.blocks[0])?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::SolverFailure(format!(
            "standard ANM: {:?} (primal {:.2e}, gap {:.2e})",
            sol.status, sol.primal_residual, sol.gap
        )));
    }
    let z = &sol.blocks[0];
    // û from the top-left m×m corner (Toeplitz up to solver tolerance)
    let mut u = Vec::with_capacity(m);
    for d in 0..m {
        let mut acc = Complex64::ZERO;
        for j in 0..m - d {
            acc += z.get(j + d, j);
        }
        acc /= (m - d) as f64;
        if d == 0 {
            acc = Complex64::new(acc.re, 0.0);
        }
        u.push(acc);
    }
    Ok((ToeplitzVector::new(u)?, sol.objective_value, diagnostics))
}

/// PhaseLift output: the retrieved vector plus the rank-1 quality of the
/// lifted solution. A non-rank-1 lift is a failed retrieval, not an error.
#[derive(Debug, Clone)]
pub struct PhaseliftSolution {
    pub x_hat: FourierVector,
    pub eigenvalue_ratio: f64,
    pub rank1_ok: bool,
    pub diagnostics: SolverDiagnostics,
}

/// Trace minimization over the lifted PSD variable, then rank-1 extraction.
pub fn phaselift(ms: &MeasurementSet, tol: f64) -> Result<PhaseliftSolution> {
    phaselift_with(ms, &SolveOptions { tol, max_iters: DEFAULT_MAX_ITERS, ..Default::default() })
}

/// [`phaselift`] with explicit solver options.
pub fn phaselift_with(ms: &MeasurementSet, opts: &SolveOptions) -> Result<PhaseliftSolution> {
    if ms.is_empty() {
        return Err(Error::InvalidMeasurement("at least one measurement required".into()));
    }
    let m = ms.m();
    let mut objective = LinearFunctional::new();
    for j in 0..m {
        objective.add(0, j, j, Complex64::ONE);
    }
    let constraints = ms
        .vectors()
        .iter()
        .zip(ms.magnitudes())
        .map(|(a, &b)| magnitude_constraint(0, a, b))
        .collect();
    let problem = SdpProblem::new(vec![m], objective, constraints)?;
    let sol = sdp::solve_with_options(&problem, opts);
    let diagnostics = diagnostics_for(&problem, &sol, opts.tol, &sol.blocks[0])?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::SolverFailure(format!(
            "PhaseLift: {} (primal {:.2e}, gap {:.2e})",
            diagnostics.status, sol.primal_residual, sol.gap
        )));
    }
    let (eigs, vecs) = sol.blocks[0].eigendecomposition()?;
    let l1 = eigs[m - 1];
    if l1 <= 1e-12 {
        // zero lift: correct retrieval iff all magnitudes are zero
        let all_zero = ms.magnitudes().iter().all(|&b| b <= 1e-10);
        return Ok(PhaseliftSolution {
            x_hat: FourierVector::new(vec![Complex64::ZERO; m])?,
            eigenvalue_ratio: 0.0,
            rank1_ok: all_zero,
            diagnostics,
        });
    }
    let ratio = if m > 1 { (eigs[m - 2] / l1).max(0.0) } else { 0.0 };
    let x: Vec<Complex64> = vecs[m - 1].iter().map(|v| v * l1.sqrt()).collect();
    let x_hat = FourierVector::new(x)?.phase_normalized_first();
    Ok(PhaseliftSolution {
        x_hat,
        eigenvalue_ratio: ratio,
        rank1_ok: ratio <= RANK1_RATIO_THRESHOLD,
        diagnostics,
    })
}

/// Direct completion of Q = XXᴴ from its band when every diagonal entry is
/// nonzero: X₀ = √Q₀₀ (real positive), X_{j+1} = conj(Q_{j,j+1} / X_j).
pub fn q_complete(band: &HermitianBand) -> Result<(HermitianMatrix, FourierVector)> {
    let m = band.dim();
    let max_diag = band.diag().iter().copied().fold(0.0f64, f64::max);
    if max_diag <= 0.0 {
        return Err(Error::InvalidMeasurement(
            "all-zero diagonal: every X_j vanishes".into(),
        ));
    }
    if let Some(j) = band.diag().iter().position(|&d| d <= ZERO_DIAG_FRACTION * max_diag) {
        return Err(Error::InvalidMeasurement(format!(
            "diagonal entry {j} is numerically zero; completion requires X_j ≠ 0 for all j"
        )));
    }
    let mut x = Vec::with_capacity(m);
    x.push(Complex64::new(band.diag()[0].sqrt(), 0.0));
    for j in 0..m - 1 {
        let next = (band.superdiag()[j] / x[j]).conj();
        let expected = band.diag()[j + 1];
        if (next.norm_sqr() - expected).abs() > 1e-8 * expected.max(1e-300) {
            return Err(Error::InconsistentMagnitudes(format!(
                "|X_{}|² propagated as {} but measured as {}",
                j + 1,
                next.norm_sqr(),
                expected
            )));
        }
        x.push(next);
    }
    let q = HermitianMatrix::rank_one(&x);
    Ok((q, FourierVector::new(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{band_from_masks, random_measurements, theorem2_masks};
    use crate::signal::{fourier_synthesize, random_instance, Atom, ImpulseSignal};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn window(m: usize) -> FrequencyWindow {
        FrequencyWindow::new(m).unwrap()
    }

    #[test]
    fn q_complete_of_one_i() {
        let x = FourierVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let band = band_from_masks(&theorem2_masks(&x).unwrap()).unwrap();
        let (q, x_hat) = q_complete(&band).unwrap();
        assert!(x_hat.phase_aligned_distance(&x) < 1e-12);
        let oracle = HermitianMatrix::rank_one(x.values());
        assert!(q.sub(&oracle).frobenius_norm() < 1e-12);
    }

    #[test]
    fn q_complete_of_all_ones() {
        let x = FourierVector::new(vec![Complex64::ONE; 6]).unwrap();
        let band = band_from_masks(&theorem2_masks(&x).unwrap()).unwrap();
        let (_, x_hat) = q_complete(&band).unwrap();
        for v in x_hat.values() {
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn q_complete_matches_gram_oracle() {
        for seed in 0..20 {
            let sig = random_instance(2, 0.2, 1000 + seed).unwrap();
            let x = fourier_synthesize(&sig, window(16));
            if x.values().iter().any(|v| v.norm() <= 0.1) {
                continue;
            }
            let band = band_from_masks(&theorem2_masks(&x).unwrap()).unwrap();
            let (q, x_hat) = q_complete(&band).unwrap();
            let oracle = HermitianMatrix::rank_one(x.values());
            assert!(
                q.sub(&oracle).frobenius_norm() <= 1e-10 * oracle.frobenius_norm(),
                "seed {seed}"
            );
            assert!(x_hat.phase_aligned_distance(&x) <= 1e-10 * x.norm());
        }
    }

    #[test]
    fn q_complete_rejects_zero_diagonal() {
        let band = HermitianBand::new(vec![1.0, 0.0, 1.0], vec![Complex64::ZERO; 2]).unwrap();
        assert!(q_complete(&band).is_err());
    }

    #[test]
    fn q_complete_rejects_inconsistent_band() {
        // band that satisfies Cauchy-Schwarz but propagates inconsistently
        let band = HermitianBand::new(vec![1.0, 4.0], vec![c(1.0, 0.0)]).unwrap();
        assert!(q_complete(&band).is_err());
    }

    #[test]
    fn standard_anm_single_atom_value() {
        let amp = 1.7;
        let x = Atom::new(0.3, 0.0).realize(window(8));
        let x = x.scale(c(amp, 0.0));
        let (_, value) = standard_anm(&x, 1e-7).unwrap();
        assert_abs_diff_eq!(value, amp, epsilon = 1e-4);
    }

    #[test]
    fn standard_anm_is_positively_homogeneous() {
        let sig = random_instance(2, 0.25, 31).unwrap();
        let x = fourier_synthesize(&sig, window(8));
        let (_, v1) = standard_anm(&x, 1e-7).unwrap();
        let (_, v3) = standard_anm(&x.scale(c(3.0, 0.0)), 1e-7).unwrap();
        assert_abs_diff_eq!(v3, 3.0 * v1, epsilon = 3e-4 * v1.abs().max(1.0));
    }

    #[test]
    fn squared_atomic_norm_of_single_atom() {
        let amp = c(1.2, -0.9);
        let x = Atom::new(0.61, 0.0).realize(window(6)).scale(amp);
        let q = HermitianMatrix::rank_one(x.values());
        let v = squared_atomic_norm(&q, 1e-7).unwrap();
        assert_abs_diff_eq!(v, amp.norm_sqr(), epsilon = 1e-4 * amp.norm_sqr());
    }

    #[test]
    fn squared_atomic_norm_of_zero() {
        let q = HermitianMatrix::zeros(5);
        assert_eq!(squared_atomic_norm(&q, 1e-7).unwrap(), 0.0);
    }

    #[test]
    fn squared_atomic_norm_separated_pair_is_sum_of_amps_squared() {
        // |c| = (1, 2), Δt = 4/m ⇒ ‖X‖²_𝒜 = (1+2)² = 9
        let m = 8;
        let sig = ImpulseSignal::new(vec![0.1, 0.1 + 4.0 / m as f64], vec![c(1.0, 0.0), c(0.0, 2.0)])
            .unwrap();
        let x = fourier_synthesize(&sig, window(m));
        let q = HermitianMatrix::rank_one(x.values());
        let v = squared_atomic_norm(&q, 1e-7).unwrap();
        assert_abs_diff_eq!(v, 9.0, epsilon = 1e-3);
    }

    #[test]
    fn squared_atomic_norm_rejects_non_rank_one() {
        let q = HermitianMatrix::identity(4);
        assert!(matches!(
            squared_atomic_norm(&q, 1e-7),
            Err(Error::NotRankOne { .. })
        ));
    }

    #[test]
    fn proposition_equivalence_of_both_routes() {
        // standard ANM value squared vs. the Toeplitz program on XXᴴ
        for seed in [3u64, 17, 29] {
            let sig = random_instance(2, 0.3, seed).unwrap();
            let x = fourier_synthesize(&sig, window(8));
            let (_, anm) = standard_anm(&x, 1e-7).unwrap();
            let q = HermitianMatrix::rank_one(x.values());
            let sq = squared_atomic_norm(&q, 1e-7).unwrap();
            assert_abs_diff_eq!(sq, anm * anm, epsilon = 1e-4 * (anm * anm).max(1.0));
        }
    }

    #[test]
    fn phaseless_anm_recovers_planted_gram_matrix() {
        let m = 8;
        let sig = random_instance(2, 3.0 / m as f64, 7).unwrap();
        let x = fourier_synthesize(&sig, window(m));
        assert!(x.values().iter().all(|v| v.norm() > 1e-3));
        let ms = theorem2_masks(&x).unwrap();
        let sol = solve_phaseless_anm(&ms, window(m), 1e-7).unwrap();
        let oracle = HermitianMatrix::rank_one(x.values());
        let rel = sol.q_hat.sub(&oracle).frobenius_norm() / oracle.frobenius_norm();
        assert!(rel <= 1e-5, "relative error {rel}");
        assert!(sol.eigenvalue_ratio() <= RANK1_RATIO_THRESHOLD);
        assert!(sol.diagnostics.certification.ok);
    }

    #[test]
    fn phaseless_anm_objective_matches_atomic_norm_oracle() {
        let m = 8;
        let sig = random_instance(2, 3.0 / m as f64, 11).unwrap();
        let x = fourier_synthesize(&sig, window(m));
        let ms = theorem2_masks(&x).unwrap();
        let sol = solve_phaseless_anm(&ms, window(m), 1e-7).unwrap();
        let (_, anm) = standard_anm(&x, 1e-7).unwrap();
        let rel = (sol.objective - anm * anm).abs() / (anm * anm);
        assert!(rel <= 1e-4, "relative gap {rel}");
    }

    #[test]
    fn phaseless_anm_on_zero_signal() {
        let x = FourierVector::new(vec![Complex64::ZERO; 4]).unwrap();
        let ms = theorem2_masks(&x).unwrap();
        let sol = solve_phaseless_anm(&ms, window(4), 1e-7).unwrap();
        assert!(sol.q_hat.frobenius_norm() <= 1e-6);
        assert!(sol.objective.abs() <= 1e-6);
    }

    #[test]
    fn phaselift_zero_measurements_give_zero() {
        let x = FourierVector::new(vec![Complex64::ZERO; 4]).unwrap();
        let ms = random_measurements(&x, 8, 3).unwrap();
        let pl = phaselift(&ms, 1e-7).unwrap();
        assert!(pl.x_hat.norm() <= 1e-8);
        assert!(pl.rank1_ok);
    }

    #[test]
    fn phaselift_recovers_planted_signal() {
        let m = 6;
        let sig = random_instance(2, 0.3, 23).unwrap();
        let x = fourier_synthesize(&sig, window(m));
        let ms = random_measurements(&x, 6 * m, 91).unwrap();
        let pl = phaselift(&ms, 1e-7).unwrap();
        assert!(pl.rank1_ok, "eigenvalue ratio {}", pl.eigenvalue_ratio);
        let rel = pl.x_hat.phase_aligned_distance(&x) / x.norm();
        assert!(rel <= 1e-4, "relative error {rel}");
        // re-measured magnitudes reproduce b_r
        for (a, &b) in ms.vectors().iter().zip(ms.magnitudes()) {
            let re_b = crate::measurement::inner_product(a, pl.x_hat.values()).norm();
            assert_abs_diff_eq!(re_b, b, epsilon = 1e-4 * (1.0 + b));
        }
    }
}
