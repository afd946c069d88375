//! Acceptance gate: every release-blocking property in one sequential run,
//! printed as one PASS/FAIL line per criterion. Criterion 6 is a soft
//! qualitative ordering and only warns.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use phaseless_anm::experiment::{run_fig1, run_fig2, ExperimentConfig, TrialRecord};
use phaseless_anm::localization::{toeplitz_vandermonde, Method};
use phaseless_anm::measurement::{band_from_masks, theorem2_masks};
use phaseless_anm::recovery::{
    q_complete, squared_atomic_norm_with, standard_anm_with, SolverDiagnostics, DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
};
use phaseless_anm::sdp::{HermitianMatrix, SolveOptions, ToeplitzVector};
use phaseless_anm::signal::{
    cyclic_distance, fourier_synthesize, random_instance, FourierVector, FrequencyWindow,
};

struct Gate {
    failures: Vec<String>,
    certifications: Vec<Option<bool>>,
}

impl Gate {
    fn report(&mut self, criterion: usize, ok: bool, soft: bool, detail: String) {
        let verdict = if ok {
            "PASS"
        } else if soft {
            "WARN"
        } else {
            "FAIL"
        };
        println!("criterion {criterion}: {verdict} — {detail}");
        if !ok && !soft {
            self.failures.push(format!("criterion {criterion}: {detail}"));
        }
    }

    fn absorb(&mut self, trials: &[TrialRecord]) {
        self.certifications.extend(trials.iter().map(|t| t.certified));
    }

    fn absorb_diag(&mut self, diag: &SolverDiagnostics) {
        self.certifications.push(Some(diag.certification.ok));
    }
}

fn default_opts() -> SolveOptions {
    SolveOptions { tol: DEFAULT_TOL, max_iters: DEFAULT_MAX_ITERS, ..Default::default() }
}

fn criterion1_config() -> ExperimentConfig {
    ExperimentConfig {
        n: 32,
        k: 2,
        delta_t: vec![8.0 / 32.0],
        m_values: vec![32],
        trials: 50,
        base_seed: 2024,
        methods: vec![Method::PhaselessAnm],
        ..Default::default()
    }
}

/// Theorem-2 regime: n=m=32, k=2, Δt=8/32, 3·32−2 = 94 mask magnitudes;
/// ≥95% of 50 seeded trials must localize below 1e−3.
fn criterion1(gate: &mut Gate) -> Vec<bool> {
    let grid = run_fig1(&criterion1_config()).expect("criterion 1 grid runs");
    gate.absorb(&grid.trials);
    let successes = grid.trials.iter().filter(|t| t.success).count();
    let rate = successes as f64 / grid.trials.len() as f64;
    let mean_secs = grid.cells[0].mean_solve_seconds;
    let ok = grid.trials.len() == 50 && rate >= 0.95;
    gate.report(
        1,
        ok,
        false,
        format!(
            "Theorem-2 exact recovery: {successes}/50 trials succeeded \
             (rate {rate:.2}, mean {mean_secs:.2} s/solve)"
        ),
    );
    if mean_secs >= 5.0 {
        println!("criterion 1: note — mean solve time {mean_secs:.2} s exceeds the expected 5 s");
    }
    grid.trials.iter().map(|t| t.success).collect()
}

/// Reduced Δt × m grid, 20 paired trials per cell: phaseless ANM on masks
/// must track standard ANM within 15 percentage points per cell.
fn criterion2(gate: &mut Gate) {
    let cfg = ExperimentConfig {
        n: 32,
        k: 2,
        delta_t: [2.0, 4.0, 6.0, 8.0].iter().map(|d| d / 32.0).collect(),
        m_values: vec![8, 16, 24, 32],
        trials: 20,
        base_seed: 7,
        methods: vec![Method::StandardAnm, Method::PhaselessAnm],
        solve_budget_secs: 15.0,
        ..Default::default()
    };
    let grid = run_fig1(&cfg).expect("criterion 2 grid runs");
    gate.absorb(&grid.trials);
    let mut worst = 0.0f64;
    let mut worst_cell = (0.0, 0usize);
    for std_cell in grid.cells.iter().filter(|c| c.method == Method::StandardAnm) {
        let twin = grid
            .cells
            .iter()
            .find(|c| {
                c.method == Method::PhaselessAnm
                    && c.delta_t == std_cell.delta_t
                    && c.m_or_q == std_cell.m_or_q
            })
            .expect("phaseless twin cell exists");
        let diff = (std_cell.probability - twin.probability).abs();
        if diff > worst {
            worst = diff;
            worst_cell = (std_cell.delta_t, std_cell.m_or_q);
        }
    }
    gate.report(
        2,
        worst <= 0.15,
        false,
        format!(
            "phaseless vs standard ANM phase transition: worst per-cell gap \
             {:.0} pp at (Δt={}, m={})",
            worst * 100.0,
            worst_cell.0,
            worst_cell.1
        ),
    );
}

/// Proposition 1 / Theorem 1: ‖XXᴴ‖ₐ (squared formulation) equals the
/// squared standard atomic norm, and both equal (Σ|c_j|)² in the
/// well-separated regime.
fn criterion3(gate: &mut Gate) {
    let m = 16;
    let window = FrequencyWindow::new(m).unwrap();
    let opts = default_opts();
    let mut worst_pair = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for case in 0..20u64 {
        let k = 1 + (case % 3) as usize;
        let sig = random_instance(k, 4.0 / m as f64, 100 + case).unwrap();
        let x = fourier_synthesize(&sig, window);
        let q = HermitianMatrix::rank_one(x.values());
        let (sq, diag) = squared_atomic_norm_with(&q, &opts).unwrap();
        if let Some(d) = &diag {
            gate.absorb_diag(d);
        }
        let (_, anm, anm_diag) = standard_anm_with(&x, &opts).unwrap();
        gate.absorb_diag(&anm_diag);
        let oracle = sig.amps().iter().map(|c| c.norm()).sum::<f64>().powi(2);
        worst_pair = worst_pair.max((sq - anm * anm).abs() / oracle);
        worst_oracle = worst_oracle
            .max((sq - oracle).abs() / oracle)
            .max((anm * anm - oracle).abs() / oracle);
    }
    gate.report(
        3,
        worst_pair <= 1e-4 && worst_oracle <= 1e-3,
        false,
        format!(
            "squared-ANM vs standard-ANM² relative gap {worst_pair:.1e} (≤1e-4), \
             vs (Σ|c|)² oracle {worst_oracle:.1e} (≤1e-3), 20 instances"
        ),
    );
}

/// Lemma 1: for fully nonvanishing X the structured-mask band determines
/// Q = XXᴴ and X up to global phase, exactly and in closed form.
fn criterion4(gate: &mut Gate) {
    let m = 16;
    let mut worst_q = 0.0f64;
    let mut worst_x = 0.0f64;
    let started = std::time::Instant::now();
    for case in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + case);
        let values: Vec<Complex64> = (0..m)
            .map(|_| loop {
                let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if v.norm() >= 0.05 {
                    break v;
                }
            })
            .collect();
        let x = FourierVector::new(values).unwrap();
        let masks = theorem2_masks(&x).unwrap();
        let band = band_from_masks(&masks).unwrap();
        let (q, x_hat) = q_complete(&band).unwrap();
        let xxh = HermitianMatrix::rank_one(x.values());
        worst_q = worst_q.max(q.sub(&xxh).frobenius_norm() / xxh.frobenius_norm());
        worst_x = worst_x.max(x_hat.phase_aligned_distance(&x) / x.norm());
    }
    let elapsed = started.elapsed();
    gate.report(
        4,
        worst_q <= 1e-10 && worst_x <= 1e-10,
        false,
        format!(
            "Lemma-1 completion over 100 X: worst Q error {worst_q:.1e}, worst \
             X error {worst_x:.1e} (≤1e-10), total {:.0} ms",
            elapsed.as_secs_f64() * 1e3
        ),
    );
}

/// Matrix pencil on noiseless synthesized Toeplitz matrices: times to 1e−8
/// and powers to 1e−6 across 100 seeded cases, k ≤ 5, Δt ≥ 2/m, m = 32.
fn criterion5(gate: &mut Gate) {
    let m = 32usize;
    let mut worst_t = 0.0f64;
    let mut worst_d = 0.0f64;
    let mut count_mismatch = 0usize;
    for case in 0..100u64 {
        let k = 1 + (case % 5) as usize;
        let sig = random_instance(k, 2.0 / m as f64, 2000 + case).unwrap();
        let powers: Vec<f64> = sig.amps().iter().map(|c| 0.1 + c.norm_sqr()).collect();
        let u: Vec<Complex64> = (0..m)
            .map(|l| {
                sig.times()
                    .iter()
                    .zip(&powers)
                    .map(|(&t, &d)| Complex64::from_polar(d, -TAU * l as f64 * t))
                    .sum()
            })
            .collect();
        let u = ToeplitzVector::new(u).unwrap();
        let (times, d_hat) = toeplitz_vandermonde(&u, 1e-6).unwrap();
        if times.len() != k {
            count_mismatch += 1;
            continue;
        }
        for (&t_true, &d_true) in sig.times().iter().zip(&powers) {
            let (j, dist) = times
                .iter()
                .enumerate()
                .map(|(j, &t)| (j, cyclic_distance(t, t_true)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            worst_t = worst_t.max(dist);
            worst_d = worst_d.max((d_hat[j] - d_true).abs());
        }
    }
    gate.report(
        5,
        count_mismatch == 0 && worst_t <= 1e-8 && worst_d <= 1e-6,
        false,
        format!(
            "matrix-pencil localization over 100 cases: {count_mismatch} \
             model-order misses, worst time error {worst_t:.1e} (≤1e-8), \
             worst power error {worst_d:.1e} (≤1e-6)"
        ),
    );
}

/// Soft ordering on the k × q random-measurement grid: phaseless ANM should
/// dominate PhaseLift-then-ANM on average, with at least one cell of clear
/// separation. Warn-only: the expected ordering is qualitative.
fn criterion6(gate: &mut Gate) {
    let cfg = ExperimentConfig {
        n: 32,
        k_values: vec![1, 2, 3],
        q_values: vec![16, 32, 64],
        trials: 20,
        base_seed: 42,
        solve_budget_secs: 15.0,
        ..Default::default()
    };
    let grid = run_fig2(&cfg).expect("criterion 6 grid runs");
    gate.absorb(&grid.trials);
    let mean = |method: Method| {
        let cells: Vec<_> = grid.cells.iter().filter(|c| c.method == method).collect();
        cells.iter().map(|c| c.probability).sum::<f64>() / cells.len() as f64
    };
    let p_phaseless = mean(Method::PhaselessAnm);
    let p_baseline = mean(Method::PhaseliftAnm);
    let clear_cell = grid.cells.iter().any(|c| {
        c.method == Method::PhaselessAnm
            && c.probability >= 0.60
            && grid
                .cells
                .iter()
                .any(|b| {
                    b.method == Method::PhaseliftAnm
                        && b.k == c.k
                        && b.m_or_q == c.m_or_q
                        && b.probability <= 0.40
                })
    });
    gate.report(
        6,
        p_phaseless >= p_baseline && clear_cell,
        true,
        format!(
            "baseline ordering (soft): phaseless mean success {p_phaseless:.2} \
             vs PhaseLift+ANM {p_baseline:.2}; clear-separation cell: {clear_cell}"
        ),
    );
}

/// Every optimal-status SDP solution recorded in criteria 1–6 must pass
/// independent re-verification of its constraints and PSD-ness.
fn criterion7(gate: &mut Gate) {
    let total = gate.certifications.len();
    let verified = gate.certifications.iter().filter(|c| **c == Some(true)).count();
    let refuted = gate.certifications.iter().filter(|c| **c == Some(false)).count();
    let ok = refuted == 0 && verified > 0;
    gate.report(
        7,
        ok,
        false,
        format!(
            "solver certification: {verified} verified, {refuted} refuted out of \
             {total} recorded pipelines (unsolved/errored carry no certificate)"
        ),
    );
}

/// Replaying criterion 1 with the same base seed must reproduce the exact
/// per-trial success vector.
fn criterion8(gate: &mut Gate, first: &[bool]) {
    let grid = run_fig1(&criterion1_config()).expect("criterion 8 replay runs");
    gate.absorb(&grid.trials);
    let replay: Vec<bool> = grid.trials.iter().map(|t| t.success).collect();
    gate.report(
        8,
        replay == first,
        false,
        format!("determinism: criterion-1 replay success vector identical: {}", replay == first),
    );
}

#[test]
fn acceptance_criteria() {
    let mut gate = Gate { failures: Vec::new(), certifications: Vec::new() };
    let first_successes = criterion1(&mut gate);
    criterion2(&mut gate);
    criterion3(&mut gate);
    criterion4(&mut gate);
    criterion5(&mut gate);
    criterion6(&mut gate);
    criterion7(&mut gate);
    criterion8(&mut gate, &first_successes);
    assert!(
        gate.failures.is_empty(),
        "acceptance failures:\n{}",
        gate.failures.join("\n")
    );
}
