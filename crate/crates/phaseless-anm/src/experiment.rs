//! Seeded experiment grids over separation × measurement count and
//! sparsity × magnitude-measurement count, plus single-instance recovery.
//!
//! Every trial is identified by `base_seed + cell_index·trials + trial_index`
//! so a grid replays bit-identically from its config. Cells and trials run
//! on a work pool with no shared mutable state; results are reduced in cell
//! order regardless of completion order.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localization::{extract_signal, time_error, Method, RecoveryResult};
use crate::measurement::{
    band_from_masks, random_measurements, theorem2_masks, MeasurementKind, MeasurementSet,
};
use crate::recovery::{
    phaselift_with, q_complete, solve_phaseless_anm_with, standard_anm_with,
};
use crate::sdp::{HermitianMatrix, SolveOptions};
use crate::signal::{fourier_synthesize, random_instance, FourierVector, FrequencyWindow, ImpulseSignal};

/// Success means matched time error below 10⁻³.
pub const DEFAULT_THRESHOLD: f64 = 1e-3;
pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_SOLVE_BUDGET_SECS: f64 = 30.0;

/// Largest fraction of the largest |X_j| treated as a vanishing entry when
/// structured masks are in play (Lemma-1 hypothesis guard).
const ZERO_AMP_GUARD: f64 = 1e-6;
const MAX_REGENERATIONS: u64 = 100;

fn default_n() -> usize {
    32
}
fn default_k() -> usize {
    2
}
fn default_trials() -> usize {
    DEFAULT_TRIALS
}
fn default_tol() -> f64 {
    crate::recovery::DEFAULT_TOL
}
fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}
fn default_rank_tol() -> f64 {
    crate::localization::DEFAULT_RANK_TOL
}
fn default_budget() -> f64 {
    DEFAULT_SOLVE_BUDGET_SECS
}

/// Grid and trial parameters; JSON-loadable, every field overridable.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Frequency window size n (the full window 𝒩 = {0,…,n−1}).
    #[serde(default = "default_n")]
    pub n: usize,
    /// Impulse count for grids keyed by separation (fig1).
    #[serde(default = "default_k")]
    pub k: usize,
    /// Separation axis; empty means the fig1 default 1/n … 11/n.
    #[serde(default)]
    pub delta_t: Vec<f64>,
    /// Measurement-count axis for fig1; empty means 2…30.
    #[serde(default)]
    pub m_values: Vec<usize>,
    /// Magnitude-measurement axis for fig2; empty means n/4 … 4n in n/4 steps.
    #[serde(default)]
    pub q_values: Vec<usize>,
    /// Sparsity axis for fig2; empty means 1…8.
    #[serde(default)]
    pub k_values: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Empty means the per-figure default method pair.
    #[serde(default)]
    pub methods: Vec<Method>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
    /// Minimum separation for fig2 instances; 0 means the default 4/n.
    #[serde(default)]
    pub min_separation: f64,
    #[serde(default = "default_budget")]
    pub solve_budget_secs: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: default_n(),
            k: default_k(),
            delta_t: Vec::new(),
            m_values: Vec::new(),
            q_values: Vec::new(),
            k_values: Vec::new(),
            trials: default_trials(),
            base_seed: 0,
            methods: Vec::new(),
            tol: default_tol(),
            threshold: default_threshold(),
            rank_tol: default_rank_tol(),
            min_separation: 0.0,
            solve_budget_secs: default_budget(),
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Self = serde_json::from_str(&text)?;
        Ok(cfg)
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            time_limit: Some(Duration::from_secs_f64(self.solve_budget_secs)),
            ..Default::default()
        }
    }

    fn validate_common(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidConfig("window size n must be at least 2".into()));
        }
        if !(self.tol > 0.0) || !(self.threshold > 0.0) || !(self.rank_tol > 0.0) {
            return Err(Error::InvalidConfig(
                "tol, threshold, and rank_tol must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One scored trial: everything needed to replay and audit it.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub method: Method,
    pub cell_index: usize,
    pub seed: u64,
    /// Separation (fig1) or minimum separation (fig2).
    pub delta_t: f64,
    /// m for fig1 cells, q for fig2 cells.
    pub m_or_q: usize,
    pub k: usize,
    pub time_error: f64,
    pub success: bool,
    pub solve_seconds: f64,
    pub rank1_ok: bool,
    pub eigenvalue_ratio: f64,
    /// Conjunction of the re-verification results of every SDP solve in the
    /// trial's pipeline; `None` when the pipeline errored before solving.
    pub certified: Option<bool>,
    /// Populated when the pipeline errored instead of recovering.
    pub failure: Option<String>,
}

/// Per-cell aggregate matching the CSV schema.
#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub method: Method,
    pub delta_t: f64,
    pub m_or_q: usize,
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub probability: f64,
    pub mean_time_error_on_success: f64,
    pub mean_solve_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridResult {
    pub cells: Vec<CellSummary>,
    pub trials: Vec<TrialRecord>,
}

impl GridResult {
    /// One row per cell: method, delta_t, m_or_q, k, trials, successes,
    /// probability, mean_time_error_on_success, mean_solve_seconds.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "method,delta_t,m_or_q,k,trials,successes,probability,\
             mean_time_error_on_success,mean_solve_seconds\n",
        );
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                c.method,
                c.delta_t,
                c.m_or_q,
                c.k,
                c.trials,
                c.successes,
                c.probability,
                c.mean_time_error_on_success,
                c.mean_solve_seconds
            ));
        }
        out
    }

    /// One JSON object per line, one line per trial.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for t in &self.trials {
            out.push_str(&serde_json::to_string(t).expect("trial record serializes"));
            out.push('\n');
        }
        out
    }

    /// Writes `<stem>.csv` and `<stem>.jsonl` next to each other.
    pub fn write(&self, stem: &Path) -> Result<()> {
        let csv_path = stem.with_extension("csv");
        let jsonl_path = stem.with_extension("jsonl");
        std::fs::File::create(&csv_path)?.write_all(self.to_csv().as_bytes())?;
        std::fs::File::create(&jsonl_path)?.write_all(self.to_json_lines().as_bytes())?;
        Ok(())
    }

    fn from_trials(trials: Vec<TrialRecord>) -> Self {
        let mut cells: Vec<CellSummary> = Vec::new();
        for t in &trials {
            let cell = match cells.last_mut() {
                Some(c)
                    if c.method == t.method
                        && c.delta_t == t.delta_t
                        && c.m_or_q == t.m_or_q
                        && c.k == t.k =>
                {
                    c
                }
                _ => {
                    cells.push(CellSummary {
                        method: t.method,
                        delta_t: t.delta_t,
                        m_or_q: t.m_or_q,
                        k: t.k,
                        trials: 0,
                        successes: 0,
                        probability: 0.0,
                        mean_time_error_on_success: 0.0,
                        mean_solve_seconds: 0.0,
                    });
                    cells.last_mut().unwrap()
                }
            };
            cell.trials += 1;
            cell.mean_solve_seconds += t.solve_seconds;
            if t.success {
                cell.successes += 1;
                cell.mean_time_error_on_success += t.time_error;
            }
        }
        for c in &mut cells {
            c.probability = c.successes as f64 / c.trials as f64;
            c.mean_solve_seconds /= c.trials as f64;
            if c.successes > 0 {
                c.mean_time_error_on_success /= c.successes as f64;
            } else {
                c.mean_time_error_on_success = f64::NAN;
            }
        }
        GridResult { cells, trials }
    }
}

/// Deterministic instance generation with the Lemma-1 guard: when structured
/// masks will be analyzed, regenerate (still seeded) until no |X_j| for
/// j < m_check falls below the guard threshold.
fn planted_instance(
    k: usize,
    separation: f64,
    seed: u64,
    n: usize,
    guard_m: Option<usize>,
) -> Result<(ImpulseSignal, FourierVector)> {
    let window = FrequencyWindow::new(n)?;
    for attempt in 0..MAX_REGENERATIONS {
        // odd multiplier keeps derived seeds distinct across attempts
        let s = seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let sig = random_instance(k, separation, s)?;
        let x = fourier_synthesize(&sig, window);
        if let Some(m) = guard_m {
            let max = x.values().iter().map(|v| v.norm()).fold(0.0f64, f64::max);
            if x.values()[..m].iter().any(|v| v.norm() < ZERO_AMP_GUARD * max.max(1.0)) {
                continue;
            }
        }
        return Ok((sig, x));
    }
    Err(Error::SamplingExhausted(MAX_REGENERATIONS as usize))
}

#[allow(clippy::too_many_arguments)]
fn record_from(
    result: Result<RecoveryResult>,
    truth: &ImpulseSignal,
    method: Method,
    cell_index: usize,
    seed: u64,
    delta_t: f64,
    m_or_q: usize,
    k: usize,
    threshold: f64,
    solve_seconds: f64,
) -> TrialRecord {
    match result {
        Ok(res) => {
            let err = res
                .signal
                .as_ref()
                .map(|s| time_error(s, truth))
                .unwrap_or(f64::INFINITY);
            TrialRecord {
                method,
                cell_index,
                seed,
                delta_t,
                m_or_q,
                k,
                time_error: err,
                success: err < threshold,
                solve_seconds,
                rank1_ok: res.rank1_ok,
                eigenvalue_ratio: res.eigenvalue_ratio,
                certified: res.certified,
                failure: None,
            }
        }
        Err(e) => TrialRecord {
            method,
            cell_index,
            seed,
            delta_t,
            m_or_q,
            k,
            time_error: f64::INFINITY,
            success: false,
            solve_seconds,
            rank1_ok: false,
            eigenvalue_ratio: f64::NAN,
            certified: None,
            failure: Some(e.to_string()),
        },
    }
}

/// Standard ANM pipeline on a fully observed X.
fn run_standard(x: &FourierVector, opts: &SolveOptions, rank_tol: f64) -> Result<RecoveryResult> {
    let (u_hat, _, diag) = standard_anm_with(x, opts)?;
    let q = HermitianMatrix::rank_one(x.values());
    let mut res = extract_signal(&q, &u_hat, Method::StandardAnm, rank_tol)?;
    res.certified = Some(diag.certification.ok);
    res.solver = Some(diag);
    Ok(res)
}

/// Phaseless ANM pipeline on a measurement set.
fn run_phaseless(
    ms: &MeasurementSet,
    opts: &SolveOptions,
    rank_tol: f64,
) -> Result<RecoveryResult> {
    let window = FrequencyWindow::new(ms.m())?;
    let sol = solve_phaseless_anm_with(ms, window, opts)?;
    let mut res = extract_signal(&sol.q_hat, &sol.u_hat, Method::PhaselessAnm, rank_tol)?;
    res.certified = Some(sol.diagnostics.certification.ok);
    res.solver = Some(sol.diagnostics);
    Ok(res)
}

/// PhaseLift-then-ANM pipeline: retrieve X̂ by trace minimization, then run
/// standard ANM on the retrieved vector.
fn run_phaselift(
    ms: &MeasurementSet,
    opts: &SolveOptions,
    rank_tol: f64,
) -> Result<RecoveryResult> {
    let pl = phaselift_with(ms, opts)?;
    if !pl.rank1_ok {
        // lift was not rank-1: failed retrieval, scored as unsuccessful
        return Ok(RecoveryResult {
            method: Method::PhaseliftAnm,
            signal: None,
            x_hat: pl.x_hat,
            eigenvalue_ratio: pl.eigenvalue_ratio,
            rank1_ok: false,
            pencil_spectrum: Vec::new(),
            residual: f64::INFINITY,
            certified: Some(pl.diagnostics.certification.ok),
            solver: Some(pl.diagnostics),
        });
    }
    let (u_hat, _, anm_diag) = standard_anm_with(&pl.x_hat, opts)?;
    let q = HermitianMatrix::rank_one(pl.x_hat.values());
    let mut res = extract_signal(&q, &u_hat, Method::PhaseliftAnm, rank_tol)?;
    res.eigenvalue_ratio = pl.eigenvalue_ratio;
    res.certified = Some(pl.diagnostics.certification.ok && anm_diag.certification.ok);
    res.solver = Some(pl.diagnostics);
    Ok(res)
}

/// Direct Q-completion pipeline on structured masks, then standard ANM on
/// the completed vector for localization.
fn run_q_completion(
    ms: &MeasurementSet,
    opts: &SolveOptions,
    rank_tol: f64,
) -> Result<RecoveryResult> {
    let band = band_from_masks(ms)?;
    let (q, x_hat) = q_complete(&band)?;
    let (u_hat, _, diag) = standard_anm_with(&x_hat, opts)?;
    let mut res = extract_signal(&q, &u_hat, Method::QCompletion, rank_tol)?;
    res.certified = Some(diag.certification.ok);
    res.solver = Some(diag);
    Ok(res)
}

/// Separation × measurement-count grid: k=2 impulses with exact separation
/// Δt; standard ANM sees the full-phase X over the first m frequencies,
/// phaseless ANM the 3m−2 structured mask magnitudes of the same vector.
pub fn run_fig1(cfg: &ExperimentConfig) -> Result<GridResult> {
    cfg.validate_common()?;
    if cfg.k != 2 {
        return Err(Error::InvalidConfig(format!(
            "the separation grid follows the k=2 protocol, got k={}",
            cfg.k
        )));
    }
    let methods = if cfg.methods.is_empty() {
        vec![Method::StandardAnm, Method::PhaselessAnm]
    } else {
        cfg.methods.clone()
    };
    if methods
        .iter()
        .any(|m| !matches!(m, Method::StandardAnm | Method::PhaselessAnm))
    {
        return Err(Error::InvalidConfig(
            "fig1 methods must be drawn from {standard_anm, phaseless_anm}".into(),
        ));
    }
    let n = cfg.n;
    let delta_t: Vec<f64> = if cfg.delta_t.is_empty() {
        (1..=11).map(|i| i as f64 / n as f64).collect()
    } else {
        cfg.delta_t.clone()
    };
    let m_values: Vec<usize> =
        if cfg.m_values.is_empty() { (2..=30).collect() } else { cfg.m_values.clone() };
    for &dt in &delta_t {
        if cfg.k as f64 * dt >= 1.0 {
            return Err(Error::InvalidConfig(format!("k·Δt = {} ≥ 1", cfg.k as f64 * dt)));
        }
    }
    for &m in &m_values {
        if m < 2 || m > n {
            return Err(Error::InvalidConfig(format!("m = {m} outside 2..=n")));
        }
    }

    let opts = cfg.solve_options();
    // paired design: the seed depends only on the (Δt, m) cell, so every
    // method scores on identical instances
    let axis_cells = delta_t.len() * m_values.len();
    let mut jobs = Vec::new();
    for (mi, &method) in methods.iter().enumerate() {
        let mut axis_index = 0usize;
        for &dt in &delta_t {
            for &m in &m_values {
                for trial in 0..cfg.trials {
                    let seed = cfg.base_seed + (axis_index * cfg.trials + trial) as u64;
                    jobs.push((method, mi * axis_cells + axis_index, seed, dt, m));
                }
                axis_index += 1;
            }
        }
    }

    let trials: Vec<TrialRecord> = jobs
        .par_iter()
        .map(|&(method, cell, seed, dt, m)| {
            let started = std::time::Instant::now();
            let run = || -> Result<(ImpulseSignal, RecoveryResult)> {
                let (sig, x_full) = planted_instance(cfg.k, dt, seed, n, Some(m))?;
                let x = x_full.truncate(m)?;
                let res = match method {
                    Method::StandardAnm => run_standard(&x, &opts, cfg.rank_tol)?,
                    Method::PhaselessAnm => {
                        run_phaseless(&theorem2_masks(&x)?, &opts, cfg.rank_tol)?
                    }
                    _ => unreachable!("validated above"),
                };
                Ok((sig, res))
            };
            let outcome = run();
            let secs = started.elapsed().as_secs_f64();
            match outcome {
                Ok((sig, res)) => record_from(
                    Ok(res),
                    &sig,
                    method,
                    cell,
                    seed,
                    dt,
                    m,
                    cfg.k,
                    cfg.threshold,
                    secs,
                ),
                Err(e) => {
                    let dummy = ImpulseSignal::new(vec![0.0], vec![num_complex::Complex64::ONE])
                        .expect("placeholder");
                    record_from(
                        Err(e),
                        &dummy,
                        method,
                        cell,
                        seed,
                        dt,
                        m,
                        cfg.k,
                        cfg.threshold,
                        secs,
                    )
                }
            }
        })
        .collect();
    Ok(GridResult::from_trials(trials))
}

/// Sparsity × random-measurement-count grid with paired trials: both
/// methods score on identical signals and identical measurement sets.
pub fn run_fig2(cfg: &ExperimentConfig) -> Result<GridResult> {
    cfg.validate_common()?;
    let methods = if cfg.methods.is_empty() {
        vec![Method::PhaselessAnm, Method::PhaseliftAnm]
    } else {
        cfg.methods.clone()
    };
    if methods
        .iter()
        .any(|m| !matches!(m, Method::PhaselessAnm | Method::PhaseliftAnm))
    {
        return Err(Error::InvalidConfig(
            "fig2 methods must be drawn from {phaseless_anm, phaselift_anm}".into(),
        ));
    }
    let n = cfg.n;
    let sep = if cfg.min_separation > 0.0 { cfg.min_separation } else { 4.0 / n as f64 };
    let k_values: Vec<usize> =
        if cfg.k_values.is_empty() { (1..=8).collect() } else { cfg.k_values.clone() };
    let q_values: Vec<usize> = if cfg.q_values.is_empty() {
        (1..=16).map(|i| i * n / 4).collect()
    } else {
        cfg.q_values.clone()
    };
    for &k in &k_values {
        if k >= 2 && k as f64 * sep >= 1.0 {
            return Err(Error::InvalidConfig(format!("k·separation = {} ≥ 1", k as f64 * sep)));
        }
    }
    if q_values.iter().any(|&q| q == 0) {
        return Err(Error::InvalidConfig("q must be at least 1".into()));
    }

    let opts = cfg.solve_options();
    // paired design: one cell = (k, q); the same seed drives both methods
    let mut jobs = Vec::new();
    let mut cell_index = 0usize;
    for &k in &k_values {
        for &q in &q_values {
            for trial in 0..cfg.trials {
                let seed = cfg.base_seed + (cell_index * cfg.trials + trial) as u64;
                jobs.push((cell_index, seed, k, q));
            }
            cell_index += 1;
        }
    }

    let per_trial: Vec<Vec<TrialRecord>> = jobs
        .par_iter()
        .map(|&(cell, seed, k, q)| {
            let prep = || -> Result<(ImpulseSignal, MeasurementSet)> {
                let (sig, x) = planted_instance(k, sep, seed, n, None)?;
                // measurement vectors drawn from a seed decoupled from the
                // signal draw
                let ms = random_measurements(&x, q, seed ^ 0xA5A5_A5A5_A5A5_A5A5)?;
                Ok((sig, ms))
            };
            match prep() {
                Ok((sig, ms)) => methods
                    .iter()
                    .map(|&method| {
                        let started = std::time::Instant::now();
                        let res = match method {
                            Method::PhaselessAnm => run_phaseless(&ms, &opts, cfg.rank_tol),
                            Method::PhaseliftAnm => run_phaselift(&ms, &opts, cfg.rank_tol),
                            _ => unreachable!("validated above"),
                        };
                        let secs = started.elapsed().as_secs_f64();
                        record_from(
                            res,
                            &sig,
                            method,
                            cell,
                            seed,
                            sep,
                            q,
                            k,
                            cfg.threshold,
                            secs,
                        )
                    })
                    .collect(),
                Err(e) => {
                    let dummy = ImpulseSignal::new(vec![0.0], vec![num_complex::Complex64::ONE])
                        .expect("placeholder");
                    methods
                        .iter()
                        .map(|&method| {
                            record_from(
                                Err(Error::InvalidConfig(e.to_string())),
                                &dummy,
                                method,
                                cell,
                                seed,
                                sep,
                                q,
                                k,
                                cfg.threshold,
                                0.0,
                            )
                        })
                        .collect()
                }
            }
        })
        .collect();

    // regroup so each cell's records are contiguous per method
    let mut by_method: Vec<Vec<TrialRecord>> = vec![Vec::new(); methods.len()];
    for trial_records in per_trial {
        for (mi, rec) in trial_records.into_iter().enumerate() {
            by_method[mi].push(rec);
        }
    }
    let mut trials = Vec::new();
    let cells = cell_index;
    for records in by_method {
        debug_assert_eq!(records.len(), cells * cfg.trials);
        trials.extend(records);
    }
    Ok(GridResult::from_trials(trials))
}

/// What a single-instance recovery should run.
#[derive(Debug, Clone)]
pub struct RecoverSpec {
    pub n: usize,
    pub k: usize,
    pub separation: f64,
    pub seed: u64,
    pub method: Method,
    pub measurement: MeasurementKind,
    /// Number of random measurement vectors (ignored for structured masks).
    pub q: usize,
    pub tol: f64,
    pub rank_tol: f64,
    pub solve_budget_secs: f64,
}

impl Default for RecoverSpec {
    fn default() -> Self {
        Self {
            n: default_n(),
            k: default_k(),
            separation: 0.25,
            seed: 0,
            method: Method::PhaselessAnm,
            measurement: MeasurementKind::Theorem2Masks,
            q: 128,
            tol: default_tol(),
            rank_tol: default_rank_tol(),
            solve_budget_secs: default_budget(),
        }
    }
}

/// Runs one full pipeline on a seeded instance and returns the planted
/// truth alongside the recovery.
pub fn recover_once(spec: &RecoverSpec) -> Result<(ImpulseSignal, RecoveryResult)> {
    if spec.n < 2 {
        return Err(Error::InvalidConfig("window size n must be at least 2".into()));
    }
    if spec.k >= 2 && spec.k as f64 * spec.separation >= 1.0 {
        return Err(Error::InvalidConfig(format!(
            "k·separation = {} ≥ 1",
            spec.k as f64 * spec.separation
        )));
    }
    let opts = SolveOptions {
        tol: spec.tol,
        time_limit: Some(Duration::from_secs_f64(spec.solve_budget_secs)),
        ..Default::default()
    };
    let masks_requested = spec.measurement == MeasurementKind::Theorem2Masks
        || spec.method == Method::QCompletion;
    let guard = if masks_requested { Some(spec.n) } else { None };
    let (sig, x) = planted_instance(spec.k, spec.separation, spec.seed, spec.n, guard)?;

    let measure = |x: &FourierVector| -> Result<MeasurementSet> {
        match spec.measurement {
            MeasurementKind::Theorem2Masks => theorem2_masks(x),
            MeasurementKind::Random => {
                random_measurements(x, spec.q, spec.seed ^ 0xA5A5_A5A5_A5A5_A5A5)
            }
        }
    };
    let res = match spec.method {
        Method::StandardAnm => run_standard(&x, &opts, spec.rank_tol)?,
        Method::PhaselessAnm => run_phaseless(&measure(&x)?, &opts, spec.rank_tol)?,
        Method::PhaseliftAnm => run_phaselift(&measure(&x)?, &opts, spec.rank_tol)?,
        Method::QCompletion => {
            if spec.measurement != MeasurementKind::Theorem2Masks {
                return Err(Error::InvalidConfig(
                    "q_completion requires the structured mask family".into(),
                ));
            }
            run_q_completion(&theorem2_masks(&x)?, &opts, spec.rank_tol)?
        }
    };
    Ok((sig, res))
}
