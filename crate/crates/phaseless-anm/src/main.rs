//! Command-line front end: the two phase-transition grids, single-instance
//! recovery, and a quick self-test.
//!
//! Exit status: 0 on completion, 1 on recovery failure (`recover`,
//! `selftest`), 2 on configuration or parse errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phaseless_anm::experiment::{
    recover_once, run_fig1, run_fig2, ExperimentConfig, GridResult, RecoverSpec,
};
use phaseless_anm::localization::{time_error, Method};
use phaseless_anm::measurement::MeasurementKind;
use phaseless_anm::Error;

#[derive(Parser)]
#[command(
    name = "phaseless-anm",
    about = "Sparse impulse recovery from Fourier magnitude measurements",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Separation × measurement-count success grid (k=2 protocol).
    Fig1(GridArgs),
    /// Sparsity × random-measurement-count success grid (paired trials).
    Fig2(GridArgs),
    /// Recover a single seeded instance and print the result.
    Recover(RecoverArgs),
    /// Run a quick end-to-end sanity suite.
    Selftest,
}

#[derive(Args)]
struct GridArgs {
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Frequency window size n.
    #[arg(long)]
    n: Option<usize>,
    /// Impulse count (fig1 requires k=2).
    #[arg(long)]
    k: Option<usize>,
    /// Trials per cell.
    #[arg(long)]
    trials: Option<usize>,
    /// Base seed; trial seed = base_seed + cell_index·trials + trial_index.
    #[arg(long)]
    seed: Option<u64>,
    /// Methods to run (comma separated), e.g. standard_anm,phaseless_anm.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    /// Output stem: writes <out>.csv and <out>.jsonl.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Solver tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Success threshold on the matched cyclic time error.
    #[arg(long)]
    threshold: Option<f64>,
    /// Wall-clock budget per solve in seconds; a solve over budget marks
    /// the trial failed instead of hanging the grid.
    #[arg(long)]
    budget: Option<f64>,
    /// Full-scale grid (full axes, 50 trials) instead of the reduced grid.
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct RecoverArgs {
    /// Frequency window size n.
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Impulse count.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Minimum cyclic separation between impulse times.
    #[arg(long, default_value_t = 0.25)]
    separation: f64,
    /// Instance seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Recovery pipeline.
    #[arg(long, default_value = "phaseless_anm")]
    method: Method,
    /// Measurement family: theorem2_masks or random.
    #[arg(long, default_value = "theorem2_masks")]
    measurement: MeasurementKind,
    /// Number of random measurement vectors (random family only).
    #[arg(long, default_value_t = 128)]
    q: usize,
    /// Solver tolerance.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Success threshold on the matched cyclic time error.
    #[arg(long, default_value_t = 1e-3)]
    threshold: f64,
    /// Wall-clock budget for the solve in seconds.
    #[arg(long, default_value_t = 30.0)]
    budget: f64,
    /// Write the full JSON diagnostic record here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Fig1(args) => run_grid(args, Grid::Fig1),
        Command::Fig2(args) => run_grid(args, Grid::Fig2),
        Command::Recover(args) => recover(args),
        Command::Selftest => selftest(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::InvalidWindow(_)
        | Error::InfeasibleInstance(_) => 2,
        _ => 1,
    }
}

#[derive(Clone, Copy)]
enum Grid {
    Fig1,
    Fig2,
}

/// Builds the effective config: file (if given) → preset axes → flag
/// overrides, then runs the grid and emits CSV to stdout plus optional
/// CSV/JSONL files.
fn run_grid(args: GridArgs, which: Grid) -> Result<ExitCode, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };

    // presets apply only where the config file left the axes empty
    if args.config.is_none() || args.full {
        match which {
            Grid::Fig1 if args.full => {
                // full-scale axes are the run_fig1 defaults; keep them empty
                cfg.trials = 50;
            }
            Grid::Fig1 => {
                let n = args.n.unwrap_or(cfg.n) as f64;
                cfg.delta_t = [2.0, 4.0, 6.0, 8.0].iter().map(|d| d / n).collect();
                cfg.m_values = vec![8, 16, 24, 32];
                cfg.trials = 20;
            }
            Grid::Fig2 if args.full => {
                cfg.trials = 50;
            }
            Grid::Fig2 => {
                cfg.k_values = vec![1, 2, 3];
                cfg.q_values = vec![16, 32, 64];
                cfg.trials = 20;
            }
        }
    }

    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    if !args.methods.is_empty() {
        cfg.methods = args.methods.clone();
    }
    if let Some(tol) = args.tol {
        cfg.tol = tol;
    }
    if let Some(th) = args.threshold {
        cfg.threshold = th;
    }
    if let Some(b) = args.budget {
        cfg.solve_budget_secs = b;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }

    let result = match which {
        Grid::Fig1 => run_fig1(&cfg)?,
        Grid::Fig2 => run_fig2(&cfg)?,
    };
    emit_grid(&result, cfg.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn emit_grid(result: &GridResult, out: Option<&std::path::Path>) -> Result<(), Error> {
    print!("{}", result.to_csv());
    if let Some(stem) = out {
        result.write(stem)?;
        eprintln!(
            "wrote {} and {}",
            stem.with_extension("csv").display(),
            stem.with_extension("jsonl").display()
        );
    }
    Ok(())
}

fn recover(args: RecoverArgs) -> Result<ExitCode, Error> {
    let spec = RecoverSpec {
        n: args.n,
        k: args.k,
        separation: args.separation,
        seed: args.seed,
        method: args.method,
        measurement: args.measurement,
        q: args.q,
        tol: args.tol,
        solve_budget_secs: args.budget,
        ..Default::default()
    };
    let (truth, res) = recover_once(&spec)?;

    println!("method:        {}", res.method);
    println!("truth times:   {:?}", truth.times());
    match &res.signal {
        Some(est) => {
            let err = time_error(est, &truth);
            println!("found times:   {:?}", est.times());
            println!("time error:    {err:.3e}");
            if let Some(d) = &res.solver {
                println!(
                    "solver:        {} in {} iterations ({:.2}s), certified: {}",
                    d.status, d.iterations, d.solve_seconds, d.certification.ok
                );
            }
            write_record(&args.out, &res)?;
            if err < args.threshold {
                println!("recovery:      success");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("recovery:      FAILED (time error above {:.1e})", args.threshold);
                Ok(ExitCode::from(1))
            }
        }
        None => {
            println!(
                "recovery:      FAILED (no impulse estimate; eigenvalue ratio {:.3e})",
                res.eigenvalue_ratio
            );
            write_record(&args.out, &res)?;
            Ok(ExitCode::from(1))
        }
    }
}

fn write_record(
    out: &Option<PathBuf>,
    res: &phaseless_anm::localization::RecoveryResult,
) -> Result<(), Error> {
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(res)?)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// Fast end-to-end checks across all four pipelines on small instances.
fn selftest() -> Result<ExitCode, Error> {
    let checks: Vec<(&str, RecoverSpec)> = vec![
        (
            "phaseless ANM on structured masks (n=8)",
            RecoverSpec { n: 8, separation: 0.375, seed: 3, ..Default::default() },
        ),
        (
            "standard ANM with full phase (n=8)",
            RecoverSpec {
                n: 8,
                separation: 0.375,
                seed: 3,
                method: Method::StandardAnm,
                ..Default::default()
            },
        ),
        (
            "direct Q-completion on structured masks (n=8)",
            RecoverSpec {
                n: 8,
                separation: 0.375,
                seed: 3,
                method: Method::QCompletion,
                ..Default::default()
            },
        ),
        (
            "PhaseLift + ANM on random measurements (n=8, q=64)",
            RecoverSpec {
                n: 8,
                separation: 0.375,
                seed: 3,
                method: Method::PhaseliftAnm,
                measurement: MeasurementKind::Random,
                q: 64,
                ..Default::default()
            },
        ),
    ];

    let mut all_ok = true;
    for (name, spec) in checks {
        let line = match recover_once(&spec) {
            Ok((truth, res)) => match res.signal {
                Some(est) => {
                    let err = time_error(&est, &truth);
                    if err < 1e-3 {
                        format!("PASS  {name} (time error {err:.1e})")
                    } else {
                        all_ok = false;
                        format!("FAIL  {name} (time error {err:.1e})")
                    }
                }
                None => {
                    all_ok = false;
                    format!("FAIL  {name} (no impulse estimate)")
                }
            },
            Err(e) => {
                all_ok = false;
                format!("FAIL  {name} ({e})")
            }
        };
        println!("{line}");
    }
    if all_ok {
        println!("selftest: all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("selftest: FAILURES detected");
        Ok(ExitCode::from(1))
    }
}
