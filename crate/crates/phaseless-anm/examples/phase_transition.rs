//! A miniature separation × measurement-count phase-transition map.
//!
//! Runs the fig1 grid on a few cells with a handful of trials and prints
//! the success probabilities as CSV. The full-scale map is the same
//! call with the default axes (or `phaseless-anm fig1 --full`).

use phaseless_anm::experiment::{run_fig1, ExperimentConfig};
use phaseless_anm::localization::Method;

fn main() -> phaseless_anm::Result<()> {
    let n = 16;
    let cfg = ExperimentConfig {
        n,
        k: 2,
        delta_t: vec![2.0 / n as f64, 4.0 / n as f64],
        m_values: vec![8, 16],
        trials: 5,
        base_seed: 1,
        methods: vec![Method::StandardAnm, Method::PhaselessAnm],
        ..Default::default()
    };
    let grid = run_fig1(&cfg)?;
    print!("{}", grid.to_csv());
    Ok(())
}
