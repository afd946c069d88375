//! Paired comparison on random Gaussian magnitude measurements.
//!
//! Both pipelines see the same planted signal and the same q measurement
//! vectors: PhaseLift retrieves X̂ first and runs standard ANM on it, while
//! phaseless ANM couples phase retrieval and localization in one program.
//! Around q ≈ n the one-shot formulation wins.

use phaseless_anm::experiment::{recover_once, RecoverSpec};
use phaseless_anm::localization::{time_error, Method};
use phaseless_anm::measurement::MeasurementKind;

fn main() -> phaseless_anm::Result<()> {
    for q in [32, 64, 128] {
        for method in [Method::PhaselessAnm, Method::PhaseliftAnm] {
            let spec = RecoverSpec {
                n: 32,
                k: 2,
                separation: 0.25,
                seed: 5,
                method,
                measurement: MeasurementKind::Random,
                q,
                ..Default::default()
            };
            let verdict = match recover_once(&spec) {
                Ok((truth, res)) => match &res.signal {
                    Some(est) => {
                        let err = time_error(est, &truth);
                        if err < 1e-3 {
                            format!("success (time error {err:.1e})")
                        } else {
                            format!("failed (time error {err:.1e})")
                        }
                    }
                    None => {
                        format!("failed (λ₂/λ₁ = {:.1e}, not rank-1)", res.eigenvalue_ratio)
                    }
                },
                Err(e) => format!("failed ({e})"),
            };
            println!("q = {q:3}  {:14} {verdict}", method.to_string());
        }
    }
    Ok(())
}
