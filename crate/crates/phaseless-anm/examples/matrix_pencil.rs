//! Vandermonde decomposition of a PSD Toeplitz matrix by matrix pencil.
//!
//! Synthesizes u_l = Σ_j d_j·e^{−i2πl·t_j} from known (t, d), then recovers
//! both from Toep(u) alone. The pencil is exact on noiseless data.

use num_complex::Complex64;
use std::f64::consts::TAU;

use phaseless_anm::localization::{toeplitz_vandermonde, DEFAULT_RANK_TOL};
use phaseless_anm::sdp::ToeplitzVector;

fn main() -> phaseless_anm::Result<()> {
    let m = 32;
    let times = [0.12, 0.47, 0.813];
    let powers = [1.5, 0.4, 2.2];

    let u: Vec<Complex64> = (0..m)
        .map(|l| {
            times
                .iter()
                .zip(&powers)
                .map(|(&t, &d)| Complex64::from_polar(d, -TAU * l as f64 * t))
                .sum()
        })
        .collect();
    let u = ToeplitzVector::new(u)?;

    let (t_hat, d_hat) = toeplitz_vandermonde(&u, DEFAULT_RANK_TOL)?;
    println!("true times:  {times:?}");
    println!("found times: {t_hat:?}");
    println!("true powers:  {powers:?}");
    println!("found powers: {d_hat:?}");
    Ok(())
}
