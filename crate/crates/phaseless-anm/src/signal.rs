//! Continuous-domain impulse signals and their low-frequency Fourier images.
//!
//! An [`ImpulseSignal`] is a sum of Dirac impulses Σ_j c_j δ(t − t_j) with
//! times on the unit circle [0,1). Everything downstream works on its
//! frequency samples X_f = Σ_j c_j e^{−i2πf t_j} over a contiguous window
//! {0, 1, ..., size−1}, or on single-impulse atoms a(t,φ) with entries
//! e^{−i(2πf t − φ)}.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_REJECTIONS: usize = 10_000;

/// Contiguous frequency index set {0, 1, ..., size−1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyWindow {
    size: usize,
}

impl FrequencyWindow {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidWindow("window size must be at least 1".into()));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }
}

/// Frequency-domain samples over a [`FrequencyWindow`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierVector {
    #[serde(with = "crate::serde_complex::vec")]
    values: Vec<Complex64>,
}

impl FourierVector {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWindow("empty Fourier vector".into()));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn window(&self) -> FrequencyWindow {
        FrequencyWindow { size: self.values.len() }
    }

    /// Restriction to the first `m` indices.
    pub fn truncate(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.values.len() {
            return Err(Error::InvalidWindow(format!(
                "cannot truncate length-{} vector to {}",
                self.values.len(),
                m
            )));
        }
        Ok(Self { values: self.values[..m].to_vec() })
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { values: self.values.iter().map(|v| v * factor).collect() }
    }

    /// Global-phase rotation making the first nonzero entry real positive.
    pub fn phase_normalized_first(&self) -> Self {
        let max_abs = self.values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        match self.values.iter().find(|v| v.norm() > 1e-12 * max_abs.max(1.0)) {
            Some(pivot) => self.scale(Complex64::from_polar(1.0, -pivot.arg())),
            None => self.clone(),
        }
    }

    /// Global-phase rotation making the largest-magnitude entry real positive.
    pub fn phase_normalized_largest(&self) -> Self {
        let pivot = self
            .values
            .iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .copied()
            .unwrap_or(Complex64::ZERO);
        if pivot.norm() == 0.0 {
            return self.clone();
        }
        self.scale(Complex64::from_polar(1.0, -pivot.arg()))
    }

    /// min over θ of ‖self − e^{iθ}·other‖₂ (distance modulo global phase).
    pub fn phase_aligned_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        let overlap: Complex64 =
            self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        // the minimizing rotation of `self`; rotate-and-subtract avoids the
        // catastrophic cancellation of the closed form √(‖a‖²+‖b‖²−2|⟨a,b⟩|)
        let rot = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::ONE };
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a * rot - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Single unit impulse at time `t` with phase `phase`, seen in frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    time: f64,
    phase: f64,
}

impl Atom {
    /// Time is reduced mod 1 into [0,1); phase mod 2π into [0,2π).
    pub fn new(time: f64, phase: f64) -> Self {
        Self { time: wrap_unit(time), phase: phase.rem_euclid(TAU) }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Entry f is e^{−i(2πf·t − φ)}; every entry has unit modulus.
    pub fn realize(&self, window: FrequencyWindow) -> FourierVector {
        let values = window
            .indices()
            .map(|f| Complex64::from_polar(1.0, -(TAU * f as f64 * self.time - self.phase)))
            .collect();
        FourierVector { values }
    }
}

/// Sparse impulse train: distinct times in [0,1) with nonzero complex
/// amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpulseSignal {
    times: Vec<f64>,
    #[serde(with = "crate::serde_complex::vec")]
    amps: Vec<Complex64>,
}

impl ImpulseSignal {
    pub fn new(times: Vec<f64>, amps: Vec<Complex64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidSignal("at least one impulse required".into()));
        }
        if times.len() != amps.len() {
            return Err(Error::InvalidSignal(format!(
                "{} times but {} amplitudes",
                times.len(),
                amps.len()
            )));
        }
        if amps.iter().any(|a| a.norm() == 0.0) {
            return Err(Error::InvalidSignal("zero amplitude".into()));
        }
        let times: Vec<f64> = times.into_iter().map(wrap_unit).collect();
        for (i, &ti) in times.iter().enumerate() {
            for &tj in &times[i + 1..] {
                if ti == tj {
                    return Err(Error::InvalidSignal(format!("duplicate time {ti}")));
                }
            }
        }
        Ok(Self { times, amps })
    }

    pub fn sparsity(&self) -> usize {
        self.times.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("impulse signal serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: Self = serde_json::from_str(s)?;
        Self::new(parsed.times, parsed.amps)
    }
}

/// Distance between two times on the unit circle.
pub fn cyclic_distance(a: f64, b: f64) -> f64 {
    let d = (wrap_unit(a) - wrap_unit(b)).abs();
    d.min(1.0 - d)
}

fn wrap_unit(t: f64) -> f64 {
    let w = t.rem_euclid(1.0);
    // rem_euclid can return 1.0 for tiny negative inputs
    if w >= 1.0 { 0.0 } else { w }
}

/// X_f = Σ_j c_j e^{−i2πf t_j} over the window.
pub fn fourier_synthesize(sig: &ImpulseSignal, window: FrequencyWindow) -> FourierVector {
    let values = window
        .indices()
        .map(|f| {
            sig.times
                .iter()
                .zip(&sig.amps)
                .map(|(&t, &c)| c * Complex64::from_polar(1.0, -TAU * f as f64 * t))
                .sum()
        })
        .collect();
    FourierVector { values }
}

/// Minimum cyclic distance between any two impulse times; 1.0 for a single
/// impulse (the separation constraint is vacuous).
pub fn min_separation(sig: &ImpulseSignal) -> f64 {
    let times = sig.times();
    let mut best = 1.0_f64;
    for (i, &ti) in times.iter().enumerate() {
        for &tj in &times[i + 1..] {
            best = best.min(cyclic_distance(ti, tj));
        }
    }
    best
}

/// Seeded random instance with minimum separation `separation`.
///
/// For k = 2 the first time is uniform in [0,1) and the second is placed at
/// exactly `separation` further along the circle. For k > 2, times are drawn
/// by rejection sampling until the cyclic minimum separation is met.
/// Amplitude real and imaginary parts are uniform in the open interval (0,1).
pub fn random_instance(k: usize, separation: f64, seed: u64) -> Result<ImpulseSignal> {
    if k == 0 {
        return Err(Error::InvalidSignal("k must be at least 1".into()));
    }
    if k >= 2 && (k as f64) * separation >= 1.0 {
        return Err(Error::InfeasibleInstance(format!(
            "k·separation = {} ≥ 1 cannot fit on the circle",
            k as f64 * separation
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let times = match k {
        1 => vec![rng.gen::<f64>()],
        2 => {
            let t1 = rng.gen::<f64>();
            vec![t1, wrap_unit(t1 + separation)]
        }
        _ => {
            let mut attempts = 0;
            loop {
                let cand: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
                let ok = (0..k).all(|i| {
                    (i + 1..k).all(|j| cyclic_distance(cand[i], cand[j]) >= separation)
                });
                if ok {
                    break cand;
                }
                attempts += 1;
                if attempts >= MAX_REJECTIONS {
                    return Err(Error::SamplingExhausted(MAX_REJECTIONS));
                }
            }
        }
    };
    let amps = (0..k)
        .map(|_| Complex64::new(open_unit(&mut rng), open_unit(&mut rng)))
        .collect();
    ImpulseSignal::new(times, amps)
}

fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let v = rng.gen::<f64>();
        if v > 0.0 {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn atom_at_origin_is_all_ones() {
        let w = FrequencyWindow::new(4).unwrap();
        let a = Atom::new(0.0, 0.0).realize(w);
        for v in a.values() {
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn atom_at_half_alternates() {
        let w = FrequencyWindow::new(4).unwrap();
        let a = Atom::new(0.5, 0.0).realize(w);
        let expected = [1.0, -1.0, 1.0, -1.0];
        for (v, e) in a.values().iter().zip(expected) {
            assert_abs_diff_eq!(v.re, e, epsilon = 1e-12);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn atom_quarter_with_phase() {
        // t = 0.25, φ = π/2, n = 2: entries e^{iπ/2} = i and e^{−i(π/2 − π/2)} = 1
        let w = FrequencyWindow::new(2).unwrap();
        let a = Atom::new(0.25, FRAC_PI_2).realize(w);
        assert_abs_diff_eq!(a.values()[0].re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.values()[0].im, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.values()[1].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.values()[1].im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn atom_unit_modulus_and_norm() {
        let w = FrequencyWindow::new(17).unwrap();
        let a = Atom::new(0.3721, 1.234).realize(w);
        let mut norm_sq = 0.0;
        for v in a.values() {
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
            norm_sq += v.norm_sqr();
        }
        assert_abs_diff_eq!(norm_sq, 17.0, epsilon = 1e-9);
    }

    #[test]
    fn synthesize_single_impulse_at_zero() {
        let sig = ImpulseSignal::new(vec![0.0], vec![c(1.0, 0.0)]).unwrap();
        let x = fourier_synthesize(&sig, FrequencyWindow::new(8).unwrap());
        for v in x.values() {
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn synthesize_scaled_alternation() {
        let sig = ImpulseSignal::new(vec![0.5], vec![c(0.0, 2.0)]).unwrap();
        let x = fourier_synthesize(&sig, FrequencyWindow::new(4).unwrap());
        let expected = [c(0.0, 2.0), c(0.0, -2.0), c(0.0, 2.0), c(0.0, -2.0)];
        for (v, e) in x.values().iter().zip(expected) {
            assert_abs_diff_eq!(v.re, e.re, epsilon = 1e-12);
            assert_abs_diff_eq!(v.im, e.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn synthesize_matches_per_entry_oracle() {
        let sig = random_instance(2, 0.2, 42).unwrap();
        let w = FrequencyWindow::new(12).unwrap();
        let x = fourier_synthesize(&sig, w);
        for (f, v) in x.values().iter().enumerate() {
            // independent direct evaluation, entry by entry
            let mut expect = c(0.0, 0.0);
            for (t, a) in sig.times().iter().zip(sig.amps()) {
                let angle = -TAU * f as f64 * t;
                expect += a * c(angle.cos(), angle.sin());
            }
            assert_abs_diff_eq!(v.re, expect.re, epsilon = 1e-12);
            assert_abs_diff_eq!(v.im, expect.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn synthesis_is_linear_in_amplitudes() {
        let w = FrequencyWindow::new(9).unwrap();
        let s1 = ImpulseSignal::new(vec![0.15], vec![c(1.0, 0.5)]).unwrap();
        let s2 = ImpulseSignal::new(vec![0.7], vec![c(-0.3, 2.0)]).unwrap();
        let alpha = c(2.0, -1.0);
        let beta = c(0.5, 0.25);
        let combined = ImpulseSignal::new(
            vec![0.15, 0.7],
            vec![alpha * c(1.0, 0.5), beta * c(-0.3, 2.0)],
        )
        .unwrap();
        let lhs = fourier_synthesize(&combined, w);
        let x1 = fourier_synthesize(&s1, w);
        let x2 = fourier_synthesize(&s2, w);
        for f in 0..9 {
            let rhs = alpha * x1.values()[f] + beta * x2.values()[f];
            assert_abs_diff_eq!(lhs.values()[f].re, rhs.re, epsilon = 1e-12);
            assert_abs_diff_eq!(lhs.values()[f].im, rhs.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn truncation_matches_direct_small_window_synthesis() {
        let sig = random_instance(3, 0.1, 7).unwrap();
        let full = fourier_synthesize(&sig, FrequencyWindow::new(16).unwrap());
        let small = fourier_synthesize(&sig, FrequencyWindow::new(5).unwrap());
        let truncated = full.truncate(5).unwrap();
        assert_eq!(truncated.values(), small.values());
    }

    #[test]
    fn min_separation_wraps_around() {
        let sig = ImpulseSignal::new(vec![0.1, 0.9], vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(min_separation(&sig), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn min_separation_three_impulses() {
        let sig = ImpulseSignal::new(
            vec![0.2, 0.5, 0.7],
            vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        assert_abs_diff_eq!(min_separation(&sig), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn min_separation_single_impulse_is_one() {
        let sig = ImpulseSignal::new(vec![0.3], vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(min_separation(&sig), 1.0);
    }

    #[test]
    fn min_separation_invariant_under_cyclic_shift() {
        let sig = random_instance(4, 0.05, 3).unwrap();
        let base = min_separation(&sig);
        for shift in [0.13, 0.5, 0.961] {
            let shifted = ImpulseSignal::new(
                sig.times().iter().map(|t| t + shift).collect(),
                sig.amps().to_vec(),
            )
            .unwrap();
            assert_abs_diff_eq!(min_separation(&shifted), base, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_instance_k2_has_exact_separation() {
        let sig = random_instance(2, 0.25, 11).unwrap();
        assert_abs_diff_eq!(min_separation(&sig), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn random_instance_is_deterministic() {
        let a = random_instance(2, 0.25, 99).unwrap();
        let b = random_instance(2, 0.25, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_instance_k10_respects_separation() {
        let sig = random_instance(10, 0.05, 5).unwrap();
        assert_eq!(sig.sparsity(), 10);
        assert!(min_separation(&sig) >= 0.05);
    }

    #[test]
    fn random_instance_rejects_infeasible() {
        assert!(random_instance(5, 0.3, 1).is_err());
    }

    #[test]
    fn random_instance_amplitudes_in_open_unit_square() {
        let sig = random_instance(6, 0.02, 13).unwrap();
        for a in sig.amps() {
            assert!(a.re > 0.0 && a.re < 1.0);
            assert!(a.im > 0.0 && a.im < 1.0);
        }
    }

    #[test]
    fn signal_json_round_trip() {
        let sig = random_instance(3, 0.1, 21).unwrap();
        let json = sig.to_json();
        let back = ImpulseSignal::from_json(&json).unwrap();
        assert_eq!(sig, back);
        // schema is {times: [...], amps: [[re,im],...]}
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value["times"].is_array());
        assert!(value["amps"][0].is_array());
        assert_eq!(value["amps"][0].as_array().unwrap().len(), 2);
    }

    #[test]
    fn rejects_malformed_signals() {
        assert!(ImpulseSignal::new(vec![], vec![]).is_err());
        assert!(ImpulseSignal::new(vec![0.1], vec![]).is_err());
        assert!(ImpulseSignal::new(vec![0.1], vec![c(0.0, 0.0)]).is_err());
        assert!(ImpulseSignal::new(vec![0.1, 0.1], vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }
}
