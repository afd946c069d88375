//! Magnitude measurement synthesis.
//!
//! Every measurement is a pair (a_r, b_r) with b_r = |⟨a_r, X⟩| under the
//! convention ⟨a, X⟩ = Σ_f conj(a_f)·X_f. Two families are provided:
//!
//! - the structured mask family |X_j|, |X_j + X_{j+1}|, |X_j − iX_{j+1}|
//!   (3m−2 measurements for an m-point window), physically arising from
//!   time-domain modulations such as D(t) = 1 + e^{−i2πt}, which shifts a
//!   copy of the spectrum by one bin and yields |X_l + X_{l+1}|;
//! - i.i.d. standard complex Gaussian vectors a_r with observed |⟨a_r, X⟩|.
//!
//! Mask magnitudes determine the diagonal and first superdiagonal of
//! Q = XXᴴ through linear equations; [`band_from_masks`] carries out that
//! conversion.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::signal::FourierVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementKind {
    Theorem2Masks,
    Random,
}

impl std::fmt::Display for MeasurementKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeasurementKind::Theorem2Masks => "theorem2_masks",
            MeasurementKind::Random => "random",
        })
    }
}

impl std::str::FromStr for MeasurementKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem2_masks" => Ok(MeasurementKind::Theorem2Masks),
            "random" => Ok(MeasurementKind::Random),
            other => Err(Error::InvalidConfig(format!("unknown measurement family '{other}'"))),
        }
    }
}

/// Linear-magnitude measurements of one Fourier vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSet {
    kind: MeasurementKind,
    m: usize,
    #[serde(with = "crate::serde_complex::nested_vec")]
    vectors: Vec<Vec<Complex64>>,
    magnitudes: Vec<f64>,
}

impl MeasurementSet {
    fn new(
        kind: MeasurementKind,
        m: usize,
        vectors: Vec<Vec<Complex64>>,
        magnitudes: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(vectors.len(), magnitudes.len());
        debug_assert!(vectors.iter().all(|v| v.len() == m));
        debug_assert!(magnitudes.iter().all(|&b| b >= 0.0));
        Self { kind, m, vectors, magnitudes }
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    /// Length of the measured Fourier window.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of measurements q.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measurement set serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: Self = serde_json::from_str(s)?;
        if parsed.vectors.len() != parsed.magnitudes.len() {
            return Err(Error::InvalidMeasurement(
                "vector and magnitude counts differ".into(),
            ));
        }
        if parsed.vectors.iter().any(|v| v.len() != parsed.m) {
            return Err(Error::InvalidMeasurement("ragged measurement vectors".into()));
        }
        if parsed.magnitudes.iter().any(|&b| !(b >= 0.0)) {
            return Err(Error::InvalidMeasurement("negative magnitude".into()));
        }
        Ok(parsed)
    }
}

/// ⟨a, X⟩ = Σ_f conj(a_f)·X_f.
pub fn inner_product(a: &[Complex64], x: &[Complex64]) -> Complex64 {
    a.iter().zip(x).map(|(af, xf)| af.conj() * xf).sum()
}

/// Structured mask measurements: |X_j| for every j, |X_j + X_{j+1}| and
/// |X_j − iX_{j+1}| for every adjacent pair. Exactly 3m − 2 values.
pub fn theorem2_masks(x: &FourierVector) -> Result<MeasurementSet> {
    let m = x.len();
    if m < 2 {
        return Err(Error::InvalidWindow(
            "mask measurements need a window of at least 2".into(),
        ));
    }
    let xv = x.values();
    let mut vectors = Vec::with_capacity(3 * m - 2);
    let mut magnitudes = Vec::with_capacity(3 * m - 2);
    let mut push = |a: Vec<Complex64>, xv: &[Complex64]| {
        let b = inner_product(&a, xv).norm();
        vectors.push(a);
        magnitudes.push(b);
    };
    for j in 0..m {
        let mut a = vec![Complex64::ZERO; m];
        a[j] = Complex64::ONE;
        push(a, xv);
    }
    for j in 0..m - 1 {
        // conj(a) = e_j + e_{j+1} observes |X_j + X_{j+1}|
        let mut a = vec![Complex64::ZERO; m];
        a[j] = Complex64::ONE;
        a[j + 1] = Complex64::ONE;
        push(a, xv);
    }
    for j in 0..m - 1 {
        // conj(a_{j+1}) = −i observes |X_j − iX_{j+1}|
        let mut a = vec![Complex64::ZERO; m];
        a[j] = Complex64::ONE;
        a[j + 1] = Complex64::I;
        push(a, xv);
    }
    Ok(MeasurementSet::new(MeasurementKind::Theorem2Masks, m, vectors, magnitudes))
}

/// q magnitude measurements with i.i.d. standard complex Gaussian vectors.
pub fn random_measurements(x: &FourierVector, q: usize, seed: u64) -> Result<MeasurementSet> {
    if q == 0 {
        return Err(Error::InvalidMeasurement("q must be at least 1".into()));
    }
    let m = x.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = Vec::with_capacity(q);
    let mut magnitudes = Vec::with_capacity(q);
    for _ in 0..q {
        let a: Vec<Complex64> = (0..m).map(|_| complex_gaussian(&mut rng)).collect();
        magnitudes.push(inner_product(&a, x.values()).norm());
        vectors.push(a);
    }
    Ok(MeasurementSet::new(MeasurementKind::Random, m, vectors, magnitudes))
}

// Box-Muller; real and imaginary parts each N(0, 1).
fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let u1: f64 = loop {
        let v = rng.gen::<f64>();
        if v > 0.0 {
            break v;
        }
    };
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    Complex64::new(r * (TAU * u2).cos(), r * (TAU * u2).sin())
}

/// Diagonal and first superdiagonal of Q = XXᴴ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianBand {
    diag: Vec<f64>,
    #[serde(with = "crate::serde_complex::vec")]
    superdiag: Vec<Complex64>,
}

impl HermitianBand {
    pub fn new(diag: Vec<f64>, superdiag: Vec<Complex64>) -> Result<Self> {
        if diag.is_empty() || superdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidMeasurement(format!(
                "band shape mismatch: {} diagonal, {} superdiagonal",
                diag.len(),
                superdiag.len()
            )));
        }
        if diag.iter().any(|&d| d < 0.0) {
            return Err(Error::InconsistentMagnitudes("negative diagonal entry".into()));
        }
        // Cauchy-Schwarz for a rank-1 Gram band
        for (j, s) in superdiag.iter().enumerate() {
            if s.norm_sqr() > diag[j] * diag[j + 1] + 1e-9 {
                return Err(Error::InconsistentMagnitudes(format!(
                    "|Q[{j},{}]|² = {} exceeds Q[{j},{j}]·Q[{},{}] = {}",
                    j + 1,
                    s.norm_sqr(),
                    j + 1,
                    j + 1,
                    diag[j] * diag[j + 1]
                )));
            }
        }
        Ok(Self { diag, superdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn superdiag(&self) -> &[Complex64] {
        &self.superdiag
    }
}

/// Recovers the band of Q = XXᴴ from mask magnitudes by linear equations:
///
///   Q_{j,j}        = |X_j|²
///   Re Q_{j,j+1}   = (|X_j + X_{j+1}|² − |X_j|² − |X_{j+1}|²) / 2
///   Im Q_{j,j+1}   = (|X_j|² + |X_{j+1}|² − |X_j − iX_{j+1}|²) / 2
pub fn band_from_masks(ms: &MeasurementSet) -> Result<HermitianBand> {
    if ms.kind() != MeasurementKind::Theorem2Masks {
        return Err(Error::InvalidMeasurement(
            "band conversion requires the structured mask family".into(),
        ));
    }
    let m = ms.m();
    let b = ms.magnitudes();
    debug_assert_eq!(b.len(), 3 * m - 2);
    let singles = &b[..m];
    let sums = &b[m..2 * m - 1];
    let shifted = &b[2 * m - 1..];

    let diag: Vec<f64> = singles.iter().map(|&v| v * v).collect();
    let superdiag: Vec<Complex64> = (0..m - 1)
        .map(|j| {
            let re = (sums[j] * sums[j] - diag[j] - diag[j + 1]) / 2.0;
            let im = (diag[j] + diag[j + 1] - shifted[j] * shifted[j]) / 2.0;
            Complex64::new(re, im)
        })
        .collect();
    HermitianBand::new(diag, superdiag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{fourier_synthesize, random_instance, FrequencyWindow, FourierVector};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fv(values: Vec<Complex64>) -> FourierVector {
        FourierVector::new(values).unwrap()
    }

    #[test]
    fn masks_of_all_ones() {
        let x = fv(vec![Complex64::ONE; 3]);
        let ms = theorem2_masks(&x).unwrap();
        assert_eq!(ms.len(), 7);
        let expected = [1.0, 1.0, 1.0, 2.0, 2.0, 2f64.sqrt(), 2f64.sqrt()];
        for (b, e) in ms.magnitudes().iter().zip(expected) {
            assert_abs_diff_eq!(*b, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn masks_of_one_i() {
        let x = fv(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let ms = theorem2_masks(&x).unwrap();
        let b = ms.magnitudes();
        assert_abs_diff_eq!(b[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[2], 2f64.sqrt(), epsilon = 1e-12); // |1 + i|
        assert_abs_diff_eq!(b[3], 2.0, epsilon = 1e-12); // |1 − i·i| = |2|
    }

    #[test]
    fn mask_count_is_3m_minus_2() {
        for m in 2..12 {
            let sig = random_instance(2, 0.2, m as u64).unwrap();
            let x = fourier_synthesize(&sig, FrequencyWindow::new(m).unwrap());
            assert_eq!(theorem2_masks(&x).unwrap().len(), 3 * m - 2);
        }
    }

    #[test]
    fn masks_reject_tiny_window() {
        let x = fv(vec![Complex64::ONE]);
        assert!(theorem2_masks(&x).is_err());
    }

    #[test]
    fn random_measurements_of_zero_signal() {
        let x = fv(vec![Complex64::ZERO; 5]);
        let ms = random_measurements(&x, 8, 3).unwrap();
        assert!(ms.magnitudes().iter().all(|&b| b == 0.0));
    }

    #[test]
    fn magnitudes_are_global_phase_invariant() {
        let sig = random_instance(3, 0.1, 17).unwrap();
        let x = fourier_synthesize(&sig, FrequencyWindow::new(8).unwrap());
        let rotated = x.scale(Complex64::from_polar(1.0, 1.234));
        for (a, b) in [
            (theorem2_masks(&x).unwrap(), theorem2_masks(&rotated).unwrap()),
            (
                random_measurements(&x, 10, 5).unwrap(),
                random_measurements(&rotated, 10, 5).unwrap(),
            ),
        ] {
            for (ba, bb) in a.magnitudes().iter().zip(b.magnitudes()) {
                assert_abs_diff_eq!(*ba, *bb, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn random_measurements_self_consistent() {
        let sig = random_instance(2, 0.3, 8).unwrap();
        let x = fourier_synthesize(&sig, FrequencyWindow::new(6).unwrap());
        let ms = random_measurements(&x, 12, 77).unwrap();
        for (a, &b) in ms.vectors().iter().zip(ms.magnitudes()) {
            let recomputed = inner_product(a, x.values()).norm();
            assert_abs_diff_eq!(recomputed, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_measurements_deterministic() {
        let x = fv(vec![c(1.0, 2.0), c(-0.5, 0.3)]);
        let a = random_measurements(&x, 6, 42).unwrap();
        let b = random_measurements(&x, 6, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn band_of_one_i() {
        let x = fv(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let band = band_from_masks(&theorem2_masks(&x).unwrap()).unwrap();
        assert_abs_diff_eq!(band.diag()[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(band.diag()[1], 1.0, epsilon = 1e-12);
        // Q_{01} = X_0 · conj(X_1) = 1 · (−i)
        assert_abs_diff_eq!(band.superdiag()[0].re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(band.superdiag()[0].im, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn band_of_all_ones() {
        let x = fv(vec![Complex64::ONE; 5]);
        let band = band_from_masks(&theorem2_masks(&x).unwrap()).unwrap();
        for d in band.diag() {
            assert_abs_diff_eq!(*d, 1.0, epsilon = 1e-12);
        }
        for s in band.superdiag() {
            assert_abs_diff_eq!(s.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn band_matches_gram_oracle() {
        // brute-force oracle: build Q = X·Xᴴ and compare its band
        for seed in 0..20 {
            let sig = random_instance(3, 0.08, seed).unwrap();
            let x = fourier_synthesize(&sig, FrequencyWindow::new(8).unwrap());
            let band = band_from_masks(&theorem2_masks(&x).unwrap()).unwrap();
            let xv = x.values();
            for j in 0..8 {
                assert_abs_diff_eq!(band.diag()[j], xv[j].norm_sqr(), epsilon = 1e-10);
            }
            for j in 0..7 {
                let q = xv[j] * xv[j + 1].conj();
                assert_abs_diff_eq!(band.superdiag()[j].re, q.re, epsilon = 1e-10);
                assert_abs_diff_eq!(band.superdiag()[j].im, q.im, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn band_rejects_random_family() {
        let x = fv(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let ms = random_measurements(&x, 4, 1).unwrap();
        assert!(band_from_masks(&ms).is_err());
    }

    #[test]
    fn band_rejects_inconsistent_magnitudes() {
        // |X_0 + X_1| too large to come from any actual signal
        let x = fv(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let ms = theorem2_masks(&x).unwrap();
        let mut doctored = ms.clone();
        doctored.magnitudes[2] = 10.0;
        assert!(band_from_masks(&doctored).is_err());
    }

    #[test]
    fn measurement_set_json_round_trip() {
        let sig = random_instance(2, 0.2, 5).unwrap();
        let x = fourier_synthesize(&sig, FrequencyWindow::new(4).unwrap());
        let ms = theorem2_masks(&x).unwrap();
        let back = MeasurementSet::from_json(&ms.to_json()).unwrap();
        assert_eq!(ms, back);
        let value: serde_json::Value = serde_json::from_str(&ms.to_json()).unwrap();
        assert_eq!(value["kind"], "theorem2_masks");
        assert_eq!(value["m"], 4);
        assert!(value["vectors"][0][0].is_array());
    }
}
