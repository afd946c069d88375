//! Sparse off-grid impulse recovery from low-frequency Fourier *magnitude*
//! measurements.
//!
//! A signal x(t) = Σ_j c_j δ(t − t_j) with continuous-valued impulse times
//! t_j ∈ [0,1) is observed only through magnitudes b_r = |⟨a_r, X⟩| of linear
//! functionals of its low-frequency Fourier coefficients X. Recovery lifts
//! the unknown vector to Q = XXᴴ and minimizes the squared atomic norm
//!
//! ```text
//! minimize (1/m)·Tr(Toep(u'))
//! subject to Toep(u') − Q ⪰ 0,  Q ⪰ 0,  Tr(A_r Q) = b_r²,
//! ```
//!
//! after which the impulse times fall out of a Vandermonde decomposition of
//! Toep(û) and X is read off the top eigenpair of Q̂ up to a global phase.
//!
//! The crate is organized as:
//!
//! - [`signal`] — impulse trains, atoms, Fourier synthesis, random instances
//! - [`measurement`] — structured mask and random Gaussian magnitude measurements
//! - [`sdp`] — a small dense operator-splitting solver for Hermitian SDPs
//! - [`recovery`] — phaseless ANM, standard ANM, PhaseLift, direct Q-completion
//! - [`localization`] — matrix-pencil time extraction and amplitude fitting
//! - [`experiment`] — seeded phase-transition grids and CSV/JSON reporting
//!
//! Runnable walkthroughs of each capability live under `examples/`; the
//! `phaseless-anm` binary exposes the experiment grids (`fig1`, `fig2`),
//! single-instance recovery (`recover`), and a quick `selftest`.

pub mod error;
pub mod experiment;
pub mod localization;
pub mod measurement;
pub mod recovery;
pub mod sdp;
pub mod signal;

mod serde_complex;

pub use error::{Error, Result};
