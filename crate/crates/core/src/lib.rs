//! Numerical laboratory for rank-one perturbations of nilpotent operators.
//!
//! The crate models bounded operators by dense complex matrices and provides
//! pseudospectra on grids, separating curves and semicontinuity radii, the
//! analytic function `g(z) = <(zI - T)^{-1} f, e>` whose level set `1/alpha`
//! carries the nonzero eigenvalues of `T + alpha F`, an annulus zero-count
//! bound with a winding-number oracle, and a probe harness that turns the
//! resolvent-inclusion conditions on `T + alpha F` into falsifiable
//! experiments.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the experiment runner
//! uses.

// `!(x < y)` is used on purpose so that NaN falls on the rejecting side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gallery;
pub mod matrix;
pub mod probe;
pub mod rank_one;
pub mod scalar;
pub mod spectra;
pub mod spectrum;
pub mod zero_count;

pub use error::{Error, Hypothesis, Result};
pub use matrix::Operator;
pub use scalar::{Complex, Real};
pub use spectrum::SpectrumSet;

pub type C64 = Complex<f64>;
pub type Operator64 = Operator<f64>;
pub type Operator32 = Operator<f32>;
pub type SpectrumSet64 = SpectrumSet<f64>;
pub type PseudospectrumGrid64 = spectra::PseudospectrumGrid<f64>;
pub type SeparatingCurve64 = spectra::SeparatingCurve<f64>;
pub type RankOnePerturbation64 = rank_one::RankOnePerturbation<f64>;
pub type AnnulusConfig64 = zero_count::AnnulusConfig<f64>;
