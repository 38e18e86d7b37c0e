//! Spectra, resolvent norms and ε-pseudospectra.
//!
//! The ε-pseudospectrum is `{z : |(zI - A)^{-1}| > 1/ε}`. At finite
//! dimension the resolvent norm is `1/σ_min(zI - A)`, which is what every
//! routine here evaluates. Disconnectedness of a dilated finite spectrum is
//! decided exactly by a ball-intersection graph; grids are only used for
//! pseudospectra.

mod components;
mod contour;
mod curve;
mod grid;

pub use components::{connected_components, dilate_and_test, Components, Dilation};
pub use contour::{contours, Contour};
pub use curve::{
    delta_bound, delta_bound_checked, separating_curve, semicontinuity_trial, ComponentSelector, DeltaConvergence,
    DeltaEstimate, SemicontinuityTrial, SeparatingCurve, TrialOutcome,
};
pub use grid::{
    inclusion_check, inclusion_scan, pseudospectrum_grid, GridOptions, InclusionCheck, InclusionScan, PseudospectrumGrid, Region,
};

use crate::error::Result;
use crate::matrix::Operator;
use crate::scalar::{Complex, Real};
use crate::spectrum::SpectrumSet;

/// All eigenvalues of `a`.
pub fn spectrum<T: Real>(a: &Operator<T>) -> Result<SpectrumSet<T>> {
    a.eigenvalues()
}

/// `|(zI - A)^{-1}| = 1/σ_min(zI - A)`, or infinity when `zI - A` is singular.
pub fn resolvent_norm<T: Real>(a: &Operator<T>, z: Complex<T>) -> T {
    invert_sigma(a.shifted_sigma_min(z))
}

pub(crate) fn invert_sigma<T: Real>(sigma: T) -> T {
    if sigma == T::zero() {
        T::INFINITY
    } else {
        T::one() / sigma
    }
}
