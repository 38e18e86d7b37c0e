use std::fmt;

use thiserror::Error;

/// Hypotheses of the annulus zero-count bound, in their conventional order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// `0 < 4 phi < rho / 3` and `2 phi < |a| < 3 phi`.
    Geometry,
    /// `f(a) != 0`.
    NonvanishingAtA,
    /// `f` analytic on the closed disc of radius `rho`.
    Analytic,
    /// `|f| <= M` on the closed disc of radius `rho`.
    Bounded,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Hypothesis::Geometry => "(i)",
            Hypothesis::NonvanishingAtA => "(ii)",
            Hypothesis::Analytic => "(iii)",
            Hypothesis::Bounded => "(iv)",
        };
        f.write_str(tag)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has zero dimension")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigenvalue iteration did not converge after {iterations} sweeps on rows {lo}..={hi}")]
    NoConvergence { iterations: usize, lo: usize, hi: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot normalize the zero operator")]
    ZeroOperator,
    #[error("vector {0} is zero")]
    ZeroVector(&'static str),
    #[error("operator is not nilpotent: spectral radius {radius:e} exceeds {tolerance:e}")]
    NotNilpotent { radius: f64, tolerance: f64 },
    #[error("operator has trivial kernel (smallest singular value {sigma_min:e})")]
    TrivialKernel { sigma_min: f64 },
    #[error("z = {re}{im:+}i is at or numerically near an eigenvalue (sigma_min = {sigma_min:e})")]
    NearPole { re: f64, im: f64, sigma_min: f64 },
    #[error("matrix is numerically singular")]
    Singular,
    #[error("spectrum is connected at radius {radius:e}; nothing to separate")]
    SpectrumConnected { radius: f64 },
    #[error("component index {index} out of range ({count} components)")]
    NoSuchComponent { index: usize, count: usize },
    #[error("no axis-aligned rectangle isolates the selected component")]
    NoRectangularSeparation,
    #[error("curve passes through the spectrum near {re}{im:+}i")]
    CurveTouchesSpectrum { re: f64, im: f64 },
    #[error("curve does not separate the spectrum ({inside} inside, {outside} outside)")]
    NotSeparating { inside: usize, outside: usize },
    #[error("region is degenerate")]
    DegenerateRegion,
    #[error("grid needs {nodes} nodes, budget is {budget}")]
    GridBudget { nodes: usize, budget: usize },
    #[error("hypothesis {hypothesis} fails: {detail}")]
    Hypothesis { hypothesis: Hypothesis, detail: String },
    #[error("winding integral did not settle near an integer with {samples} samples; boundary zero suspected")]
    BoundaryZero { samples: usize },
    #[error("|f| nearly vanishes on the circle of radius {radius:e} (min/max = {ratio:e})")]
    NearBoundaryZero { radius: f64, ratio: f64 },
    #[error("phi table has no entry for alpha = {re}{im:+}i")]
    PhiMissing { re: f64, im: f64 },
    #[error("spectrum is not connected at tolerance {tolerance:e} ({components} clusters)")]
    SpectrumNotConnected { tolerance: f64, components: usize },
    #[error("bad perturbation sample {index}: {reason}")]
    BadPerturbation { index: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn hypothesis(hypothesis: Hypothesis, detail: impl Into<String>) -> Self {
        Error::Hypothesis { hypothesis, detail: detail.into() }
    }
}
