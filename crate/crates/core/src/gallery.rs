//! Finite-dimensional nilpotent models and the norm scaling `T -> mT`.
//!
//! Every model is strictly triangular with exact zeros, so its spectrum is
//! exactly `{0}` and the eigenvalue fast path reports it without rounding.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Operator;
use crate::scalar::{cplx, real, Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GalleryKind {
    /// Left-endpoint quadrature of the Volterra integration operator.
    Volterra,
    /// Ones on the superdiagonal.
    Jordan,
    /// Caller-supplied superdiagonal.
    WeightedShift,
    /// Seeded complex Gaussian entries above the diagonal, masked by `density`.
    RandomStrictTriangular,
}

/// A superdiagonal weight, written either as a number or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    Real(f64),
    Complex([f64; 2]),
}

impl Weight {
    fn value<T: Real>(self) -> Complex<T> {
        match self {
            Weight::Real(x) => real(T::lit(x)),
            Weight::Complex([re, im]) => cplx(T::lit(re), T::lit(im)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GallerySpec {
    pub kind: GalleryKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Weight>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    /// Forces `dim ker = kernel_dim` by zeroing the columns that feed the
    /// first (upper models) or last (lower models) basis vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_dim: Option<usize>,
}

impl GallerySpec {
    pub fn new(kind: GalleryKind, dim: usize) -> Self {
        GallerySpec { kind, dim, weights: None, seed: None, density: None, kernel_dim: None }
    }

    pub fn volterra(dim: usize) -> Self {
        Self::new(GalleryKind::Volterra, dim)
    }

    pub fn jordan(dim: usize) -> Self {
        Self::new(GalleryKind::Jordan, dim)
    }

    pub fn weighted_shift(weights: Vec<Weight>) -> Self {
        GallerySpec { weights: Some(weights.clone()), ..Self::new(GalleryKind::WeightedShift, weights.len() + 1) }
    }

    pub fn random_strict_triangular(dim: usize, seed: u64) -> Self {
        GallerySpec { seed: Some(seed), ..Self::new(GalleryKind::RandomStrictTriangular, dim) }
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = Some(density);
        self
    }

    pub fn with_kernel_dim(mut self, k: usize) -> Self {
        self.kernel_dim = Some(k);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.dim < 2 {
            return bad(format!("gallery dim must be at least 2, got {}", self.dim));
        }
        match (&self.weights, self.kind) {
            (Some(w), GalleryKind::WeightedShift) if w.len() != self.dim - 1 => {
                return bad(format!("weighted_shift needs {} weights, got {}", self.dim - 1, w.len()));
            }
            (None, GalleryKind::WeightedShift) => return bad("weighted_shift requires weights".into()),
            (Some(_), kind) if kind != GalleryKind::WeightedShift => {
                return bad(format!("weights are only valid for weighted_shift, not {kind:?}"));
            }
            _ => {}
        }
        if let Some(w) = &self.weights {
            if w.iter().any(|w| match w {
                Weight::Real(x) => !x.is_finite(),
                Weight::Complex([a, b]) => !(a.is_finite() && b.is_finite()),
            }) {
                return bad("weights must be finite".into());
            }
        }
        if self.kind == GalleryKind::RandomStrictTriangular && self.seed.is_none() {
            return bad("random_strict_triangular requires a seed".into());
        }
        if let Some(d) = self.density {
            if !(d > 0.0 && d <= 1.0) {
                return bad(format!("density must lie in (0, 1], got {d}"));
            }
        }
        if let Some(k) = self.kernel_dim {
            if k == 0 || k >= self.dim {
                return bad(format!("kernel_dim must lie in 1..{}, got {k}", self.dim));
            }
        }
        Ok(())
    }
}

/// Builds the nilpotent model described by `spec`.
pub fn build<T: Real>(spec: &GallerySpec) -> Result<Operator<T>> {
    spec.validate()?;
    let n = spec.dim;
    let zero = real(T::zero());
    let mut m = DMatrix::from_element(n, n, zero);
    let mut lower = false;
    match spec.kind {
        GalleryKind::Volterra => {
            lower = true;
            let h = real(T::one() / T::from_usize_lossy(n));
            for j in 0..n {
                for i in j + 1..n {
                    m[(i, j)] = h;
                }
            }
        }
        GalleryKind::Jordan => {
            for i in 0..n - 1 {
                m[(i, i + 1)] = real(T::one());
            }
        }
        GalleryKind::WeightedShift => {
            let weights = spec.weights.as_deref().unwrap_or_default();
            for (i, w) in weights.iter().enumerate() {
                m[(i, i + 1)] = w.value();
            }
        }
        GalleryKind::RandomStrictTriangular => {
            let density = spec.density.unwrap_or(1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or_default());
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..n {
                for j in i + 1..n {
                    let keep: f64 = rng.random();
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    if keep < density {
                        m[(i, j)] = cplx(T::lit(re * s), T::lit(im * s));
                    }
                }
            }
        }
    }
    if let Some(k) = spec.kernel_dim {
        let cols: Vec<usize> = if lower { (n - k..n).collect() } else { (0..k).collect() };
        for j in cols {
            m.column_mut(j).fill(zero);
        }
    }
    Ok(Operator::from_entries_unchecked(m))
}

/// Rescales `a_op` so its norm equals `a`; returns the scaled operator and `m = a / |A|`.
pub fn normalize_to<T: Real>(a_op: &Operator<T>, a: T) -> Result<(Operator<T>, T)> {
    if !(a > T::zero()) {
        return Err(Error::InvalidArgument(format!("target norm must be positive, got {a}")));
    }
    let norm = a_op.norm();
    if norm == T::zero() {
        return Err(Error::ZeroOperator);
    }
    let m = a / norm;
    Ok((a_op.scale_real(m), m))
}

pub fn spectral_radius<T: Real>(a: &Operator<T>) -> Result<T> {
    a.spectral_radius()
}

/// Default quasinilpotency tolerance `QTOL * |A|`.
pub fn default_qtol<T: Real>(a: &Operator<T>) -> T {
    T::QTOL * a.norm()
}

/// `spectral_radius(A) <= qtol`.
pub fn is_quasinilpotent<T: Real>(a: &Operator<T>, qtol: T) -> Result<bool> {
    Ok(a.spectral_radius()? <= qtol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volterra_two() {
        let v = build::<f64>(&GallerySpec::volterra(2)).unwrap();
        let expect = Operator::from_real_rows(2, &[0.0, 0.0, 0.5, 0.0]).unwrap();
        assert_eq!(v, expect);
    }

    #[test]
    fn jordan_three() {
        let j = build::<f64>(&GallerySpec::jordan(3)).unwrap();
        let expect = Operator::from_real_rows(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(j, expect);
    }

    #[test]
    fn random_model_has_exact_zero_spectrum() {
        let r = build::<f64>(&GallerySpec::random_strict_triangular(16, 7)).unwrap();
        assert_eq!(spectral_radius(&r).unwrap(), 0.0);
        assert!(r.norm() > 1.0);
    }

    #[test]
    fn random_model_is_reproducible() {
        let spec = GallerySpec::random_strict_triangular(6, 3).with_density(0.5);
        assert_eq!(build::<f64>(&spec).unwrap(), build::<f64>(&spec).unwrap());
        let other = GallerySpec::random_strict_triangular(6, 4).with_density(0.5);
        assert_ne!(build::<f64>(&spec).unwrap(), build::<f64>(&other).unwrap());
    }

    #[test]
    fn weighted_shift_places_weights() {
        let spec = GallerySpec::weighted_shift(vec![Weight::Real(2.0), Weight::Complex([0.0, -1.0])]);
        let w = build::<f64>(&spec).unwrap();
        assert_eq!(w.entries()[(0, 1)], cplx(2.0, 0.0));
        assert_eq!(w.entries()[(1, 2)], cplx(0.0, -1.0));
    }

    #[test]
    fn invalid_specs() {
        assert!(build::<f64>(&GallerySpec::jordan(1)).is_err());
        let mut bad = GallerySpec::weighted_shift(vec![Weight::Real(1.0)]);
        bad.dim = 4;
        assert!(build::<f64>(&bad).is_err());
        let mut no_seed = GallerySpec::random_strict_triangular(4, 0);
        no_seed.seed = None;
        assert!(build::<f64>(&no_seed).is_err());
        assert!(build::<f64>(&GallerySpec::jordan(4).with_density(0.0)).is_err());
    }

    #[test]
    fn kernel_dimension_is_controllable() {
        for spec in [
            GallerySpec::jordan(6).with_kernel_dim(2),
            GallerySpec::volterra(6).with_kernel_dim(3),
            GallerySpec::random_strict_triangular(6, 11).with_kernel_dim(2),
        ] {
            let k = spec.kernel_dim.unwrap();
            let a = build::<f64>(&spec).unwrap();
            let sv = a.singular_values();
            let zeros = sv.iter().filter(|s| **s < 1e-12).count();
            assert_eq!(zeros, k, "{spec:?}");
        }
    }

    #[test]
    fn normalize_examples() {
        let j = build::<f64>(&GallerySpec::jordan(4)).unwrap();
        let (mj, m) = normalize_to(&j, 3.0).unwrap();
        assert!((m - 3.0).abs() < 1e-12);
        assert!((mj.norm() - 3.0).abs() < 3e-12);

        let r = build::<f64>(&GallerySpec::random_strict_triangular(5, 2)).unwrap();
        let (same, m) = normalize_to(&r, r.norm()).unwrap();
        assert_eq!(m, 1.0);
        assert_eq!(same, r);

        assert!(matches!(normalize_to(&Operator::<f64>::zeros(3), 1.0), Err(Error::ZeroOperator)));
    }

    #[test]
    fn spectral_radius_examples() {
        assert_eq!(spectral_radius(&build::<f64>(&GallerySpec::jordan(6)).unwrap()).unwrap(), 0.0);
        assert!((spectral_radius(&Operator::from_real_diagonal(&[2.0f64, 1.0])).unwrap() - 2.0).abs() < 1e-15);
        assert!(spectral_radius(&build::<f64>(&GallerySpec::volterra(32)).unwrap()).unwrap() <= 1e-10);
    }
}
