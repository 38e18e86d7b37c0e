//! Scalar abstraction shared by every numerical module.

use std::fmt;

use nalgebra::{ComplexField, RealField};
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

pub use nalgebra::Complex;

/// Real floating point type the numerical core is generic over (`f32` or `f64`).
///
/// The associated tolerances are the defaults used throughout the crate. The
/// `f64` values are the reference ones; the `f32` values are scaled to what
/// single precision can actually resolve.
pub trait Real:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + FloatConst
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Unit roundoff.
    const EPSILON: Self;
    const INFINITY: Self;
    /// Relative spectral radius below which an operator counts as quasinilpotent.
    const QTOL: Self;
    /// Relative distance below which eigenvalues are merged into one cluster.
    const CLUSTER_TOL: Self;
    /// Relative smallest singular value below which `zI - T` counts as singular.
    const POLE_TOL: Self;
    /// Relative residual accepted for a root of `g(z) = 1/alpha`.
    const ROOT_TOL: Self;
    /// Relative distance at which two polished roots are the same root.
    const DEDUP_TOL: Self;

    /// Converts an `f64` literal. Panics only for values the type cannot represent.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer not representable")
    }
}

macro_rules! impl_real {
    ($t:ty, $qtol:expr, $cluster:expr, $pole:expr, $root:expr, $dedup:expr) => {
        impl Real for $t {
            const EPSILON: Self = <$t>::EPSILON;
            const INFINITY: Self = <$t>::INFINITY;
            const QTOL: Self = $qtol;
            const CLUSTER_TOL: Self = $cluster;
            const POLE_TOL: Self = $pole;
            const ROOT_TOL: Self = $root;
            const DEDUP_TOL: Self = $dedup;
        }
    };
}

impl_real!(f64, 1e-8, 1e-8, 1e-13, 1e-10, 1e-8);
impl_real!(f32, 1e-3, 1e-3, 1e-6, 1e-4, 1e-3);

/// `|re| + |im|`, the cheap modulus used in deflation tests.
#[inline]
pub(crate) fn abs1<T: Real>(z: Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

#[inline]
pub(crate) fn cabs<T: Real>(z: Complex<T>) -> T {
    z.modulus()
}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Converts a complex number between scalar widths.
#[inline]
pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

#[inline]
pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}
