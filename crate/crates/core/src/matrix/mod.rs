//! Dense complex operators: norms, singular values, eigenvalues, solves.
//!
//! At finite dimension the spectrum is exactly the set of eigenvalues, so the
//! approximate, continuous and residual parts of the spectrum (and the
//! Fredholm/Weyl spectra) are either empty or coincide with the point
//! spectrum. None of them are computed separately.

mod eig;

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SVD};

use crate::error::{Error, Result};
use crate::scalar::{cabs, real, Complex, Real};
use crate::spectrum::SpectrumSet;

pub(crate) use eig::{triangle, Triangle};

/// A square complex matrix standing in for a bounded operator.
///
/// The operator norm is computed lazily and cached; the cache is write-once,
/// so concurrent readers always observe the same value.
#[derive(Debug, Clone)]
pub struct Operator<T: Real> {
    entries: DMatrix<Complex<T>>,
    norm: OnceLock<T>,
}

impl<T: Real> PartialEq for Operator<T> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl<T: Real> Operator<T> {
    pub fn new(entries: DMatrix<Complex<T>>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::Empty);
        }
        for j in 0..cols {
            for i in 0..rows {
                let z = entries[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self::from_entries_unchecked(entries))
    }

    pub(crate) fn from_entries_unchecked(entries: DMatrix<Complex<T>>) -> Self {
        Operator { entries, norm: OnceLock::new() }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_entries_unchecked(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_entries_unchecked(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let n = diag.len();
        Self::from_entries_unchecked(DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { real(T::zero()) }))
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let d: Vec<_> = diag.iter().map(|&x| real(x)).collect();
        Self::from_diagonal(&d)
    }

    /// Builds an operator from real row-major entries.
    pub fn from_real_rows(dim: usize, rows: &[T]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: rows.len() });
        }
        Self::new(DMatrix::from_row_iterator(dim, dim, rows.iter().map(|&x| real(x))))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex<T>> {
        self.entries
    }

    /// Operator 2-norm (largest singular value), cached after the first call.
    pub fn norm(&self) -> T {
        *self.norm.get_or_init(|| largest_singular_value(&self.entries))
    }

    /// The cached norm if it has been computed.
    pub fn cached_norm(&self) -> Option<T> {
        self.norm.get().copied()
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<T> {
        singular_values(&self.entries)
    }

    pub fn smallest_singular_value(&self) -> T {
        smallest_singular_value(&self.entries)
    }

    /// All eigenvalues with multiplicity.
    ///
    /// Exactly triangular inputs take a fast path that returns the diagonal.
    pub fn eigenvalues(&self) -> Result<SpectrumSet<T>> {
        let points = eig::eigenvalues(&self.entries)?;
        Ok(SpectrumSet::new(points, self.norm()))
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> Result<T> {
        Ok(self.eigenvalues()?.radius())
    }

    /// Conjugate transpose. The norm cache carries over since `|A*| = |A|`.
    pub fn adjoint(&self) -> Self {
        let out = Self::from_entries_unchecked(self.entries.adjoint());
        if let Some(n) = self.cached_norm() {
            let _ = out.norm.set(n);
        }
        out
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::from_entries_unchecked(self.entries.map(|z| z * c))
    }

    pub fn scale_real(&self, m: T) -> Self {
        Self::from_entries_unchecked(self.entries.map(|z| z.scale(m)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self::from_entries_unchecked(&self.entries + &other.entries))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self::from_entries_unchecked(&self.entries - &other.entries))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self::from_entries_unchecked(&self.entries * &other.entries))
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: Complex<T>, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self::from_entries_unchecked(&self.entries + other.entries.map(|z| z * alpha)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = DMatrix::identity(self.dim(), self.dim());
        for _ in 0..k {
            acc = &acc * &self.entries;
        }
        Self::from_entries_unchecked(acc)
    }

    pub fn apply(&self, x: &DVector<Complex<T>>) -> Result<DVector<Complex<T>>> {
        self.check_dim(x.len())?;
        Ok(&self.entries * x)
    }

    /// `zI - A`.
    pub fn shifted(&self, z: Complex<T>) -> DMatrix<Complex<T>> {
        let mut m = self.entries.map(|w| -w);
        for i in 0..self.dim() {
            m[(i, i)] += z;
        }
        m
    }

    /// Smallest singular value of `zI - A`.
    pub fn shifted_sigma_min(&self, z: Complex<T>) -> T {
        smallest_singular_value(&self.shifted(z))
    }

    /// Solves `(zI - A) x = b`.
    pub fn solve_shifted(&self, z: Complex<T>, b: &DVector<Complex<T>>) -> Result<DVector<Complex<T>>> {
        self.check_dim(b.len())?;
        self.shifted(z).lu().solve(b).ok_or(Error::Singular)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.entries.clone().try_inverse().map(Self::from_entries_unchecked).ok_or(Error::Singular)
    }

    /// Whether every entry is an exact zero.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| *z == real(T::zero()))
    }

    /// Whether the matrix is exactly strictly triangular (upper or lower).
    pub fn is_strictly_triangular(&self) -> bool {
        triangle(&self.entries).is_some() && self.entries.diagonal().iter().all(|z| *z == real(T::zero()))
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries.iter().zip(other.entries.iter()).map(|(a, b)| cabs(*a - *b)).fold(T::zero(), |m, x| m.max(x))
    }

    /// Unit eigenvector for the eigenvalue `lambda`, by inverse iteration.
    pub fn eigenvector(&self, lambda: Complex<T>) -> Result<DVector<Complex<T>>> {
        let n = self.dim();
        let scale = self.norm().max(T::one());
        // Nudge off the eigenvalue so the LU stays usable; a few sweeps recover the direction.
        let nudge = real(scale * T::EPSILON * T::lit(16.0));
        let lu = self.shifted(lambda + nudge).lu();
        let mut x = DVector::from_fn(n, |i, _| real(T::one() / T::from_usize_lossy(i + 2).sqrt()));
        for _ in 0..4 {
            let mut y = match lu.solve(&x) {
                Some(y) => y,
                None => {
                    // Exactly singular: any null vector of the factor works; perturb more.
                    let lu2 = self.shifted(lambda + nudge.scale(T::lit(1e4))).lu();
                    lu2.solve(&x).ok_or(Error::Singular)?
                }
            };
            let nrm = y.norm();
            if nrm == T::zero() || !nrm.is_finite() {
                return Err(Error::Singular);
            }
            y.unscale_mut(nrm);
            x = y;
        }
        Ok(x)
    }

    /// Condition number `|x| |y| / |y* x|` of a simple eigenvalue, from right and
    /// left eigenvectors. First-order error of a backward stable eigensolver is
    /// about `condition * EPSILON * |A|`.
    pub fn eigenvalue_condition(&self, lambda: Complex<T>) -> Result<T> {
        let x = self.eigenvector(lambda)?;
        let y = self.adjoint().eigenvector(lambda.conj())?;
        let overlap = cabs(inner(&x, &y));
        Ok(if overlap == T::zero() { T::INFINITY } else { T::one() / overlap })
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }
}

/// Singular values of an arbitrary complex matrix, descending.
pub fn singular_values<T: Real>(m: &DMatrix<Complex<T>>) -> Vec<T> {
    let mut sv: Vec<T> = if m.is_empty() {
        Vec::new()
    } else {
        SVD::new(m.clone(), false, false).singular_values.iter().copied().collect()
    };
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

pub fn largest_singular_value<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    singular_values(m).first().copied().unwrap_or(T::zero())
}

/// Smallest singular value; exactly zero for triangular matrices with an exact
/// zero on the diagonal.
pub fn smallest_singular_value<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    if m.is_square() && triangle(m).is_some() && m.diagonal().iter().any(|z| *z == real(T::zero())) {
        return T::zero();
    }
    singular_values(m).last().copied().unwrap_or(T::zero())
}

/// `<x, y> = sum x_i conj(y_i)`, linear in the first argument.
pub fn inner<T: Real>(x: &DVector<Complex<T>>, y: &DVector<Complex<T>>) -> Complex<T> {
    x.iter().zip(y.iter()).fold(real(T::zero()), |acc, (a, b)| acc + *a * b.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn jordan(n: usize) -> Operator<f64> {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = real(1.0);
        }
        Operator::new(m).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert!((jordan(4).norm() - 1.0).abs() < 1e-14);
        assert_eq!(Operator::<f64>::zeros(3).norm(), 0.0);
        assert!((Operator::from_real_diagonal(&[2.0f64, -1.0]).norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn smallest_singular_value_examples() {
        assert!((Operator::<f64>::identity(5).smallest_singular_value() - 1.0).abs() < 1e-14);
        assert_eq!(jordan(3).smallest_singular_value(), 0.0);
        assert!((Operator::from_real_diagonal(&[3.0f64, 0.5]).smallest_singular_value() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn eigenvalue_examples() {
        let s = jordan(5).eigenvalues().unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.points().iter().all(|z| *z == real(0.0)));
        let mut d: Vec<f64> = Operator::from_real_diagonal(&[1.0, 2.0]).eigenvalues().unwrap().points().iter().map(|z| z.re).collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(d, vec![1.0, 2.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Operator::<f64>::new(DMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
        assert!(matches!(Operator::<f64>::new(DMatrix::zeros(0, 0)), Err(Error::Empty)));
        let mut m = DMatrix::<Complex<f64>>::zeros(2, 2);
        m[(1, 0)] = cplx(f64::NAN, 0.0);
        assert!(matches!(Operator::new(m), Err(Error::NonFinite { row: 1, col: 0 })));
    }

    #[test]
    fn norm_cache_is_write_once() {
        let a = Operator::from_real_diagonal(&[4.0, 1.0]);
        assert!(a.cached_norm().is_none());
        let n1 = a.norm();
        assert_eq!(a.cached_norm(), Some(n1));
        assert_eq!(a.norm(), n1);
        assert_eq!(a.adjoint().cached_norm(), Some(n1));
    }

    #[test]
    fn shifted_solve_and_inverse() {
        let a = Operator::from_real_diagonal(&[0.0, 1.0]);
        let b = DVector::from_vec(vec![real(1.0), real(1.0)]);
        let x = a.solve_shifted(real(0.5), &b).unwrap();
        assert!((x[0] - real(2.0)).norm() < 1e-15);
        assert!((x[1] - real(-2.0)).norm() < 1e-15);
        assert!(matches!(jordan(3).inverse(), Err(Error::Singular)));
    }

    #[test]
    fn eigenvector_of_diagonal() {
        let a = Operator::from_real_diagonal(&[1.0, 3.0, -2.0]);
        let v = a.eigenvector(real(3.0)).unwrap();
        assert!((v[1].norm() - 1.0f64).abs() < 1e-10);
        assert!(v[0].norm() < 1e-10 && v[2].norm() < 1e-10);
    }

    #[test]
    fn f32_instantiation() {
        let a = Operator::<f32>::from_real_diagonal(&[2.0, -1.0]);
        assert!((a.norm() - 2.0).abs() < 1e-6);
        assert_eq!(a.eigenvalues().unwrap().len(), 2);
    }

    #[test]
    fn eigenvalue_condition_numbers() {
        let d = Operator::from_real_diagonal(&[1.0, 3.0]);
        assert!((d.eigenvalue_condition(real(3.0)).unwrap() - 1.0f64).abs() < 1e-10);
        // [[1, b], [0, 2]]: kappa = sqrt(1 + b^2) for both eigenvalues.
        let b = 100.0f64;
        let a = Operator::from_real_rows(2, &[1.0, b, 0.0, 2.0]).unwrap();
        let k = a.eigenvalue_condition(real(1.0)).unwrap();
        assert!((k - (1.0 + b * b).sqrt()).abs() < 1e-6 * k);
    }
}
