//! Rank-one perturbations `T + alpha F` with `F = e ⊗ f : x ↦ <x, e> f`.
//!
//! Nonzero eigenvalues of `T + alpha F` that are not eigenvalues of `T` are
//! exactly the solutions of `g(z) = 1/alpha`, where
//! `g(z) = <(zI - T)^{-1} f, e>`. This module builds such perturbations,
//! evaluates `g`, finds its level set by seeded Newton iteration and
//! classifies families `{T + alpha F}` by how many nonzero eigenvalues they
//! carry.

use nalgebra::{DMatrix, DVector, SVD};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{inner, triangle, Operator, Triangle};
use crate::scalar::{cabs, cplx, real, Complex, Real};
use crate::spectra::Region;

pub type Vector<T> = DVector<Complex<T>>;

/// `alpha F` with `F = e ⊗ f`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOnePerturbation<T: Real> {
    pub e: Vector<T>,
    pub f: Vector<T>,
    pub alpha: Complex<T>,
}

impl<T: Real> RankOnePerturbation<T> {
    pub fn new(e: Vector<T>, f: Vector<T>, alpha: Complex<T>) -> Result<Self> {
        check_pair(&e, &f)?;
        Ok(RankOnePerturbation { e, f, alpha })
    }

    pub fn dim(&self) -> usize {
        self.e.len()
    }

    /// Matrix of `F` (without `alpha`).
    pub fn operator(&self) -> Operator<T> {
        outer(&self.e, &self.f)
    }

    /// `|F| = |e| |f|`.
    pub fn norm(&self) -> T {
        self.e.norm() * self.f.norm()
    }

    /// `F^2 = <f, e> F`, so `F` is nilpotent iff `<f, e>` vanishes.
    pub fn is_nilpotent(&self) -> bool {
        cabs(inner(&self.f, &self.e)) <= T::lit(1e-12) * self.norm()
    }

    /// Rescales `f` so that `|F| = b`.
    pub fn with_norm(&self, b: T) -> Result<Self> {
        if !(b > T::zero()) {
            return Err(Error::InvalidArgument(format!("target norm must be positive, got {b}")));
        }
        let f = self.f.scale(b / self.norm());
        Ok(RankOnePerturbation { e: self.e.clone(), f, alpha: self.alpha })
    }

    pub fn with_alpha(&self, alpha: Complex<T>) -> Self {
        RankOnePerturbation { alpha, ..self.clone() }
    }

    /// `T + alpha F`.
    pub fn apply_to(&self, t: &Operator<T>) -> Result<Operator<T>> {
        t.add_scaled(self.alpha, &self.operator())
    }
}

fn check_pair<T: Real>(e: &Vector<T>, f: &Vector<T>) -> Result<()> {
    if e.len() != f.len() {
        return Err(Error::DimensionMismatch { expected: e.len(), found: f.len() });
    }
    if e.is_empty() {
        return Err(Error::Empty);
    }
    if e.iter().all(|z| *z == real(T::zero())) {
        return Err(Error::ZeroVector("e"));
    }
    if f.iter().all(|z| *z == real(T::zero())) {
        return Err(Error::ZeroVector("f"));
    }
    Ok(())
}

fn outer<T: Real>(e: &Vector<T>, f: &Vector<T>) -> Operator<T> {
    let n = e.len();
    Operator::from_entries_unchecked(DMatrix::from_fn(n, n, |i, j| f[i] * e[j].conj()))
}

/// Matrix of `x ↦ <x, e> f`, i.e. `f e*`.
pub fn make_rank_one<T: Real>(e: &Vector<T>, f: &Vector<T>) -> Result<Operator<T>> {
    check_pair(e, f)?;
    Ok(outer(e, f))
}

/// Unit `e ∈ ker S` and unit `f ∈ Im S*` for a nilpotent `S`; then
/// `<f, e> = 0` and `S* + alpha (e ⊗ f)` is nilpotent for every `alpha`.
///
/// When `S` has an exactly zero column `j`, `e` is the `j`-th basis vector
/// and `f` a conjugated row of `S`, so `f_j = 0` holds exactly. For strictly
/// triangular `S` the column is chosen so that `S* + alpha F` stays strictly
/// triangular. Otherwise both come from an SVD of `S`.
pub fn kernel_range_perturbation<T: Real>(s: &Operator<T>) -> Result<(Vector<T>, Vector<T>)> {
    let n = s.dim();
    let norm = s.norm();
    if norm == T::zero() {
        return Err(Error::ZeroOperator);
    }
    let radius = s.spectral_radius()?;
    let qtol = T::QTOL * norm;
    if radius > qtol {
        return Err(Error::NotNilpotent { radius: radius.as_f64(), tolerance: qtol.as_f64() });
    }
    let m = s.entries();
    let zero = real(T::zero());
    let zero_col = |j: usize| m.column(j).iter().all(|z| *z == zero);
    let preferred = match triangle(m) {
        Some(Triangle::Upper) => Some(0),
        Some(Triangle::Lower) => Some(n - 1),
        None => None,
    };
    let col = preferred.filter(|&j| zero_col(j)).or_else(|| (0..n).find(|&j| zero_col(j)));
    if let Some(j) = col {
        let row = (0..n)
            .map(|i| (i, m.row(i).iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b)))
            .fold((0, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best })
            .0;
        let mut f = Vector::from_fn(n, |k, _| m[(row, k)].conj());
        let nf = f.norm();
        f.unscale_mut(nf);
        let e = Vector::from_fn(n, |k, _| if k == j { real(T::one()) } else { zero });
        return Ok((e, f));
    }

    let svd = SVD::new(m.clone(), true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let sv = &svd.singular_values;
    let (mut kmin, mut kmax) = (0, 0);
    for k in 0..n {
        if sv[k] < sv[kmin] {
            kmin = k;
        }
        if sv[k] > sv[kmax] {
            kmax = k;
        }
    }
    if sv[kmin] > T::lit(64.0) * T::EPSILON * norm * T::from_usize_lossy(n) {
        return Err(Error::TrivialKernel { sigma_min: sv[kmin].as_f64() });
    }
    let e = vt.row(kmin).adjoint();
    // f = S* u_1, then one Gram-Schmidt sweep against e to remove rounding.
    let mut f = m.adjoint() * u.column(kmax);
    let proj = inner(&f, &e);
    f -= e.scale(T::one()) * proj;
    let nf = f.norm();
    f.unscale_mut(nf);
    Ok((e, f))
}

/// Unit vectors `e`, `f` with standard Gaussian directions and `<f, e> = 0`
/// up to rounding (one Gram-Schmidt step).
pub fn random_orthogonal_pair<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<(Vector<T>, Vector<T>)> {
    if n < 2 {
        return Err(Error::InvalidArgument("orthogonal pairs need dimension at least 2".into()));
    }
    let mut e = random_vector::<T, R>(rng, n);
    let ne = e.norm();
    e.unscale_mut(ne);
    let mut f = random_vector::<T, R>(rng, n);
    let proj = inner(&f, &e);
    f -= &e * proj;
    let nf = f.norm();
    f.unscale_mut(nf);
    Ok((e, f))
}

/// Complex Gaussian vector with independent `N(0, 1/2)` real and imaginary parts.
pub fn random_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Vector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cplx(T::lit(re * s), T::lit(im * s))
    })
}

fn check_pole<T: Real>(t: &Operator<T>, z: Complex<T>) -> Result<()> {
    let sigma = t.shifted_sigma_min(z);
    if sigma == T::zero() || sigma < T::POLE_TOL * t.norm() {
        return Err(Error::NearPole { re: z.re.as_f64(), im: z.im.as_f64(), sigma_min: sigma.as_f64() });
    }
    Ok(())
}

/// `g(z) = <(zI - T)^{-1} f, e>`.
pub fn g_function<T: Real>(t: &Operator<T>, e: &Vector<T>, f: &Vector<T>, z: Complex<T>) -> Result<Complex<T>> {
    check_pair(e, f)?;
    check_pole(t, z)?;
    Ok(inner(&t.solve_shifted(z, f)?, e))
}

/// `g'(z) = -<(zI - T)^{-2} f, e>`.
pub fn g_derivative<T: Real>(t: &Operator<T>, e: &Vector<T>, f: &Vector<T>, z: Complex<T>) -> Result<Complex<T>> {
    check_pair(e, f)?;
    check_pole(t, z)?;
    let x = t.solve_shifted(z, f)?;
    Ok(-inner(&t.solve_shifted(z, &x)?, e))
}

/// `1 - alpha g(z) = det(zI - T - alpha F) / det(zI - T)` and its logarithmic
/// derivative `tr (zI - T - alpha F)^{-1} - tr (zI - T)^{-1}`.
///
/// Solving `(zI - T) x = f` loses accuracy wherever `zI - T` is nearly singular,
/// even at eigenvalues of `T + alpha F` that are perfectly conditioned. The
/// determinant ratio is as accurate as the eigenproblem itself, so root
/// finding and the residual test run on it.
struct Secular<'a, T: Real> {
    t: &'a Operator<T>,
    a: Operator<T>,
    /// Diagonal of `T` when `T` is triangular; then `det(zI - T)` and
    /// `tr (zI - T)^{-1}` come straight from it.
    t_diag: Option<Vec<Complex<T>>>,
}

impl<'a, T: Real> Secular<'a, T> {
    fn new(t: &'a Operator<T>, e: &Vector<T>, f: &Vector<T>, alpha: Complex<T>) -> Result<Self> {
        let t_diag = triangle(t.entries()).map(|_| t.entries().diagonal().iter().copied().collect());
        Ok(Secular { t, a: t.add_scaled(alpha, &outer(e, f))?, t_diag })
    }

    /// `|1 - alpha g(z)|`, infinite at poles.
    fn value(&self, z: Complex<T>) -> T {
        self.eval(z).map(cabs).unwrap_or(T::INFINITY)
    }

    fn ratio(&self, z: Complex<T>) -> Option<Complex<T>> {
        self.eval(z)
    }

    /// `(ln |det(zI - T - alpha F)|, tr (zI - T - alpha F)^{-1})`, the
    /// logarithmic size and derivative of the numerator of `1 - alpha g`.
    /// Unlike `1 - alpha g` itself it grows at infinity, so deflating found
    /// roots cannot push Newton outwards.
    fn numerator(&self, z: Complex<T>) -> Option<(T, Complex<T>)> {
        let lu = self.a.shifted(z).lu();
        let u = lu.u();
        let mut log_size = T::zero();
        for i in 0..u.nrows() {
            let p = cabs(u[(i, i)]);
            if p == T::zero() {
                return Some((-T::INFINITY, real(T::zero())));
            }
            log_size += p.ln();
        }
        let tr = lu.try_inverse()?.trace();
        (tr.re.is_finite() && tr.im.is_finite()).then_some((log_size, tr))
    }

    fn eval(&self, z: Complex<T>) -> Option<Complex<T>> {
        let zero = real(T::zero());
        let ua = self.a.shifted(z).lu();
        let r = match &self.t_diag {
            Some(diag) => {
                // Pair pivots with diagonal factors to keep the running product in range.
                let u = ua.u();
                let mut r = real(ua.p().determinant::<T>());
                for (i, t) in diag.iter().enumerate() {
                    let p = z - *t;
                    if p == zero {
                        return None;
                    }
                    r = r * u[(i, i)] / p;
                }
                r
            }
            None => {
                let dt = self.t.shifted(z).lu().determinant();
                if dt == zero {
                    return None;
                }
                ua.determinant() / dt
            }
        };
        (r.re.is_finite() && r.im.is_finite()).then_some(r)
    }
}

/// `|1 - alpha g(z)|` evaluated through the determinant ratio; a root of
/// `g = 1/alpha` makes this vanish.
pub fn secular_residual<T: Real>(t: &Operator<T>, e: &Vector<T>, f: &Vector<T>, alpha: Complex<T>, z: Complex<T>) -> Result<T> {
    check_pair(e, f)?;
    let s = Secular::new(t, e, f, alpha)?;
    s.ratio(z).map(cabs).ok_or(Error::NearPole { re: z.re.as_f64(), im: z.im.as_f64(), sigma_min: 0.0 })
}

/// Seed grid density for [`perturbed_eigenvalues_via_g`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    /// Seed nodes per side of the search region.
    pub seeds_per_side: usize,
    /// Seed rings around each pole run from the far corner of the region down
    /// to one grid step halved this many times.
    pub pole_rings: usize,
    pub max_newton: usize,
}

impl Default for RootSearch {
    fn default() -> Self {
        RootSearch { seeds_per_side: 64, pole_rings: 12, max_newton: 80 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GRoots<T: Real> {
    /// Solutions of `g(z) = 1/alpha` inside the region, sorted by modulus.
    pub roots: Vec<Complex<T>>,
    /// Per-root diagnostics, same order as `roots`.
    pub details: Vec<Root<T>>,
    /// Nonzero eigenvalues of `T` in or near the region, where poles of `g`
    /// may hide or imitate roots.
    pub pole_warnings: Vec<Complex<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T: Real> {
    pub z: Complex<T>,
    /// `|1 - alpha g(z)|`.
    pub residual: T,
    /// Size of the last Newton correction.
    pub newton_step: T,
}

impl<T: Real> Root<T> {
    /// Whether the residual itself meets `ROOT_TOL`. Close to a high-order pole
    /// `1 - alpha g` cannot be evaluated that accurately and the root is
    /// accepted on a rounding-level Newton correction instead.
    pub fn residual_certified(&self) -> bool {
        self.residual <= T::ROOT_TOL
    }
}

/// Solutions of `g(z) = 1/alpha` in `region`, i.e. the eigenvalues of
/// `T + alpha (e ⊗ f)` there that are not eigenvalues of `T`.
///
/// Seeds are the local minima of `|1 - alpha g|` on a grid plus rings around
/// each pole. Each seed runs damped Newton with the roots already found
/// divided out, and every new root is polished on the undeflated function.
/// A root is accepted when `|g - 1/alpha| <= ROOT_TOL |1/alpha|` or when the
/// Newton correction has shrunk to rounding level.
pub fn perturbed_eigenvalues_via_g<T: Real>(
    t: &Operator<T>,
    e: &Vector<T>,
    f: &Vector<T>,
    alpha: Complex<T>,
    region: &Region<T>,
    search: &RootSearch,
) -> Result<GRoots<T>> {
    check_pair(e, f)?;
    if e.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: e.len() });
    }
    if alpha == real(T::zero()) {
        return Err(Error::InvalidArgument("alpha must be nonzero".into()));
    }
    region.validate()?;
    let secular = Secular::new(t, e, f, alpha)?;
    let scale = t.norm().max(T::one());
    let clearance = T::lit(1e-6) * scale;

    let poles = t.eigenvalues()?;
    let zero_tol = T::QTOL * scale;
    let pole_warnings: Vec<Complex<T>> = poles
        .points()
        .iter()
        .copied()
        .filter(|p| cabs(*p) > zero_tol && region_distance(region, *p) <= clearance)
        .collect();

    let m = search.seeds_per_side.max(2);
    let dx = region.width() / T::from_usize_lossy(m - 1);
    let dy = region.height() / T::from_usize_lossy(m - 1);
    let node = |i: usize, j: usize| {
        cplx(region.re_min + dx * T::from_usize_lossy(i), region.im_min + dy * T::from_usize_lossy(j))
    };
    let values: Vec<T> = (0..m * m).into_par_iter().map(|k| secular.value(node(k % m, k / m))).collect();
    let mut seeds: Vec<(T, Complex<T>)> = Vec::new();
    for j in 0..m {
        for i in 0..m {
            let v = values[j * m + i];
            if !v.is_finite() {
                continue;
            }
            let mut minimal = true;
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= m as i64 || jj >= m as i64 {
                        continue;
                    }
                    if values[jj as usize * m + ii as usize] < v {
                        minimal = false;
                    }
                }
            }
            if minimal {
                seeds.push((v, node(i, j)));
            }
        }
    }
    seeds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    // Roots crowding a pole hide below the grid resolution; ring seeds around
    // each distinct pole at geometrically shrinking radii reach them.
    let mut centres: Vec<Complex<T>> = Vec::new();
    for p in poles.points() {
        if region_distance(region, *p) <= dx.max(dy) && !centres.iter().any(|c| cabs(*c - *p) <= dx.min(dy)) {
            centres.push(*p);
        }
    }
    let angles = 12;
    let step = dx.min(dy);
    for c in centres {
        let corners = [
            cplx(region.re_min, region.im_min),
            cplx(region.re_max, region.im_min),
            cplx(region.re_min, region.im_max),
            cplx(region.re_max, region.im_max),
        ];
        let mut radius = corners.iter().map(|k| cabs(*k - c)).fold(T::zero(), |m, x| m.max(x));
        let floor = step * T::lit(0.5).powi(search.pole_rings as i32);
        while radius >= floor {
            for k in 0..angles {
                let theta = T::two_pi() * (T::from_usize_lossy(k) + T::lit(0.5)) / T::from_usize_lossy(angles);
                seeds.push((T::INFINITY, c + cplx(radius * theta.cos(), radius * theta.sin())));
            }
            radius *= T::lit(0.5);
        }
    }

    let same = |a: Complex<T>, b: Complex<T>| cabs(a - b) <= T::DEDUP_TOL * cabs(a).max(T::one());
    let mut roots: Vec<Root<T>> = Vec::new();
    // Repeat passes while deflation keeps turning up new roots.
    loop {
        let before = roots.len();
        for &(_, seed) in &seeds {
            if roots.len() >= t.dim() {
                break;
            }
            let found: Vec<Complex<T>> = roots.iter().map(|r| r.z).collect();
            let Some((z, _)) = newton(&secular, seed, &found, search.max_newton) else {
                continue;
            };
            let Some((z, step)) = newton(&secular, z, &[], search.max_newton) else {
                continue;
            };
            if !region.contains(z) || poles.distance_to(z) <= clearance {
                continue;
            }
            let res = secular.value(z);
            let settled = step <= T::lit(64.0) * T::EPSILON * cabs(z).max(T::one());
            if !(res <= T::ROOT_TOL || settled) {
                continue;
            }
            if !roots.iter().any(|r| same(r.z, z)) {
                roots.push(Root { z, residual: res, newton_step: step });
            }
        }
        if roots.len() == before || roots.len() >= t.dim() {
            break;
        }
    }
    roots.sort_by(|a, b| cabs(a.z).partial_cmp(&cabs(b.z)).unwrap_or(std::cmp::Ordering::Equal));
    Ok(GRoots { roots: roots.iter().map(|r| r.z).collect(), details: roots, pole_warnings })
}

fn region_distance<T: Real>(r: &Region<T>, z: Complex<T>) -> T {
    let dx = (r.re_min - z.re).max(z.re - r.re_max).max(T::zero());
    let dy = (r.im_min - z.im).max(z.im - r.im_max).max(T::zero());
    (dx * dx + dy * dy).sqrt()
}

/// Damped Newton on `det(zI - T - alpha F) / prod (z - r)` over the deflated
/// roots `r`, with `ln |.|` as merit. Returns the point and its last correction.
fn newton<T: Real>(secular: &Secular<'_, T>, start: Complex<T>, deflate: &[Complex<T>], max_iter: usize) -> Option<(Complex<T>, T)> {
    let merit = |z: Complex<T>| -> Option<(T, Complex<T>)> {
        let (mut log_size, mut dlog) = secular.numerator(z)?;
        for r in deflate {
            let d = z - *r;
            if d == real(T::zero()) {
                return None;
            }
            dlog -= real(T::one()) / d;
            log_size -= cabs(d).ln();
        }
        Some((log_size, dlog))
    };
    let mut z = start;
    let (mut size, mut dlog) = merit(z)?;
    let mut last = T::INFINITY;
    for _ in 0..max_iter {
        if size == -T::INFINITY {
            return Some((z, T::zero()));
        }
        let step = real(T::one()) / dlog;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        let mut lambda = T::one();
        let mut moved = false;
        for _ in 0..40 {
            let cand = z - step.scale(lambda);
            if let Some((s, d)) = merit(cand) {
                if s < size {
                    z = cand;
                    size = s;
                    dlog = d;
                    moved = true;
                    break;
                }
            }
            lambda *= T::lit(0.5);
        }
        last = cabs(step);
        if !moved || last * lambda <= T::lit(4.0) * T::EPSILON * cabs(z).max(T::one()) {
            return Some((z, last));
        }
    }
    Some((z, last))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trichotomy {
    /// `T + alpha F` is quasinilpotent for every sampled `alpha`.
    QuasinilpotentForAll,
    /// Every sample has fewer than `k` nonzero eigenvalues. A countably
    /// infinite point spectrum is impossible in finite dimension, so this is
    /// the only alternative.
    UniformlyFinite { k: usize },
}

impl Trichotomy {
    pub fn label(&self) -> &'static str {
        match self {
            Trichotomy::QuasinilpotentForAll => "case_i",
            Trichotomy::UniformlyFinite { .. } => "case_iii",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaOutcome<T: Real> {
    pub alpha: Complex<T>,
    pub n_nonzero: usize,
    pub max_abs_eig: T,
    /// `QTOL * max(1, |T| + |alpha| |F|)`.
    pub qtol: T,
    pub quasinilpotent: bool,
    /// Spectral radius within a factor 10 of `qtol`.
    pub borderline: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification<T: Real> {
    pub case: Trichotomy,
    pub samples: Vec<AlphaOutcome<T>>,
}

impl<T: Real> Classification<T> {
    pub fn borderline(&self) -> impl Iterator<Item = &AlphaOutcome<T>> {
        self.samples.iter().filter(|s| s.borderline)
    }
}

/// Spectrum statistics of `T + alpha F` at one `alpha`.
pub fn alpha_outcome<T: Real>(t: &Operator<T>, f_op: &Operator<T>, f_norm: T, alpha: Complex<T>) -> Result<AlphaOutcome<T>> {
    let spec = t.add_scaled(alpha, f_op)?.eigenvalues()?;
    let radius = spec.radius();
    let qtol = T::QTOL * (t.norm() + cabs(alpha) * f_norm).max(T::one());
    let quasinilpotent = radius <= qtol;
    let mut n_nonzero = spec.count_outside(T::lit(10.0) * qtol);
    if !quasinilpotent {
        n_nonzero = n_nonzero.max(1);
    }
    let ten = T::lit(10.0);
    let borderline = radius > qtol / ten && radius <= qtol * ten;
    Ok(AlphaOutcome { alpha, n_nonzero, max_abs_eig: radius, qtol, quasinilpotent, borderline })
}

/// Classifies `{T + alpha (e ⊗ f)}` over the sampled `alpha`s.
pub fn trichotomy_classify<T: Real>(
    t: &Operator<T>,
    e: &Vector<T>,
    f: &Vector<T>,
    alpha_samples: &[Complex<T>],
) -> Result<Classification<T>> {
    let f_op = make_rank_one(e, f)?;
    if alpha_samples.is_empty() {
        return Err(Error::InvalidArgument("no alpha samples".into()));
    }
    if alpha_samples.iter().any(|a| *a == real(T::zero())) {
        return Err(Error::InvalidArgument("alpha samples must be nonzero".into()));
    }
    let f_norm = e.norm() * f.norm();
    let samples = alpha_samples
        .par_iter()
        .map(|a| alpha_outcome(t, &f_op, f_norm, *a))
        .collect::<Result<Vec<_>>>()?;
    let case = if samples.iter().all(|s| s.quasinilpotent) {
        Trichotomy::QuasinilpotentForAll
    } else {
        Trichotomy::UniformlyFinite { k: 1 + samples.iter().map(|s| s.n_nonzero).max().unwrap_or(0) }
    };
    Ok(Classification { case, samples })
}

/// `(R - |T|) / (|e| |f|)`: any eigenvalue of `T + alpha (e ⊗ f)` with modulus
/// above `R` forces `|alpha|` to be at least this large.
pub fn alpha_lower_bound<T: Real>(r: T, t: &Operator<T>, e: &Vector<T>, f: &Vector<T>) -> Result<T> {
    check_pair(e, f)?;
    alpha_lower_bound_from_norms(r, t.norm(), e.norm(), f.norm())
}

pub fn alpha_lower_bound_from_norms<T: Real>(r: T, t_norm: T, e_norm: T, f_norm: T) -> Result<T> {
    if !(r > t_norm) {
        return Err(Error::InvalidArgument(format!("R = {r} must exceed |T| = {t_norm}")));
    }
    if !(e_norm > T::zero() && f_norm > T::zero()) {
        return Err(Error::InvalidArgument("|e| and |f| must be positive".into()));
    }
    Ok((r - t_norm) / (e_norm * f_norm))
}
