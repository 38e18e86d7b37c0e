//! Zero counts of analytic functions on an annulus.
//!
//! The bound: if `f` is analytic and bounded by `M` on the closed disc of
//! radius `rho`, `f(a) != 0`, and the radii satisfy `4 phi < rho/3`,
//! `2 phi < |a| < 3 phi`, then the number of zeros in `4 phi < |z| <= rho/3`
//! is at most `ln(M/|f(a)|) / ln(2 / (1 + |a|/(4 phi)))`.
//!
//! The oracle counts zeros exactly by the argument principle: the winding
//! number of `f` around the outer circle minus the one around the inner circle.

use rayon::prelude::*;

use crate::error::{Error, Hypothesis, Result};
use crate::matrix::Operator;
use crate::rank_one::{g_derivative, g_function, Vector};
use crate::scalar::{cabs, cplx, real, Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusConfig<T: Real> {
    pub rho: T,
    pub phi: T,
    pub a_point: Complex<T>,
    pub center: Complex<T>,
}

impl<T: Real> AnnulusConfig<T> {
    pub fn new(rho: T, phi: T, a_point: Complex<T>) -> Self {
        AnnulusConfig { rho, phi, a_point, center: real(T::zero()) }
    }

    pub fn with_center(mut self, center: Complex<T>) -> Self {
        self.center = center;
        self
    }

    /// `4 phi`.
    pub fn inner_radius(&self) -> T {
        T::lit(4.0) * self.phi
    }

    /// `rho / 3`.
    pub fn outer_radius(&self) -> T {
        self.rho / T::lit(3.0)
    }

    /// `|a - center|`.
    pub fn a_offset(&self) -> T {
        cabs(self.a_point - self.center)
    }

    /// Whether `z` lies in `4 phi < |z - center| <= rho/3`.
    pub fn contains(&self, z: Complex<T>) -> bool {
        let r = cabs(z - self.center);
        r > self.inner_radius() && r <= self.outer_radius()
    }

    /// Checks the geometric hypothesis on the radii and the point `a`.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.rho, self.phi, self.a_point.re, self.a_point.im, self.center.re, self.center.im]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::hypothesis(Hypothesis::Geometry, "parameters must be finite"));
        }
        let (inner, outer) = (self.inner_radius(), self.outer_radius());
        if !(self.phi > T::zero() && inner < outer) {
            return Err(Error::hypothesis(
                Hypothesis::Geometry,
                format!("need 0 < 4 phi < rho/3, got 4 phi = {inner}, rho/3 = {outer}"),
            ));
        }
        let d = self.a_offset();
        let two = T::lit(2.0) * self.phi;
        let three = T::lit(3.0) * self.phi;
        if !(d > two && d < three) {
            return Err(Error::hypothesis(
                Hypothesis::Geometry,
                format!("need 2 phi < |a| < 3 phi, got |a| = {d}, phi = {}", self.phi),
            ));
        }
        Ok(())
    }
}

/// Upper bound on the number of zeros in the annulus, given `|f| <= m` on the
/// disc of radius `rho` and `fa_abs = |f(a)|`.
pub fn annulus_zero_bound<T: Real>(m: T, fa_abs: T, cfg: &AnnulusConfig<T>) -> Result<T> {
    cfg.validate()?;
    if !(fa_abs > T::zero()) || !fa_abs.is_finite() {
        return Err(Error::hypothesis(Hypothesis::NonvanishingAtA, format!("|f(a)| = {fa_abs}")));
    }
    if !(m >= fa_abs) || !m.is_finite() {
        return Err(Error::hypothesis(Hypothesis::Bounded, format!("M = {m} is below |f(a)| = {fa_abs}")));
    }
    // 1 < 1 + |a|/(4 phi) < 2, so the denominator is positive.
    let denom = (T::lit(2.0) / (T::one() + cfg.a_offset() / cfg.inner_radius())).ln();
    Ok((m / fa_abs).ln() / denom)
}

/// `|e| |f| / (3 phi / 2 - |T|) + 1`, a bound for `|g| + 1` on the disc when
/// the shift keeps `zI - T` well away from singular.
pub fn heuristic_m<T: Real>(e_norm: T, f_norm: T, phi: T, t_norm: T) -> Result<T> {
    let denom = T::lit(1.5) * phi - t_norm;
    if !(denom > T::zero()) {
        return Err(Error::InvalidArgument(format!("need 3 phi / 2 > |T|, got phi = {phi}, |T| = {t_norm}")));
    }
    Ok(e_norm * f_norm / denom + T::one())
}

/// `(rho/3 - 4 phi) / n`, the average spacing when the annulus width is split
/// into `n` pieces. `n` radii in `[4 phi, rho/3]` cut it into `n + 1` pieces,
/// so the widest of those is at least `annulus_gap(n + 1, ..)`; nothing forces
/// a gap of `annulus_gap(n, ..)`.
pub fn annulus_gap<T: Real>(n: usize, rho: T, phi: T) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("zero count must be at least 1".into()));
    }
    // Written as (rho - 12 phi) / 3n so that exact inputs give exact quotients.
    let width3 = rho - T::lit(12.0) * phi;
    if !(phi > T::zero() && width3 > T::zero()) {
        return Err(Error::hypothesis(Hypothesis::Geometry, format!("need 0 < 4 phi < rho/3, got rho = {rho}, phi = {phi}")));
    }
    Ok(width3 / (T::lit(3.0) * T::from_usize_lossy(n)))
}

/// A function analytic where the caller asks for it.
pub trait Analytic<T: Real>: Sync {
    /// `(f(z), f'(z))`.
    fn eval(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)>;

    fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.eval(z).map(|(v, _)| v)
    }

    /// Whether `f` is known to be analytic on the closed disc. Defaults to true
    /// for entire functions.
    fn analytic_on_disc(&self, _center: Complex<T>, _radius: T) -> bool {
        true
    }
}

/// Polynomial with coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Real> {
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        Polynomial { coeffs }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    /// `leading * prod (z - r)`.
    pub fn from_roots(leading: Complex<T>, roots: &[Complex<T>]) -> Self {
        let mut coeffs = vec![leading];
        for r in roots {
            let mut next = vec![real(T::zero()); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += *c;
                next[k] -= *c * *r;
            }
            coeffs = next;
        }
        Polynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != real(T::zero())).unwrap_or(0)
    }

    /// An upper bound for `max |p|` on the circle: the sampled maximum inflated
    /// by Bernstein's inequality `|p'| <= (deg / r) max |p|` to cover the arcs
    /// between samples. Needs `samples > pi deg`.
    pub fn certified_max_modulus(&self, center: Complex<T>, radius: T, samples: usize) -> Result<T> {
        let slack = T::one() - T::pi() * T::from_usize_lossy(self.degree()) / T::from_usize_lossy(samples.max(1));
        if !(slack > T::zero()) {
            return Err(Error::InvalidArgument(format!("{samples} samples cannot certify degree {}", self.degree())));
        }
        Ok(sampled_max_modulus(self, center, radius, samples)? / slack)
    }
}

impl<T: Real> Analytic<T> for Polynomial<T> {
    fn eval(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let zero = real(T::zero());
        let (mut p, mut dp) = (zero, zero);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + *c;
        }
        Ok((p, dp))
    }
}

/// `h(z) = g(z + lambda) - 1/alpha` with `g(w) = <(wI - T)^{-1} f, e>`.
/// Its zeros are the eigenvalues of `T + alpha F` shifted by `-lambda`.
#[derive(Debug, Clone)]
pub struct ShiftedG<T: Real> {
    t: Operator<T>,
    e: Vector<T>,
    f: Vector<T>,
    alpha: Complex<T>,
    lambda: Complex<T>,
    poles: Vec<Complex<T>>,
}

impl<T: Real> ShiftedG<T> {
    pub fn new(t: Operator<T>, e: Vector<T>, f: Vector<T>, alpha: Complex<T>, lambda: Complex<T>) -> Result<Self> {
        if alpha == real(T::zero()) {
            return Err(Error::InvalidArgument("alpha must be nonzero".into()));
        }
        if e.len() != t.dim() || f.len() != t.dim() {
            return Err(Error::DimensionMismatch { expected: t.dim(), found: if e.len() != t.dim() { e.len() } else { f.len() } });
        }
        let poles = t.eigenvalues()?.points().iter().map(|p| *p - lambda).collect();
        Ok(ShiftedG { t, e, f, alpha, lambda, poles })
    }

    pub fn lambda(&self) -> Complex<T> {
        self.lambda
    }

    /// Analytic upper bound for `|h|` on the closed disc, from
    /// `|g(w)| <= |e| |f| / (|w| - |T|)`; infinite when the disc comes within
    /// `|T|` of `-lambda`.
    pub fn tail_bound(&self, center: Complex<T>, radius: T) -> T {
        let denom = cabs(center + self.lambda) - radius - self.t.norm();
        if !(denom > T::zero()) {
            return T::INFINITY;
        }
        self.e.norm() * self.f.norm() / denom + T::one() / cabs(self.alpha)
    }
}

impl<T: Real> Analytic<T> for ShiftedG<T> {
    fn eval(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let w = z + self.lambda;
        let g = g_function(&self.t, &self.e, &self.f, w)?;
        let dg = g_derivative(&self.t, &self.e, &self.f, w)?;
        Ok((g - real(T::one()) / self.alpha, dg))
    }

    fn analytic_on_disc(&self, center: Complex<T>, radius: T) -> bool {
        self.poles.iter().all(|p| cabs(*p - center) > radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingOptions {
    pub initial_samples: usize,
    /// Doubling stops with an error past this many samples per circle.
    pub max_samples: usize,
    /// Samples per circle for the boundary prescreen.
    pub prescreen_samples: usize,
    /// Smallest accepted `min |f| / max |f|` over the two circles.
    pub prescreen_ratio: f64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        WindingOptions { initial_samples: 64, max_samples: 1 << 16, prescreen_samples: 1024, prescreen_ratio: 1e-9 }
    }
}

fn circle_point<T: Real>(center: Complex<T>, radius: T, k: usize, n: usize) -> Complex<T> {
    let theta = T::two_pi() * T::from_usize_lossy(k) / T::from_usize_lossy(n);
    center + cplx(radius * theta.cos(), radius * theta.sin())
}

/// `(1/2 pi i) ∮ f'/f dz` around the circle, by the trapezoid rule. Samples
/// are doubled until two successive estimates round to the same integer and
/// both lie within 0.25 of it.
pub fn winding_number<T: Real, F: Analytic<T> + ?Sized>(
    func: &F,
    center: Complex<T>,
    radius: T,
    opts: &WindingOptions,
) -> Result<i64> {
    if !(radius > T::zero()) {
        return Err(Error::InvalidArgument(format!("circle radius must be positive, got {radius}")));
    }
    // With z = c + r e^{i theta}, dz / (2 pi i) = (z - c) d theta / (2 pi).
    let term = |z: Complex<T>| -> Result<Complex<T>> {
        let (v, d) = func.eval(z)?;
        Ok(d / v * (z - center))
    };
    let sum_over = |ks: Vec<usize>, n: usize| -> Result<Complex<T>> {
        let terms: Vec<Complex<T>> = ks.into_par_iter().map(|k| term(circle_point(center, radius, k, n))).collect::<Result<_>>()?;
        Ok(terms.into_iter().fold(real(T::zero()), |a, b| a + b))
    };
    let mut n = opts.initial_samples.max(4);
    let mut sum = sum_over((0..n).collect(), n)?;
    let mut previous: Option<i64> = None;
    loop {
        let w = sum / real(T::from_usize_lossy(n));
        let settled = if w.re.is_finite() && w.im.is_finite() {
            let k = w.re.round();
            (cabs(w - real(k)) <= T::lit(0.25)).then(|| k.to_i64()).flatten()
        } else {
            None
        };
        if settled.is_some() && settled == previous {
            return Ok(settled.unwrap_or_default());
        }
        previous = settled;
        if n * 2 > opts.max_samples {
            return Err(Error::BoundaryZero { samples: n });
        }
        // The odd nodes of the doubled rule are the new ones.
        sum += sum_over((0..n).map(|k| 2 * k + 1).collect(), 2 * n)?;
        n *= 2;
    }
}

/// Largest `|f|` over `samples` equally spaced points of the circle.
pub fn sampled_max_modulus<T: Real, F: Analytic<T> + ?Sized>(func: &F, center: Complex<T>, radius: T, samples: usize) -> Result<T> {
    let values: Vec<T> =
        (0..samples.max(1)).into_par_iter().map(|k| func.value(circle_point(center, radius, k, samples.max(1))).map(cabs)).collect::<Result<_>>()?;
    Ok(values.into_iter().fold(T::zero(), |a, b| if b.partial_cmp(&a).is_none_or(|o| o.is_gt()) { b } else { a }))
}

/// Rejects configurations where `|f|` nearly vanishes on either circle, which
/// the winding count cannot see.
pub fn boundary_prescreen<T: Real, F: Analytic<T> + ?Sized>(func: &F, cfg: &AnnulusConfig<T>, opts: &WindingOptions) -> Result<()> {
    let n = opts.prescreen_samples.max(4);
    let mut all_max = T::zero();
    let mut mins = Vec::new();
    for radius in [cfg.inner_radius(), cfg.outer_radius()] {
        let moduli: Vec<T> =
            (0..n).into_par_iter().map(|k| func.value(circle_point(cfg.center, radius, k, n)).map(cabs)).collect::<Result<_>>()?;
        let lo = moduli.iter().copied().fold(T::INFINITY, T::min);
        let hi = moduli.iter().copied().fold(T::zero(), T::max);
        all_max = all_max.max(hi);
        mins.push((radius, lo));
    }
    for (radius, lo) in mins {
        let ratio = if all_max > T::zero() { lo / all_max } else { T::zero() };
        if !(ratio >= T::lit(opts.prescreen_ratio)) {
            return Err(Error::NearBoundaryZero { radius: radius.as_f64(), ratio: ratio.as_f64() });
        }
    }
    Ok(())
}

/// Zeros (with multiplicity) in `4 phi < |z - center| < rho/3`.
pub fn count_zeros_annulus<T: Real, F: Analytic<T> + ?Sized>(func: &F, cfg: &AnnulusConfig<T>, opts: &WindingOptions) -> Result<usize> {
    cfg.validate()?;
    boundary_prescreen(func, cfg, opts)?;
    let outer = winding_number(func, cfg.center, cfg.outer_radius(), opts)?;
    let inner = winding_number(func, cfg.center, cfg.inner_radius(), opts)?;
    let count = outer - inner;
    usize::try_from(count).map_err(|_| Error::InvalidArgument(format!("negative zero count {count}; f has poles in the annulus")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroBoundCheck<T: Real> {
    pub holds: bool,
    pub n_actual: usize,
    pub n_bound: T,
    pub fa_abs: T,
    pub m: T,
    /// Largest sampled `|f|` on the circle of radius `rho`.
    pub sampled_max: T,
}

/// Counts the zeros in the annulus and compares with [`annulus_zero_bound`].
/// `m` must dominate `|f|` sampled on the circle of radius `rho`.
pub fn verify_zero_bound<T: Real, F: Analytic<T> + ?Sized>(
    func: &F,
    cfg: &AnnulusConfig<T>,
    m: T,
    opts: &WindingOptions,
) -> Result<ZeroBoundCheck<T>> {
    cfg.validate()?;
    let fa_abs = cabs(func.value(cfg.a_point)?);
    if fa_abs == T::zero() {
        return Err(Error::hypothesis(Hypothesis::NonvanishingAtA, "f(a) = 0"));
    }
    if !func.analytic_on_disc(cfg.center, cfg.rho) {
        return Err(Error::hypothesis(Hypothesis::Analytic, format!("f has a pole within radius {}", cfg.rho)));
    }
    let sampled_max = sampled_max_modulus(func, cfg.center, cfg.rho, 4096)?;
    if !(sampled_max <= m) {
        return Err(Error::hypothesis(Hypothesis::Bounded, format!("|f| reaches {sampled_max} on the boundary, above M = {m}")));
    }
    let n_bound = annulus_zero_bound(m, fa_abs, cfg)?;
    let n_actual = count_zeros_annulus(func, cfg, opts)?;
    Ok(ZeroBoundCheck { holds: T::from_usize_lossy(n_actual) <= n_bound, n_actual, n_bound, fa_abs, m, sampled_max })
}

/// A certified `M` for [`ShiftedG`]: the larger of 4096 boundary samples and
/// the analytic tail bound.
pub fn certified_m<T: Real>(h: &ShiftedG<T>, cfg: &AnnulusConfig<T>) -> Result<T> {
    let sampled = sampled_max_modulus(h, cfg.center, cfg.rho, 4096)?;
    Ok(sampled.max(h.tail_bound(cfg.center, cfg.rho)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn cfg(rho: f64, phi: f64, a: f64) -> AnnulusConfig<f64> {
        AnnulusConfig::new(rho, phi, cplx(a, 0.0))
    }

    #[test]
    fn bound_values() {
        let c = cfg(13.0, 1.0, 2.5);
        let b = annulus_zero_bound(10.0, 1.0, &c).unwrap();
        assert!((b - 11.089).abs() < 1e-3, "{b}");
        assert_eq!(annulus_zero_bound(3.0, 3.0, &c).unwrap(), 0.0);
        assert!(annulus_zero_bound(20.0, 1.0, &c).unwrap() > b);
        assert!(annulus_zero_bound(10.0, 2.0, &c).unwrap() < b);
    }

    #[test]
    fn hypothesis_failures_are_named() {
        let err = annulus_zero_bound(10.0, 1.0, &cfg(12.0, 1.0, 2.5)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { hypothesis: Hypothesis::Geometry, .. }));
        assert!(err.to_string().contains("(i)"));
        assert!(matches!(
            annulus_zero_bound(10.0, 1.0, &cfg(13.0, 1.0, 3.5)),
            Err(Error::Hypothesis { hypothesis: Hypothesis::Geometry, .. })
        ));
        assert!(matches!(
            annulus_zero_bound(10.0, 0.0, &cfg(13.0, 1.0, 2.5)),
            Err(Error::Hypothesis { hypothesis: Hypothesis::NonvanishingAtA, .. })
        ));
        let c = cfg(13.0, 1.0, 2.5);
        let p = Polynomial::from_roots(cplx(1.0, 0.0), &[cplx(2.5, 0.0)]);
        let err = verify_zero_bound(&p, &c, 100.0, &WindingOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { hypothesis: Hypothesis::NonvanishingAtA, .. }));
        assert!(err.to_string().contains("(ii)"));
    }

    #[test]
    fn heuristic_and_gap_values() {
        assert_eq!(heuristic_m(1.0, 1.0, 2.0, 1.0).unwrap(), 1.5);
        assert!(heuristic_m(1.0, 1.0, 2.0 / 3.0, 1.0).is_err());
        assert_eq!(annulus_gap(2, 13.0, 1.0).unwrap(), 1.0 / 6.0);
        assert_eq!(annulus_gap(1, 13.0, 1.0).unwrap(), 1.0 / 3.0);
        assert!(annulus_gap(0, 13.0, 1.0).is_err());
        assert!(annulus_gap(1, 12.0, 1.0).is_err());
    }

    #[test]
    fn polynomial_evaluation() {
        let p = Polynomial::from_roots(cplx(2.0, 0.0), &[cplx(1.0, 0.0), cplx(0.0, 1.0)]);
        assert_eq!(p.degree(), 2);
        let (v, d) = p.eval(cplx(2.0, 0.0)).unwrap();
        // 2 (z - 1)(z - i) at 2: 2 (2 - i); derivative 2 (2z - 1 - i) = 2 (3 - i).
        assert!((v - cplx(4.0, -2.0)).norm() < 1e-14);
        assert!((d - cplx(6.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn counts_planted_zeros() {
        let c = AnnulusConfig::new(30.0, 1.0, cplx(0.0, 2.5));
        let opts = WindingOptions::default();
        let p = Polynomial::from_roots(cplx(1.0, 0.0), &[cplx(5.0, 0.0), cplx(-3.0, 6.0)]);
        assert_eq!(count_zeros_annulus(&p, &c, &opts).unwrap(), 2);
        let q = Polynomial::from_roots(cplx(1.0, 0.0), &[cplx(5.0, 0.0), cplx(1.0, 1.0), cplx(20.0, 0.0), cplx(7.0, 0.0)]);
        assert_eq!(count_zeros_annulus(&q, &c, &opts).unwrap(), 2);
        assert_eq!(count_zeros_annulus(&Polynomial::constant(cplx(1.0, 0.0)), &c, &opts).unwrap(), 0);
        let check = verify_zero_bound(&Polynomial::constant(cplx(1.0, 0.0)), &c, 1.0, &opts).unwrap();
        assert!(check.holds);
        assert_eq!(check.n_actual, 0);
    }

    #[test]
    fn boundary_zero_is_rejected() {
        let c = AnnulusConfig::new(30.0, 1.0, cplx(0.0, 2.5));
        let p = Polynomial::from_roots(cplx(1.0, 0.0), &[cplx(4.0, 0.0)]);
        assert!(matches!(count_zeros_annulus(&p, &c, &WindingOptions::default()), Err(Error::NearBoundaryZero { .. })));
    }

    #[test]
    fn center_shifts_the_annulus() {
        let c = AnnulusConfig::new(30.0, 1.0, cplx(100.0, 2.5)).with_center(cplx(100.0, 0.0));
        let p = Polynomial::from_roots(cplx(1.0, 0.0), &[cplx(105.0, 0.0), cplx(6.0, 0.0)]);
        assert_eq!(count_zeros_annulus(&p, &c, &WindingOptions::default()).unwrap(), 1);
    }

    #[test]
    fn shifted_g_counts_eigenvalues() {
        use crate::rank_one::make_rank_one;
        // T = 0: g(w) = <f, e>/w, so h vanishes at w = alpha <f, e>, i.e. z = alpha <f, e> - lambda.
        let t = Operator::<f64>::zeros(3);
        let e = Vector::from_vec(vec![cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)]);
        let f = Vector::from_vec(vec![cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)]);
        let alpha = cplx(4.0, 0.0);
        let lambda = cplx(0.0, 0.0);
        let h = ShiftedG::new(t.clone(), e.clone(), f.clone(), alpha, lambda).unwrap();
        let c = AnnulusConfig::new(16.0, 0.5, cplx(1.25, 0.0));
        // Zero at z = 4 in (2, 16/3]; the pole at 0 is inside both circles and cancels.
        assert_eq!(count_zeros_annulus(&h, &c, &WindingOptions::default()).unwrap(), 1);
        let eig = t.add_scaled(alpha, &make_rank_one(&e, &f).unwrap()).unwrap().eigenvalues().unwrap();
        assert!(eig.points().iter().any(|z| (*z - cplx(4.0, 0.0)).norm() < 1e-12));
        // The pole at -lambda = 0 sits inside the disc of radius 16.
        assert!(!h.analytic_on_disc(c.center, c.rho));
        assert_eq!(h.tail_bound(c.center, c.rho), f64::INFINITY);
    }
}
