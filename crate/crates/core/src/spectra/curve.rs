use rayon::prelude::*;

use super::components::dilate_and_test;
use crate::error::{Error, Result};
use crate::matrix::Operator;
use crate::scalar::{cabs, cplx, Complex, Real};
use crate::spectrum::SpectrumSet;

/// Closed, simple, counterclockwise polygon. The closing edge from the last
/// vertex back to the first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatingCurve<T: Real> {
    vertices: Vec<Complex<T>>,
}

impl<T: Real> SeparatingCurve<T> {
    /// Builds a polygon, reversing it if it is clockwise. Rejects fewer than
    /// three vertices, zero area and self-intersections.
    pub fn new(mut vertices: Vec<Complex<T>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidArgument("a closed curve needs at least three vertices".into()));
        }
        let area = signed_area(&vertices);
        if area == T::zero() {
            return Err(Error::InvalidArgument("curve encloses zero area".into()));
        }
        if area < T::zero() {
            vertices.reverse();
        }
        let curve = SeparatingCurve { vertices };
        if !curve.is_simple() {
            return Err(Error::InvalidArgument("curve intersects itself".into()));
        }
        Ok(curve)
    }

    pub fn rectangle(re_min: T, re_max: T, im_min: T, im_max: T) -> Result<Self> {
        Self::new(vec![cplx(re_min, im_min), cplx(re_max, im_min), cplx(re_max, im_max), cplx(re_min, im_max)])
    }

    /// Axis-aligned square of half-side `r` centred at `c`.
    pub fn square(c: Complex<T>, r: T) -> Result<Self> {
        Self::rectangle(c.re - r, c.re + r, c.im - r, c.im + r)
    }

    pub fn vertices(&self) -> &[Complex<T>] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Complex<T>, Complex<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }

    pub fn length(&self) -> T {
        self.edges().map(|(a, b)| cabs(b - a)).fold(T::zero(), |s, x| s + x)
    }

    /// Even-odd point-in-polygon test. Points on the curve count as outside.
    pub fn contains(&self, z: Complex<T>) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.im > z.im) != (b.im > z.im) {
                let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
                if z.re < x {
                    inside = !inside;
                }
            }
        }
        inside && self.distance_to(z) > T::zero()
    }

    pub fn distance_to(&self, z: Complex<T>) -> T {
        self.edges().map(|(a, b)| segment_distance(z, a, b)).fold(T::INFINITY, |m, x| m.min(x))
    }

    /// `per_edge` equally spaced points on each edge, starting at its first vertex.
    pub fn samples(&self, per_edge: usize) -> Vec<Complex<T>> {
        let per_edge = per_edge.max(1);
        let step = T::one() / T::from_usize_lossy(per_edge);
        self.edges()
            .flat_map(|(a, b)| (0..per_edge).map(move |k| a + (b - a).scale(T::from_usize_lossy(k) * step)))
            .collect()
    }

    fn is_simple(&self) -> bool {
        let edges: Vec<_> = self.edges().collect();
        let n = edges.len();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                    return false;
                }
            }
        }
        true
    }
}

fn signed_area<T: Real>(v: &[Complex<T>]) -> T {
    let n = v.len();
    let twice = (0..n).fold(T::zero(), |s, k| {
        let (a, b) = (v[k], v[(k + 1) % n]);
        s + a.re * b.im - b.re * a.im
    });
    twice * T::lit(0.5)
}

fn cross<T: Real>(o: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn segments_intersect<T: Real>(p1: Complex<T>, p2: Complex<T>, q1: Complex<T>, q2: Complex<T>) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    let zero = T::zero();
    ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero)) && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero))
        || (d1 == zero && on_segment(q1, q2, p1))
        || (d2 == zero && on_segment(q1, q2, p2))
        || (d3 == zero && on_segment(p1, p2, q1))
        || (d4 == zero && on_segment(p1, p2, q2))
}

fn on_segment<T: Real>(a: Complex<T>, b: Complex<T>, p: Complex<T>) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

fn segment_distance<T: Real>(z: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == T::zero() {
        return cabs(z - a);
    }
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / len2;
    let t = t.max(T::zero()).min(T::one());
    cabs(z - (a + ab.scale(t)))
}

/// Which component of the dilated spectrum the curve encloses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComponentSelector {
    /// The component whose nearest point to the origin is farthest from it.
    #[default]
    FarthestFromOrigin,
    NearestToOrigin,
    /// Index into [`super::Dilation::components`].
    Index(usize),
}

/// Rectangle enclosing exactly one component of `σ + B(0, radius)`.
///
/// The rectangle is the bounding box of the selected component's points
/// widened by half the gap to the nearest other point; every other point must
/// end up strictly outside, otherwise [`Error::NoRectangularSeparation`].
pub fn separating_curve<T: Real>(spec: &SpectrumSet<T>, radius: T, selector: ComponentSelector) -> Result<SeparatingCurve<T>> {
    let dil = dilate_and_test(spec, radius)?;
    if dil.count() < 2 {
        return Err(Error::SpectrumConnected { radius: radius.as_f64() });
    }
    let nearest = |k: usize| dil.component_points(k).iter().map(|z| cabs(*z)).fold(T::INFINITY, |m, x| m.min(x));
    let k = match selector {
        ComponentSelector::Index(k) if k >= dil.count() => {
            return Err(Error::NoSuchComponent { index: k, count: dil.count() });
        }
        ComponentSelector::Index(k) => k,
        ComponentSelector::FarthestFromOrigin => {
            (0..dil.count()).fold(0, |best, k| if nearest(k) > nearest(best) { k } else { best })
        }
        ComponentSelector::NearestToOrigin => {
            (0..dil.count()).fold(0, |best, k| if nearest(k) < nearest(best) { k } else { best })
        }
    };
    let members = dil.component_points(k);
    let margin = dil.gap(k) * T::lit(0.5);
    let (mut re_min, mut re_max, mut im_min, mut im_max) = (T::INFINITY, -T::INFINITY, T::INFINITY, -T::INFINITY);
    for z in &members {
        re_min = re_min.min(z.re);
        re_max = re_max.max(z.re);
        im_min = im_min.min(z.im);
        im_max = im_max.max(z.im);
    }
    let curve = SeparatingCurve::rectangle(re_min - margin, re_max + margin, im_min - margin, im_max + margin)?;
    for (other, idx) in dil.components.iter().enumerate() {
        if other == k {
            continue;
        }
        for &i in idx {
            let z = spec.points()[i];
            if curve.contains(z) || curve.distance_to(z) == T::zero() {
                return Err(Error::NoRectangularSeparation);
            }
        }
    }
    Ok(curve)
}

/// Sampled semicontinuity radius `min_ξ 1/|R_A(ξ)|` over the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEstimate<T: Real> {
    pub delta: T,
    /// Sample attaining the minimum.
    pub argmin: Complex<T>,
    pub samples: usize,
    /// `max_ξ |R_A(ξ)| = 1/delta`.
    pub max_resolvent: T,
}

/// `δ = min over sampled ξ ∈ Γ of σ_min(ξI - A)`.
pub fn delta_bound<T: Real>(a: &Operator<T>, curve: &SeparatingCurve<T>, samples_per_edge: usize) -> Result<DeltaEstimate<T>> {
    if samples_per_edge == 0 {
        return Err(Error::InvalidArgument("samples_per_edge must be positive".into()));
    }
    let pts = curve.samples(samples_per_edge);
    let sig: Vec<T> = pts.par_iter().map(|z| a.shifted_sigma_min(*z)).collect();
    let (k, &delta) = sig
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(y.1).unwrap_or(std::cmp::Ordering::Equal))
        .expect("curve has samples");
    if delta == T::zero() {
        let z = pts[k];
        return Err(Error::CurveTouchesSpectrum { re: z.re.as_f64(), im: z.im.as_f64() });
    }
    Ok(DeltaEstimate { delta, argmin: pts[k], samples: pts.len(), max_resolvent: T::one() / delta })
}

/// δ at two sampling densities, with the relative change between them.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaConvergence<T: Real> {
    pub coarse: DeltaEstimate<T>,
    pub fine: DeltaEstimate<T>,
    pub relative_change: T,
}

pub fn delta_bound_checked<T: Real>(
    a: &Operator<T>,
    curve: &SeparatingCurve<T>,
    coarse_per_edge: usize,
    fine_per_edge: usize,
) -> Result<DeltaConvergence<T>> {
    let coarse = delta_bound(a, curve, coarse_per_edge)?;
    let fine = delta_bound(a, curve, fine_per_edge)?;
    let relative_change = (coarse.delta - fine.delta).abs() / fine.delta;
    Ok(DeltaConvergence { coarse, fine, relative_change })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialOutcome {
    /// Eigenvalues of `A + B` on both sides of the curve, none on it.
    Separated,
    /// All eigenvalues of `A + B` on one side.
    Merged,
    /// Some eigenvalue within tolerance of the curve.
    CurveHit,
}

/// A curve known to separate `σ(A)`, ready to test perturbations `A + B`.
#[derive(Debug, Clone)]
pub struct SemicontinuityTrial<'a, T: Real> {
    a: &'a Operator<T>,
    curve: &'a SeparatingCurve<T>,
    /// Eigenvalues of `A` strictly inside the curve.
    pub inside: usize,
    pub tolerance: T,
}

impl<'a, T: Real> SemicontinuityTrial<'a, T> {
    /// Checks that `curve` separates `σ(A)` with no eigenvalue on it.
    pub fn new(a: &'a Operator<T>, curve: &'a SeparatingCurve<T>) -> Result<Self> {
        let tolerance = T::lit(1e-8) * a.norm().max(T::one());
        let spec = a.eigenvalues()?;
        let mut inside = 0;
        for z in spec.points() {
            if curve.distance_to(*z) <= tolerance {
                return Err(Error::CurveTouchesSpectrum { re: z.re.as_f64(), im: z.im.as_f64() });
            }
            if curve.contains(*z) {
                inside += 1;
            }
        }
        let outside = spec.len() - inside;
        if inside == 0 || outside == 0 {
            return Err(Error::NotSeparating { inside, outside });
        }
        Ok(SemicontinuityTrial { a, curve, inside, tolerance })
    }

    pub fn run(&self, b: &Operator<T>) -> Result<TrialOutcome> {
        let spec = self.a.add(b)?.eigenvalues()?;
        let mut inside = 0;
        for z in spec.points() {
            if self.curve.distance_to(*z) <= self.tolerance {
                return Ok(TrialOutcome::CurveHit);
            }
            if self.curve.contains(*z) {
                inside += 1;
            }
        }
        Ok(if inside == 0 || inside == spec.len() { TrialOutcome::Merged } else { TrialOutcome::Separated })
    }
}

/// Classifies `σ(A + B)` relative to a curve that separates `σ(A)`.
pub fn semicontinuity_trial<T: Real>(a: &Operator<T>, curve: &SeparatingCurve<T>, b: &Operator<T>) -> Result<TrialOutcome> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    SemicontinuityTrial::new(a, curve)?.run(b)
}
