use crate::scalar::{cabs, Complex, Real};

/// Finite multiset of eigenvalues of an operator of dimension `source_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSet<T: Real> {
    points: Vec<Complex<T>>,
    source_dim: usize,
    /// Norm of the source operator; sets the clustering tolerance.
    scale: T,
}

impl<T: Real> SpectrumSet<T> {
    pub fn new(points: Vec<Complex<T>>, scale: T) -> Self {
        let source_dim = points.len();
        SpectrumSet { points, source_dim, scale }
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn radius(&self) -> T {
        self.points.iter().map(|z| cabs(*z)).fold(T::zero(), |m, x| m.max(x))
    }

    /// Distance below which two eigenvalues are the same cluster: `CLUSTER_TOL * scale`.
    pub fn cluster_tolerance(&self) -> T {
        T::CLUSTER_TOL * self.scale
    }

    pub fn conjugate(&self) -> Self {
        SpectrumSet { points: self.points.iter().map(|z| z.conj()).collect(), ..self.clone() }
    }

    pub fn distance_to(&self, z: Complex<T>) -> T {
        self.points.iter().map(|p| cabs(*p - z)).fold(T::INFINITY, |m, x| m.min(x))
    }

    /// Number of points with modulus above `tol`.
    pub fn count_outside(&self, tol: T) -> usize {
        self.points.iter().filter(|z| cabs(**z) > tol).count()
    }

    /// Symmetric Hausdorff distance between the point sets (multiplicity ignored).
    pub fn hausdorff_distance(&self, other: &Self) -> T {
        let one_way = |a: &[Complex<T>], b: &Self| a.iter().map(|z| b.distance_to(*z)).fold(T::zero(), |m, x| m.max(x));
        one_way(&self.points, other).max(one_way(&other.points, self))
    }

    /// Largest distance in a greedy nearest-neighbour pairing of the two
    /// multisets, or `None` when their sizes differ.
    ///
    /// The pairing visits points in order of their best available match, which
    /// is exact whenever the errors are smaller than half the separation.
    pub fn matching_distance(&self, other: &Self) -> Option<T> {
        matching_distance(&self.points, &other.points)
    }
}

/// See [`SpectrumSet::matching_distance`].
pub fn matching_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Option<T> {
    if a.len() != b.len() {
        return None;
    }
    let mut pairs: Vec<(T, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push((cabs(*x - *y), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst = T::zero();
    let mut matched = 0;
    for (d, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(d);
        matched += 1;
        if matched == a.len() {
            break;
        }
    }
    Some(worst)
}
