use std::collections::BTreeMap;

use rayon::prelude::*;

use super::invert_sigma;
use crate::error::{Error, Result};
use crate::matrix::Operator;
use crate::scalar::{cplx, Complex, Real};
use crate::spectrum::SpectrumSet;

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region<T: Real> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
}

impl<T: Real> Region<T> {
    pub fn new(re_min: T, re_max: T, im_min: T, im_max: T) -> Self {
        Region { re_min, re_max, im_min, im_max }
    }

    /// Square of half-side `r` centred at `c`.
    pub fn square(c: Complex<T>, r: T) -> Self {
        Region::new(c.re - r, c.re + r, c.im - r, c.im + r)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|x| x.is_finite());
        if !finite || !(self.re_max > self.re_min) || !(self.im_max > self.im_min) {
            return Err(Error::DegenerateRegion);
        }
        Ok(())
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    pub fn width(&self) -> T {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> T {
        self.im_max - self.im_min
    }
}

#[derive(Debug, Clone)]
pub struct GridOptions<T: Real> {
    /// Subdivide cells straddling any of `levels` once.
    pub refine: bool,
    /// ε values whose level sets drive refinement.
    pub levels: Vec<T>,
    pub node_budget: usize,
}

impl<T: Real> Default for GridOptions<T> {
    fn default() -> Self {
        GridOptions { refine: false, levels: Vec::new(), node_budget: 4_000_000 }
    }
}

/// Resolvent norms sampled on a rectangular lattice with step `h`.
///
/// Node `(i, j)` sits at `re_min + i h + (im_min + j h) i`. Values are stored
/// row-major with `i` fastest. Infinite values mark exactly singular nodes.
#[derive(Debug, Clone)]
pub struct PseudospectrumGrid<T: Real> {
    region: Region<T>,
    h: T,
    nx: usize,
    ny: usize,
    values: Vec<T>,
    /// Cell `(i, j)` (lower-left node) -> samples at the bottom, right, top and
    /// left edge midpoints, then the centre.
    refined: BTreeMap<(usize, usize), [T; 5]>,
    refined_levels: Vec<T>,
}

fn node_count<T: Real>(extent: T, h: T) -> usize {
    let steps = (extent / h + T::lit(1e-9)).floor();
    steps.to_usize().unwrap_or(usize::MAX).saturating_add(1)
}

/// Samples `|R(z)|` on the lattice covering `region` with step `h`.
pub fn pseudospectrum_grid<T: Real>(
    a: &Operator<T>,
    region: Region<T>,
    h: T,
    options: &GridOptions<T>,
) -> Result<PseudospectrumGrid<T>> {
    region.validate()?;
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("grid step must be positive, got {h}")));
    }
    let nx = node_count(region.width(), h);
    let ny = node_count(region.height(), h);
    let nodes = nx.saturating_mul(ny);
    if nodes > options.node_budget {
        return Err(Error::GridBudget { nodes, budget: options.node_budget });
    }
    let values: Vec<T> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let z = cplx(region.re_min + T::from_usize_lossy(k % nx) * h, region.im_min + T::from_usize_lossy(k / nx) * h);
            invert_sigma(a.shifted_sigma_min(z))
        })
        .collect();
    let mut grid = PseudospectrumGrid { region, h, nx, ny, values, refined: BTreeMap::new(), refined_levels: Vec::new() };
    if options.refine && !options.levels.is_empty() {
        for eps in &options.levels {
            if !(*eps > T::zero()) {
                return Err(Error::InvalidArgument(format!("refinement level must be positive, got {eps}")));
            }
        }
        grid.refine(a, &options.levels);
    }
    Ok(grid)
}

impl<T: Real> PseudospectrumGrid<T> {
    pub fn region(&self) -> Region<T> {
        self.region
    }

    pub fn step(&self) -> T {
        self.h
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[j * self.nx + i]
    }

    pub fn node(&self, i: usize, j: usize) -> Complex<T> {
        cplx(
            self.region.re_min + T::from_usize_lossy(i) * self.h,
            self.region.im_min + T::from_usize_lossy(j) * self.h,
        )
    }

    /// Iterates `(i, j, z, value)` in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, Complex<T>, T)> + '_ {
        (0..self.values.len()).map(move |k| {
            let (i, j) = (k % self.nx, k / self.nx);
            (i, j, self.node(i, j), self.values[k])
        })
    }

    /// Whether node `(i, j)` belongs to the ε-pseudospectrum.
    pub fn in_pseudospectrum(&self, i: usize, j: usize, eps: T) -> bool {
        self.value(i, j) > T::one() / eps
    }

    pub fn mask(&self, eps: T) -> Vec<bool> {
        let level = T::one() / eps;
        self.values.iter().map(|v| *v > level).collect()
    }

    pub fn refined_cells(&self) -> &BTreeMap<(usize, usize), [T; 5]> {
        &self.refined
    }

    /// Refinement samples for cell `(i, j)` when `eps` was one of the refinement levels.
    pub(crate) fn refined_cell(&self, i: usize, j: usize, eps: T) -> Option<&[T; 5]> {
        if self.refined_levels.contains(&eps) {
            self.refined.get(&(i, j))
        } else {
            None
        }
    }

    /// Rebuilds a grid from stored samples (e.g. a CSV export).
    pub fn from_values(region: Region<T>, h: T, values: Vec<T>) -> Result<Self> {
        region.validate()?;
        let nx = node_count(region.width(), h);
        let ny = node_count(region.height(), h);
        if values.len() != nx * ny {
            return Err(Error::DimensionMismatch { expected: nx * ny, found: values.len() });
        }
        Ok(PseudospectrumGrid { region, h, nx, ny, values, refined: BTreeMap::new(), refined_levels: Vec::new() })
    }

    fn corner_values(&self, i: usize, j: usize) -> [T; 4] {
        [self.value(i, j), self.value(i + 1, j), self.value(i + 1, j + 1), self.value(i, j + 1)]
    }

    /// One level of 2x subdivision on every cell whose samples disagree about
    /// membership for some level, closed under neighbours so that a shared
    /// edge is either refined on both sides or crossed on neither.
    fn refine(&mut self, a: &Operator<T>, levels: &[T]) {
        if self.nx < 2 || self.ny < 2 {
            return;
        }
        let thresholds: Vec<T> = levels.iter().map(|e| T::one() / *e).collect();
        let disagree = |vals: &[T]| thresholds.iter().any(|t| {
            let first = vals[0] > *t;
            vals.iter().any(|v| (*v > *t) != first)
        });
        let (cx, cy) = (self.nx - 1, self.ny - 1);
        let mut pending: Vec<(usize, usize)> =
            (0..cy).flat_map(|j| (0..cx).map(move |i| (i, j))).filter(|&(i, j)| disagree(&self.corner_values(i, j))).collect();
        let half = self.h * T::lit(0.5);
        while !pending.is_empty() {
            pending.sort_unstable();
            pending.dedup();
            pending.retain(|c| !self.refined.contains_key(c));
            let new: Vec<((usize, usize), [T; 5])> = pending
                .par_iter()
                .map(|&(i, j)| {
                    let base = self.node(i, j);
                    let offs = [(half, T::zero()), (self.h, half), (half, self.h), (T::zero(), half), (half, half)];
                    let mut s = [T::zero(); 5];
                    for (k, (dx, dy)) in offs.iter().enumerate() {
                        s[k] = invert_sigma(a.shifted_sigma_min(base + cplx(*dx, *dy)));
                    }
                    ((i, j), s)
                })
                .collect();
            pending.clear();
            for ((i, j), s) in new {
                self.refined.insert((i, j), s);
                // Neighbour across each edge: (edge midpoint index, neighbour cell).
                let neighbours = [
                    (0usize, j.checked_sub(1).map(|jj| (i, jj))),
                    (1, (i + 1 < cx).then_some((i + 1, j))),
                    (2, (j + 1 < cy).then_some((i, j + 1))),
                    (3, i.checked_sub(1).map(|ii| (ii, j))),
                ];
                for (edge, cell) in neighbours {
                    let Some((ni, nj)) = cell else { continue };
                    if self.refined.contains_key(&(ni, nj)) {
                        continue;
                    }
                    let mut vals = self.corner_values(ni, nj).to_vec();
                    vals.push(s[edge]);
                    if disagree(&vals) {
                        pending.push((ni, nj));
                    }
                }
            }
        }
        self.refined_levels = levels.to_vec();
    }
}

/// Outcome of testing `σ_ε(A) ⊆ σ(A) + B(0, r)` on the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionCheck<T: Real> {
    pub holds: bool,
    pub violations: usize,
    /// The violating node farthest from the spectrum, with its distance.
    pub worst: Option<(Complex<T>, T)>,
}

/// Every node with `|R(z)| > 1/ε` must lie strictly within `radius` of a point of `spec`.
pub fn inclusion_check<T: Real>(grid: &PseudospectrumGrid<T>, eps: T, spec: &SpectrumSet<T>, radius: T) -> InclusionCheck<T> {
    let level = T::one() / eps;
    let mut violations = 0;
    let mut worst: Option<(Complex<T>, T)> = None;
    for (_, _, z, v) in grid.nodes() {
        if v > level {
            let d = spec.distance_to(z);
            if !(d < radius) {
                violations += 1;
                if worst.is_none_or(|(_, wd)| d > wd) {
                    worst = Some((z, d));
                }
            }
        }
    }
    InclusionCheck { holds: violations == 0, violations, worst }
}

/// [`InclusionCheck`] computed without storing a grid, with the number of
/// resolvent evaluations it needed.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionScan<T: Real> {
    pub check: InclusionCheck<T>,
    pub nodes: usize,
    pub evaluated: usize,
}

/// Same node set and decision as [`inclusion_check`] on
/// `pseudospectrum_grid(a, region, h)`, but nodes within `radius` of the
/// spectrum are never evaluated, and since `σ_min(zI - A)` is 1-Lipschitz in
/// `z`, a node with `σ_min = s >= ε` clears the next `(s - ε)/h` nodes of its row.
pub fn inclusion_scan<T: Real>(
    a: &Operator<T>,
    region: Region<T>,
    h: T,
    eps: T,
    spec: &SpectrumSet<T>,
    radius: T,
) -> Result<InclusionScan<T>> {
    region.validate()?;
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("grid step must be positive, got {h}")));
    }
    if !(eps > T::zero()) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let nx = node_count(region.width(), h);
    let ny = node_count(region.height(), h);
    let node = |i: usize, j: usize| {
        cplx(region.re_min + T::from_usize_lossy(i) * h, region.im_min + T::from_usize_lossy(j) * h)
    };
    // Per row: violations, evaluations, farthest violating node.
    type RowScan<T> = (usize, usize, Option<(Complex<T>, T)>);
    let rows: Vec<RowScan<T>> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let (mut violations, mut evaluated) = (0, 0);
            let mut worst: Option<(Complex<T>, T)> = None;
            let mut i = 0;
            while i < nx {
                let z = node(i, j);
                let d = spec.distance_to(z);
                if d < radius {
                    i += 1;
                    continue;
                }
                let s = a.shifted_sigma_min(z);
                evaluated += 1;
                if s < eps {
                    violations += 1;
                    if worst.is_none_or(|(_, wd)| d > wd) {
                        worst = Some((z, d));
                    }
                    i += 1;
                } else {
                    let clear = ((s - eps) / h * T::lit(1.0 - 1e-12)).floor().to_usize().unwrap_or(0);
                    i += 1 + clear;
                }
            }
            (violations, evaluated, worst)
        })
        .collect();
    let mut violations = 0;
    let mut evaluated = 0;
    let mut worst: Option<(Complex<T>, T)> = None;
    for (v, e, w) in rows {
        violations += v;
        evaluated += e;
        if let Some((z, d)) = w {
            if worst.is_none_or(|(_, wd)| d > wd) {
                worst = Some((z, d));
            }
        }
    }
    Ok(InclusionScan { check: InclusionCheck { holds: violations == 0, violations, worst }, nodes: nx * ny, evaluated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts_follow_region_and_step() {
        let a = Operator::<f64>::from_real_diagonal(&[0.0, 1.0]);
        let g = pseudospectrum_grid(&a, Region::new(-1.5, 1.5, -1.5, 1.5), 0.05, &GridOptions::default()).unwrap();
        assert_eq!(g.shape(), (61, 61));
        assert_eq!(g.node(60, 60), cplx(1.5, 1.5));
    }

    #[test]
    fn rejects_degenerate_and_oversized() {
        let a = Operator::<f64>::identity(2);
        let opts = GridOptions::default();
        assert!(matches!(pseudospectrum_grid(&a, Region::new(1.0, 1.0, 0.0, 1.0), 0.1, &opts), Err(Error::DegenerateRegion)));
        assert!(pseudospectrum_grid(&a, Region::new(0.0, 1.0, 0.0, 1.0), 0.0, &opts).is_err());
        let small = GridOptions { node_budget: 100, ..GridOptions::default() };
        assert!(matches!(pseudospectrum_grid(&a, Region::new(0.0, 1.0, 0.0, 1.0), 0.01, &small), Err(Error::GridBudget { .. })));
    }

    #[test]
    fn values_match_sigma_min() {
        let a = Operator::from_real_rows(3, &[0.0, 2.0, -1.0, 0.5, 0.1, 0.0, 1.0, 0.0, -0.3]).unwrap();
        let g = pseudospectrum_grid(&a, Region::new(-1.0, 1.0, -1.0, 1.0), 0.25, &GridOptions::default()).unwrap();
        for (_, _, z, v) in g.nodes() {
            let s = a.shifted_sigma_min(z);
            assert!((v * s - 1.0f64).abs() < 1e-10);
        }
    }

    #[test]
    fn refinement_is_closed_under_neighbours() {
        let a = Operator::<f64>::from_real_diagonal(&[0.0, 1.0]);
        let opts = GridOptions { refine: true, levels: vec![0.4, 0.3], node_budget: 1 << 20 };
        let g = pseudospectrum_grid(&a, Region::new(-1.0, 2.0, -1.0, 1.0), 0.1, &opts).unwrap();
        assert!(!g.refined_cells().is_empty());
        let (nx, ny) = g.shape();
        for &eps in &[0.4, 0.3] {
            let t = 1.0 / eps;
            for j in 0..ny - 1 {
                for i in 0..nx - 1 {
                    if g.refined_cells().contains_key(&(i, j)) {
                        continue;
                    }
                    let c = g.corner_values(i, j);
                    assert!(c.iter().all(|v| (*v > t) == (c[0] > t)), "unrefined straddling cell {i},{j}");
                }
            }
        }
        // Centre samples agree with direct evaluation.
        for (&(i, j), s) in g.refined_cells() {
            let z = g.node(i, j) + cplx(0.05, 0.05);
            assert!((s[4] - 1.0 / a.shifted_sigma_min(z)).abs() <= 1e-12 * s[4]);
        }
    }

    #[test]
    fn scan_agrees_with_full_grid() {
        use crate::gallery::{build, GallerySpec};
        for seed in 0..4u64 {
            let n = build::<f64>(&GallerySpec::random_strict_triangular(5, seed)).unwrap();
            let a = n.add(&Operator::from_real_diagonal(&[0.0, 1.0, -1.0, 0.5, 2.0])).unwrap();
            let spec = a.eigenvalues().unwrap();
            let region = Region::new(-3.0, 4.0, -3.0, 3.0);
            let h = 0.02;
            let grid = pseudospectrum_grid(&a, region, h, &GridOptions::default()).unwrap();
            for (eps, radius) in [(0.05, 0.1), (0.2, 0.3), (0.3, 2.0)] {
                let full = inclusion_check(&grid, eps, &spec, radius);
                let scan = inclusion_scan(&a, region, h, eps, &spec, radius).unwrap();
                assert_eq!(scan.check, full, "seed {seed} eps {eps}");
                assert_eq!(scan.nodes, grid.len());
                assert!(scan.evaluated < grid.len() / 2);
            }
        }
    }
}
