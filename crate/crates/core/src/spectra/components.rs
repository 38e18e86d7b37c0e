use std::collections::VecDeque;

use super::PseudospectrumGrid;
use crate::error::{Error, Result};
use crate::scalar::{cabs, Complex, Real};
use crate::spectrum::SpectrumSet;

/// 4-connected labelling of the nodes inside an ε-pseudospectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Per-node label in grid storage order; 0 is background, components are 1..=count.
    pub labels: Vec<u32>,
    pub sizes: Vec<usize>,
    pub shape: (usize, usize),
}

impl Components {
    pub fn label(&self, i: usize, j: usize) -> u32 {
        self.labels[j * self.shape.0 + i]
    }
}

/// Labels the 4-connected components of `{z : |R(z)| > 1/ε}` on the grid nodes.
pub fn connected_components<T: Real>(grid: &PseudospectrumGrid<T>, eps: T) -> Result<Components> {
    if !(eps > T::zero()) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let (nx, ny) = grid.shape();
    let mask = grid.mask(eps);
    let mut labels = vec![0u32; nx * ny];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..mask.len() {
        if !mask[start] || labels[start] != 0 {
            continue;
        }
        let label = sizes.len() as u32 + 1;
        labels[start] = label;
        queue.push_back(start);
        let mut size = 0;
        while let Some(k) = queue.pop_front() {
            size += 1;
            let (i, j) = (k % nx, k / nx);
            let mut visit = |n: usize| {
                if mask[n] && labels[n] == 0 {
                    labels[n] = label;
                    queue.push_back(n);
                }
            };
            if i > 0 {
                visit(k - 1);
            }
            if i + 1 < nx {
                visit(k + 1);
            }
            if j > 0 {
                visit(k - nx);
            }
            if j + 1 < ny {
                visit(k + nx);
            }
        }
        sizes.push(size);
    }
    Ok(Components { count: sizes.len(), labels, sizes, shape: (nx, ny) })
}

/// Connectivity of `σ + B(0, r)` for a finite spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation<T: Real> {
    pub radius: T,
    /// Indices into the spectrum's points, one list per component, ordered by
    /// smallest member index.
    pub components: Vec<Vec<usize>>,
    points: Vec<Complex<T>>,
}

impl<T: Real> Dilation<T> {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() <= 1
    }

    pub fn component_points(&self, k: usize) -> Vec<Complex<T>> {
        self.components[k].iter().map(|&i| self.points[i]).collect()
    }

    /// Smallest distance between points of component `k` and points outside it.
    pub fn gap(&self, k: usize) -> T {
        let inside = &self.components[k];
        let mut best = T::INFINITY;
        for (other, members) in self.components.iter().enumerate() {
            if other == k {
                continue;
            }
            for &i in inside {
                for &j in members {
                    best = best.min(cabs(self.points[i] - self.points[j]));
                }
            }
        }
        best
    }
}

/// Decides connectivity of the union of open balls of radius `r` around the
/// spectrum: two balls meet iff their centres are closer than `2r`. Points
/// within the spectrum's clustering tolerance are always joined.
pub fn dilate_and_test<T: Real>(spec: &SpectrumSet<T>, r: T) -> Result<Dilation<T>> {
    if !(r >= T::zero()) {
        return Err(Error::InvalidArgument(format!("dilation radius must be nonnegative, got {r}")));
    }
    if spec.is_empty() {
        return Err(Error::InvalidArgument("spectrum is empty".into()));
    }
    let pts = spec.points();
    let n = pts.len();
    let two_r = r + r;
    let tol = spec.cluster_tolerance();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = cabs(pts[i] - pts[j]);
            if d < two_r || d <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if root_slot[root] == usize::MAX {
            root_slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[root]].push(i);
    }
    Ok(Dilation { radius: r, components: groups, points: pts.to_vec() })
}
