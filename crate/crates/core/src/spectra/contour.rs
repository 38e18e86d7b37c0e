//! Marching-squares extraction of the level set `|R(z)| = 1/ε`.
//!
//! Interpolation runs on `log10 |R|`. Cells refined by the grid are marched
//! as four half-size cells; refinement is closed under neighbours, so shared
//! edges never disagree about crossings.

use std::collections::HashMap;

use super::PseudospectrumGrid;
use crate::scalar::{cplx, Complex, Real};

/// A level-set polyline. Open polylines end on the grid boundary (clipped).
#[derive(Debug, Clone, PartialEq)]
pub struct Contour<T: Real> {
    pub points: Vec<Complex<T>>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    /// Coarse edge from node (i, j) to (i + 1, j) when `horizontal`, else to (i, j + 1).
    Coarse { horizontal: bool, i: usize, j: usize },
    /// Same on the half-step lattice.
    Fine { horizontal: bool, p: usize, q: usize },
}

struct Segment<T: Real> {
    ends: [(EdgeKey, Complex<T>); 2],
}

/// Cap for infinite samples in log space; far above any finite log10 resolvent norm we can meet.
const LOG_CAP: f64 = 400.0;

fn log_value<T: Real>(v: T) -> T {
    if v.is_finite() && v > T::zero() {
        v.log10()
    } else if v > T::zero() {
        T::lit(LOG_CAP)
    } else {
        -T::lit(LOG_CAP)
    }
}

/// Level-set polylines of the ε-pseudospectrum boundary on `grid`.
pub fn contours<T: Real>(grid: &PseudospectrumGrid<T>, eps: T) -> Vec<Contour<T>> {
    let (nx, ny) = grid.shape();
    if nx < 2 || ny < 2 || !(eps > T::zero()) {
        return Vec::new();
    }
    let level = -eps.log10();
    let h = grid.step();
    let half = h * T::lit(0.5);
    let mut segments = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let c = [grid.value(i, j), grid.value(i + 1, j), grid.value(i + 1, j + 1), grid.value(i, j + 1)].map(log_value);
            match grid.refined_cell(i, j, eps) {
                Some(s) => {
                    let s = s.map(log_value);
                    // Half-step lattice values, indexed [x][y].
                    let v = [[c[0], s[3], c[3]], [s[0], s[4], s[2]], [c[1], s[1], c[2]]];
                    for a in 0..2 {
                        for b in 0..2 {
                            let (p, q) = (2 * i + a, 2 * j + b);
                            let origin = grid.node(i, j) + cplx(T::from_usize_lossy(a) * half, T::from_usize_lossy(b) * half);
                            let keys = [
                                EdgeKey::Fine { horizontal: true, p, q },
                                EdgeKey::Fine { horizontal: false, p: p + 1, q },
                                EdgeKey::Fine { horizontal: true, p, q: q + 1 },
                                EdgeKey::Fine { horizontal: false, p, q },
                            ];
                            let corners = [v[a][b], v[a + 1][b], v[a + 1][b + 1], v[a][b + 1]];
                            march_cell(origin, half, corners, keys, level, &mut segments);
                        }
                    }
                }
                None => {
                    let keys = [
                        EdgeKey::Coarse { horizontal: true, i, j },
                        EdgeKey::Coarse { horizontal: false, i: i + 1, j },
                        EdgeKey::Coarse { horizontal: true, i, j: j + 1 },
                        EdgeKey::Coarse { horizontal: false, i, j },
                    ];
                    march_cell(grid.node(i, j), h, c, keys, level, &mut segments);
                }
            }
        }
    }
    link(segments)
}

/// Corners are bottom-left, bottom-right, top-right, top-left; edges are
/// bottom, right, top, left.
fn march_cell<T: Real>(
    origin: Complex<T>,
    size: T,
    corners: [T; 4],
    keys: [EdgeKey; 4],
    level: T,
    out: &mut Vec<Segment<T>>,
) {
    let inside = corners.map(|v| v > level);
    if inside.iter().all(|&b| b) || inside.iter().all(|&b| !b) {
        return;
    }
    let pos = [
        cplx(T::zero(), T::zero()),
        cplx(size, T::zero()),
        cplx(size, size),
        cplx(T::zero(), size),
    ];
    // Edge k runs between corners EDGE_ENDS[k], oriented low index -> high index on the lattice.
    const EDGE_ENDS: [(usize, usize); 4] = [(0, 1), (1, 2), (3, 2), (0, 3)];
    let crossing = |k: usize| -> Option<(EdgeKey, Complex<T>)> {
        let (a, b) = EDGE_ENDS[k];
        if inside[a] == inside[b] {
            return None;
        }
        let t = (level - corners[a]) / (corners[b] - corners[a]);
        let t = t.max(T::zero()).min(T::one());
        Some((keys[k], origin + pos[a] + (pos[b] - pos[a]).scale(t)))
    };
    let crossings: Vec<usize> = (0..4).filter(|&k| crossing(k).is_some()).collect();
    let mut push = |e1: usize, e2: usize| {
        if let (Some(a), Some(b)) = (crossing(e1), crossing(e2)) {
            out.push(Segment { ends: [a, b] });
        }
    };
    if crossings.len() == 2 {
        push(crossings[0], crossings[1]);
        return;
    }
    // Saddle: decide with the mean of the corners, then cut off every corner
    // whose membership differs from the centre's.
    let centre = (corners[0] + corners[1] + corners[2] + corners[3]) * T::lit(0.25) > level;
    const CORNER_EDGES: [(usize, usize); 4] = [(0, 3), (0, 1), (1, 2), (2, 3)];
    for (c, &(e1, e2)) in CORNER_EDGES.iter().enumerate() {
        if inside[c] != centre {
            push(e1, e2);
        }
    }
}

fn link<T: Real>(segments: Vec<Segment<T>>) -> Vec<Contour<T>> {
    let mut at: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for (key, _) in &seg.ends {
            at.entry(*key).or_default().push(s);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start: usize, from_end: usize, used: &mut Vec<bool>| -> Contour<T> {
        used[start] = true;
        let first = segments[start].ends[from_end];
        let mut points = vec![first.1];
        let mut current = segments[start].ends[1 - from_end];
        let start_key = first.0;
        loop {
            points.push(current.1);
            if current.0 == start_key {
                points.pop();
                return Contour { points, closed: true };
            }
            let next = at[&current.0].iter().copied().find(|&s| !used[s]);
            let Some(next) = next else {
                return Contour { points, closed: false };
            };
            used[next] = true;
            let seg = &segments[next];
            current = if seg.ends[0].0 == current.0 { seg.ends[1] } else { seg.ends[0] };
        }
    };

    // Open chains first, starting from an end that touches only one segment.
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        for e in 0..2 {
            if !used[s] && at[&segments[s].ends[e].0].len() == 1 {
                out.push(walk(s, e, &mut used));
            }
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            out.push(walk(s, 0, &mut used));
        }
    }
    out
}
