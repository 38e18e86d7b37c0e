//! Complex nonsymmetric eigenvalues: Householder reduction to Hessenberg form
//! followed by single-shift QR with Wilkinson and exceptional shifts.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::scalar::{abs1, cabs, real, Complex, Real};

/// Sweeps allowed on one active block before giving up.
const MAX_SWEEPS_PER_BLOCK: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Triangle {
    Upper,
    Lower,
}

/// Detects exact triangular structure (exact zeros, no tolerance).
pub(crate) fn triangle<T: Real>(a: &DMatrix<Complex<T>>) -> Option<Triangle> {
    let n = a.nrows();
    let zero = Complex::new(T::zero(), T::zero());
    let upper = (0..n).all(|j| (j + 1..n).all(|i| a[(i, j)] == zero));
    if upper {
        return Some(Triangle::Upper);
    }
    let lower = (0..n).all(|j| (0..j).all(|i| a[(i, j)] == zero));
    lower.then_some(Triangle::Lower)
}

/// All eigenvalues of a square complex matrix, with multiplicity, in the order
/// they deflate.
pub(crate) fn eigenvalues<T: Real>(a: &DMatrix<Complex<T>>) -> Result<Vec<Complex<T>>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if triangle(a).is_some() {
        return Ok(a.diagonal().iter().copied().collect());
    }
    let mut h = a.clone();
    reduce_to_hessenberg(&mut h);
    hessenberg_qr(&mut h)
}

fn reduce_to_hessenberg<T: Real>(h: &mut DMatrix<Complex<T>>) {
    let n = h.nrows();
    let zero = real(T::zero());
    let two = T::lit(2.0);
    let mut v = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let alpha = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).fold(T::zero(), |s, x| s + x).sqrt();
        if alpha == T::zero() {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let r0 = cabs(x0);
        let phase = if r0 == T::zero() { real(T::one()) } else { x0.unscale(r0) };
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] = x0 + phase.scale(alpha);
        let vnorm2 = (k + 1..n).map(|i| v[i].norm_sqr()).fold(T::zero(), |s, x| s + x);
        if vnorm2 == T::zero() {
            continue;
        }
        let beta = two / vnorm2;

        // H <- (I - beta v v*) H on rows k+1.., columns k..
        for j in k..n {
            let mut s = zero;
            for i in k + 1..n {
                s += v[i].conj() * h[(i, j)];
            }
            let s = s.scale(beta);
            for i in k + 1..n {
                let upd = v[i] * s;
                h[(i, j)] -= upd;
            }
        }
        // H <- H (I - beta v v*) on all rows, columns k+1..
        for i in 0..n {
            let mut s = zero;
            for j in k + 1..n {
                s += h[(i, j)] * v[j];
            }
            let s = s.scale(beta);
            for j in k + 1..n {
                let upd = s * v[j].conj();
                h[(i, j)] -= upd;
            }
        }
        h[(k + 1, k)] = -phase.scale(alpha);
        for i in k + 2..n {
            h[(i, k)] = zero;
        }
    }
}

/// Givens rotation `(c, s)` with `[c s; -conj(s) c] [x; y] = [r; 0]`.
fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let ax = cabs(x);
    let ay = cabs(y);
    if ay == T::zero() {
        return (T::one(), real(T::zero()));
    }
    if ax == T::zero() {
        return (T::zero(), real(T::one()));
    }
    let norm = ax.hypot(ay);
    let c = ax / norm;
    let s = x.unscale(ax) * y.conj().unscale(norm);
    (c, s)
}

fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let p = (a - d).scale(half);
    let bc = b * c;
    let disc = ComplexField::sqrt(p * p + bc);
    let plus = p + disc;
    let minus = p - disc;
    let den = if cabs(plus) >= cabs(minus) { plus } else { minus };
    if den == real(T::zero()) {
        d
    } else {
        d - bc / den
    }
}

fn hessenberg_qr<T: Real>(h: &mut DMatrix<Complex<T>>) -> Result<Vec<Complex<T>>> {
    let n = h.nrows();
    let zero = real(T::zero());
    let eps = T::EPSILON;
    let exceptional = T::lit(0.75);
    let mut eig = vec![zero; n];
    let mut hi = n - 1;
    let mut sweeps = 0usize;

    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Locate the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let mut scale = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            if scale == T::zero() {
                scale = (lo.saturating_sub(1)..=hi)
                    .flat_map(|i| (lo.saturating_sub(1)..=hi).map(move |j| (i, j)))
                    .map(|(i, j)| abs1(h[(i, j)]))
                    .fold(T::zero(), |m, x| m.max(x));
            }
            if abs1(h[(lo, lo - 1)]) <= eps * scale {
                h[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            sweeps = 0;
            continue;
        }

        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_BLOCK {
            return Err(Error::NoConvergence { iterations: sweeps - 1, lo, hi });
        }

        let shift = if sweeps.is_multiple_of(10) {
            // Exceptional shift breaks the cycles plain Wilkinson shifts fall into.
            // The phase rotates so that unitary blocks with symmetric spectra are hit off-axis.
            let turn = T::lit(0.61803398875 * (sweeps / 10) as f64 * std::f64::consts::TAU);
            let dir = Complex::new(turn.cos(), turn.sin());
            let (anchor, sub) = if sweeps.is_multiple_of(20) { (h[(lo, lo)], h[(lo + 1, lo)]) } else { (h[(hi, hi)], h[(hi, hi - 1)]) };
            anchor + dir.scale(exceptional * cabs(sub))
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        // Implicit single-shift QR sweep on rows/columns lo..=hi.
        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - shift, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let first_col = if k == lo { lo } else { k - 1 };
            for j in first_col..=hi {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a.scale(c) + s * b;
                h[(k + 1, j)] = -(s.conj() * a) + b.scale(c);
            }
            let last_row = (k + 2).min(hi);
            for i in lo..=last_row {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a.scale(c) + s.conj() * b;
                h[(i, k + 1)] = -(s * a) + b.scale(c);
            }
            if k > lo {
                h[(k + 1, k - 1)] = zero;
            }
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn givens_zeroes_second_component() {
        let x = c(0.3, -1.2);
        let y = c(-2.0, 0.7);
        let (cs, s) = givens(x, y);
        let bottom = -(s.conj() * x) + y.scale(cs);
        assert!(bottom.norm() < 1e-15);
    }

    #[test]
    fn cyclic_shift_converges() {
        // Plain shifted QR stalls on the cyclic permutation; exceptional shifts fix it.
        let n = 12;
        let mut a = DMatrix::<Complex<f64>>::zeros(n, n);
        for i in 0..n - 1 {
            a[(i, i + 1)] = c(1.0, 0.0);
        }
        a[(n - 1, 0)] = c(1.0, 0.0);
        let eig = eigenvalues(&a).unwrap();
        for z in &eig {
            assert!((z.norm() - 1.0).abs() < 1e-12, "{z}");
            let zn = (0..n).fold(c(1.0, 0.0), |p, _| p * z);
            assert!((zn - c(1.0, 0.0)).norm() < 1e-11);
        }
    }

    #[test]
    fn rotated_cycles_converge() {
        for (re, im) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            for n in [2, 3, 4, 5, 8] {
                let mut a = DMatrix::<Complex<f64>>::zeros(n, n);
                for i in 0..n - 1 {
                    a[(i, i + 1)] = c(1.0, 0.0);
                }
                a[(n - 1, 0)] = c(re, im);
                let eig = eigenvalues(&a).unwrap();
                for z in &eig {
                    let zn = (0..n).fold(c(1.0, 0.0), |p, _| p * z);
                    assert!((zn - c(re, im)).norm() < 1e-11, "n {n}: {z}");
                }
            }
        }
    }

    #[test]
    fn lower_triangular_fast_path_is_exact() {
        let a = DMatrix::from_row_slice(3, 3, &[
            c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
            c(1.5, 2.0), c(0.0, 0.0), c(0.0, 0.0),
            c(-3.0, 1.0), c(7.0, 0.0), c(0.0, 0.0),
        ]);
        assert_eq!(triangle(&a), Some(Triangle::Lower));
        assert!(eigenvalues(&a).unwrap().iter().all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn hessenberg_reduction_preserves_trace() {
        let a = DMatrix::from_fn(6, 6, |i, j| c((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0 - 1.0));
        let mut h = a.clone();
        reduce_to_hessenberg(&mut h);
        assert!((h.trace() - a.trace()).norm() < 1e-12);
        assert!((h.norm() - a.norm()).abs() < 1e-12);
        for j in 0..6 {
            for i in j + 2..6 {
                assert_eq!(h[(i, j)], c(0.0, 0.0));
            }
        }
    }
}
