//! Eigenvalue bisection driven by inertia counts of `M - xI`.
//!
//! The count comes from a symmetric `LDLᵀ` factorization with Bunch-Kaufman
//! pivoting (1×1 and 2×2 diagonal blocks). By Sylvester's law of inertia the
//! number of negative eigenvalues of `D` equals the number of eigenvalues of
//! `M` below `x`. Pivoting keeps the count reliable next to multiple
//! eigenvalues, where unpivoted elimination loses about half the digits.
//! Nothing here is shared with the QL solver.

use super::Matrix;

/// Final bracket width of [`sturm_eigenvalue`].
pub const STURM_WIDTH: f64 = 1e-10;

/// Bunch-Kaufman pivot threshold `(1 + √17) / 8`.
const GROWTH: f64 = 0.640_388_203_202_208;

fn swap_symmetric(a: &mut [f64], n: usize, p: usize, q: usize) {
    if p == q {
        return;
    }
    for j in 0..n {
        a.swap(p * n + j, q * n + j);
    }
    for i in 0..n {
        a.swap(i * n + p, i * n + q);
    }
}

/// Number of eigenvalues of the symmetric matrix `m` strictly below `x`.
pub fn negative_count(m: &Matrix, x: f64) -> usize {
    let n = m.dim();
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for i in 0..n {
        a.extend_from_slice(m.row(i));
        a[i * n + i] -= x;
    }
    // columns below this are exact zeros up to rounding: an eigenvalue at x
    let tiny = 8.0
        * f64::EPSILON
        * (0..n)
            .map(|i| a[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>())
            .fold(f64::MIN_POSITIVE, f64::max);
    let mut negatives = 0;
    let mut k = 0;
    while k < n {
        let absakk = a[k * n + k].abs();
        let (imax, colmax) =
            (k + 1..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, 0.0), |best, c| if c.1 > best.1 { c } else { best });
        if absakk.max(colmax) <= tiny {
            k += 1;
            continue;
        }
        let two_by_two = if absakk >= GROWTH * colmax {
            false
        } else {
            let rowmax = (k..n).filter(|&j| j != imax).map(|j| a[imax * n + j].abs()).fold(0.0, f64::max);
            if absakk * rowmax >= GROWTH * colmax * colmax {
                false
            } else if a[imax * n + imax].abs() >= GROWTH * rowmax {
                swap_symmetric(&mut a, n, k, imax);
                false
            } else {
                swap_symmetric(&mut a, n, k + 1, imax);
                true
            }
        };
        if !two_by_two {
            let pivot = a[k * n + k];
            if pivot < 0.0 {
                negatives += 1;
            }
            let (upper, lower) = a.split_at_mut((k + 1) * n);
            let row_k = &upper[k * n..];
            for i in k + 1..n {
                let row_i = &mut lower[(i - k - 1) * n..(i - k) * n];
                let factor = row_i[k] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    row_i[j] -= factor * row_k[j];
                }
            }
            k += 1;
        } else {
            let (p, q, r) = (a[k * n + k], a[k * n + k + 1], a[(k + 1) * n + k + 1]);
            let det = p * r - q * q;
            // det < 0 always holds for a Bunch-Kaufman 2×2 pivot, but count
            // from the signs anyway
            negatives += if det < 0.0 {
                1
            } else if p < 0.0 {
                2
            } else {
                0
            };
            let (upper, lower) = a.split_at_mut((k + 2) * n);
            let (row_k, row_k1) = upper[k * n..].split_at(n);
            for i in k + 2..n {
                let row_i = &mut lower[(i - k - 2) * n..(i - k - 1) * n];
                let (u, v) = (row_i[k], row_i[k + 1]);
                if u == 0.0 && v == 0.0 {
                    continue;
                }
                // [u v] D⁻¹
                let (s, t) = ((u * r - v * q) / det, (v * p - u * q) / det);
                for j in k + 2..n {
                    row_i[j] -= s * row_k[j] + t * row_k1[j];
                }
            }
            k += 2;
        }
    }
    negatives
}

/// The `k`-th smallest eigenvalue (0-based) of a symmetric matrix, by
/// bisection on the Gershgorin interval down to [`STURM_WIDTH`].
///
/// Panics if `k >= m.dim()`.
pub fn sturm_eigenvalue(m: &Matrix, k: usize) -> f64 {
    let n = m.dim();
    assert!(k < n, "eigenvalue index {k} out of range for dimension {n}");
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let radius: f64 = m.row(i).iter().enumerate().filter(|&(j, _)| j != i).map(|(_, a)| a.abs()).sum();
        lo = lo.min(m[(i, i)] - radius);
        hi = hi.max(m[(i, i)] + radius);
    }
    lo -= STURM_WIDTH;
    hi += STURM_WIDTH;
    while hi - lo > STURM_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if negative_count(m, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
