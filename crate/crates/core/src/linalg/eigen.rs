//! Symmetric eigendecomposition: Householder reduction to tridiagonal form
//! followed by the implicit-shift QL iteration.
//!
//! This is the classic `tred2` / `tql2` pair (EISPACK, as popularized by
//! JAMA), reworked for a column-major work array so the hot inner loops walk
//! contiguous memory.

#![allow(clippy::needless_range_loop)]

use super::Matrix;
use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Eigenvalues in ascending order with matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// `vectors[i]` is the eigenvector of `values[i]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Full eigendecomposition of a symmetric matrix. Only the lower triangle is
/// read.
pub fn symmetric_eigen(a: &Matrix) -> Result<SymmetricEigen> {
    let n = a.dim();
    let mut work = Tridiagonal::reduce(a, true);
    work.ql(true)?;
    let Tridiagonal { d, v, .. } = work;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| d[i]).collect(),
        vectors: order.iter().map(|&i| v[i * n..(i + 1) * n].to_vec()).collect(),
    })
}

/// Ascending eigenvalues only; skips eigenvector accumulation.
pub fn symmetric_eigenvalues(a: &Matrix) -> Result<Vec<f64>> {
    let mut work = Tridiagonal::reduce(a, false);
    work.ql(false)?;
    let mut d = work.d;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

struct Tridiagonal {
    n: usize,
    d: Vec<f64>,
    e: Vec<f64>,
    /// Column-major: entry (r, c) lives at `v[c * n + r]`.
    v: Vec<f64>,
}

impl Tridiagonal {
    fn reduce(a: &Matrix, accumulate: bool) -> Self {
        let n = a.dim();
        // symmetric input: the row-major data read column-major is the
        // transpose, which is the same matrix
        let mut v = Vec::with_capacity(n * n);
        for c in 0..n {
            for r in 0..n {
                v.push(if r >= c { a[(r, c)] } else { a[(c, r)] });
            }
        }
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        if n == 0 {
            return Tridiagonal { n, d, e, v };
        }
        let at = |r: usize, c: usize| c * n + r;

        for j in 0..n {
            d[j] = v[at(n - 1, j)];
        }
        for i in (1..n).rev() {
            let mut scale = 0.0;
            let mut h = 0.0;
            for k in 0..i {
                scale += d[k].abs();
            }
            if scale == 0.0 {
                e[i] = d[i - 1];
                for j in 0..i {
                    d[j] = v[at(i - 1, j)];
                    v[at(i, j)] = 0.0;
                    v[at(j, i)] = 0.0;
                }
            } else {
                for k in 0..i {
                    d[k] /= scale;
                    h += d[k] * d[k];
                }
                let mut f = d[i - 1];
                let mut g = h.sqrt();
                if f > 0.0 {
                    g = -g;
                }
                e[i] = scale * g;
                h -= f * g;
                d[i - 1] = f - g;
                e[..i].fill(0.0);

                for j in 0..i {
                    f = d[j];
                    v[at(j, i)] = f;
                    g = e[j] + v[at(j, j)] * f;
                    let col = &v[at(0, j)..at(0, j) + n];
                    for k in j + 1..i {
                        g += col[k] * d[k];
                        e[k] += col[k] * f;
                    }
                    e[j] = g;
                }
                f = 0.0;
                for j in 0..i {
                    e[j] /= h;
                    f += e[j] * d[j];
                }
                let hh = f / (h + h);
                for j in 0..i {
                    e[j] -= hh * d[j];
                }
                for j in 0..i {
                    let (f, g) = (d[j], e[j]);
                    let col = &mut v[at(0, j)..at(0, j) + n];
                    for k in j..i {
                        col[k] -= f * e[k] + g * d[k];
                    }
                    d[j] = col[i - 1];
                    col[i] = 0.0;
                }
            }
            d[i] = h;
        }

        if accumulate {
            for i in 0..n - 1 {
                v[at(n - 1, i)] = v[at(i, i)];
                v[at(i, i)] = 1.0;
                let h = d[i + 1];
                if h != 0.0 {
                    for k in 0..=i {
                        d[k] = v[at(k, i + 1)] / h;
                    }
                    for j in 0..=i {
                        let (head, tail) = v.split_at_mut(at(0, i + 1));
                        let target = &mut head[at(0, j)..at(0, j) + i + 1];
                        let source = &tail[..i + 1];
                        let g: f64 = source.iter().zip(target.iter()).map(|(a, b)| a * b).sum();
                        for k in 0..=i {
                            target[k] -= g * d[k];
                        }
                    }
                }
                for k in 0..=i {
                    v[at(k, i + 1)] = 0.0;
                }
            }
            for j in 0..n {
                d[j] = v[at(n - 1, j)];
                v[at(n - 1, j)] = 0.0;
            }
            v[at(n - 1, n - 1)] = 1.0;
        } else {
            for j in 0..n {
                d[j] = v[at(j, j)];
            }
        }
        e[0] = 0.0;
        Tridiagonal { n, d, e, v }
    }

    fn ql(&mut self, vectors: bool) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Ok(());
        }
        let (d, e, v) = (&mut self.d, &mut self.e, &mut self.v);
        for i in 1..n {
            e[i - 1] = e[i];
        }
        e[n - 1] = 0.0;

        let mut f = 0.0;
        let mut tst1: f64 = 0.0;
        let eps = f64::EPSILON;
        for l in 0..n {
            tst1 = tst1.max(d[l].abs() + e[l].abs());
            let mut m = l;
            while m < n - 1 && e[m].abs() > eps * tst1 {
                m += 1;
            }
            if m > l {
                let mut sweeps = 0;
                loop {
                    sweeps += 1;
                    if sweeps > MAX_QL_SWEEPS {
                        return Err(Error::NumericalFailure(format!(
                            "QL iteration did not converge for eigenvalue {l}"
                        )));
                    }
                    let mut g = d[l];
                    let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                    let mut r = p.hypot(1.0);
                    if p < 0.0 {
                        r = -r;
                    }
                    d[l] = e[l] / (p + r);
                    d[l + 1] = e[l] * (p + r);
                    let dl1 = d[l + 1];
                    let mut h = g - d[l];
                    for di in d.iter_mut().skip(l + 2) {
                        *di -= h;
                    }
                    f += h;

                    p = d[m];
                    let mut c = 1.0;
                    let mut c2 = c;
                    let mut c3 = c;
                    let el1 = e[l + 1];
                    let mut s = 0.0;
                    let mut s2 = 0.0;
                    for i in (l..m).rev() {
                        c3 = c2;
                        c2 = c;
                        s2 = s;
                        g = c * e[i];
                        h = c * p;
                        r = p.hypot(e[i]);
                        e[i + 1] = s * r;
                        s = e[i] / r;
                        c = p / r;
                        p = c * d[i] - s * g;
                        d[i + 1] = h + s * (c * g + s * d[i]);
                        if vectors {
                            let (left, right) = v.split_at_mut((i + 1) * n);
                            let vi = &mut left[i * n..];
                            let vi1 = &mut right[..n];
                            for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                                let hk = *b;
                                *b = s * *a + c * hk;
                                *a = c * *a - s * hk;
                            }
                        }
                    }
                    p = -s * s2 * c3 * el1 * e[l] / dl1;
                    e[l] = s * p;
                    d[l] = c * p;
                    if e[l].abs() <= eps * tst1 {
                        break;
                    }
                }
            }
            d[l] += f;
            e[l] = 0.0;
        }
        Ok(())
    }
}
