//! Normalized Laplacian spectrum, the spectral gap `λ₁` with its harmonic
//! eigenfunction, relaxation time, and two independent oracles for `λ₁`.
//!
//! With `T` the diagonal degree matrix and `A` the adjacency matrix,
//! `𝓛 = I − T^{-1/2} A T^{-1/2}`. A unit eigenvector `g` of `𝓛` corresponds
//! to the harmonic function `f = T^{-1/2} g`, which is normalized so that
//! `Σ f(u)² d(u) = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, Matrix};

/// Iteration cap of [`transition_gap_oracle`].
pub const POWER_ITERATION_CAP: usize = 1_000_000;

/// Residual gate for [`spectral_gap`].
pub const RESIDUAL_GATE: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct SpectralResult {
    /// Ascending normalized Laplacian eigenvalues `λ₀ ≤ … ≤ λ_{n−1}`.
    pub eigenvalues: Vec<f64>,
    pub lambda1: f64,
    /// `T^{-1/2}` times a unit eigenvector for `λ₁`, with its entry of
    /// largest magnitude positive (lowest index on ties).
    pub harmonic_f: Vec<f64>,
    pub relaxation_time: f64,
    /// Largest `‖𝓛 g_i − λ_i g_i‖₂` over all computed eigenpairs.
    pub residual: f64,
    /// Unit eigenvectors `g_i` of `𝓛`, aligned with `eigenvalues`.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

fn check_degrees(g: &Graph) -> Result<()> {
    match g.degrees().iter().position(|&d| d == 0) {
        Some(u) => Err(Error::DegreeZero(u)),
        None => Ok(()),
    }
}

/// Dense `𝓛`. Fails on isolated vertices, where `T^{-1/2}` is undefined.
pub fn normalized_laplacian(g: &Graph) -> Result<Matrix> {
    check_degrees(g)?;
    let n = g.vertex_count();
    let inv_sqrt: Vec<f64> = g.degrees().iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
    let mut l = Matrix::identity(n);
    for (u, v) in g.edges() {
        let w = -inv_sqrt[u] * inv_sqrt[v];
        l[(u, v)] = w;
        l[(v, u)] = w;
    }
    Ok(l)
}

/// `𝓛 x` computed from the adjacency structure.
pub fn apply_laplacian(g: &Graph, x: &[f64]) -> Vec<f64> {
    let inv_sqrt: Vec<f64> = g.degrees().iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
    (0..g.vertex_count())
        .map(|u| x[u] - inv_sqrt[u] * g.neighbors(u).map(|v| inv_sqrt[v] * x[v]).sum::<f64>())
        .collect()
}

fn check_gap_input(g: &Graph) -> Result<()> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidGraph("spectral gap needs at least two vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Flips `f` so its entry of largest magnitude is positive. Magnitudes
/// within a relative `1e-12` count as ties, resolved by lowest index.
fn normalize_sign(f: &mut [f64]) {
    let max = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(lead) = f.iter().position(|x| x.abs() >= max * (1.0 - 1e-12)) {
        if f[lead] < 0.0 {
            f.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Full spectrum, `λ₁`, harmonic eigenfunction and relaxation time of a
/// connected graph.
pub fn spectral_gap(g: &Graph) -> Result<SpectralResult> {
    check_gap_input(g)?;
    let l = normalized_laplacian(g)?;
    let eig = linalg::symmetric_eigen(&l)?;
    let mut residual: f64 = 0.0;
    for (lambda, x) in eig.values.iter().zip(&eig.vectors) {
        let lx = apply_laplacian(g, x);
        let r = lx.iter().zip(x).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
        residual = residual.max(r);
    }
    if residual.is_nan() || residual > RESIDUAL_GATE {
        return Err(Error::NumericalFailure(format!(
            "eigenpair residual {residual:e} exceeds {RESIDUAL_GATE:e}"
        )));
    }
    // The solver resolves the kernel only to about eps/λ₁; the kernel √d is
    // known exactly, so remove it from the gap eigenvector directly.
    let mut eigenvectors = eig.vectors;
    let root: Vec<f64> = g.degrees().iter().map(|&d| (d as f64).sqrt()).collect();
    let root_norm = (g.volume() as f64).sqrt();
    let gap_vector = &mut eigenvectors[1];
    for _ in 0..2 {
        let along = gap_vector.iter().zip(&root).map(|(x, r)| x * r).sum::<f64>() / root_norm;
        gap_vector.iter_mut().zip(&root).for_each(|(x, r)| *x -= along * r / root_norm);
    }
    let norm = gap_vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    gap_vector.iter_mut().for_each(|x| *x /= norm);
    let mut harmonic_f: Vec<f64> =
        eigenvectors[1].iter().zip(g.degrees()).map(|(x, &d)| x / (d as f64).sqrt()).collect();
    normalize_sign(&mut harmonic_f);
    // The edge-sum Rayleigh quotient is a sum of nonnegative terms, so it
    // keeps relative accuracy when λ₁ is tiny.
    let mut eigenvalues = eig.values;
    let upper = eigenvalues.get(2).copied().unwrap_or(f64::INFINITY);
    let lambda1 = rayleigh_quotient(g, &harmonic_f)?.max(eigenvalues[0]).min(upper);
    eigenvalues[1] = lambda1;
    Ok(SpectralResult {
        eigenvalues,
        lambda1,
        harmonic_f,
        relaxation_time: 1.0 / lambda1,
        residual,
        eigenvectors,
    })
}

/// `λ₁` alone, skipping eigenvectors. Used by the exhaustive search.
pub fn lambda1(g: &Graph) -> Result<f64> {
    check_gap_input(g)?;
    let values = linalg::symmetric_eigenvalues(&normalized_laplacian(g)?)?;
    Ok(values[1])
}

/// `Σ_{u~v} (f(u) − f(v))² / Σ_v f(v)² d(v)`, each edge counted once.
pub fn rayleigh_quotient(g: &Graph, f: &[f64]) -> Result<f64> {
    if f.len() != g.vertex_count() {
        return Err(Error::InvalidParams(format!(
            "function has {} entries, graph has {} vertices",
            f.len(),
            g.vertex_count()
        )));
    }
    let num: f64 = g.edges().map(|(u, v)| (f[u] - f[v]).powi(2)).sum();
    let den: f64 = f.iter().zip(g.degrees()).map(|(x, &d)| x * x * d as f64).sum();
    if den <= 0.0 {
        return Err(Error::DegenerateFunction);
    }
    Ok(num / den)
}

/// Relaxation time `1/λ₁` of the simple random walk.
pub fn relaxation_time(g: &Graph) -> Result<f64> {
    Ok(spectral_gap(g)?.relaxation_time)
}

/// Independent estimate of `λ₁` by power iteration on the lazy operator
/// `(I + T^{-1/2} A T^{-1/2}) / 2`, deflating the stationary direction
/// `√d` every step. Returns `2 (1 − μ)` for the dominant deflated
/// eigenvalue `μ`.
///
/// Stops once two successive Rayleigh estimates differ by less than
/// `tol / 10` and the eigen-residual is below `tol`.
pub fn transition_gap_oracle(g: &Graph, tol: f64) -> Result<f64> {
    check_gap_input(g)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let n = g.vertex_count();
    let sqrt_d: Vec<f64> = g.degrees().iter().map(|&d| (d as f64).sqrt()).collect();
    let vol: f64 = g.volume() as f64;
    let stationary: Vec<f64> = sqrt_d.iter().map(|s| s / vol.sqrt()).collect();
    let deflate = |x: &mut [f64]| {
        let dot: f64 = x.iter().zip(&stationary).map(|(a, b)| a * b).sum();
        x.iter_mut().zip(&stationary).for_each(|(a, b)| *a -= dot * b);
    };
    let normalize = |x: &mut [f64]| -> f64 {
        let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        x.iter_mut().for_each(|a| *a /= norm);
        norm
    };
    let lazy = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|u| {
                let walk: f64 = g.neighbors(u).map(|v| x[v] / sqrt_d[v]).sum::<f64>() / sqrt_d[u];
                0.5 * (x[u] + walk)
            })
            .collect()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut x);
    if normalize(&mut x) == 0.0 {
        return Err(Error::NumericalFailure("degenerate start vector".into()));
    }
    let mut previous = f64::NAN;
    for _ in 0..POWER_ITERATION_CAP {
        let mut y = lazy(&x);
        deflate(&mut y);
        let mu: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let residual = x.iter().zip(&y).map(|(a, b)| (b - mu * a).powi(2)).sum::<f64>().sqrt();
        if (mu - previous).abs() < tol / 10.0 && residual < tol {
            return Ok(2.0 * (1.0 - mu));
        }
        previous = mu;
        if normalize(&mut y) == 0.0 {
            // x lies in the kernel of the deflated operator: μ = 0
            return Ok(2.0);
        }
        x = y;
    }
    Err(Error::NumericalFailure(format!("power iteration did not converge in {POWER_ITERATION_CAP} steps")))
}

/// `k`-th smallest eigenvalue of a symmetric matrix by Sturm-count
/// bisection; see [`linalg::sturm_eigenvalue`].
pub fn sturm_eigen_oracle(m: &Matrix, k: usize) -> Result<f64> {
    if k >= m.dim() {
        return Err(Error::InvalidParams(format!(
            "eigenvalue index {k} out of range for dimension {}",
            m.dim()
        )));
    }
    if !m.is_symmetric(1e-12) {
        return Err(Error::InvalidParams("matrix is not symmetric".into()));
    }
    Ok(linalg::sturm_eigenvalue(m, k))
}

/// Spectrum of the walk matrix `P = T^{-1} A`, read off the Laplacian
/// eigenbasis and checked against `P` directly.
#[derive(Debug, Clone, Serialize)]
pub struct WalkSpectrumCheck {
    /// Rayleigh estimates `⟨f, P f⟩_d / ⟨f, f⟩_d` for each `f = T^{-1/2} g_i`,
    /// descending.
    pub rho: Vec<f64>,
    /// Largest relative residual `‖P f − ρ f‖_d / ‖f‖_d`.
    pub max_residual: f64,
}

impl WalkSpectrumCheck {
    /// `ρ_{n−1}`, the second largest walk eigenvalue.
    pub fn second_largest(&self) -> f64 {
        self.rho[1]
    }
}

/// Evaluates `P = T^{-1} A` on every harmonic function of `result`, giving an
/// eigenvalue estimate of `P` from each and the worst eigen-residual. When
/// the residual is small, `{ρ_i}` is the whole walk spectrum and
/// `1 − ρ_{n−1}` should equal `λ₁`.
pub fn walk_spectrum_check(g: &Graph, result: &SpectralResult) -> WalkSpectrumCheck {
    let deg: Vec<f64> = g.degrees().iter().map(|&d| d as f64).collect();
    let mut rho = Vec::with_capacity(result.eigenvectors.len());
    let mut max_residual: f64 = 0.0;
    for gvec in &result.eigenvectors {
        let f: Vec<f64> = gvec.iter().zip(&deg).map(|(x, d)| x / d.sqrt()).collect();
        let pf: Vec<f64> =
            (0..g.vertex_count()).map(|u| g.neighbors(u).map(|v| f[v]).sum::<f64>() / deg[u]).collect();
        let norm2: f64 = f.iter().zip(&deg).map(|(x, d)| x * x * d).sum();
        let r: f64 = f.iter().zip(&pf).zip(&deg).map(|((x, y), d)| x * y * d).sum::<f64>() / norm2;
        let res = f.iter().zip(&pf).zip(&deg).map(|((x, y), d)| (y - r * x).powi(2) * d).sum::<f64>().sqrt()
            / norm2.sqrt();
        max_residual = max_residual.max(res);
        rho.push(r);
    }
    rho.sort_by(|a, b| b.total_cmp(a));
    WalkSpectrumCheck { rho, max_residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, cycle, hypercube, path};

    #[test]
    fn laplacian_entries() {
        let l = normalized_laplacian(&complete(2).unwrap()).unwrap();
        assert_eq!(l, Matrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap());
        let l = normalized_laplacian(&path(3).unwrap()).unwrap();
        let w = -1.0 / 2f64.sqrt();
        assert!((l[(0, 1)] - w).abs() < 1e-15 && (l[(1, 2)] - w).abs() < 1e-15);
        assert_eq!(l[(0, 2)], 0.0);
        assert!((0..3).all(|i| l[(i, i)] == 1.0));
        let star_plus_isolated = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(normalized_laplacian(&star_plus_isolated), Err(Error::DegreeZero(4)));
    }

    #[test]
    fn known_gaps() {
        let k2 = spectral_gap(&complete(2).unwrap()).unwrap();
        assert!((k2.eigenvalues[0]).abs() < 1e-12 && (k2.eigenvalues[1] - 2.0).abs() < 1e-12);
        assert!((k2.lambda1 - 2.0).abs() < 1e-12);
        let q3 = spectral_gap(&hypercube(3).unwrap()).unwrap();
        assert!((q3.lambda1 - 2.0 / 3.0).abs() < 1e-9);
        let k4 = spectral_gap(&complete(4).unwrap()).unwrap();
        assert!((k4.lambda1 - 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn relaxation_times() {
        assert!((relaxation_time(&complete(2).unwrap()).unwrap() - 0.5).abs() < 1e-12);
        assert!((relaxation_time(&hypercube(3).unwrap()).unwrap() - 1.5).abs() < 1e-9);
        assert!((relaxation_time(&complete(4).unwrap()).unwrap() - 0.75).abs() < 1e-9);
        let r = spectral_gap(&cycle(7).unwrap()).unwrap();
        assert_eq!(r.relaxation_time * r.lambda1, 1.0);
    }

    #[test]
    fn gap_errors() {
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(spectral_gap(&split).unwrap_err(), Error::Disconnected);
        assert!(matches!(spectral_gap(&complete(1).unwrap()), Err(Error::InvalidGraph(_))));
        assert_eq!(transition_gap_oracle(&split, 1e-6).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn rayleigh_examples() {
        let k2 = complete(2).unwrap();
        assert_eq!(rayleigh_quotient(&k2, &[1.0, -1.0]).unwrap(), 2.0);
        assert_eq!(rayleigh_quotient(&cycle(4).unwrap(), &[1.0, 0.0, -1.0, 0.0]).unwrap(), 1.0);
        let k3 = rayleigh_quotient(&complete(3).unwrap(), &[2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0]).unwrap();
        assert!((k3 - 1.5).abs() < 1e-15);
        assert_eq!(rayleigh_quotient(&k2, &[0.0, 0.0]), Err(Error::DegenerateFunction));
        assert!(rayleigh_quotient(&k2, &[1.0]).is_err());
    }

    #[test]
    fn harmonic_function_normalization() {
        let g = path(6).unwrap();
        let r = spectral_gap(&g).unwrap();
        let weighted_sum: f64 = r.harmonic_f.iter().zip(g.degrees()).map(|(f, &d)| f * d as f64).sum();
        assert!(weighted_sum.abs() < 1e-10);
        let norm: f64 = r.harmonic_f.iter().zip(g.degrees()).map(|(f, &d)| f * f * d as f64).sum();
        assert!((norm - 1.0).abs() < 1e-10);
        let lead = r.harmonic_f.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        assert!(lead > 0.0);
        // path eigenfunction is antisymmetric; the tie goes to vertex 0
        assert!(r.harmonic_f[0] > 0.0);
    }

    #[test]
    fn power_iteration_oracle() {
        let tol = 1e-8;
        assert!((transition_gap_oracle(&complete(2).unwrap(), tol).unwrap() - 2.0).abs() < 1e-6);
        assert!((transition_gap_oracle(&hypercube(3).unwrap(), tol).unwrap() - 2.0 / 3.0).abs() < 1e-6);
        assert!((transition_gap_oracle(&path(3).unwrap(), tol).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sturm_oracle_examples() {
        let l = normalized_laplacian(&complete(2).unwrap()).unwrap();
        assert!((sturm_eigen_oracle(&l, 1).unwrap() - 2.0).abs() < 1e-9);
        let l = normalized_laplacian(&path(3).unwrap()).unwrap();
        assert!((sturm_eigen_oracle(&l, 1).unwrap() - 1.0).abs() < 1e-9);
        let l = normalized_laplacian(&cycle(5).unwrap()).unwrap();
        let want = 1.0 - (2.0 * std::f64::consts::PI / 5.0).cos();
        assert!((sturm_eigen_oracle(&l, 1).unwrap() - want).abs() < 1e-9);
        assert!((want - 0.690983).abs() < 1e-6);
        assert!(sturm_eigen_oracle(&l, 5).is_err());
    }

    #[test]
    fn walk_matrix_similarity() {
        let g = path(5).unwrap();
        let r = spectral_gap(&g).unwrap();
        let walk = walk_spectrum_check(&g, &r);
        assert!(walk.max_residual < 1e-10);
        assert!((walk.rho[0] - 1.0).abs() < 1e-12);
        assert!((1.0 - walk.second_largest() - r.lambda1).abs() < 1e-12);
    }
}
