//! Closed-form bounds on `λ₁`.
//!
//! Lower bounds: Landau–Odlyzko `1/(nΔ(D+1))`, Chung `1/(D·vol)`, the
//! improved `4/(D·vol)`, and the harmonic bound
//! `2/(dist(u,v)·√(vol_P·vol_N))` read off a harmonic eigenfunction.
//! Upper bounds: the Rayleigh quotient of any centered test function and the
//! joined-regular-pair formula `4/(D·d·(n−D))`.
//!
//! Formulas built from integer graph metrics are kept as exact rationals
//! until the final division.

use num_rational::Ratio;
use serde::Serialize;

use crate::constructions::{double_kite_path, joined_pair_block_size, joined_pair_path, ConstructionSpec};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{rayleigh_quotient, spectral_gap, SpectralResult};

/// Tolerance for calling a function harmonic: `|Σ f d| ≤ HARMONIC_TOL · max(1, Σ |f| d)`.
pub const HARMONIC_TOL: f64 = 1e-8;

fn to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The three metric lower bounds as exact fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLowerBounds {
    pub landau_odlyzko: Ratio<u64>,
    pub chung: Ratio<u64>,
    pub improved: Ratio<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBounds {
    pub landau_odlyzko: f64,
    pub chung: f64,
    pub improved: f64,
}

impl ExactLowerBounds {
    pub fn to_f64(&self) -> LowerBounds {
        LowerBounds {
            landau_odlyzko: to_f64(self.landau_odlyzko),
            chung: to_f64(self.chung),
            improved: to_f64(self.improved),
        }
    }
}

fn connected_diameter(g: &Graph) -> Result<usize> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidGraph("bounds need at least two vertices".into()));
    }
    g.diameter().ok_or(Error::Disconnected)
}

/// Landau–Odlyzko, Chung and improved lower bounds from `n`, `Δ`, `D`, `vol`.
pub fn exact_lower_bounds(g: &Graph) -> Result<ExactLowerBounds> {
    let diameter = connected_diameter(g)? as u64;
    let n = g.vertex_count() as u64;
    let max_degree = g.max_degree() as u64;
    let vol = g.volume() as u64;
    Ok(ExactLowerBounds {
        landau_odlyzko: Ratio::new(1, n * max_degree * (diameter + 1)),
        chung: Ratio::new(1, diameter * vol),
        improved: Ratio::new(4, diameter * vol),
    })
}

pub fn lower_bounds(g: &Graph) -> Result<LowerBounds> {
    Ok(exact_lower_bounds(g)?.to_f64())
}

/// `1/(k·D²)` for a vertex-transitive graph of degree `k` and diameter `D`.
/// Transitivity is the caller's responsibility; it is not checked.
pub fn vertex_transitive_bound(degree: usize, diameter: usize) -> Result<f64> {
    if degree == 0 || diameter == 0 {
        return Err(Error::InvalidParams(format!(
            "degree and diameter must be positive, got k = {degree}, D = {diameter}"
        )));
    }
    Ok(to_f64(Ratio::new(1, degree as u64 * (diameter as u64).pow(2))))
}

/// Sign partition of a harmonic function and its extreme vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicSplit {
    /// Vertices with `f(z) ≥ 0`.
    pub p_set: Vec<usize>,
    /// Vertices with `f(z) < 0`.
    pub n_set: Vec<usize>,
    pub vol_p: usize,
    pub vol_n: usize,
    /// Minimizer of `f` (lowest index on ties).
    pub u: usize,
    /// Maximizer of `f` (lowest index on ties).
    pub v: usize,
    pub dist_uv: usize,
}

pub fn harmonic_split(g: &Graph, f: &[f64]) -> Result<HarmonicSplit> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(Error::NotHarmonic(format!("{} entries for {n} vertices", f.len())));
    }
    if f.iter().all(|&x| x == 0.0) {
        return Err(Error::NotHarmonic("function is identically zero".into()));
    }
    let weighted: f64 = f.iter().zip(g.degrees()).map(|(x, &d)| x * d as f64).sum();
    let scale: f64 = f.iter().zip(g.degrees()).map(|(x, &d)| x.abs() * d as f64).sum();
    if weighted.abs() > HARMONIC_TOL * scale.max(1.0) {
        return Err(Error::NotHarmonic(format!("Σ f d = {weighted:e}")));
    }
    let (mut p_set, mut n_set) = (Vec::new(), Vec::new());
    let (mut vol_p, mut vol_n) = (0, 0);
    let (mut u, mut v) = (0, 0);
    for z in 0..n {
        if f[z] >= 0.0 {
            p_set.push(z);
            vol_p += g.degree(z);
        } else {
            n_set.push(z);
            vol_n += g.degree(z);
        }
        if f[z] < f[u] {
            u = z;
        }
        if f[z] > f[v] {
            v = z;
        }
    }
    let dist_uv = g.distance(u, v).ok_or(Error::Disconnected)?;
    Ok(HarmonicSplit { p_set, n_set, vol_p, vol_n, u, v, dist_uv })
}

impl HarmonicSplit {
    /// `2 / (dist(u,v) · √(vol_P · vol_N))`.
    pub fn bound(&self) -> f64 {
        2.0 / (self.dist_uv as f64 * ((self.vol_p * self.vol_n) as f64).sqrt())
    }

    /// `2 / (D · √(vol_P · vol_N))` for a diameter `D ≥ dist(u,v)`; the middle
    /// link between the harmonic and the improved bound.
    pub fn diameter_bound(&self, diameter: usize) -> f64 {
        2.0 / (diameter as f64 * ((self.vol_p * self.vol_n) as f64).sqrt())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HarmonicBound {
    pub value: f64,
    pub split: HarmonicSplit,
}

/// The harmonic lower bound evaluated on an existing spectral result.
pub fn harmonic_bound_from(g: &Graph, spectral: &SpectralResult) -> Result<HarmonicBound> {
    let split = harmonic_split(g, &spectral.harmonic_f)?;
    Ok(HarmonicBound { value: split.bound(), split })
}

/// Computes the spectral gap and evaluates the harmonic lower bound on the
/// returned eigenfunction.
pub fn harmonic_lower_bound(g: &Graph) -> Result<HarmonicBound> {
    harmonic_bound_from(g, &spectral_gap(g)?)
}

/// Rayleigh quotient of `f` after removing its degree-weighted mean. Always
/// at least `λ₁`.
pub fn test_function_upper(g: &Graph, f: &[f64]) -> Result<f64> {
    if f.len() != g.vertex_count() {
        return Err(Error::InvalidParams(format!(
            "function has {} entries, graph has {} vertices",
            f.len(),
            g.vertex_count()
        )));
    }
    let vol = g.volume() as f64;
    if vol == 0.0 {
        return Err(Error::DegenerateFunction);
    }
    let mean = f.iter().zip(g.degrees()).map(|(x, &d)| x * d as f64).sum::<f64>() / vol;
    let centered: Vec<f64> = f.iter().map(|x| x - mean).collect();
    let size = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if centered.iter().all(|x| x.abs() <= 1e-12 * size) {
        return Err(Error::DegenerateFunction);
    }
    rayleigh_quotient(g, &centered)
}

/// Step test function for a graph numbered block, path, block: `1` before
/// `path[0]`, `1 − 2i/D` on `path[i]`, `−1` after `path[D]`.
pub fn path_step_function(n: usize, path: &[usize]) -> Result<Vec<f64>> {
    let (Some(&first), Some(&last)) = (path.first(), path.last()) else {
        return Err(Error::InvalidParams("empty path".into()));
    };
    if path.len() < 2 || last >= n || path.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::InvalidParams("path must be a contiguous increasing index run".into()));
    }
    let length = (path.len() - 1) as f64;
    Ok((0..n)
        .map(|z| {
            if z < first {
                1.0
            } else if z > last {
                -1.0
            } else {
                1.0 - 2.0 * (z - first) as f64 / length
            }
        })
        .collect())
}

/// `4 / (D·d·(n−D))` as an exact fraction.
pub fn exact_joined_pair_upper(n: usize, diameter: usize, degree: usize) -> Result<Ratio<u64>> {
    joined_pair_block_size(n, diameter, degree)?;
    Ok(Ratio::new(4, (diameter * degree * (n - diameter)) as u64))
}

/// Upper bound on `λ₁` of two `d`-regular blocks joined by a path of `D`
/// edges, `4 / (D·d·(n−D))`.
pub fn joined_pair_upper(n: usize, diameter: usize, degree: usize) -> Result<f64> {
    exact_joined_pair_upper(n, diameter, degree).map(to_f64)
}

/// `(√(vol_N/(vol_P² + vol_P vol_N)) + √(vol_P/(vol_N² + vol_P vol_N)))²`,
/// the squared gap between the two values of the extremal two-valued
/// function; at least `2/√(vol_P vol_N)`.
pub fn amgm_combination(vol_p: f64, vol_n: f64) -> Result<f64> {
    if !(vol_p > 0.0 && vol_n > 0.0) {
        return Err(Error::InvalidParams(format!("volumes must be positive, got {vol_p} and {vol_n}")));
    }
    let cross = vol_p * vol_n;
    let high = (vol_n / (vol_p * vol_p + cross)).sqrt();
    let low = (vol_p / (vol_n * vol_n + cross)).sqrt();
    Ok((high + low).powi(2))
}

/// Every bound next to the computed `λ₁`. Slack is `λ₁ − bound` for lower
/// bounds and `bound − λ₁` for upper bounds; all should be nonnegative.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub lambda1: f64,
    pub landau_odlyzko: f64,
    pub chung: f64,
    pub improved: f64,
    pub harmonic: f64,
    pub slack_landau_odlyzko: f64,
    pub slack_chung: f64,
    pub slack_improved: f64,
    pub slack_harmonic: f64,
    /// `2/(D √(vol_P vol_N))`, between the harmonic and improved bounds.
    pub diameter_harmonic: f64,
    pub split: HarmonicSplit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_function_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joined_pair_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_transitive: Option<f64>,
}

impl BoundsReport {
    pub fn min_lower_slack(&self) -> f64 {
        self.slack_landau_odlyzko.min(self.slack_chung).min(self.slack_improved).min(self.slack_harmonic)
    }

    pub fn lower_slacks(&self) -> [(&'static str, f64); 4] {
        [
            ("landau_odlyzko", self.slack_landau_odlyzko),
            ("chung", self.slack_chung),
            ("improved", self.slack_improved),
            ("harmonic", self.slack_harmonic),
        ]
    }
}

/// Lower bounds of a connected graph from an already computed spectrum.
pub fn bounds_report_from(g: &Graph, spectral: &SpectralResult) -> Result<BoundsReport> {
    let diameter = connected_diameter(g)?;
    let lower = lower_bounds(g)?;
    let harmonic = harmonic_bound_from(g, spectral)?;
    let lambda1 = spectral.lambda1;
    Ok(BoundsReport {
        lambda1,
        landau_odlyzko: lower.landau_odlyzko,
        chung: lower.chung,
        improved: lower.improved,
        harmonic: harmonic.value,
        slack_landau_odlyzko: lambda1 - lower.landau_odlyzko,
        slack_chung: lambda1 - lower.chung,
        slack_improved: lambda1 - lower.improved,
        slack_harmonic: lambda1 - harmonic.value,
        diameter_harmonic: harmonic.split.diameter_bound(diameter),
        split: harmonic.split,
        test_function_upper: None,
        joined_pair_upper: None,
        vertex_transitive: None,
    })
}

pub fn bounds_report(g: &Graph) -> Result<BoundsReport> {
    bounds_report_from(g, &spectral_gap(g)?)
}

/// Builds a family member and reports every bound that applies to it: the
/// generic lower bounds, plus the path step test function and the joined
/// pair formula for double kites and joined pairs, and the vertex-transitive
/// bound for cycles, complete graphs and hypercubes.
pub fn construction_bounds(spec: &ConstructionSpec) -> Result<(Graph, SpectralResult, BoundsReport)> {
    let g = spec.build()?;
    let spectral = spectral_gap(&g)?;
    let mut report = bounds_report_from(&g, &spectral)?;
    let n = g.vertex_count();
    match *spec {
        ConstructionSpec::DoubleKite { r, s } if r >= 2 => {
            let step = path_step_function(n, &double_kite_path(r, s))?;
            report.test_function_upper = Some(test_function_upper(&g, &step)?);
            report.joined_pair_upper = Some(joined_pair_upper(n, s + 1, r - 1)?);
        }
        ConstructionSpec::JoinedRegularPair { n, diameter, degree } => {
            let step = path_step_function(n, &joined_pair_path(n, diameter))?;
            report.test_function_upper = Some(test_function_upper(&g, &step)?);
            report.joined_pair_upper = Some(joined_pair_upper(n, diameter, degree)?);
        }
        ConstructionSpec::Cycle { n } => report.vertex_transitive = Some(vertex_transitive_bound(2, n / 2)?),
        ConstructionSpec::Complete { n } if n >= 2 => {
            report.vertex_transitive = Some(vertex_transitive_bound(n - 1, 1)?)
        }
        ConstructionSpec::Hypercube { dim } => {
            report.vertex_transitive = Some(vertex_transitive_bound(dim, dim)?)
        }
        _ => {}
    }
    Ok((g, spectral, report))
}
