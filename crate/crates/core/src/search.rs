//! Exhaustive minimum spectral gap for small `n`, double kite sweeps, and
//! bound audits over graph corpora.
//!
//! All parallel work is split into fixed shards whose results are merged by
//! value with index tie-breaks, so reports do not depend on the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{bounds_report_from, BoundsReport};
use crate::canonical::{self, mask_is_connected, Relabelings};
use crate::constructions::{balanced_double_kite, cycle, double_kite, path, random_connected};
use crate::error::{Error, Result};
use crate::graph::{pair_count, Graph};
use crate::spectral::{self, spectral_gap};

/// Largest `n` for exhaustive enumeration (`2^28` masks at `n = 8`).
pub const MAX_EXHAUSTIVE: usize = 8;

/// Graphs whose `λ₁` is within this of the minimum count as minimizers.
pub const TIE_TOL: f64 = 1e-9;

/// Lower-bound slack below `-LOWER_TOL` is a violation.
pub const LOWER_TOL: f64 = 1e-10;

/// Slack tolerance of the harmonic ≥ diameter-harmonic ≥ improved chain.
pub const CHAIN_TOL: f64 = 1e-12;

const SHARD_BITS: u32 = 14;

/// Runs `job` on a pool of `workers` threads (all available cores when
/// `None`).
pub fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = workers {
        if k == 0 {
            return Err(Error::InvalidParams("worker count must be positive".into()));
        }
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

fn check_exhaustive(n: usize) -> Result<()> {
    if n > MAX_EXHAUSTIVE {
        return Err(Error::TooLarge { what: "exhaustive vertex count", value: n, limit: MAX_EXHAUSTIVE });
    }
    if n < 2 {
        return Err(Error::InvalidParams(format!("exhaustive search needs n >= 2, got {n}")));
    }
    Ok(())
}

/// Upper-triangle masks of connected labeled graphs on `n` vertices, in
/// ascending order.
pub fn connected_masks(n: usize) -> Result<impl Iterator<Item = u64>> {
    check_exhaustive(n)?;
    Ok((0u64..1 << pair_count(n)).filter(move |&m| mask_is_connected(n, m)))
}

/// Every connected labeled graph on `n` vertices, by ascending mask.
pub fn enumerate_connected(n: usize) -> Result<impl Iterator<Item = Graph>> {
    Ok(connected_masks(n)?.map(move |m| Graph::from_upper_mask(n, m).expect("mask fits")))
}

/// Mask ranges of at most `2^SHARD_BITS` masks covering `0..2^C(n,2)`.
fn shards(n: usize) -> Vec<std::ops::Range<u64>> {
    let total = 1u64 << pair_count(n);
    let size = 1u64 << SHARD_BITS;
    (0..total.div_ceil(size)).map(|i| i * size..((i + 1) * size).min(total)).collect()
}

/// Structural report on one minimizing graph.
#[derive(Debug, Clone, Serialize)]
pub struct MinimizerReport {
    pub graph6: String,
    pub canonical_mask: u64,
    pub lambda1: f64,
    /// `e(N, P)` for the harmonic sign split of the solver's eigenfunction.
    pub np_cut_edges: usize,
    /// How many of those `N`–`P` edges are bridges.
    pub np_bridges: usize,
    pub bridge_count: usize,
    /// `(r, s)` when the minimizer is isomorphic to `DK(r, s)`.
    pub double_kite: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchRecord {
    pub n: usize,
    pub alpha: f64,
    pub minimizers: Vec<MinimizerReport>,
    /// Connected labeled graphs evaluated.
    pub graphs_scanned: u64,
    pub masks_scanned: u64,
    pub distinct_classes: Option<usize>,
}

#[derive(Default)]
struct ShardMin {
    best: f64,
    ties: Vec<(u64, f64)>,
    scanned: u64,
}

impl ShardMin {
    fn empty() -> Self {
        ShardMin { best: f64::INFINITY, ties: Vec::new(), scanned: 0 }
    }

    fn push(&mut self, mask: u64, lambda: f64) {
        self.scanned += 1;
        if lambda < self.best {
            self.best = lambda;
            let cutoff = lambda + TIE_TOL;
            self.ties.retain(|&(_, l)| l <= cutoff);
        }
        if lambda <= self.best + TIE_TOL {
            self.ties.push((mask, lambda));
        }
    }

    fn merge(mut self, other: ShardMin) -> ShardMin {
        self.scanned += other.scanned;
        self.best = self.best.min(other.best);
        let cutoff = self.best + TIE_TOL;
        self.ties.extend(other.ties);
        self.ties.retain(|&(_, l)| l <= cutoff);
        self
    }
}

/// Options for [`alpha`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub workers: Option<usize>,
    /// Also count isomorphism classes of connected graphs (slow at `n = 8`).
    pub count_classes: bool,
}

/// Minimum `λ₁` over all connected graphs on `n` vertices, by exhaustive
/// enumeration of labeled graphs. Minimizers are reported up to isomorphism.
pub fn alpha(n: usize, options: SearchOptions) -> Result<SearchRecord> {
    check_exhaustive(n)?;
    let shard_list = shards(n);
    let merged = with_workers(options.workers, || {
        shard_list
            .par_iter()
            .map(|range| -> Result<ShardMin> {
                let mut acc = ShardMin::empty();
                for mask in range.clone() {
                    if !mask_is_connected(n, mask) {
                        continue;
                    }
                    let g = Graph::from_upper_mask(n, mask)?;
                    acc.push(mask, spectral::lambda1(&g)?);
                }
                Ok(acc)
            })
            .try_reduce(ShardMin::empty, |a, b| Ok(a.merge(b)))
    })??;

    let relabel = Relabelings::new(n)?;
    let mut classes: Vec<u64> = merged.ties.iter().map(|&(m, _)| relabel.canonical_mask(m)).collect();
    classes.sort_unstable();
    classes.dedup();
    let minimizers = classes.into_iter().map(|mask| minimizer_report(n, mask)).collect::<Result<Vec<_>>>()?;
    let distinct_classes =
        if options.count_classes { Some(canonical::count_connected_classes(n)?) } else { None };
    Ok(SearchRecord {
        n,
        alpha: merged.best,
        minimizers,
        graphs_scanned: merged.scanned,
        masks_scanned: 1 << pair_count(n),
        distinct_classes,
    })
}

fn minimizer_report(n: usize, mask: u64) -> Result<MinimizerReport> {
    let g = Graph::from_upper_mask(n, mask)?;
    let spectral = spectral_gap(&g)?;
    let report = bounds_report_from(&g, &spectral)?;
    let in_p: Vec<bool> = {
        let mut v = vec![false; n];
        report.split.p_set.iter().for_each(|&z| v[z] = true);
        v
    };
    let bridges = g.bridges();
    let np_edges: Vec<(usize, usize)> = g.edges().filter(|&(a, b)| in_p[a] != in_p[b]).collect();
    let np_bridges = np_edges.iter().filter(|e| bridges.binary_search(e).is_ok()).count();
    let mut double_kite_match = None;
    for r in 2..=n / 2 {
        let dk = double_kite(r, n - 2 * r)?;
        if dk.edge_count() == g.edge_count() && canonical::are_isomorphic(&dk, &g)? {
            double_kite_match = Some((r, n - 2 * r));
            break;
        }
    }
    Ok(MinimizerReport {
        graph6: g.to_graph6()?,
        canonical_mask: mask,
        lambda1: spectral.lambda1,
        np_cut_edges: g.cut_edges_between(&report.split.p_set),
        np_bridges,
        bridge_count: bridges.len(),
        double_kite: double_kite_match,
    })
}

/// Pairs `(n, n + 1)` of consecutive records where the minimum gap grew.
/// This is an observation, not an expected property.
pub fn monotonicity_breaks(records: &[SearchRecord]) -> Vec<(usize, usize)> {
    records
        .windows(2)
        .filter(|w| w[1].n == w[0].n + 1 && w[1].alpha > w[0].alpha + TIE_TOL)
        .map(|w| (w[0].n, w[1].n))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub lambda1: f64,
    /// `λ₁ · n³`.
    pub scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub rows: Vec<SweepRow>,
    /// Index into `rows` of the smallest `λ₁` (smallest `r` on ties).
    pub argmin: usize,
}

impl SweepReport {
    pub fn best(&self) -> &SweepRow {
        &self.rows[self.argmin]
    }
}

/// `λ₁(DK(r, s))` for every split `2r + s = n` with `r ≥ 2`, `s ≥ 0`.
pub fn sweep_double_kite(n: usize, workers: Option<usize>) -> Result<SweepReport> {
    if n < 4 {
        return Err(Error::InvalidParams(format!("double kite sweep needs n >= 4, got {n}")));
    }
    let rows = with_workers(workers, || {
        (2..=n / 2)
            .into_par_iter()
            .map(|r| {
                let s = n - 2 * r;
                let lambda1 = spectral::lambda1(&double_kite(r, s)?)?;
                Ok(SweepRow { n, r, s, lambda1, scaled: lambda1 * (n as f64).powi(3) })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let argmin = rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.lambda1.total_cmp(&b.1.lambda1).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .expect("n >= 4 gives at least one row");
    Ok(SweepReport { n, rows, argmin })
}

/// Families for [`gap_curve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    /// `DK(r, s)` from [`balanced_double_kite`].
    BalancedDoubleKite,
    /// The best double kite of a full [`sweep_double_kite`].
    BestDoubleKite,
    Path,
    Cycle,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapPoint {
    pub n: usize,
    pub r: Option<usize>,
    pub s: Option<usize>,
    pub lambda1: f64,
    /// `λ₁ · n³ / 54`, which tends to 1 along balanced double kites.
    pub scaled: f64,
}

/// `λ₁` of one family member per entry of `sizes`.
pub fn gap_curve(family: CurveFamily, sizes: &[usize], workers: Option<usize>) -> Result<Vec<GapPoint>> {
    let point = |n: usize, r: Option<usize>, s: Option<usize>, lambda1: f64| GapPoint {
        n,
        r,
        s,
        lambda1,
        scaled: lambda1 * (n as f64).powi(3) / 54.0,
    };
    sizes
        .iter()
        .map(|&n| match family {
            CurveFamily::BalancedDoubleKite => {
                let (r, s) = balanced_double_kite(n)?;
                let l = with_workers(workers, || spectral::lambda1(&double_kite(r, s)?))??;
                Ok(point(n, Some(r), Some(s), l))
            }
            CurveFamily::BestDoubleKite => {
                let sweep = sweep_double_kite(n, workers)?;
                let best = sweep.best();
                Ok(point(n, Some(best.r), Some(best.s), best.lambda1))
            }
            CurveFamily::Path => Ok(point(n, None, None, spectral::lambda1(&path(n)?)?)),
            CurveFamily::Cycle => Ok(point(n, None, None, spectral::lambda1(&cycle(n)?)?)),
        })
        .collect()
}

/// Which graphs an audit covers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSpec {
    /// Every connected labeled graph with `2 ≤ n ≤ exhaustive_max_n`
    /// (0 disables the exhaustive part).
    pub exhaustive_max_n: usize,
    pub random_count: usize,
    pub random_min_n: usize,
    pub random_max_n: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec { exhaustive_max_n: 7, random_count: 10_000, random_min_n: 8, random_max_n: 50, seed: 0 }
    }
}

/// The random part of a corpus: `(n, p, graph seed)` triples drawn from
/// `spec.seed`, with `p` between `1.5 ln n / n` (capped at 0.6) and 0.6.
pub fn random_corpus_params(spec: &CorpusSpec) -> Vec<(usize, f64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.random_count)
        .map(|_| {
            let n = rng.gen_range(spec.random_min_n..=spec.random_max_n);
            let low = (1.5 * (n as f64).ln() / n as f64).min(0.6);
            let p = if low < 0.6 { rng.gen_range(low..=0.6) } else { 0.6 };
            (n, p, rng.gen())
        })
        .collect()
}

/// One CSV row of an audit.
#[derive(Debug, Clone, Serialize)]
pub struct AuditRow {
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub vol: usize,
    pub diam: usize,
    pub lambda1: f64,
    pub lo: f64,
    pub chung: f64,
    pub improved: f64,
    pub harmonic: f64,
    pub min_slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlackSummary {
    pub bound: &'static str,
    pub min_slack: f64,
    pub worst_graph6: String,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub graph6: String,
    pub bound: &'static str,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub graphs: u64,
    pub lower_bounds: Vec<SlackSummary>,
    /// Smallest of `harmonic − 2/(D√(vol_P vol_N))` and
    /// `2/(D√(vol_P vol_N)) − improved` over the corpus.
    pub min_chain_slack: f64,
    pub chain_violations: usize,
    pub violations: Vec<Violation>,
    /// Graphs whose spectral computation failed, with the error.
    pub failures: Vec<(String, String)>,
    #[serde(skip)]
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn total_violations(&self) -> usize {
        self.violations.len() + self.chain_violations
    }
}

struct AuditAcc {
    graphs: u64,
    /// (slack, ordinal, graph6) per lower bound.
    worst: [(f64, u64, String); 4],
    chain: (f64, u64),
    chain_violations: usize,
    violations: Vec<(u64, Violation)>,
    failures: Vec<(u64, String, String)>,
    rows: Vec<(u64, AuditRow)>,
}

const BOUND_NAMES: [&str; 4] = ["landau_odlyzko", "chung", "improved", "harmonic"];

impl AuditAcc {
    fn new() -> Self {
        let empty = || (f64::INFINITY, u64::MAX, String::new());
        AuditAcc {
            graphs: 0,
            worst: [empty(), empty(), empty(), empty()],
            chain: (f64::INFINITY, u64::MAX),
            chain_violations: 0,
            violations: Vec::new(),
            failures: Vec::new(),
            rows: Vec::new(),
        }
    }

    fn add(&mut self, ordinal: u64, g: &Graph, keep_rows: bool) {
        self.graphs += 1;
        let graph6 = || g.to_graph6().unwrap_or_else(|_| g.to_edge_list());
        let report: BoundsReport = match spectral_gap(g).and_then(|s| bounds_report_from(g, &s)) {
            Ok(r) => r,
            Err(e) => {
                self.failures.push((ordinal, graph6(), e.to_string()));
                return;
            }
        };
        for (k, (name, slack)) in report.lower_slacks().into_iter().enumerate() {
            if (slack, ordinal) < (self.worst[k].0, self.worst[k].1) {
                self.worst[k] = (slack, ordinal, graph6());
            }
            if slack < -LOWER_TOL {
                self.violations.push((ordinal, Violation { graph6: graph6(), bound: name, slack }));
            }
        }
        let chain =
            (report.harmonic - report.diameter_harmonic).min(report.diameter_harmonic - report.improved);
        if (chain, ordinal) < self.chain {
            self.chain = (chain, ordinal);
        }
        if chain < -CHAIN_TOL {
            self.chain_violations += 1;
        }
        if keep_rows {
            self.rows.push((
                ordinal,
                AuditRow {
                    graph6: graph6(),
                    n: g.vertex_count(),
                    m: g.edge_count(),
                    vol: g.volume(),
                    diam: g.diameter().unwrap_or(0),
                    lambda1: report.lambda1,
                    lo: report.landau_odlyzko,
                    chung: report.chung,
                    improved: report.improved,
                    harmonic: report.harmonic,
                    min_slack: report.min_lower_slack(),
                },
            ));
        }
    }

    fn merge(mut self, other: AuditAcc) -> AuditAcc {
        self.graphs += other.graphs;
        for (mine, theirs) in self.worst.iter_mut().zip(other.worst) {
            if (theirs.0, theirs.1) < (mine.0, mine.1) {
                *mine = theirs;
            }
        }
        if other.chain < self.chain {
            self.chain = other.chain;
        }
        self.chain_violations += other.chain_violations;
        self.violations.extend(other.violations);
        self.failures.extend(other.failures);
        self.rows.extend(other.rows);
        self
    }

    fn finish(mut self) -> AuditReport {
        self.violations.sort_by_key(|(o, _)| *o);
        self.failures.sort_by_key(|(o, _, _)| *o);
        self.rows.sort_by_key(|(o, _)| *o);
        let lower_bounds = self
            .worst
            .into_iter()
            .zip(BOUND_NAMES)
            .map(|((min_slack, _, worst_graph6), bound)| SlackSummary {
                bound,
                min_slack,
                worst_graph6,
                violations: self.violations.iter().filter(|(_, v)| v.bound == bound).count(),
            })
            .collect();
        AuditReport {
            graphs: self.graphs,
            lower_bounds,
            min_chain_slack: self.chain.0,
            chain_violations: self.chain_violations,
            violations: self.violations.into_iter().map(|(_, v)| v).collect(),
            failures: self.failures.into_iter().map(|(_, g, e)| (g, e)).collect(),
            rows: self.rows.into_iter().map(|(_, r)| r).collect(),
        }
    }
}

/// Audits an explicit list of connected graphs.
pub fn audit_graphs(graphs: &[Graph], keep_rows: bool, workers: Option<usize>) -> Result<AuditReport> {
    let acc = with_workers(workers, || {
        graphs
            .par_iter()
            .enumerate()
            .fold(AuditAcc::new, |mut acc, (i, g)| {
                acc.add(i as u64, g, keep_rows);
                acc
            })
            .reduce(AuditAcc::new, AuditAcc::merge)
    })?;
    Ok(acc.finish())
}

/// Audits every lower bound over the exhaustive and random parts of
/// `spec`. Graphs are ordered by `(n, mask)` then by random index; that
/// order breaks ties when reporting the worst graph.
pub fn audit_corpus(spec: &CorpusSpec, keep_rows: bool, workers: Option<usize>) -> Result<AuditReport> {
    if spec.exhaustive_max_n > MAX_EXHAUSTIVE {
        return Err(Error::TooLarge {
            what: "exhaustive audit vertex count",
            value: spec.exhaustive_max_n,
            limit: MAX_EXHAUSTIVE,
        });
    }
    if spec.random_count > 0 && (spec.random_min_n < 2 || spec.random_min_n > spec.random_max_n) {
        return Err(Error::InvalidParams(format!(
            "random sizes {}..={} are invalid",
            spec.random_min_n, spec.random_max_n
        )));
    }
    let random = random_corpus_params(spec);
    let acc = with_workers(workers, || -> Result<AuditAcc> {
        let mut acc = AuditAcc::new();
        let mut base = 0u64;
        for n in 2..=spec.exhaustive_max_n {
            let part = shards(n)
                .into_par_iter()
                .fold(AuditAcc::new, |mut acc, range| {
                    for mask in range {
                        if mask_is_connected(n, mask) {
                            let g = Graph::from_upper_mask(n, mask).expect("mask fits");
                            acc.add(base + mask, &g, keep_rows);
                        }
                    }
                    acc
                })
                .reduce(AuditAcc::new, AuditAcc::merge);
            acc = acc.merge(part);
            base += 1 << pair_count(n);
        }
        let graphs = random
            .par_iter()
            .map(|&(n, p, seed)| random_connected(n, p, seed))
            .collect::<Result<Vec<_>>>()?;
        let part = graphs
            .par_iter()
            .enumerate()
            .fold(AuditAcc::new, |mut acc, (i, g)| {
                acc.add(base + i as u64, g, keep_rows);
                acc
            })
            .reduce(AuditAcc::new, AuditAcc::merge);
        Ok(acc.merge(part))
    })??;
    Ok(acc.finish())
}
