//! The endpoint-gap problem behind the harmonic lower bound.
//!
//! Given positive weights `d_1..d_n`, minimize `(f_n − f_1)²` subject to
//! `Σ f_i d_i = 0`, `Σ f_i² d_i = 1` and `f_1 ≤ f_k ≤ f_n`. Every minimizer
//! is two-valued: each `f_k` equals `f_1` or `f_n`. For a split with low
//! weight `a` and high weight `b` the constraints force
//! `f_low = −√(b/(a² + ab))`, `f_high = √(a/(b² + ab))`, and the objective is
//! `1/a + 1/b`.
//!
//! [`two_point_optimum`] enumerates every split; [`numeric_minimize`]
//! searches the constraint manifold directly and is the check that the
//! two-valued structure is really what a minimizer looks like.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` accepted by the exhaustive split enumeration.
pub const MAX_ENUMERATED: usize = 24;

pub const RESTARTS: usize = 50;

/// Each descent step shrinks the endpoint gap by at most `4 · MAX_STEP`.
const MAX_STEP: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Low,
    High,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoPointProblem {
    pub degrees: Vec<u64>,
    pub f: Vec<f64>,
    /// `(f_n − f_1)²`.
    pub objective: f64,
    pub assignment: Vec<Side>,
}

impl TwoPointProblem {
    /// `(Σ f d, Σ f² d − 1)`.
    pub fn constraint_errors(&self) -> (f64, f64) {
        let mean: f64 = self.f.iter().zip(&self.degrees).map(|(x, &d)| x * d as f64).sum();
        let norm: f64 = self.f.iter().zip(&self.degrees).map(|(x, &d)| x * x * d as f64).sum();
        (mean, norm - 1.0)
    }

    /// Largest distance of an entry from the nearer of `f_1`, `f_n`.
    pub fn two_valued_deviation(&self) -> f64 {
        let (lo, hi) = (self.f[0], self.f[self.f.len() - 1]);
        self.f.iter().map(|&x| (x - lo).abs().min((x - hi).abs())).fold(0.0, f64::max)
    }
}

fn validate(degrees: &[u64]) -> Result<()> {
    if degrees.len() < 2 {
        return Err(Error::InvalidParams("need at least two degrees".into()));
    }
    if degrees.contains(&0) {
        return Err(Error::InvalidParams("degrees must be positive".into()));
    }
    Ok(())
}

/// Values `(f_low, f_high)` of the two-valued solution with low weight `a`
/// and high weight `b`.
pub fn two_point_values(a: f64, b: f64) -> (f64, f64) {
    (-(b / (a * a + a * b)).sqrt(), (a / (b * b + a * b)).sqrt())
}

/// Exact optimum by enumerating all `2^(n−2)` splits of the middle indices
/// (index 1 low, index `n` high). Ties keep the first split in enumeration
/// order, where middle index `k` is high iff bit `k − 1` is set.
pub fn two_point_optimum(degrees: &[u64]) -> Result<TwoPointProblem> {
    validate(degrees)?;
    let n = degrees.len();
    if n > MAX_ENUMERATED {
        return Err(Error::TooLarge {
            what: "sequence length for split enumeration",
            value: n,
            limit: MAX_ENUMERATED,
        });
    }
    let total: u64 = degrees.iter().sum();
    let middle = &degrees[1..n - 1];
    let mut best: Option<(f64, u64, u64)> = None;
    for mask in 0u64..1 << (n - 2) {
        let high_middle: u64 =
            middle.iter().enumerate().filter(|&(k, _)| mask >> k & 1 == 1).map(|(_, &d)| d).sum();
        let b = degrees[n - 1] + high_middle;
        let a = total - b;
        let objective = 1.0 / a as f64 + 1.0 / b as f64;
        if best.is_none_or(|(o, _, _)| objective < o) {
            best = Some((objective, mask, a));
        }
    }
    let (objective, mask, a) = best.expect("at least one split");
    let (lo, hi) = two_point_values(a as f64, (total - a) as f64);
    let assignment: Vec<Side> = (0..n)
        .map(|i| match i {
            0 => Side::Low,
            i if i == n - 1 => Side::High,
            i if mask >> (i - 1) & 1 == 1 => Side::High,
            _ => Side::Low,
        })
        .collect();
    let f = assignment.iter().map(|s| if *s == Side::Low { lo } else { hi }).collect();
    Ok(TwoPointProblem { degrees: degrees.to_vec(), f, objective, assignment })
}

/// `1/d_1 + 1/d_n`, the objective at the interior critical point of the
/// Lagrangian (a maximum of the constrained problem).
pub fn interior_critical_value(degrees: &[u64]) -> Result<f64> {
    validate(degrees)?;
    Ok(1.0 / degrees[0] as f64 + 1.0 / degrees[degrees.len() - 1] as f64)
}

struct Manifold<'a> {
    d: &'a [f64],
    total: f64,
}

impl Manifold<'_> {
    /// Clips middle entries into `[f_1, f_n]`, removes the weighted mean and
    /// rescales to unit weighted norm.
    fn project(&self, f: &mut [f64]) {
        let n = f.len();
        let (lo, hi) = (f[0], f[n - 1]);
        for x in &mut f[1..n - 1] {
            *x = x.clamp(lo, hi);
        }
        let mean = f.iter().zip(self.d).map(|(x, d)| x * d).sum::<f64>() / self.total;
        f.iter_mut().for_each(|x| *x -= mean);
        let norm = f.iter().zip(self.d).map(|(x, d)| x * x * d).sum::<f64>().sqrt();
        f.iter_mut().for_each(|x| *x /= norm);
    }

    /// Both equality constraints hold and the endpoints stay ordered.
    fn feasible(&self, f: &[f64]) -> bool {
        let mean: f64 = f.iter().zip(self.d).map(|(x, d)| x * d).sum();
        let norm: f64 = f.iter().zip(self.d).map(|(x, d)| x * x * d).sum();
        mean.abs() < 1e-9 && (norm - 1.0).abs() < 1e-9 && f[0] < f[f.len() - 1]
    }

    fn objective(f: &[f64]) -> f64 {
        (f[f.len() - 1] - f[0]).powi(2)
    }

    /// Projected descent: pull the endpoints together along the objective
    /// gradient, then project. Step halves whenever it fails to improve.
    fn descend(&self, f: &mut Vec<f64>) {
        let n = f.len();
        let mut step = 0.1;
        let mut current = Self::objective(f);
        for _ in 0..20_000 {
            let gap = f[n - 1] - f[0];
            let mut trial = f.clone();
            trial[0] += step * 2.0 * gap;
            trial[n - 1] -= step * 2.0 * gap;
            self.project(&mut trial);
            let value = Self::objective(&trial);
            if self.feasible(&trial) && value < current {
                let done = current - value <= 1e-15 * current;
                *f = trial;
                current = value;
                if done {
                    break;
                }
                step = (step * 1.5).min(MAX_STEP);
            } else {
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
        }
    }
}

/// Local search for the endpoint-gap minimum: projected descent from random
/// starting points, each followed by basin hops that move one middle entry
/// (or swap two) to the opposite endpoint and descend again. Returns the best
/// of [`RESTARTS`] runs; ties keep the lowest restart index.
pub fn numeric_minimize(degrees: &[u64], seed: u64) -> Result<TwoPointProblem> {
    validate(degrees)?;
    let n = degrees.len();
    let d: Vec<f64> = degrees.iter().map(|&x| x as f64).collect();
    let manifold = Manifold { d: &d, total: d.iter().sum() };

    let run = |restart: usize| -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        let mut f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        f[0] = -1.0;
        f[n - 1] = 1.0;
        manifold.project(&mut f);
        manifold.descend(&mut f);
        loop {
            let current = Manifold::objective(&f);
            let mut improved = None;
            let moves = (1..n - 1)
                .map(|k| (k, None))
                .chain((1..n - 1).flat_map(|i| (i + 1..n - 1).map(move |j| (i, Some(j)))));
            for (i, j) in moves {
                let mut trial = f.clone();
                let (lo, hi) = (trial[0], trial[n - 1]);
                for k in std::iter::once(i).chain(j) {
                    trial[k] = if (trial[k] - lo).abs() <= (trial[k] - hi).abs() { hi } else { lo };
                }
                manifold.project(&mut trial);
                manifold.descend(&mut trial);
                if Manifold::objective(&trial) < current * (1.0 - 1e-12) {
                    improved = Some(trial);
                    break;
                }
            }
            match improved {
                Some(better) => f = better,
                None => break,
            }
        }
        f
    };

    let mut best: Option<Vec<f64>> = None;
    for restart in 0..RESTARTS {
        let f = run(restart);
        if best.as_ref().is_none_or(|b| Manifold::objective(&f) < Manifold::objective(b)) {
            best = Some(f);
        }
    }
    let f = best.expect("at least one restart");
    let (lo, hi) = (f[0], f[n - 1]);
    let assignment =
        f.iter().map(|&x| if (x - lo).abs() <= (x - hi).abs() { Side::Low } else { Side::High }).collect();
    Ok(TwoPointProblem { degrees: degrees.to_vec(), objective: Manifold::objective(&f), f, assignment })
}

/// Summary of [`audit_random_sequences`].
#[derive(Debug, Clone, Serialize)]
pub struct SequenceAudit {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest `numeric − exact` objective difference.
    pub worst_objective_gap: f64,
    pub worst_two_valued_deviation: f64,
    /// Largest constraint residual of the exact solutions.
    pub worst_constraint_error: f64,
    /// Smallest `interior − exact` over instances with `n ≥ 3`.
    pub min_interior_margin: f64,
    /// Degree sequences that failed, in trial order.
    pub failures: Vec<Vec<u64>>,
}

/// Draws `trials` degree sequences (length uniform in `2..=max_n`, entries
/// uniform in `1..=10`) and checks that the local search finds the
/// enumerated optimum (objective within `1e-6`, two-valued within `1e-4`)
/// and that the interior critical value is strictly larger when `n ≥ 3`.
pub fn audit_random_sequences(trials: usize, max_n: usize, seed: u64) -> Result<SequenceAudit> {
    if !(2..=MAX_ENUMERATED).contains(&max_n) {
        return Err(Error::InvalidParams(format!("max_n must be in 2..={MAX_ENUMERATED}, got {max_n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut audit = SequenceAudit {
        trials,
        passed: 0,
        failed: 0,
        worst_objective_gap: 0.0,
        worst_two_valued_deviation: 0.0,
        worst_constraint_error: 0.0,
        min_interior_margin: f64::INFINITY,
        failures: Vec::new(),
    };
    for _ in 0..trials {
        let n = rng.gen_range(2..=max_n);
        let degrees: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
        let exact = two_point_optimum(&degrees)?;
        let found = numeric_minimize(&degrees, rng.gen())?;
        let gap = found.objective - exact.objective;
        let deviation = found.two_valued_deviation();
        let (e1, e2) = exact.constraint_errors();
        let interior = interior_critical_value(&degrees)? - exact.objective;
        audit.worst_objective_gap = audit.worst_objective_gap.max(gap.abs());
        audit.worst_two_valued_deviation = audit.worst_two_valued_deviation.max(deviation);
        audit.worst_constraint_error = audit.worst_constraint_error.max(e1.abs()).max(e2.abs());
        if n >= 3 {
            audit.min_interior_margin = audit.min_interior_margin.min(interior);
        }
        let ok = gap.abs() <= 1e-6 && deviation <= 1e-4 && (n < 3 || interior > 0.0) && interior >= -1e-12;
        if ok {
            audit.passed += 1;
        } else {
            audit.failed += 1;
            audit.failures.push(degrees);
        }
    }
    Ok(audit)
}
