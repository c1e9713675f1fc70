//! Deterministic generators: double kites, regular pairs joined by a path,
//! the classic families, and seeded connected random graphs.
//!
//! Numbering convention for the two-block families: the first block comes
//! first, then the internal path vertices in path order, then the second
//! block. The path therefore occupies a contiguous index range.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Rejections tolerated by [`random_connected`] before giving up.
pub const MAX_REJECTIONS: usize = 1000;

/// `DK(r, s)`: two copies of `K_r` joined by a path `p_0, …, p_{s+1}` whose
/// end vertices lie in the cliques.
///
/// Vertices `0..r` form the first clique with `p_0 = r - 1`; the `s`
/// internal path vertices are `r..r+s`; the second clique is `r+s..2r+s`
/// with `p_{s+1} = r + s`.
pub fn double_kite(r: usize, s: usize) -> Result<Graph> {
    if r < 1 {
        return Err(Error::InvalidParams(format!("double kite needs r >= 1, got {r}")));
    }
    let n = 2 * r + s;
    let mut edges = Vec::with_capacity(r * (r - 1) + s + 1);
    for offset in [0, r + s] {
        for i in 0..r {
            for j in i + 1..r {
                edges.push((offset + i, offset + j));
            }
        }
    }
    for p in r - 1..r + s {
        edges.push((p, p + 1));
    }
    Graph::from_edges(n, &edges)
}

/// `(r, s)` with `2r + s = n` and `r` the integer nearest `n/3`: the
/// double kite with three roughly equal parts.
pub fn balanced_double_kite(n: usize) -> Result<(usize, usize)> {
    if n < 4 {
        return Err(Error::InvalidParams(format!("a double kite with r >= 2 needs n >= 4, got {n}")));
    }
    let r = ((n + 1) / 3).max(2);
    Ok((r, n - 2 * r))
}

/// Vertex indices `p_0, …, p_{s+1}` of the connecting path of `DK(r, s)`.
pub fn double_kite_path(r: usize, s: usize) -> Vec<usize> {
    (r - 1..=r + s).collect()
}

/// Circulant `d`-regular graph on `h` vertices: `i ~ i ± 1, …, i ± ⌊d/2⌋`,
/// plus the antipode `i + h/2` when `d` is odd.
fn circulant_edges(h: usize, d: usize, offset: usize, edges: &mut Vec<(usize, usize)>) {
    for i in 0..h {
        for k in 1..=d / 2 {
            edges.push((offset + i, offset + (i + k) % h));
        }
        if d % 2 == 1 && i < h / 2 {
            edges.push((offset + i, offset + i + h / 2));
        }
    }
}

/// Validates the parameters of [`joined_regular_pair`] and returns the
/// block size `(n - D + 1) / 2`.
pub fn joined_pair_block_size(n: usize, diameter: usize, degree: usize) -> Result<usize> {
    if diameter < 1 {
        return Err(Error::InvalidParams("path length D must be at least 1".into()));
    }
    if diameter >= n {
        return Err(Error::InvalidParams(format!("path length D = {diameter} must be below n = {n}")));
    }
    let blocks = n - diameter + 1;
    if !blocks.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("n - D + 1 = {blocks} must split into two equal blocks")));
    }
    let h = blocks / 2;
    if degree < 1 || degree >= h {
        return Err(Error::InvalidParams(format!("degree d = {degree} must satisfy 1 <= d < {h}")));
    }
    if degree == 1 && h != 2 {
        return Err(Error::InvalidParams(format!("a 1-regular block on {h} vertices is disconnected")));
    }
    if !(degree * h).is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "no {degree}-regular graph on {h} vertices (odd degree sum)"
        )));
    }
    Ok(h)
}

/// Two circulant `d`-regular blocks on `(n - D + 1)/2` vertices each, joined
/// by a path of `D` edges between the last vertex of the first block and the
/// first vertex of the second.
pub fn joined_regular_pair(n: usize, diameter: usize, degree: usize) -> Result<Graph> {
    let h = joined_pair_block_size(n, diameter, degree)?;
    let second = h + diameter - 1;
    let mut edges = Vec::new();
    circulant_edges(h, degree, 0, &mut edges);
    circulant_edges(h, degree, second, &mut edges);
    for p in h - 1..second {
        edges.push((p, p + 1));
    }
    Graph::from_edges(n, &edges)
}

/// Path indices `p_0, …, p_D` of [`joined_regular_pair`].
pub fn joined_pair_path(n: usize, diameter: usize) -> Vec<usize> {
    let h = (n + 1 - diameter) / 2;
    (h - 1..h + diameter).collect()
}

pub fn path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParams("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParams("complete graph needs n >= 1".into()));
    }
    let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::from_edges(n, &edges)
}

/// `Q_d`: vertices are `d`-bit strings, adjacent at Hamming distance one.
pub fn hypercube(dim: usize) -> Result<Graph> {
    if !(1..=13).contains(&dim) {
        return Err(Error::InvalidParams(format!("hypercube dimension must be in 1..=13, got {dim}")));
    }
    let n = 1usize << dim;
    let edges: Vec<_> =
        (0..n).flat_map(|u| (0..dim).map(move |b| (u, u ^ (1 << b))).filter(|&(u, v)| u < v)).collect();
    Graph::from_edges(n, &edges)
}

/// Erdős–Rényi `G(n, p)` resampled until connected. The same seed always
/// produces the same graph.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("random graph needs n >= 2, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParams(format!("edge probability must lie in (0, 1], got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for _ in 0..MAX_REJECTIONS {
        edges.clear();
        for j in 1..n {
            for i in 0..j {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::SamplingFailure { attempts: MAX_REJECTIONS })
}

/// A named family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstructionSpec {
    DoubleKite { r: usize, s: usize },
    JoinedRegularPair { n: usize, diameter: usize, degree: usize },
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Hypercube { dim: usize },
    RandomConnected { n: usize, p: f64, seed: u64 },
}

impl ConstructionSpec {
    pub fn build(&self) -> Result<Graph> {
        match *self {
            ConstructionSpec::DoubleKite { r, s } => double_kite(r, s),
            ConstructionSpec::JoinedRegularPair { n, diameter, degree } => {
                joined_regular_pair(n, diameter, degree)
            }
            ConstructionSpec::Path { n } => path(n),
            ConstructionSpec::Cycle { n } => cycle(n),
            ConstructionSpec::Complete { n } => complete(n),
            ConstructionSpec::Hypercube { dim } => hypercube(dim),
            ConstructionSpec::RandomConnected { n, p, seed } => random_connected(n, p, seed),
        }
    }

    /// Parses a family name and a `k=v,k=v` parameter list.
    ///
    /// Accepted keys: `double_kite` r, s; `joined_regular_pair` n, D, d;
    /// `path`/`cycle`/`complete` n; `hypercube` d; `random_connected` n, p
    /// and optionally seed (falling back to `default_seed`).
    pub fn parse(family: &str, params: &str, default_seed: u64) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParams(format!("expected key=value, got {item:?}")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |key: &str| -> Result<String> {
            kv.remove(key)
                .ok_or_else(|| Error::InvalidParams(format!("family {family} needs parameter {key}")))
        };
        let int = |s: String| -> Result<usize> {
            s.parse().map_err(|_| Error::InvalidParams(format!("not a nonnegative integer: {s:?}")))
        };
        let spec = match family {
            "double_kite" => ConstructionSpec::DoubleKite { r: int(take("r")?)?, s: int(take("s")?)? },
            "joined_regular_pair" => ConstructionSpec::JoinedRegularPair {
                n: int(take("n")?)?,
                diameter: int(take("D")?)?,
                degree: int(take("d")?)?,
            },
            "path" => ConstructionSpec::Path { n: int(take("n")?)? },
            "cycle" => ConstructionSpec::Cycle { n: int(take("n")?)? },
            "complete" => ConstructionSpec::Complete { n: int(take("n")?)? },
            "hypercube" => ConstructionSpec::Hypercube { dim: int(take("d")?)? },
            "random_connected" => {
                let n = int(take("n")?)?;
                let p = take("p")?;
                let p = p.parse().map_err(|_| Error::InvalidParams(format!("not a probability: {p:?}")))?;
                let seed = match take("seed") {
                    Ok(s) => s.parse().map_err(|_| Error::InvalidParams(format!("not a seed: {s:?}")))?,
                    Err(_) => default_seed,
                };
                ConstructionSpec::RandomConnected { n, p, seed }
            }
            other => return Err(Error::InvalidParams(format!("unknown family {other:?}"))),
        };
        if let Some(extra) = kv.keys().next() {
            return Err(Error::InvalidParams(format!("unknown parameter {extra:?} for {family}")));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_double_kite() {
        let g = double_kite(8, 6).unwrap();
        assert_eq!(g.vertex_count(), 22);
        assert_eq!(g.edge_count(), 63);
        assert_eq!(double_kite_path(8, 6), (7..=14).collect::<Vec<_>>());
    }

    #[test]
    fn degenerate_double_kites_are_paths() {
        assert_eq!(double_kite(2, 0).unwrap(), path(4).unwrap());
        assert_eq!(double_kite(1, 1).unwrap(), path(3).unwrap());
        assert_eq!(double_kite(1, 0).unwrap(), path(2).unwrap());
        assert!(matches!(double_kite(0, 3), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn double_kite_degrees_and_diameter() {
        for r in 3..7 {
            for s in 1..5 {
                let g = double_kite(r, s).unwrap();
                let mut degs = g.degrees().to_vec();
                degs.sort_unstable();
                let mut want = vec![2; s];
                want.extend(vec![r - 1; 2 * (r - 1)]);
                want.extend([r, r]);
                want.sort_unstable();
                assert_eq!(degs, want, "DK({r},{s})");
                assert_eq!(g.diameter(), Some(s + 3));
            }
        }
    }

    #[test]
    fn joined_pair_examples() {
        let g = joined_regular_pair(13, 4, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (13, 14));
        assert_eq!(g.volume(), (13 - 4 + 1) * 2 + 2 * 4);
        assert!(matches!(joined_regular_pair(10, 4, 3), Err(Error::InvalidParams(_))));
        assert!(matches!(joined_regular_pair(13, 4, 5), Err(Error::InvalidParams(_))));
        // odd degree on an odd block is infeasible
        assert!(matches!(joined_regular_pair(13, 4, 3), Err(Error::InvalidParams(_))));
        assert_eq!(joined_pair_path(13, 4), vec![4, 5, 6, 7, 8]);
    }

    #[test]
    fn joined_pair_degrees() {
        let (n, dd, d) = (41, 6, 5);
        let g = joined_regular_pair(n, dd, d).unwrap();
        let path = joined_pair_path(n, dd);
        for u in 0..n {
            let want = if u == path[0] || u == path[dd] {
                d + 1
            } else if path.contains(&u) {
                2
            } else {
                d
            };
            assert_eq!(g.degree(u), want, "vertex {u}");
        }
        assert_eq!(g.volume(), (n - dd + 1) * d + 2 * dd);
    }

    #[test]
    fn classic_families() {
        let q3 = hypercube(3).unwrap();
        assert_eq!((q3.vertex_count(), q3.edge_count()), (8, 12));
        assert!(q3.degrees().iter().all(|&d| d == 3));
        let c5 = cycle(5).unwrap();
        assert!(c5.degrees().iter().all(|&d| d == 2));
        assert_eq!(complete(4).unwrap().edge_count(), 6);
        assert!(cycle(2).is_err());
        assert!(hypercube(0).is_err());
    }

    #[test]
    fn random_graphs() {
        assert_eq!(random_connected(5, 1.0, 9).unwrap(), complete(5).unwrap());
        assert_eq!(random_connected(2, 1.0, 0).unwrap(), complete(2).unwrap());
        let a = random_connected(30, 0.2, 42).unwrap();
        assert!(a.is_connected());
        assert_eq!(a, random_connected(30, 0.2, 42).unwrap());
        assert_eq!(random_connected(40, 0.001, 1), Err(Error::SamplingFailure { attempts: MAX_REJECTIONS }));
        assert!(random_connected(5, 0.0, 1).is_err());
        assert!(random_connected(5, 1.5, 1).is_err());
    }

    #[test]
    fn parse_specs() {
        assert_eq!(
            ConstructionSpec::parse("double_kite", "r=8,s=6", 0).unwrap(),
            ConstructionSpec::DoubleKite { r: 8, s: 6 }
        );
        assert_eq!(
            ConstructionSpec::parse("joined_regular_pair", "n=22, D=7, d=7", 0).unwrap(),
            ConstructionSpec::JoinedRegularPair { n: 22, diameter: 7, degree: 7 }
        );
        assert_eq!(
            ConstructionSpec::parse("random_connected", "n=5,p=0.5", 7).unwrap(),
            ConstructionSpec::RandomConnected { n: 5, p: 0.5, seed: 7 }
        );
        assert!(ConstructionSpec::parse("double_kite", "r=8", 0).is_err());
        assert!(ConstructionSpec::parse("double_kite", "r=8,s=1,x=2", 0).is_err());
        assert!(ConstructionSpec::parse("necklace", "n=8", 0).is_err());
    }
}
