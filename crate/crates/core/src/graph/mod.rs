//! Simple undirected graphs stored as bitset adjacency rows.
//!
//! Vertices are the integers `0..n`. Rows are packed into `u64` words so the
//! exhaustive search can build and inspect millions of small graphs cheaply;
//! degrees are cached at construction.

mod format;

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

pub use format::{parse_edge_list, MAX_GRAPH6_VERTICES};

/// Upper bound on the vertex count accepted by the constructors.
pub const MAX_VERTICES: usize = 10_000;

/// An immutable simple graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    degrees: Vec<usize>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Degree and distance summary of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphMetrics {
    pub degrees: Vec<usize>,
    pub volume: usize,
    pub max_degree: usize,
    /// `None` marks an infinite diameter (disconnected graph).
    pub diameter: Option<usize>,
    pub connected: bool,
}

/// Number of vertex pairs `C(n, 2)`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl Graph {
    fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { what: "vertex count", value: n, limit: MAX_VERTICES });
        }
        let words = n.div_ceil(64);
        Ok(Graph { n, words, rows: vec![0; n * words], degrees: vec![0; n], m: 0 })
    }

    /// Inserts `{u, v}`; returns false if it was already present.
    fn insert(&mut self, u: usize, v: usize) -> bool {
        let (w, b) = (v / 64, 1u64 << (v % 64));
        if self.rows[u * self.words + w] & b != 0 {
            return false;
        }
        self.rows[u * self.words + w] |= b;
        self.rows[v * self.words + u / 64] |= 1u64 << (u % 64);
        self.degrees[u] += 1;
        self.degrees[v] += 1;
        self.m += 1;
        true
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse to one; loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            g.insert(u, v);
        }
        Ok(g)
    }

    /// Builds the graph whose upper-triangle bits are given by `mask`, in
    /// graph6 order: bit `k` is the `k`-th pair `(i, j)`, `i < j`, enumerated
    /// column by column (`j = 1..n`, `i = 0..j`).
    pub fn from_upper_mask(n: usize, mask: u64) -> Result<Self> {
        let pairs = pair_count(n);
        if pairs > 64 {
            return Err(Error::TooLarge { what: "vertex count for a 64-bit mask", value: n, limit: 11 });
        }
        if pairs < 64 && mask >> pairs != 0 {
            return Err(Error::InvalidGraph(format!(
                "mask {mask:#x} has bits beyond the {pairs} vertex pairs"
            )));
        }
        let mut g = Graph::empty(n)?;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if mask >> k & 1 == 1 {
                    g.insert(i, j);
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// Inverse of [`Graph::from_upper_mask`]; `None` when `C(n,2) > 64`.
    pub fn upper_mask(&self) -> Option<u64> {
        if pair_count(self.n) > 64 {
            return None;
        }
        let mut mask = 0u64;
        let mut k = 0;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    mask |= 1 << k;
                }
                k += 1;
            }
        }
        Some(mask)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, u: usize) -> usize {
        self.degrees[u]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// `vol(G)`, the sum of all degrees.
    pub fn volume(&self) -> usize {
        2 * self.m
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    /// Neighbors of `u` in increasing order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::with_capacity(self.n);
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.bfs_distances(u)[v]
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Maximum BFS eccentricity, or `None` if some pair is unreachable.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.n {
            for d in self.bfs_distances(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    pub fn metrics(&self) -> GraphMetrics {
        let diameter = self.diameter();
        GraphMetrics {
            degrees: self.degrees.clone(),
            volume: self.volume(),
            max_degree: self.max_degree(),
            diameter,
            connected: diameter.is_some(),
        }
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u] == Some(true);
                for v in self.neighbors(u) {
                    match side[v] {
                        None => {
                            side[v] = Some(!su);
                            queue.push_back(v);
                        }
                        Some(sv) if sv == su => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Edges whose removal increases the number of connected components,
    /// as `(u, v)` with `u < v`, sorted.
    pub fn bridges(&self) -> Vec<(usize, usize)> {
        // Iterative low-link DFS.
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut out = Vec::new();
        let mut timer = 0;
        let adj: Vec<Vec<usize>> = (0..n).map(|u| self.neighbors(u).collect()).collect();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent, next neighbor position)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (u, parent, ref mut pos)) = stack.last_mut() {
                if let Some(&v) = adj[u].get(*pos) {
                    *pos += 1;
                    if v == parent {
                        continue;
                    }
                    if disc[v] == usize::MAX {
                        disc[v] = timer;
                        low[v] = timer;
                        timer += 1;
                        stack.push((v, u, 0));
                    } else {
                        low[u] = low[u].min(disc[v]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if low[u] > disc[parent] {
                            out.push((parent.min(u), parent.max(u)));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Number of edges with exactly one endpoint in `subset`. Duplicate
    /// entries in `subset` are ignored.
    pub fn cut_edges_between(&self, subset: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &u in subset {
            inside[u] = true;
        }
        self.edges().filter(|&(u, v)| inside[u] != inside[v]).count()
    }

    /// Copy of the graph without the edge `{u, v}`.
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        if g.has_edge(u, v) {
            g.rows[u * g.words + v / 64] &= !(1u64 << (v % 64));
            g.rows[v * g.words + u / 64] &= !(1u64 << (u % 64));
            g.degrees[u] -= 1;
            g.degrees[v] -= 1;
            g.m -= 1;
        }
        g
    }

    /// Relabels vertex `u` as `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidParams(format!(
                "permutation has length {}, graph has {} vertices",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParams("not a permutation".into()));
            }
        }
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n, &edges)
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for v in self.neighbors(u) {
                    if !std::mem::replace(&mut seen[v], true) {
                        stack.push(v);
                    }
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn edge_list_basics() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.edge_count(), 1);
        let p4 = path(4);
        assert_eq!(p4.degrees(), &[1, 2, 2, 1]);
        assert_eq!(Graph::from_edges(3, &[(0, 0)]), Err(Error::InvalidGraph("self-loop at vertex 0".into())));
        assert!(matches!(Graph::from_edges(3, &[(0, 3)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::from_edges(0, &[]), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degrees(), &[1, 2, 1]);
    }

    #[test]
    fn metrics_of_small_graphs() {
        let m = path(5).metrics();
        assert_eq!(m.degrees, vec![1, 2, 2, 2, 1]);
        assert_eq!((m.volume, m.max_degree, m.diameter, m.connected), (8, 2, Some(4), true));

        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let m = k4.metrics();
        assert_eq!((m.volume, m.max_degree, m.diameter), (12, 3, Some(1)));

        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let m = split.metrics();
        assert_eq!(m.diameter, None);
        assert!(!m.connected);
        assert_eq!(split.component_count(), 2);
    }

    #[test]
    fn bridges_of_trees_and_cycles() {
        assert_eq!(path(4).bridges(), vec![(0, 1), (1, 2), (2, 3)]);
        assert!(cycle(4).bridges().is_empty());
        // triangle with a pendant vertex
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(g.bridges(), vec![(2, 3)]);
    }

    #[test]
    fn cut_counts() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.cut_edges_between(&[0]), 1);
        assert_eq!(cycle(4).cut_edges_between(&[0, 1]), 2);
        assert_eq!(cycle(4).cut_edges_between(&[]), 0);
    }

    #[test]
    fn mask_round_trip() {
        let p4 = path(4);
        let mask = p4.upper_mask().unwrap();
        // pairs: (0,1)=0 (0,2)=1 (1,2)=2 (0,3)=3 (1,3)=4 (2,3)=5
        assert_eq!(mask, 0b100101);
        assert_eq!(Graph::from_upper_mask(4, mask).unwrap(), p4);
        assert!(Graph::from_upper_mask(3, 0b1000).is_err());
    }

    #[test]
    fn bipartite_detection() {
        assert!(path(5).is_bipartite());
        assert!(cycle(6).is_bipartite());
        assert!(!cycle(5).is_bipartite());
    }

    #[test]
    fn permutation_preserves_structure() {
        let g = path(4).permuted(&[3, 1, 0, 2]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(3, 1) && g.has_edge(1, 0) && g.has_edge(0, 2));
        assert!(path(4).permuted(&[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn wide_rows() {
        let g = path(130);
        assert_eq!(g.neighbors(64).collect::<Vec<_>>(), vec![63, 65]);
        assert_eq!(g.diameter(), Some(129));
        assert_eq!(g.bridges().len(), 129);
    }
}
