//! Brute-force canonical forms for graphs on at most eight vertices.
//!
//! The canonical form of a graph is the smallest upper-triangle mask (see
//! [`Graph::from_upper_mask`]) over all `n!` relabelings.

use crate::error::{Error, Result};
use crate::graph::{pair_count, Graph};

/// Largest vertex count handled by exhaustive relabeling.
pub const MAX_CANONICAL_VERTICES: usize = 8;

fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    j * (j - 1) / 2 + i
}

/// Every relabeling of `0..n`, precomputed as a map on pair indices.
pub struct Relabelings {
    n: usize,
    pair_maps: Vec<Vec<u8>>,
}

impl Relabelings {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_CANONICAL_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count for exhaustive relabeling",
                value: n,
                limit: MAX_CANONICAL_VERTICES,
            });
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut pair_maps = Vec::new();
        loop {
            let mut map = vec![0u8; pair_count(n)];
            for j in 1..n {
                for i in 0..j {
                    map[pair_index(i, j)] = pair_index(perm[i], perm[j]) as u8;
                }
            }
            pair_maps.push(map);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(Relabelings { n, pair_maps })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Images of `mask` under every relabeling (with repetitions).
    pub fn images(&self, mask: u64) -> impl Iterator<Item = u64> + '_ {
        self.pair_maps.iter().map(move |map| {
            let mut out = 0u64;
            let mut bits = mask;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                out |= 1 << map[k];
            }
            out
        })
    }

    pub fn canonical_mask(&self, mask: u64) -> u64 {
        self.images(mask).min().unwrap_or(mask)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Canonical relabeling of a graph with at most eight vertices.
pub fn canonical_form(g: &Graph) -> Result<Graph> {
    let n = g.vertex_count();
    let table = Relabelings::new(n)?;
    let mask = g.upper_mask().expect("n <= 8 fits a mask");
    Graph::from_upper_mask(n, table.canonical_mask(mask))
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// Connectivity of the graph encoded by `mask` on `n <= 11` vertices,
/// without building a [`Graph`].
pub fn mask_is_connected(n: usize, mask: u64) -> bool {
    let mut rows = [0u16; 11];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if mask >> k & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            k += 1;
        }
    }
    let all: u16 = if n >= 16 { u16::MAX } else { (1 << n) - 1 };
    let mut seen: u16 = 1;
    let mut frontier: u16 = 1;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= rows[u];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen & all == all
}

/// Number of isomorphism classes of connected graphs on `n` vertices, found
/// by marking the orbit of every connected mask not yet seen.
pub fn count_connected_classes(n: usize) -> Result<usize> {
    let table = Relabelings::new(n)?;
    let total = 1u64 << pair_count(n);
    let mut seen = vec![0u64; (total as usize).div_ceil(64)];
    let mut classes = 0;
    for mask in 0..total {
        if seen[(mask / 64) as usize] >> (mask % 64) & 1 == 1 || !mask_is_connected(n, mask) {
            continue;
        }
        classes += 1;
        for image in table.images(mask) {
            seen[(image / 64) as usize] |= 1 << (image % 64);
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cycle, path};

    #[test]
    fn relabeling_counts() {
        assert_eq!(Relabelings::new(4).unwrap().pair_maps.len(), 24);
        assert!(Relabelings::new(9).is_err());
    }

    #[test]
    fn paths_are_isomorphic_to_relabelings() {
        let p = path(5).unwrap();
        let q = p.permuted(&[2, 4, 0, 1, 3]).unwrap();
        assert!(are_isomorphic(&p, &q).unwrap());
        assert!(!are_isomorphic(&p, &cycle(5).unwrap()).unwrap());
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(!are_isomorphic(&p, &star).unwrap());
    }

    #[test]
    fn mask_connectivity_matches_bfs() {
        for n in 1..=5 {
            for mask in 0..1u64 << pair_count(n) {
                let g = Graph::from_upper_mask(n, mask).unwrap();
                assert_eq!(mask_is_connected(n, mask), g.is_connected(), "n={n} mask={mask}");
            }
        }
    }

    #[test]
    fn small_class_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| count_connected_classes(n).unwrap()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }
}
