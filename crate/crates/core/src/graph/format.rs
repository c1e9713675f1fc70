//! graph6 (short form) and plain-text edge lists.

use super::{pair_count, Graph};
use crate::error::{Error, Result};

/// Largest vertex count expressible in the one-byte graph6 header.
pub const MAX_GRAPH6_VERTICES: usize = 62;

impl Graph {
    /// Encodes the graph in graph6 short form.
    pub fn to_graph6(&self) -> Result<String> {
        let n = self.vertex_count();
        if n > MAX_GRAPH6_VERTICES {
            return Err(Error::Format(format!(
                "graph6 short form holds at most {MAX_GRAPH6_VERTICES} vertices, got {n}"
            )));
        }
        let mut out = Vec::with_capacity(1 + pair_count(n).div_ceil(6));
        out.push(n as u8 + 63);
        let mut group = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                group = group << 1 | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(group + 63);
                    group = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((group << (6 - filled)) + 63);
        }
        Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
    }

    /// Decodes graph6 short form. Trailing whitespace is ignored; nonzero
    /// padding bits are rejected so that re-encoding is byte-identical.
    pub fn from_graph6(text: &str) -> Result<Graph> {
        let bytes = text.trim_end().as_bytes();
        let (&head, body) = bytes.split_first().ok_or_else(|| Error::Format("empty graph6 string".into()))?;
        if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
            return Err(Error::Format(format!("byte {b} outside the graph6 range 63..=126")));
        }
        if head == 126 {
            return Err(Error::Format("long-form graph6 (n > 62) is not supported".into()));
        }
        let n = (head - 63) as usize;
        if n == 0 {
            return Err(Error::Format("graph6 string encodes the empty graph".into()));
        }
        let pairs = pair_count(n);
        if body.len() != pairs.div_ceil(6) {
            return Err(Error::Format(format!(
                "expected {} data bytes for n = {n}, found {}",
                pairs.div_ceil(6),
                body.len()
            )));
        }
        let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
        if (pairs..body.len() * 6).any(bit) {
            return Err(Error::Format("nonzero padding bits".into()));
        }
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bit(k) {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Graph::from_edges(n, &edges)
    }

    /// Text form: a header line `n m` followed by one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

/// Parses the `n m` / `u v` edge-list text format. Blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Format("empty edge list".into()))?;
    let (n, m) = parse_pair(header)?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        edges.push(parse_pair(line)?);
    }
    if edges.len() != m {
        return Err(Error::Format(format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, &edges)
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Format(format!("expected two integers, got {line:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_is_a_underscore() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.to_graph6().unwrap(), "A_");
        assert_eq!(Graph::from_graph6("A_\n").unwrap(), k2);
    }

    #[test]
    fn known_encodings() {
        // 5 vertices, edges 0-2, 0-4, 1-3, 3-4
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(g.to_graph6().unwrap(), "DQc");
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(Graph::from_graph6(&p4.to_graph6().unwrap()).unwrap(), p4);
        let single = Graph::from_edges(1, &[]).unwrap();
        assert_eq!(single.to_graph6().unwrap(), "@");
    }

    #[test]
    fn rejects_malformed_graph6() {
        assert!(matches!(Graph::from_graph6(""), Err(Error::Format(_))));
        assert!(matches!(Graph::from_graph6("A"), Err(Error::Format(_))));
        assert!(matches!(Graph::from_graph6("A__"), Err(Error::Format(_))));
        assert!(matches!(Graph::from_graph6("A\x20"), Err(Error::Format(_))));
        // K2 with a stray padding bit
        assert!(matches!(Graph::from_graph6("A`"), Err(Error::Format(_))));
    }

    #[test]
    fn short_form_limit() {
        let big = Graph::from_edges(63, &[(0, 1)]).unwrap();
        assert!(matches!(big.to_graph6(), Err(Error::Format(_))));
        let ok = Graph::from_edges(62, &[(0, 61)]).unwrap();
        assert_eq!(Graph::from_graph6(&ok.to_graph6().unwrap()).unwrap(), ok);
    }

    #[test]
    fn edge_list_text() {
        let g = parse_edge_list("4 3\n0 1\n1 2\n\n2 3\n").unwrap();
        assert_eq!(g.to_edge_list(), "4 3\n0 1\n1 2\n2 3\n");
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("3 1\n0 x\n").is_err());
        assert!(matches!(parse_edge_list("3 1\n1 1\n"), Err(Error::InvalidGraph(_))));
    }
}
