//! Simple undirected labelled graphs and their edge-list serialization.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{GirgError, Result};

/// Labelled simple graph on `0..n`, stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSample {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl GraphSample {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Builds a graph from an edge list. Duplicates are merged; self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        for &(u, v) in edges {
            if u == v {
                return Err(GirgError::InvalidParameter {
                    name: "edges",
                    reason: format!("self-loop at {u}"),
                });
            }
            if u >= n || v >= n {
                return Err(GirgError::InvalidParameter {
                    name: "edges",
                    reason: format!("edge ({u}, {v}) outside 0..{n}"),
                });
            }
        }
        Ok(Self::from_edges_unchecked(n, edges.iter().copied()))
    }

    pub(crate) fn from_edges_unchecked(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            pairs.push((u as u32, v as u32));
            pairs.push((v as u32, u as u32));
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Self {
            n,
            offsets,
            neighbors: pairs.into_iter().map(|(_, v)| v).collect(),
        }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges_unchecked(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the
    /// given order. Returns the graph and the map back to original labels.
    pub fn induced(&self, vertices: &[usize]) -> (GraphSample, Vec<usize>) {
        let mut index = vec![u32::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i as u32;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &u in self.neighbors(v) {
                let j = index[u as usize];
                if j != u32::MAX && (j as usize) > i {
                    edges.push((i, j as usize));
                }
            }
        }
        (Self::from_edges_unchecked(vertices.len(), edges), vertices.to_vec())
    }

    /// Average local clustering coefficient (vertices of degree < 2 count as 0).
    pub fn average_clustering(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let total: f64 = (0..self.n)
            .map(|u| {
                let nb = self.neighbors(u);
                let k = nb.len();
                if k < 2 {
                    return 0.0;
                }
                let mut links = 0usize;
                for (i, &a) in nb.iter().enumerate() {
                    let na = self.neighbors(a as usize);
                    links += nb[i + 1..].iter().filter(|b| na.binary_search(b).is_ok()).count();
                }
                2.0 * links as f64 / (k * (k - 1)) as f64
            })
            .sum();
        total / self.n as f64
    }
}

/// JSON header written on the first line of an edge-list file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeListHeader {
    pub n: usize,
    pub params_digest: String,
    pub seed: u64,
}

/// Writes the header line followed by one `u v` line per edge (`u < v`,
/// 0-indexed, sorted).
pub fn write_edge_list<W: Write>(g: &GraphSample, header: &EdgeListHeader, mut out: W) -> std::io::Result<()> {
    let json = serde_json::to_string(header).map_err(std::io::Error::other)?;
    writeln!(out, "{json}")?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<(EdgeListHeader, GraphSample)> {
    let mut lines = input.lines();
    let first = lines
        .next()
        .ok_or_else(|| GirgError::Parse("empty edge-list file".into()))?
        .map_err(|e| GirgError::Parse(e.to_string()))?;
    let header: EdgeListHeader =
        serde_json::from_str(&first).map_err(|e| GirgError::Parse(format!("bad header: {e}")))?;
    let mut edges = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| GirgError::Parse(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => {
                return Err(GirgError::Parse(format!(
                    "line {}: expected `u v`, got `{line}`",
                    lineno + 2
                )))
            }
        }
    }
    let g = GraphSample::from_edges(header.n, &edges)?;
    Ok((header, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_queries() {
        let g = GraphSample::from_edges(4, &[(0, 1), (1, 2), (2, 1), (3, 0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(1, 0) && g.has_edge(0, 3) && !g.has_edge(0, 2));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (1, 2)]);
        assert!(GraphSample::from_edges(3, &[(1, 1)]).is_err());
        assert!(GraphSample::from_edges(3, &[(1, 3)]).is_err());
        assert_eq!(GraphSample::complete(5).edge_count(), 10);
    }

    #[test]
    fn induced_subgraph() {
        let g = GraphSample::complete(5);
        let (h, map) = g.induced(&[4, 1, 2]);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(map, vec![4, 1, 2]);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = GraphSample::from_edges(5, &[(3, 4), (0, 2), (1, 0)]).unwrap();
        let header = EdgeListHeader {
            n: 5,
            params_digest: "abc".into(),
            seed: 7,
        };
        let mut buf = Vec::new();
        write_edge_list(&g, &header, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().skip(1).collect::<Vec<_>>(), vec!["0 1", "0 2", "3 4"]);
        let (h2, g2) = read_edge_list(&buf[..]).unwrap();
        assert_eq!(h2, header);
        assert_eq!(g2, g);
        assert!(read_edge_list(&b"{\"n\":2,\"params_digest\":\"x\",\"seed\":1}\n0 x\n"[..]).is_err());
    }

    #[test]
    fn clustering_of_triangle_and_star() {
        assert_eq!(GraphSample::complete(3).average_clustering(), 1.0);
        let star = GraphSample::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.average_clustering(), 0.0);
    }
}
