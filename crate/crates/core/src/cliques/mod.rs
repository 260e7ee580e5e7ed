//! Exact clique counting and clique number.
//!
//! Both routines walk the vertices in degeneracy order and work inside the
//! forward neighbourhood of each vertex, which has at most `degeneracy`
//! members. That neighbourhood is copied into a dense local bitset so the
//! inner loops are word-wise intersections.

pub mod estimators;

use serde::Serialize;

use crate::exec::Exec;
use crate::samplers::GraphSample;

pub use estimators::*;

/// Number of `k`-cliques of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CliqueStats {
    pub k: usize,
    pub count: u64,
    pub n: usize,
}

impl CliqueStats {
    pub fn compute(g: &GraphSample, k: usize) -> Self {
        Self {
            k,
            count: count_k_cliques(g, k),
            n: g.n(),
        }
    }
}

/// Vertices ordered by repeatedly removing a vertex of minimum remaining degree.
/// Returns `(order, rank)` with `rank[order[i]] = i`.
pub fn degeneracy_order(g: &GraphSample) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = 0;
    while order.len() < n {
        cur = cur.min(max_deg);
        while buckets[cur].is_empty() {
            cur += 1;
        }
        let v = buckets[cur].pop().unwrap();
        // stale entries: degree changed after insertion
        if removed[v] || deg[v] != cur {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            let u = u as usize;
            if !removed[u] {
                deg[u] -= 1;
                buckets[deg[u]].push(u);
            }
        }
        cur = cur.saturating_sub(1);
    }
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    (order, rank)
}

/// Dense adjacency among a small vertex set.
struct LocalGraph {
    m: usize,
    words: usize,
    rows: Vec<u64>,
}

impl LocalGraph {
    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    fn full(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.words];
        for i in 0..self.m {
            v[i / 64] |= 1 << (i % 64);
        }
        v
    }
}

/// Builds the local graph on `verts` using `slot` (all `u32::MAX` on entry and exit).
/// With `forward_only`, row `i` holds only neighbours `j > i`.
fn local_graph(g: &GraphSample, verts: &[usize], slot: &mut [u32], forward_only: bool) -> LocalGraph {
    let m = verts.len();
    let words = m.div_ceil(64).max(1);
    let mut rows = vec![0u64; m * words];
    for (i, &v) in verts.iter().enumerate() {
        slot[v] = i as u32;
    }
    for (i, &v) in verts.iter().enumerate() {
        for &u in g.neighbors(v) {
            let j = slot[u as usize];
            if j != u32::MAX && (!forward_only || j as usize > i) {
                rows[i * words + j as usize / 64] |= 1 << (j % 64);
            }
        }
    }
    for &v in verts {
        slot[v] = u32::MAX;
    }
    LocalGraph { m, words, rows }
}

fn forward_neighbours(g: &GraphSample, rank: &[usize], v: usize) -> Vec<usize> {
    g.neighbors(v)
        .iter()
        .map(|&u| u as usize)
        .filter(|&u| rank[u] > rank[v])
        .collect()
}

fn popcount(bits: &[u64]) -> u64 {
    bits.iter().map(|w| w.count_ones() as u64).sum()
}

/// Iterates the set bits of a bitset.
fn for_each_bit(bits: &[u64], mut f: impl FnMut(usize)) {
    for (wi, &w) in bits.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            f(wi * 64 + b);
            w &= w - 1;
        }
    }
}

/// Counts `depth`-cliques inside `cand` of a forward-only local graph.
fn count_in(lg: &LocalGraph, cand: &[u64], depth: usize) -> u64 {
    if depth == 1 {
        return popcount(cand);
    }
    let mut total = 0;
    let mut next = vec![0u64; lg.words];
    for_each_bit(cand, |i| {
        let row = lg.row(i);
        let mut any = false;
        for ((n, &c), &r) in next.iter_mut().zip(cand).zip(row) {
            *n = c & r;
            any |= *n != 0;
        }
        if any {
            total += count_in(lg, &next, depth - 1);
        }
    });
    total
}

const VERTEX_BLOCK: u64 = 256;

/// Exact number of `k`-cliques. `k = 0` gives 1, `k = 1` gives `n`, `k = 2` the edge count.
pub fn count_k_cliques(g: &GraphSample, k: usize) -> u64 {
    count_k_cliques_with(g, k, Exec::default())
}

pub fn count_k_cliques_with(g: &GraphSample, k: usize, exec: Exec) -> u64 {
    match k {
        0 => return 1,
        1 => return g.n() as u64,
        2 => return g.edge_count() as u64,
        _ => {}
    }
    let n = g.n();
    let (order, rank) = degeneracy_order(g);
    exec.map_blocks(n as u64, VERTEX_BLOCK, |_, start, len| {
        let mut slot = vec![u32::MAX; n];
        let mut total = 0u64;
        for &v in &order[start as usize..(start + len) as usize] {
            let fwd = forward_neighbours(g, &rank, v);
            if fwd.len() < k - 1 {
                continue;
            }
            let lg = local_graph(g, &fwd, &mut slot, true);
            total += count_in(&lg, &lg.full(), k - 1);
        }
        total
    })
    .into_iter()
    .sum()
}

pub fn count_triangles(g: &GraphSample) -> u64 {
    count_k_cliques(g, 3)
}

/// Greedy colouring of `cand`; returns vertices with their colour, colours ascending.
fn colour_sort(lg: &LocalGraph, cand: &[u64], out: &mut Vec<(usize, usize)>) {
    out.clear();
    let mut uncoloured = cand.to_vec();
    let mut colour = 0;
    let mut avail = vec![0u64; lg.words];
    while uncoloured.iter().any(|&w| w != 0) {
        colour += 1;
        avail.copy_from_slice(&uncoloured);
        while let Some(wi) = avail.iter().position(|&w| w != 0) {
            let v = wi * 64 + avail[wi].trailing_zeros() as usize;
            out.push((v, colour));
            uncoloured[wi] &= !(1 << (v % 64));
            avail[wi] &= !(1 << (v % 64));
            for (a, &r) in avail.iter_mut().zip(lg.row(v)) {
                *a &= !r;
            }
        }
    }
}

fn expand(lg: &LocalGraph, size: usize, cand: &mut [u64], best: &mut usize) {
    let mut order = Vec::new();
    colour_sort(lg, cand, &mut order);
    for &(v, colour) in order.iter().rev() {
        if size + colour <= *best {
            return;
        }
        let next: Vec<u64> = cand.iter().zip(lg.row(v)).map(|(&c, &r)| c & r).collect();
        if next.iter().all(|&w| w == 0) {
            *best = (*best).max(size + 1);
        } else {
            let mut next = next;
            expand(lg, size + 1, &mut next, best);
        }
        cand[v / 64] &= !(1 << (v % 64));
    }
}

/// Size of a largest clique. The empty graph has clique number 0 and an
/// edgeless graph with vertices has clique number 1.
pub fn clique_number(g: &GraphSample) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    if g.edge_count() == 0 {
        return 1;
    }
    let (order, rank) = degeneracy_order(g);
    let mut best = 2;
    let mut slot = vec![u32::MAX; n];
    // high-core vertices first: they carry the large cliques and tighten the bound early
    for &v in order.iter().rev() {
        let fwd = forward_neighbours(g, &rank, v);
        if fwd.len() < best {
            continue;
        }
        let lg = local_graph(g, &fwd, &mut slot, false);
        let mut cand = lg.full();
        expand(&lg, 1, &mut cand, &mut best);
    }
    best
}

/// Number of `k`-cliques containing each vertex (`k >= 1`).
pub fn k_clique_vertex_incidence(g: &GraphSample, k: usize) -> Vec<u64> {
    assert!(k >= 1);
    let n = g.n();
    let mut inc = vec![0u64; n];
    match k {
        1 => return vec![1; n],
        2 => return (0..n).map(|v| g.degree(v) as u64).collect(),
        _ => {}
    }
    let (order, rank) = degeneracy_order(g);
    let mut slot = vec![u32::MAX; n];
    let mut local_inc = Vec::new();
    for &v in &order {
        let fwd = forward_neighbours(g, &rank, v);
        if fwd.len() < k - 1 {
            continue;
        }
        let lg = local_graph(g, &fwd, &mut slot, true);
        local_inc.clear();
        local_inc.resize(lg.m, 0u64);
        let mut path = Vec::new();
        let c = incidence_in(&lg, &lg.full(), k - 1, &mut path, &mut local_inc);
        inc[v] += c;
        for (i, &u) in fwd.iter().enumerate() {
            inc[u] += local_inc[i];
        }
    }
    inc
}

fn incidence_in(lg: &LocalGraph, cand: &[u64], depth: usize, path: &mut Vec<usize>, inc: &mut [u64]) -> u64 {
    if depth == 1 {
        let c = popcount(cand);
        for_each_bit(cand, |i| inc[i] += 1);
        for &p in path.iter() {
            inc[p] += c;
        }
        return c;
    }
    let mut total = 0;
    let mut next = vec![0u64; lg.words];
    for_each_bit(cand, |i| {
        for ((n, &c), &r) in next.iter_mut().zip(cand).zip(lg.row(i)) {
            *n = c & r;
        }
        path.push(i);
        total += incidence_in(lg, &next, depth - 1, path, inc);
        path.pop();
    });
    total
}

/// Induced subgraph on vertices of weight at most `w_c`, with the map from
/// new labels back to original ones.
pub fn subgraph_leq_weight(g: &GraphSample, weights: &[f64], w_c: f64) -> (GraphSample, Vec<usize>) {
    assert_eq!(weights.len(), g.n());
    let keep: Vec<usize> = (0..g.n()).filter(|&v| weights[v] <= w_c).collect();
    g.induced(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> GraphSample {
        GraphSample::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(count_triangles(&GraphSample::complete(5)), 10);
        assert_eq!(count_triangles(&cycle(5)), 0);
        let diamond = GraphSample::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(count_triangles(&diamond), 2);
        assert_eq!(count_k_cliques(&GraphSample::complete(6), 4), 15);
        assert_eq!(count_k_cliques(&GraphSample::empty(7), 3), 0);
        assert_eq!(count_k_cliques(&GraphSample::empty(7), 1), 7);
        assert_eq!(clique_number(&GraphSample::complete(7)), 7);
        assert_eq!(clique_number(&cycle(5)), 2);
        assert_eq!(clique_number(&GraphSample::empty(0)), 0);
        assert_eq!(clique_number(&GraphSample::empty(3)), 1);
    }

    #[test]
    fn incidence_sums_to_k_times_count() {
        let g = GraphSample::complete(6);
        let inc = k_clique_vertex_incidence(&g, 3);
        assert!(inc.iter().all(|&c| c == 10));
        let diamond = GraphSample::from_edges(5, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k_clique_vertex_incidence(&diamond, 3), vec![1, 2, 2, 1, 0]);
    }

    #[test]
    fn weight_filter() {
        let g = GraphSample::complete(4);
        let w = [1.0, 5.0, 2.0, 9.0];
        let (h, map) = subgraph_leq_weight(&g, &w, 4.0);
        assert_eq!(map, vec![0, 2]);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(subgraph_leq_weight(&g, &w, f64::INFINITY).0, g);
        assert_eq!(subgraph_leq_weight(&g, &w, 0.5).0.n(), 0);
    }
}
