//! Cell-grid acceleration of the GIRG sampler for low dimension.
//!
//! Vertices are bucketed into weight layers `[w0 2^i, w0 2^{i+1})`. For each
//! pair of layers the largest possible per-coordinate separation `R` of an
//! adjacent pair is known, so a grid with cells of side `>= R` only needs the
//! `3^d` surrounding cells as candidates. Every candidate is tested with the
//! same predicate as the all-pairs sampler, so both produce identical graphs
//! from the same positions.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::exec::Exec;
use crate::model::{ModelParams, WeightSequence};
use crate::samplers::{girg_from_positions, sample_positions, GraphSample, Positions};
use crate::torus::Connector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    /// Above this dimension the naive sampler is used.
    pub max_dim: usize,
    /// Upper bound on cells per grid (`g^d`).
    pub max_cells: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            max_dim: 8,
            max_cells: 1 << 24,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GridReport {
    /// The dimension exceeded the limit and the all-pairs sampler was used.
    pub fell_back_to_naive: bool,
    pub layers: usize,
    /// Layer pairs handled with a grid.
    pub grid_layer_pairs: usize,
    /// Layer pairs scanned in full: the threshold left fewer than 3 cells per
    /// side, or the cell lookups would cost more than the scan.
    pub naive_layer_pairs: usize,
    pub candidate_pairs: u64,
}

struct Layer {
    vertices: Vec<usize>,
    max_weight: f64,
    max_factor: f64,
}

/// Vertices of one layer sorted by cell index for grid resolution `g`.
struct Bucketed {
    cells: HashMap<u64, (usize, usize)>,
    order: Vec<usize>,
}

fn cell_coord(x: f64, g: u64) -> u64 {
    ((x * g as f64) as u64).min(g - 1)
}

fn bucket(layer: &Layer, pos: &Positions, g: u64) -> Bucketed {
    let mut keyed: Vec<(u64, usize)> = layer
        .vertices
        .iter()
        .map(|&v| {
            let key = pos.point(v).iter().fold(0u64, |acc, &x| acc * g + cell_coord(x, g));
            (key, v)
        })
        .collect();
    keyed.sort_unstable();
    let mut cells = HashMap::new();
    let mut i = 0;
    while i < keyed.len() {
        let mut j = i;
        while j < keyed.len() && keyed[j].0 == keyed[i].0 {
            j += 1;
        }
        cells.insert(keyed[i].0, (i, j));
        i = j;
    }
    Bucketed {
        cells,
        order: keyed.into_iter().map(|(_, v)| v).collect(),
    }
}

/// Cells per side for separation `r`, or `None` when fewer than 3 fit or the grid is too large.
fn resolution(r: f64, d: usize, cfg: &GridConfig) -> Option<u64> {
    if r >= 1.0 / 3.0 {
        return None;
    }
    let mut g = (1.0 / r).floor() as u64;
    // keep g^d within budget
    let cap = (cfg.max_cells as f64).powf(1.0 / d as f64).floor() as u64;
    g = g.min(cap);
    (g >= 3).then_some(g)
}

/// Expected work per source vertex: `3^d` cell lookups plus the targets in
/// them, against scanning all `m` targets.
fn grid_pays_off(m: usize, g: u64, d: usize) -> bool {
    let lookups = 3f64.powi(d as i32);
    lookups + m as f64 * (3.0 / g as f64).powi(d as i32) < m as f64
}

/// GIRG sampler using weight layers and spatial cells. Produces the same graph
/// as [`crate::samplers::sample_girg`] for the same seed.
pub fn sample_girg_grid(
    params: &ModelParams,
    weights: &WeightSequence,
    stream: &crate::rng::SeededStream,
    cfg: &GridConfig,
) -> Result<(GraphSample, GridReport)> {
    params.validate()?;
    if weights.len() != params.n {
        return Err(crate::error::GirgError::DimensionMismatch {
            expected: params.n,
            actual: weights.len(),
        });
    }
    let connector = Connector::new(params)?;
    let positions = sample_positions(params.n, params.d, stream);
    if params.d > cfg.max_dim {
        let g = girg_from_positions(&connector, weights, &positions);
        let n = params.n as u64;
        return Ok((
            g,
            GridReport {
                fell_back_to_naive: true,
                candidate_pairs: n * n.saturating_sub(1) / 2,
                ..Default::default()
            },
        ));
    }
    Ok(grid_from_positions(&connector, weights, &positions, cfg))
}

pub(crate) fn grid_from_positions(
    connector: &Connector,
    weights: &WeightSequence,
    positions: &Positions,
    cfg: &GridConfig,
) -> (GraphSample, GridReport) {
    let params = connector.params();
    let d = params.d;
    let w = weights.as_slice();
    let factors: Vec<f64> = w.iter().map(|&x| connector.factor(x)).collect();

    let mut by_layer: Vec<Layer> = Vec::new();
    for (v, &wv) in w.iter().enumerate() {
        let idx = ((wv / params.w0).log2().floor().max(0.0)) as usize;
        while by_layer.len() <= idx {
            by_layer.push(Layer {
                vertices: Vec::new(),
                max_weight: 0.0,
                max_factor: 0.0,
            });
        }
        let l = &mut by_layer[idx];
        l.vertices.push(v);
        if wv > l.max_weight {
            l.max_weight = wv;
            l.max_factor = factors[v];
        }
    }
    let layers: Vec<Layer> = by_layer.into_iter().filter(|l| !l.vertices.is_empty()).collect();

    let mut tasks = Vec::new();
    for i in 0..layers.len() {
        for j in i..layers.len() {
            let (a, b) = (&layers[i], &layers[j]);
            let r = connector
                .threshold_with_factors(a.max_weight, b.max_weight, a.max_factor, b.max_factor)
                .linf_radius();
            let res = resolution(r, d, cfg).filter(|&g| grid_pays_off(b.vertices.len(), g, d));
            tasks.push((i, j, res));
        }
    }

    let mut report = GridReport {
        layers: layers.len(),
        ..Default::default()
    };
    for t in &tasks {
        match t.2 {
            Some(_) => report.grid_layer_pairs += 1,
            None => report.naive_layer_pairs += 1,
        }
    }

    let offsets: Vec<Vec<i64>> = neighbour_offsets(d);
    let results = Exec::default().map(tasks.len() as u64, |ti| {
        let (i, j, res) = tasks[ti as usize];
        let mut edges = Vec::new();
        let mut candidates = 0u64;
        let test = |u: usize, v: usize, edges: &mut Vec<(usize, usize)>| {
            let th = connector.threshold_with_factors(w[u], w[v], factors[u], factors[v]);
            if th.admits(positions.point(u), positions.point(v)) {
                edges.push((u.min(v), u.max(v)));
            }
        };
        match res {
            None => {
                for (a, &u) in layers[i].vertices.iter().enumerate() {
                    let others: &[usize] = if i == j {
                        &layers[j].vertices[a + 1..]
                    } else {
                        &layers[j].vertices
                    };
                    for &v in others {
                        candidates += 1;
                        test(u, v, &mut edges);
                    }
                }
            }
            Some(g) => {
                let target = bucket(&layers[j], positions, g);
                let mut cell = vec![0u64; d];
                for &u in &layers[i].vertices {
                    for (c, x) in cell.iter_mut().zip(positions.point(u)) {
                        *c = cell_coord(*x, g);
                    }
                    // g >= 3, so the 3^d wrapped cells are distinct
                    for off in &offsets {
                        let key = cell.iter().zip(off).fold(0u64, |acc, (&c, &o)| {
                            acc * g + ((c as i64 + o).rem_euclid(g as i64)) as u64
                        });
                        if let Some(&(s, e)) = target.cells.get(&key) {
                            for &v in &target.order[s..e] {
                                if i == j && v <= u {
                                    continue;
                                }
                                candidates += 1;
                                test(u, v, &mut edges);
                            }
                        }
                    }
                }
            }
        }
        (edges, candidates)
    });
    let mut all = Vec::new();
    for (e, c) in results {
        report.candidate_pairs += c;
        all.extend(e);
    }
    (GraphSample::from_edges_unchecked(positions.len(), all), report)
}

fn neighbour_offsets(d: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-1..=1).map(move |o| {
                    let mut q = p.clone();
                    q.push(o);
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_weights, Norm};
    use crate::rng::SeededStream;
    use crate::samplers::sample_girg;

    #[test]
    fn grid_matches_naive_exactly() {
        for (d, n, beta, lambda) in [
            (1, 800, 2.7, 2.0),
            (2, 1500, 2.5, 3.0),
            (3, 600, 3.5, 1.0),
            (2, 300, 2.1, 0.5),
        ] {
            let p = ModelParams::new(n, beta, 1.0, lambda, d, Norm::Infinity).unwrap();
            let s = SeededStream::from_seed(d as u64 * 31 + n as u64);
            let w = sample_weights(&p, &s).unwrap();
            let naive = sample_girg(&p, &w, &s).unwrap();
            let (grid, report) = sample_girg_grid(&p, &w, &s, &GridConfig::default()).unwrap();
            assert_eq!(naive, grid, "d={d} n={n}");
            assert!(!report.fell_back_to_naive);
            assert!(report.grid_layer_pairs > 0);
        }
    }

    #[test]
    fn dense_cells_in_high_dimension_are_scanned() {
        let p = ModelParams::new(3000, 2.5, 1.0, 1.0, 8, Norm::Infinity).unwrap();
        let s = SeededStream::from_seed(5);
        let w = sample_weights(&p, &s).unwrap();
        let (g, report) = sample_girg_grid(&p, &w, &s, &GridConfig::default()).unwrap();
        assert_eq!(g, sample_girg(&p, &w, &s).unwrap());
        assert!(report.candidate_pairs <= 3000 * 2999 / 2);
    }

    #[test]
    fn huge_thresholds_reduce_to_all_pairs() {
        let p = ModelParams::new(40, 2.5, 1.0, 1.0, 2, Norm::Infinity).unwrap();
        let w = WeightSequence::constant(40, 30.0);
        let s = SeededStream::from_seed(2);
        let (g, report) = sample_girg_grid(&p, &w, &s, &GridConfig::default()).unwrap();
        assert_eq!(report.grid_layer_pairs, 0);
        assert_eq!(report.candidate_pairs, 40 * 39 / 2);
        assert_eq!(g, sample_girg(&p, &w, &s).unwrap());
    }

    #[test]
    fn falls_back_above_dim_limit() {
        let p = ModelParams::new(50, 2.5, 1.0, 1.0, 9, Norm::Infinity).unwrap();
        let s = SeededStream::from_seed(4);
        let w = sample_weights(&p, &s).unwrap();
        let (g, report) = sample_girg_grid(&p, &w, &s, &GridConfig::default()).unwrap();
        assert!(report.fell_back_to_naive);
        assert_eq!(g, sample_girg(&p, &w, &s).unwrap());
    }
}
