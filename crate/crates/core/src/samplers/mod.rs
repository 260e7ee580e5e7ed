//! Graph samplers for the IRG and GIRG models, exact conditional samplers
//! for star-conditioned configurations, and per-dimension distance samplers
//! for the torus and the hypercube.
//!
//! Randomness is keyed by index: vertex positions come from the per-vertex
//! substream `positions/i`, IRG coin flips for the pairs `(u, v > u)` from the
//! per-row substream `irg/u`. A sample is therefore a pure function of
//! `(params, weights, seed)` and does not depend on thread count.

pub mod graph;
pub mod grid;

use serde::Serialize;

use crate::error::{precondition, GirgError, Result};
use crate::exec::{Exec, TRIAL_BLOCK};
use crate::model::{kappa, ModelParams, Norm, WeightSequence};
use crate::rng::{tags, uniform, SeededStream};
use crate::stats::CovarianceAccumulator;
use crate::torus::{connection_threshold_linf, wrap_unit, Connector, TorusPoint};

pub use graph::{read_edge_list, write_edge_list, EdgeListHeader, GraphSample};
pub use grid::{sample_girg_grid, GridConfig, GridReport};

/// Vertex positions stored row-major (`n x d`).
#[derive(Debug, Clone, PartialEq)]
pub struct Positions {
    d: usize,
    coords: Vec<f64>,
}

impl Positions {
    pub fn from_flat(d: usize, coords: Vec<f64>) -> Self {
        assert!(d > 0 && coords.len().is_multiple_of(d));
        Self { d, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn to_points(&self) -> Vec<TorusPoint> {
        (0..self.len())
            .map(|i| TorusPoint::new(self.point(i).to_vec()).expect("positions lie in [0,1)"))
            .collect()
    }
}

/// Fills `out` with the position of vertex `i`.
#[inline]
pub fn vertex_position(stream: &SeededStream, i: u64, out: &mut [f64]) {
    let mut rng = stream.rng_at(i);
    for c in out.iter_mut() {
        *c = uniform(&mut rng);
    }
}

/// Independent uniform positions; vertex `i` depends only on `(stream, i)`.
pub fn sample_positions(n: usize, d: usize, stream: &SeededStream) -> Positions {
    let s = stream.child(tags::POSITIONS);
    let blocks = Exec::default().map_blocks(n as u64, 1 << 12, |_, start, len| {
        let mut buf = vec![0.0; len as usize * d];
        for (k, chunk) in buf.chunks_mut(d).enumerate() {
            vertex_position(&s, start + k as u64, chunk);
        }
        buf
    });
    Positions::from_flat(d, blocks.concat())
}

fn check_weights(params: &ModelParams, weights: &WeightSequence) -> Result<()> {
    params.validate()?;
    if weights.len() != params.n {
        return Err(GirgError::DimensionMismatch {
            expected: params.n,
            actual: weights.len(),
        });
    }
    Ok(())
}

/// Chung-Lu style IRG: each pair present independently with probability `kappa_uv / n`.
pub fn sample_irg(params: &ModelParams, weights: &WeightSequence, stream: &SeededStream) -> Result<GraphSample> {
    check_weights(params, weights)?;
    let s = stream.child(tags::IRG_PAIRS);
    let n = params.n;
    let w = weights.as_slice();
    let rows = Exec::default().map(n as u64, |u| {
        let u = u as usize;
        let mut rng = s.rng_at(u as u64);
        let mut out = Vec::new();
        for v in u + 1..n {
            if uniform(&mut rng) < kappa(w[u], w[v], params) / n as f64 {
                out.push((u, v));
            }
        }
        out
    });
    Ok(GraphSample::from_edges_unchecked(n, rows.into_iter().flatten()))
}

/// GIRG by testing all pairs against their connection threshold.
pub fn sample_girg(params: &ModelParams, weights: &WeightSequence, stream: &SeededStream) -> Result<GraphSample> {
    check_weights(params, weights)?;
    let connector = Connector::new(params)?;
    let positions = sample_positions(params.n, params.d, stream);
    Ok(girg_from_positions(&connector, weights, &positions))
}

/// All-pairs GIRG edges for given positions.
pub fn girg_from_positions(connector: &Connector, weights: &WeightSequence, positions: &Positions) -> GraphSample {
    let n = positions.len();
    let w = weights.as_slice();
    let factors: Vec<f64> = w.iter().map(|&x| connector.factor(x)).collect();
    let rows = Exec::default().map(n as u64, |u| {
        let u = u as usize;
        let xu = positions.point(u);
        let mut out = Vec::new();
        for v in u + 1..n {
            let th = connector.threshold_with_factors(w[u], w[v], factors[u], factors[v]);
            if th.admits(xu, positions.point(v)) {
                out.push((u, v));
            }
        }
        out
    });
    GraphSample::from_edges_unchecked(n, rows.into_iter().flatten())
}

/// GIRG using the cell grid where it applies and all pairs otherwise.
pub fn sample_girg_auto(params: &ModelParams, weights: &WeightSequence, stream: &SeededStream) -> Result<GraphSample> {
    Ok(sample_girg_grid(params, weights, stream, &GridConfig::default())?.0)
}

/// GIRG induced on the vertices with weight at most `w_c`, built without
/// touching the other vertices. Returns the subgraph and the original labels.
pub fn sample_girg_leq_weight(
    params: &ModelParams,
    weights: &WeightSequence,
    w_c: f64,
    stream: &SeededStream,
) -> Result<(GraphSample, Vec<usize>)> {
    check_weights(params, weights)?;
    let connector = Connector::new(params)?;
    let keep: Vec<usize> = (0..params.n).filter(|&v| weights.get(v) <= w_c).collect();
    let s = stream.child(tags::POSITIONS);
    let d = params.d;
    let mut coords = vec![0.0; keep.len() * d];
    for (chunk, &v) in coords.chunks_mut(d).zip(&keep) {
        vertex_position(&s, v as u64, chunk);
    }
    let positions = Positions::from_flat(d, coords);
    let sub = WeightSequence::new(keep.iter().map(|&v| weights.get(v)).collect(), params.w0)?;
    let g = if d <= GridConfig::default().max_dim {
        grid::grid_from_positions(&connector, &sub, &positions, &GridConfig::default()).0
    } else {
        girg_from_positions(&connector, &sub, &positions)
    };
    Ok((g, keep))
}

/// Radii `t_{1i}` for a star centred at the first weight, checked to lie below the cap.
pub(crate) fn star_radii(params: &ModelParams, weights_k: &[f64], op: &'static str) -> Result<Vec<f64>> {
    if params.norm != Norm::Infinity {
        return Err(precondition(op, "star conditioning requires the maximum norm"));
    }
    if weights_k.len() < 2 {
        return Err(precondition(op, "need at least two vertices"));
    }
    let w1 = weights_k[0];
    let radii: Vec<f64> = weights_k[1..]
        .iter()
        .map(|&w| connection_threshold_linf(w1, w, params))
        .collect();
    if radii.iter().any(|&t| t >= 0.5) {
        return Err(precondition(
            op,
            "a star threshold reaches the cap; conditioning is vacuous",
        ));
    }
    Ok(radii)
}

/// Offsets of the leaves relative to the centre: coordinate `c` of leaf `i`
/// is uniform on `[-t_i, t_i]`, written to `out[i * d + c]`.
#[inline]
pub(crate) fn fill_star_offsets<R: rand::Rng>(rng: &mut R, radii: &[f64], d: usize, out: &mut [f64]) {
    for (i, &t) in radii.iter().enumerate() {
        for c in 0..d {
            out[i * d + c] = t * (2.0 * uniform(rng) - 1.0);
        }
    }
}

/// Positions of `k` vertices drawn from the exact law conditioned on vertex 0
/// being adjacent to all others (maximum norm): vertex 0 is uniform and every
/// other vertex is uniform in the cube of radius `t_{0i}` around it.
pub fn sample_star_conditioned_positions(
    params: &ModelParams,
    weights_k: &[f64],
    stream: &SeededStream,
) -> Result<Vec<TorusPoint>> {
    let radii = star_radii(params, weights_k, "sample_star_conditioned_positions")?;
    let d = params.d;
    let mut rng = stream.rng();
    let centre: Vec<f64> = (0..d).map(|_| uniform(&mut rng)).collect();
    let mut offsets = vec![0.0; radii.len() * d];
    fill_star_offsets(&mut rng, &radii, d, &mut offsets);
    let mut out = vec![TorusPoint::new(centre.clone())?];
    for i in 0..radii.len() {
        let coords = (0..d).map(|c| wrap_unit(centre[c] + offsets[i * d + c])).collect();
        out.push(TorusPoint::new(coords)?);
    }
    Ok(out)
}

/// Ground space for one-dimensional distance samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Space {
    Torus,
    Hypercube,
}

/// Which distances are paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pairing {
    /// `(Delta_uv, Delta_us)`: two distances sharing the endpoint `u`.
    SharedEndpoint,
    /// `(Delta_uv, Delta_sw)`: two distances over four independent points.
    Disjoint,
}

#[inline]
fn one_dim_distance(space: Space, a: f64, b: f64) -> f64 {
    match space {
        Space::Torus => crate::torus::circle_distance(a, b),
        Space::Hypercube => (a - b).abs(),
    }
}

#[inline]
fn distance_pair<R: rand::Rng>(rng: &mut R, space: Space, pairing: Pairing) -> (f64, f64) {
    let u = uniform(rng);
    let v = uniform(rng);
    let s = uniform(rng);
    match pairing {
        Pairing::SharedEndpoint => (one_dim_distance(space, u, v), one_dim_distance(space, u, s)),
        Pairing::Disjoint => {
            let w = uniform(rng);
            (one_dim_distance(space, u, v), one_dim_distance(space, s, w))
        }
    }
}

/// Paired one-dimensional distances `(Delta_uv, Delta_us)` for i.i.d. uniform `u, v, s`.
pub fn sample_component_distances(space: Space, count: usize, stream: &SeededStream) -> Vec<(f64, f64)> {
    let blocks = Exec::default().map_blocks(count as u64, TRIAL_BLOCK, |b, _, len| {
        let mut rng = stream.rng_at(b);
        (0..len)
            .map(|_| distance_pair(&mut rng, space, Pairing::SharedEndpoint))
            .collect::<Vec<_>>()
    });
    blocks.concat()
}

/// Streaming covariance of paired distances; same draws as
/// [`sample_component_distances`] for the shared-endpoint pairing.
pub(crate) fn distance_covariance_accumulate(
    space: Space,
    pairing: Pairing,
    count: u64,
    stream: &SeededStream,
    exec: Exec,
) -> CovarianceAccumulator {
    let parts = exec.map_blocks(count, TRIAL_BLOCK, |b, _, len| {
        let mut rng = stream.rng_at(b);
        let mut acc = CovarianceAccumulator::default();
        for _ in 0..len {
            let (x, y) = distance_pair(&mut rng, space, pairing);
            acc.push(x, y);
        }
        acc
    });
    parts.iter().fold(CovarianceAccumulator::default(), |mut a, p| {
        a.merge(p);
        a
    })
}
