//! Distributions over labelled graphs on at most six vertices, total
//! variation between models, the Gaussian limit of `L_p` thresholds and the
//! covariance of distances sharing an endpoint.

use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, GirgError, Result};
use crate::exec::{Exec, TRIAL_BLOCK};
use crate::model::{kappa, ModelParams, Norm, WeightSequence};
use crate::rng::{tags, SeededStream};
use crate::samplers::{distance_covariance_accumulate, GraphSample, Pairing, Space};
use crate::stats::{CompensatedSum, StandardNormal};
use crate::torus::{clt_constants, quantile_threshold_for_probability, Connector, PairThreshold};

/// Largest vertex count whose graph space is enumerated.
pub const MAX_ENUMERABLE_N: usize = 6;

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Bit index of the pair `{u, v}` in lexicographic pair order.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = (u.min(v), u.max(v));
    debug_assert!(v < n && u != v);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Edge bitmask of a graph with at most six vertices.
pub fn graph_mask(g: &GraphSample) -> u32 {
    g.edges().fold(0, |m, (u, v)| m | 1 << pair_index(g.n(), u, v))
}

fn check_enumerable(n: usize) -> Result<()> {
    if n > MAX_ENUMERABLE_N {
        return Err(GirgError::TooLarge {
            n,
            cap: MAX_ENUMERABLE_N,
        });
    }
    Ok(())
}

/// Probability vector indexed by edge bitmask.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl GraphDistribution {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        check_enumerable(n)?;
        let len = 1usize << pair_count(n);
        if probs.len() != len {
            return Err(GirgError::DimensionMismatch {
                expected: len,
                actual: probs.len(),
            });
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(domain("GraphDistribution", "negative or NaN probability"));
        }
        let total: CompensatedSum = probs.iter().copied().collect();
        if (total.value() - 1.0).abs() > 1e-9 {
            return Err(domain(
                "GraphDistribution",
                format!("probabilities sum to {}", total.value()),
            ));
        }
        Ok(Self { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability that the pair `{u, v}` is an edge.
    pub fn edge_marginal(&self, u: usize, v: usize) -> f64 {
        let bit = 1 << pair_index(self.n, u, v);
        self.probs
            .iter()
            .enumerate()
            .filter(|(m, _)| m & bit != 0)
            .map(|(_, &p)| p)
            .collect::<CompensatedSum>()
            .value()
    }
}

/// `1/2 sum |P - Q|`.
pub fn tv_distance(p: &GraphDistribution, q: &GraphDistribution) -> Result<f64> {
    if p.n != q.n {
        return Err(GirgError::DimensionMismatch {
            expected: p.n,
            actual: q.n,
        });
    }
    let s: CompensatedSum = p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).collect();
    Ok((0.5 * s.value()).clamp(0.0, 1.0))
}

/// Exact law of the IRG with fixed weights (`params.n` vertices).
pub fn exact_irg_distribution(weights: &WeightSequence, params: &ModelParams) -> Result<GraphDistribution> {
    params.validate()?;
    let n = params.n;
    check_enumerable(n)?;
    if weights.len() != n {
        return Err(GirgError::DimensionMismatch {
            expected: n,
            actual: weights.len(),
        });
    }
    let m = pair_count(n);
    let mut edge_p = vec![0.0; m];
    for u in 0..n {
        for v in u + 1..n {
            edge_p[pair_index(n, u, v)] = kappa(weights.get(u), weights.get(v), params) / n as f64;
        }
    }
    let probs = (0..1usize << m)
        .map(|mask| {
            edge_p
                .iter()
                .enumerate()
                .map(|(b, &p)| if mask >> b & 1 == 1 { p } else { 1.0 - p })
                .product()
        })
        .collect();
    GraphDistribution::new(n, probs)
}

/// Empirical distribution together with the plug-in TV bias bound
/// `sum_w 1/2 sqrt(p_w (1 - p_w) / N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    pub distribution: GraphDistribution,
    pub bias_bound: f64,
    pub trials: u64,
}

/// Runs `sampler` (returning an edge bitmask) `trials` times on per-block substreams.
pub fn empirical_graph_distribution<F>(
    n: usize,
    trials: u64,
    stream: &SeededStream,
    exec: Exec,
    sampler: F,
) -> Result<EmpiricalDistribution>
where
    F: Fn(&mut ChaCha8Rng) -> u32 + Sync + Send,
{
    check_enumerable(n)?;
    if trials == 0 {
        return Err(GirgError::InvalidParameter {
            name: "trials",
            reason: "must be at least 1".into(),
        });
    }
    let len = 1usize << pair_count(n);
    let parts = exec.map_blocks(trials, TRIAL_BLOCK, |b, _, count| {
        let mut rng = stream.rng_at(b);
        let mut hist = vec![0u64; len];
        for _ in 0..count {
            hist[sampler(&mut rng) as usize] += 1;
        }
        hist
    });
    let mut hist = vec![0u64; len];
    for part in parts {
        for (h, c) in hist.iter_mut().zip(part) {
            *h += c;
        }
    }
    let nf = trials as f64;
    let probs: Vec<f64> = hist.iter().map(|&c| c as f64 / nf).collect();
    let bias_bound = probs.iter().map(|&p| 0.5 * (p * (1.0 - p) / nf).sqrt()).sum();
    Ok(EmpiricalDistribution {
        distribution: GraphDistribution::new(n, probs)?,
        bias_bound,
        trials,
    })
}

/// Two uniforms on [0, 1) with 32-bit resolution from one 64-bit draw.
#[inline]
fn uniform_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    const SCALE: f64 = 1.0 / 4_294_967_296.0;
    let x = rng.next_u64();
    ((x >> 32) as f64 * SCALE, (x & 0xffff_ffff) as f64 * SCALE)
}

/// Draws one GIRG with fixed weights on at most six vertices and returns its
/// edge bitmask. `thresholds` holds the pair rules in bit order and `buf`
/// receives `n * d` coordinates.
fn girg_mask(rng: &mut ChaCha8Rng, n: usize, d: usize, thresholds: &[PairThreshold], buf: &mut [f64]) -> u32 {
    for pair in buf.chunks_mut(2) {
        let (a, b) = uniform_pair(rng);
        pair[0] = a;
        if pair.len() == 2 {
            pair[1] = b;
        }
    }
    let mut mask = 0;
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if thresholds[bit].admits(&buf[u * d..(u + 1) * d], &buf[v * d..(v + 1) * d]) {
                mask |= 1 << bit;
            }
            bit += 1;
        }
    }
    mask
}

/// Pair rules for a fixed weight sequence, in bit order.
fn pair_thresholds(params: &ModelParams, weights: &WeightSequence) -> Result<Vec<PairThreshold>> {
    let c = Connector::new(params)?;
    let n = params.n;
    let mut out = Vec::with_capacity(pair_count(n));
    for u in 0..n {
        for v in u + 1..n {
            out.push(c.threshold(weights.get(u), weights.get(v)));
        }
    }
    Ok(out)
}

/// Empirical GIRG law with fixed weights.
pub fn empirical_girg_distribution(
    params: &ModelParams,
    weights: &WeightSequence,
    trials: u64,
    stream: &SeededStream,
    exec: Exec,
) -> Result<EmpiricalDistribution> {
    check_enumerable(params.n)?;
    if weights.len() != params.n {
        return Err(GirgError::DimensionMismatch {
            expected: params.n,
            actual: weights.len(),
        });
    }
    let th = pair_thresholds(params, weights)?;
    let (n, d) = (params.n, params.d);
    empirical_graph_distribution(n, trials, stream, exec, |rng| {
        let mut buf = vec![0.0; n * d];
        girg_mask(rng, n, d, &th, &mut buf)
    })
}

/// One point of a TV convergence curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TvPoint {
    pub d: usize,
    pub tv: f64,
    pub bias_bound: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Default dimensions for TV curves: `1, 2, 4, ..., 4096`.
pub fn default_tv_dims() -> Vec<usize> {
    (0..=12).map(|i| 1usize << i).collect()
}

/// `TV(GIRG_d, IRG)` with fixed weights for each `d`, under `params_base.norm`.
pub fn tv_convergence_curve(
    params_base: &ModelParams,
    weights: &WeightSequence,
    d_list: &[usize],
    trials: u64,
    stream: &SeededStream,
) -> Result<Vec<TvPoint>> {
    tv_convergence_curve_with(params_base, weights, d_list, trials, stream, Exec::default())
}

pub fn tv_convergence_curve_with(
    params_base: &ModelParams,
    weights: &WeightSequence,
    d_list: &[usize],
    trials: u64,
    stream: &SeededStream,
    exec: Exec,
) -> Result<Vec<TvPoint>> {
    check_enumerable(params_base.n)?;
    let exact = exact_irg_distribution(weights, params_base)?;
    d_list
        .iter()
        .map(|&d| {
            let params = params_base.with_d(d);
            let s = stream.child(tags::GRAPHS).child(d as u64);
            let emp = empirical_girg_distribution(&params, weights, trials, &s, exec)?;
            Ok(TvPoint {
                d,
                tv: tv_distance(&emp.distribution, &exact)?,
                bias_bound: emp.bias_bound,
                trials,
                seed: stream.seed,
            })
        })
        .collect()
}

/// Normalised finite-`p` threshold `(t^p - d mu) / (sqrt(d) sigma)` and its limit `Phi^{-1}(kappa/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianLimitPoint {
    pub d: usize,
    pub t: f64,
    pub normalized: f64,
    pub target: f64,
    /// Accuracy of `normalized` implied by the threshold accuracy.
    pub accuracy: f64,
}

pub fn gaussian_threshold_limit(
    w_u: f64,
    w_v: f64,
    params: &ModelParams,
    d_list: &[usize],
) -> Result<Vec<GaussianLimitPoint>> {
    let p = match params.norm {
        Norm::P(p) => p,
        Norm::Infinity => return Err(domain("gaussian_threshold_limit", "requires a finite norm index")),
    };
    let q = kappa(w_u, w_v, params) / params.n as f64;
    if q >= 1.0 {
        return Err(domain("gaussian_threshold_limit", "saturated pair: kappa = n"));
    }
    let c = clt_constants(params.norm)?;
    let target = StandardNormal::quantile(q);
    d_list
        .iter()
        .map(|&d| {
            let th = quantile_threshold_for_probability(q, d, p, f64::INFINITY)?;
            let df = d as f64;
            let scale = (df * c.sigma2).sqrt();
            Ok(GaussianLimitPoint {
                d,
                t: th.t,
                normalized: (th.t.powf(p) - df * c.mu) / scale,
                target,
                accuracy: p * th.t.powf(p - 1.0) * th.achieved_accuracy / scale,
            })
        })
        .collect()
}

/// Sample covariance of `(Delta_uv, Delta_us)` in one dimension, with its standard error.
pub fn pair_distance_covariance(space: Space, trials: u64, stream: &SeededStream) -> Result<(f64, f64)> {
    pair_distance_covariance_with(space, Pairing::SharedEndpoint, trials, stream, Exec::default())
}

pub fn pair_distance_covariance_with(
    space: Space,
    pairing: Pairing,
    trials: u64,
    stream: &SeededStream,
    exec: Exec,
) -> Result<(f64, f64)> {
    if trials < 10_000 {
        return Err(GirgError::InvalidParameter {
            name: "trials",
            reason: "need at least 10^4 trials".into(),
        });
    }
    Ok(distance_covariance_accumulate(space, pairing, trials, stream, exec).covariance())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_indices_are_lexicographic() {
        let n = 4;
        let order: Vec<usize> = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(u, v)| pair_index(n, u, v))
            .collect();
        assert_eq!(order, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn tv_examples() {
        let n = 2;
        let p = GraphDistribution::new(n, vec![0.5, 0.5]).unwrap();
        let q = GraphDistribution::new(n, vec![1.0, 0.0]).unwrap();
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(tv_distance(&p, &q).unwrap(), 0.5);
        let r = GraphDistribution::new(n, vec![0.0, 1.0]).unwrap();
        assert_eq!(tv_distance(&q, &r).unwrap(), 1.0);
    }

    #[test]
    fn exact_two_vertex() {
        let params = ModelParams::new(2, 2.5, 1.0, 0.6, 1, Norm::Infinity).unwrap();
        let w = WeightSequence::constant(2, 1.0);
        let e = exact_irg_distribution(&w, &params).unwrap();
        assert!((e.probs()[0] - 0.7).abs() < 1e-15 && (e.probs()[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn rejects_large_n() {
        let params = ModelParams::new(7, 2.5, 1.0, 1.0, 1, Norm::Infinity).unwrap();
        let w = WeightSequence::constant(7, 1.0);
        assert!(matches!(
            exact_irg_distribution(&w, &params),
            Err(GirgError::TooLarge { .. })
        ));
    }
}
