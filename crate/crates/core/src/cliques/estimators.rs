//! Monte Carlo estimators of clique probabilities.
//!
//! Trials are split into blocks of [`TRIAL_BLOCK`]; block `b` draws from the
//! substream `trials/b`, so estimates do not depend on the execution strategy.

use rand::Rng;
use serde::Serialize;

use crate::error::{precondition, GirgError, Result};
use crate::exec::{Exec, TRIAL_BLOCK};
use crate::model::{kappa, pareto_from_uniform, ModelParams, Norm, WeightSequence};
use crate::rng::{tags, uniform, uniform_open0, SeededStream};
use crate::samplers::{fill_star_offsets, sample_girg_leq_weight, star_radii};
use crate::stats::{relative_variance, EstimateWithError};
use crate::torus::{circle_distance, connection_threshold_linf, Connector, PairThreshold};

use super::{count_k_cliques, k_clique_vertex_incidence};
use crate::samplers::GraphSample;

/// Edge model used by [`estimate_qk`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeModel {
    Irg,
    Girg,
}

/// Where trial weights come from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WeightSource {
    /// Fresh Pareto weights per trial.
    Pareto,
    /// The same `k` weights every trial.
    Fixed(Vec<f64>),
}

fn count_successes<F>(trials: u64, stream: &SeededStream, exec: Exec, trial: F) -> u64
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> bool + Sync + Send,
{
    let s = stream.child(tags::TRIALS);
    exec.map_blocks(trials, TRIAL_BLOCK, |b, _, len| {
        let mut rng = s.rng_at(b);
        (0..len).filter(|_| trial(&mut rng)).count() as u64
    })
    .into_iter()
    .sum()
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(GirgError::InvalidParameter {
            name: "trials",
            reason: "must be at least 1".into(),
        });
    }
    Ok(())
}

/// Probability that `k` random vertices form a clique.
pub fn estimate_qk(
    params: &ModelParams,
    k: usize,
    trials: u64,
    model: EdgeModel,
    weights: &WeightSource,
    stream: &SeededStream,
) -> Result<EstimateWithError> {
    estimate_qk_with(params, k, trials, model, weights, stream, Exec::default())
}

pub fn estimate_qk_with(
    params: &ModelParams,
    k: usize,
    trials: u64,
    model: EdgeModel,
    weights: &WeightSource,
    stream: &SeededStream,
    exec: Exec,
) -> Result<EstimateWithError> {
    params.validate()?;
    check_trials(trials)?;
    if k < 2 {
        return Err(GirgError::InvalidParameter {
            name: "k",
            reason: "must be at least 2".into(),
        });
    }
    if let WeightSource::Fixed(w) = weights {
        if w.len() != k {
            return Err(GirgError::DimensionMismatch {
                expected: k,
                actual: w.len(),
            });
        }
        WeightSequence::new(w.clone(), params.w0)?;
    }
    let connector = Connector::new(params)?;
    let n = params.n as f64;
    let d = params.d;
    let hits = count_successes(trials, stream, exec, |rng| {
        let w: Vec<f64> = match weights {
            WeightSource::Pareto => (0..k)
                .map(|_| pareto_from_uniform(uniform_open0(rng), params.beta, params.w0))
                .collect(),
            WeightSource::Fixed(w) => w.clone(),
        };
        match model {
            EdgeModel::Irg => {
                for i in 0..k {
                    for j in i + 1..k {
                        if uniform(rng) >= kappa(w[i], w[j], params) / n {
                            return false;
                        }
                    }
                }
                true
            }
            EdgeModel::Girg => {
                let x: Vec<f64> = (0..k * d).map(|_| uniform(rng)).collect();
                let f: Vec<f64> = w.iter().map(|&wi| connector.factor(wi)).collect();
                for i in 0..k {
                    for j in i + 1..k {
                        let th = connector.threshold_with_factors(w[i], w[j], f[i], f[j]);
                        if !th.admits(&x[i * d..(i + 1) * d], &x[j * d..(j + 1) * d]) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    });
    Ok(EstimateWithError::bernoulli(hits, trials))
}

/// Diagnostic for the small-threshold condition `c^2 t(w1, w1) <= 1/4` with
/// `c = (w_max / w1)^(1/d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarPrecondition {
    pub c: f64,
    pub max_threshold: f64,
    pub satisfied: bool,
}

pub fn star_precondition(params: &ModelParams, weights_k: &[f64]) -> Result<StarPrecondition> {
    params.validate()?;
    if weights_k.len() < 2 {
        return Err(precondition("star_precondition", "need at least two weights"));
    }
    let w1 = weights_k[0];
    let w_max = weights_k.iter().copied().fold(w1, f64::max);
    let c = (w_max / w1).powf(1.0 / params.d as f64);
    let max_threshold = c * c * connection_threshold_linf(w1, w1, params);
    Ok(StarPrecondition {
        c,
        max_threshold,
        satisfied: max_threshold <= 0.25,
    })
}

fn leaf_thresholds(connector: &Connector, leaf_weights: &[f64]) -> Vec<f64> {
    let m = leaf_weights.len();
    let mut t = vec![0.5; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let r = match connector.threshold(leaf_weights[i], leaf_weights[j]) {
                PairThreshold::Linf(r) => r,
                _ => 0.5,
            };
            t[i * m + j] = r;
            t[j * m + i] = r;
        }
    }
    t
}

/// One dimension of the star-conditioned configuration: leaf offsets are
/// uniform in `[-r_i, r_i]`; true if every leaf pair is within its threshold.
#[inline]
fn leaves_adjacent_1d<R: Rng>(rng: &mut R, radii: &[f64], t: &[f64], buf: &mut [f64]) -> bool {
    fill_star_offsets(rng, radii, 1, buf);
    let m = radii.len();
    for i in 0..m {
        for j in i + 1..m {
            if circle_distance(buf[i], buf[j]) > t[i * m + j] {
                return false;
            }
        }
    }
    true
}

/// Probability that `U_k` is a clique given that vertex 0 (of minimal weight)
/// is adjacent to all others. Refuses configurations violating the
/// small-threshold condition.
pub fn estimate_clique_prob_given_star(
    params: &ModelParams,
    weights_k: &[f64],
    trials: u64,
    stream: &SeededStream,
) -> Result<EstimateWithError> {
    estimate_clique_prob_given_star_with(params, weights_k, trials, stream, Exec::default())
}

pub fn estimate_clique_prob_given_star_with(
    params: &ModelParams,
    weights_k: &[f64],
    trials: u64,
    stream: &SeededStream,
    exec: Exec,
) -> Result<EstimateWithError> {
    const OP: &str = "estimate_clique_prob_given_star";
    check_trials(trials)?;
    let radii = star_radii(params, weights_k, OP)?;
    if weights_k[1..].iter().any(|&w| w < weights_k[0]) {
        return Err(precondition(OP, "the first weight must be minimal"));
    }
    let pre = star_precondition(params, weights_k)?;
    if !pre.satisfied {
        return Err(precondition(
            OP,
            format!(
                "c^2 t(w1,w1) = {:.6} exceeds 1/4 (c = {:.6}); the torus wraps inside the star",
                pre.max_threshold, pre.c
            ),
        ));
    }
    let connector = Connector::new(params)?;
    let t = leaf_thresholds(&connector, &weights_k[1..]);
    let d = params.d;
    let hits = count_successes(trials, stream, exec, |rng| {
        let mut buf = vec![0.0; radii.len()];
        (0..d).all(|_| leaves_adjacent_1d(rng, &radii, &t, &mut buf))
    });
    Ok(EstimateWithError::bernoulli(hits, trials))
}

/// `Pr[v2 ~ v3 | v1 ~ v2, v1 ~ v3]` under the maximum norm, sampling `v2, v3`
/// uniformly in their cubes around `v1`.
pub fn estimate_triangle_prob_given_wedge(
    params: &ModelParams,
    weights_3: [f64; 3],
    trials: u64,
    stream: &SeededStream,
) -> Result<EstimateWithError> {
    estimate_triangle_prob_given_wedge_with(params, weights_3, trials, stream, Exec::default())
}

pub fn estimate_triangle_prob_given_wedge_with(
    params: &ModelParams,
    weights_3: [f64; 3],
    trials: u64,
    stream: &SeededStream,
    exec: Exec,
) -> Result<EstimateWithError> {
    params.validate()?;
    check_trials(trials)?;
    if params.norm != Norm::Infinity {
        return Err(precondition(
            "estimate_triangle_prob_given_wedge",
            "requires the maximum norm",
        ));
    }
    // a capped radius makes the cube the whole torus, which is still the exact conditional law
    let [w1, w2, w3] = weights_3;
    let radii = [
        connection_threshold_linf(w1, w2, params),
        connection_threshold_linf(w1, w3, params),
    ];
    let t = connection_threshold_linf(w2, w3, params);
    let tm = [0.5, t, t, 0.5];
    let d = params.d;
    let hits = count_successes(trials, stream, exec, |rng| {
        let mut buf = [0.0; 2];
        (0..d).all(|_| leaves_adjacent_1d(rng, &radii, &tm, &mut buf))
    });
    Ok(EstimateWithError::bernoulli(hits, trials))
}

/// Factorised estimate of the probability that `k` vertices with the given
/// weights span a clique, for the maximum norm and any dimension.
///
/// The star around vertex 0 has exact probability `prod_i kappa_0i / n`.
/// Conditioned on it, coordinates are independent, so the probability of the
/// remaining edges is `pi^d` for a one-dimensional probability `pi`, which is
/// estimated directly. The error of `pi^d` follows by the delta method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorizedCliqueEstimate {
    pub probability: EstimateWithError,
    pub star_probability: f64,
    pub per_dimension: EstimateWithError,
}

pub fn estimate_clique_superset_factorized(
    params: &ModelParams,
    weights_k: &[f64],
    trials: u64,
    stream: &SeededStream,
) -> Result<FactorizedCliqueEstimate> {
    estimate_clique_superset_factorized_with(params, weights_k, trials, stream, Exec::default())
}

pub fn estimate_clique_superset_factorized_with(
    params: &ModelParams,
    weights_k: &[f64],
    trials: u64,
    stream: &SeededStream,
    exec: Exec,
) -> Result<FactorizedCliqueEstimate> {
    check_trials(trials)?;
    let radii = star_radii(params, weights_k, "estimate_clique_superset_factorized")?;
    let connector = Connector::new(params)?;
    let t = leaf_thresholds(&connector, &weights_k[1..]);
    let n = params.n as f64;
    let star: f64 = weights_k[1..]
        .iter()
        .map(|&w| kappa(weights_k[0], w, params) / n)
        .product();
    let hits = count_successes(trials, stream, exec, |rng| {
        let mut buf = vec![0.0; radii.len()];
        leaves_adjacent_1d(rng, &radii, &t, &mut buf)
    });
    let pi = EstimateWithError::bernoulli(hits, trials);
    let d = params.d as f64;
    let mean = pi.mean.powf(d);
    let se = d * pi.mean.powf(d - 1.0) * pi.stderr;
    Ok(FactorizedCliqueEstimate {
        probability: EstimateWithError::new(star * mean, star * se, trials),
        star_probability: star,
        per_dimension: pi,
    })
}

/// Relative variance `Var / Mean^2` of `K_k(G_{<= w_c})` over independent graphs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeVarianceEstimate {
    pub ratio: f64,
    pub mean: f64,
    pub variance: f64,
    pub counts: Vec<u64>,
}

pub fn estimate_relative_variance_kk(
    params: &ModelParams,
    k: usize,
    w_c: f64,
    graphs: usize,
    stream: &SeededStream,
) -> Result<RelativeVarianceEstimate> {
    estimate_relative_variance_kk_with(params, k, w_c, graphs, stream, Exec::default())
}

pub fn estimate_relative_variance_kk_with(
    params: &ModelParams,
    k: usize,
    w_c: f64,
    graphs: usize,
    stream: &SeededStream,
    exec: Exec,
) -> Result<RelativeVarianceEstimate> {
    params.validate()?;
    if graphs < 2 {
        return Err(GirgError::InvalidParameter {
            name: "graphs",
            reason: "need at least two graphs".into(),
        });
    }
    let gs = stream.child(tags::GRAPHS);
    let counts = exec
        .map(graphs as u64, |i| -> Result<u64> {
            let s = gs.child(i);
            let w = crate::model::sample_weights(params, &s)?;
            let (g, _) = sample_girg_leq_weight(params, &w, w_c, &s)?;
            Ok(count_k_cliques(&g, k))
        })
        .into_iter()
        .collect::<Result<Vec<u64>>>()?;
    let xs: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let ratio = relative_variance(&xs)?;
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    Ok(RelativeVarianceEstimate {
        ratio,
        mean,
        variance: ratio * mean * mean,
        counts,
    })
}

/// `k`-clique incidence aggregated over weight deciles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecileIncidence {
    pub decile: usize,
    pub min_weight: f64,
    pub max_weight: f64,
    pub vertices: usize,
    /// Sum over the decile's vertices of the number of `k`-cliques containing them.
    pub incidence: u64,
}

pub fn clique_incidence_by_weight_decile(g: &GraphSample, weights: &[f64], k: usize) -> Vec<DecileIncidence> {
    assert_eq!(weights.len(), g.n());
    let inc = k_clique_vertex_incidence(g, k);
    let mut idx: Vec<usize> = (0..g.n()).collect();
    idx.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]));
    let n = idx.len();
    (0..10)
        .filter_map(|q| {
            let part = &idx[q * n / 10..(q + 1) * n / 10];
            (!part.is_empty()).then(|| DecileIncidence {
                decile: q + 1,
                min_weight: weights[part[0]],
                max_weight: weights[*part.last().unwrap()],
                vertices: part.len(),
                incidence: part.iter().map(|&v| inc[v]).sum(),
            })
        })
        .collect()
}
