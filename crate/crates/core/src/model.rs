//! Model parameters, Pareto weights and capped weight products.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{domain, GirgError, Result};
use crate::exec::Exec;
use crate::rng::{tags, uniform_open0, SeededStream};

/// Norm used for distances on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Norm {
    /// Maximum norm.
    Infinity,
    /// `L_p` with finite `p >= 1`.
    P(f64),
}

impl Norm {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Norm::Infinity)
    }
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Norm::Infinity => write!(f, "inf"),
            Norm::P(p) => write!(f, "{p}"),
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = GirgError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "max") {
            return Ok(Norm::Infinity);
        }
        let p: f64 = t.parse().map_err(|_| GirgError::Parse(format!("invalid norm `{s}`")))?;
        if p.is_infinite() && p > 0.0 {
            Ok(Norm::Infinity)
        } else if p >= 1.0 {
            Ok(Norm::P(p))
        } else {
            Err(GirgError::Parse(format!("norm index must be >= 1, got {p}")))
        }
    }
}

/// Full parameterization of a GIRG / IRG instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub beta: f64,
    pub w0: f64,
    pub lambda: f64,
    pub d: usize,
    pub norm: Norm,
}

impl ModelParams {
    /// Validates the parameters. The power-law exponent may sit on the
    /// boundary `beta = 2`; analytic routines that need `beta > 2` check it
    /// themselves.
    pub fn new(n: usize, beta: f64, w0: f64, lambda: f64, d: usize, norm: Norm) -> Result<Self> {
        let p = Self {
            n,
            beta,
            w0,
            lambda,
            d,
            norm,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(GirgError::InvalidParameter { name, reason });
        if self.n < 1 {
            return bad("n", "need at least one vertex".into());
        }
        if !(self.beta >= 2.0) || !self.beta.is_finite() {
            return bad("beta", format!("power-law exponent must be >= 2, got {}", self.beta));
        }
        if !(self.w0 > 0.0) || !self.w0.is_finite() {
            return bad("w0", format!("minimum weight must be positive, got {}", self.w0));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return bad("lambda", format!("must be positive, got {}", self.lambda));
        }
        if self.d < 1 {
            return bad("d", "dimension must be >= 1".into());
        }
        if let Norm::P(p) = self.norm {
            if !(p >= 1.0) || !p.is_finite() {
                return bad("norm", format!("L_p index must be finite and >= 1, got {p}"));
            }
        }
        Ok(())
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..*self }
    }

    pub fn with_d(&self, d: usize) -> Self {
        Self { d, ..*self }
    }

    pub fn with_norm(&self, norm: Norm) -> Self {
        Self { norm, ..*self }
    }

    /// `ln(tau)` with `tau = 2^d / lambda`; tau itself overflows for large d.
    pub fn ln_tau(&self) -> f64 {
        self.d as f64 * std::f64::consts::LN_2 - self.lambda.ln()
    }

    /// Hex SHA-256 digest of a canonical rendering of the parameters.
    pub fn digest(&self) -> String {
        let canonical = format!(
            "n={};beta={:e};w0={:e};lambda={:e};d={};norm={}",
            self.n, self.beta, self.w0, self.lambda, self.d, self.norm
        );
        let hash = Sha256::digest(canonical.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Per-vertex weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSequence {
    weights: Vec<f64>,
}

impl WeightSequence {
    /// Explicit weights; each must be at least `w0`.
    pub fn new(weights: Vec<f64>, w0: f64) -> Result<Self> {
        if let Some(w) = weights.iter().find(|&&w| !(w >= w0) || !w.is_finite()) {
            return Err(GirgError::InvalidParameter {
                name: "weights",
                reason: format!("weight {w} below minimum weight {w0}"),
            });
        }
        Ok(Self { weights })
    }

    /// Weights checked against a parameter set, including the length.
    pub fn for_params(weights: Vec<f64>, params: &ModelParams) -> Result<Self> {
        if weights.len() != params.n {
            return Err(GirgError::DimensionMismatch {
                expected: params.n,
                actual: weights.len(),
            });
        }
        Self::new(weights, params.w0)
    }

    pub fn constant(n: usize, w: f64) -> Self {
        Self { weights: vec![w; n] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }
}

/// `1 - (x / w0)^(1 - beta)`.
pub fn pareto_cdf(x: f64, beta: f64, w0: f64) -> Result<f64> {
    if !(beta > 2.0) {
        return Err(domain("pareto_cdf", format!("beta must exceed 2, got {beta}")));
    }
    if !(w0 > 0.0) {
        return Err(domain("pareto_cdf", format!("w0 must be positive, got {w0}")));
    }
    if !(x >= w0) {
        return Err(domain("pareto_cdf", format!("x = {x} below w0 = {w0}")));
    }
    Ok(-((1.0 - beta) * (x / w0).ln()).exp_m1())
}

/// Inverse CDF: `w0 * u^(1 / (1 - beta))` for `u` in (0, 1].
#[inline]
pub fn pareto_from_uniform(u: f64, beta: f64, w0: f64) -> f64 {
    w0 * (u.ln() / (1.0 - beta)).exp()
}

/// Draws `params.n` Pareto weights; weight `i` depends only on `(stream, i)`.
pub fn sample_weights(params: &ModelParams, stream: &SeededStream) -> Result<WeightSequence> {
    params.validate()?;
    let s = stream.child(tags::WEIGHTS);
    let (beta, w0) = (params.beta, params.w0);
    let blocks = Exec::default().map_blocks(params.n as u64, 1 << 14, |_, start, len| {
        (start..start + len)
            .map(|i| pareto_from_uniform(uniform_open0(&mut s.rng_at(i)), beta, w0))
            .collect::<Vec<f64>>()
    });
    Ok(WeightSequence {
        weights: blocks.concat(),
    })
}

/// `min(lambda * w_u * w_v, n)`.
#[inline]
pub fn kappa(w_u: f64, w_v: f64, params: &ModelParams) -> f64 {
    (params.lambda * w_u * w_v).min(params.n as f64)
}

/// Marginal IRG edge probability `kappa / n`.
#[inline]
pub fn irg_edge_probability(kappa: f64, n: usize) -> f64 {
    kappa / n as f64
}

/// Lazy accessor for the capped weight products of a weight sequence.
#[derive(Debug, Clone, Copy)]
pub struct KappaMatrix<'a> {
    weights: &'a WeightSequence,
    params: &'a ModelParams,
}

impl<'a> KappaMatrix<'a> {
    pub fn new(weights: &'a WeightSequence, params: &'a ModelParams) -> Self {
        Self { weights, params }
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        kappa(self.weights.get(u), self.weights.get(v), self.params)
    }

    /// Smallest entry over distinct pairs.
    pub fn min_entry(&self) -> Option<f64> {
        let w = self.weights.as_slice();
        if w.len() < 2 {
            return None;
        }
        let mut sorted = w.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        Some(kappa(sorted[0], sorted[1], self.params))
    }
}

/// Density of the minimum of `k` independent Pareto weights.
pub fn min_weight_density(x: f64, k: usize, beta: f64, w0: f64) -> Result<f64> {
    if !(x >= w0) {
        return Err(domain("min_weight_density", format!("x = {x} below w0 = {w0}")));
    }
    if k < 1 {
        return Err(domain("min_weight_density", "k must be >= 1"));
    }
    let e = (1.0 - beta) * k as f64;
    // (beta-1) k / w0^e * x^(e-1), evaluated in log space
    Ok((beta - 1.0) * k as f64 * ((e - 1.0) * x.ln() - e * w0.ln()).exp())
}

/// Density of a weight conditioned on being at least `w1`.
pub fn conditional_weight_density(x: f64, w1: f64, beta: f64) -> Result<f64> {
    if !(x >= w1) {
        return Err(domain(
            "conditional_weight_density",
            format!("x = {x} below conditioning weight {w1}"),
        ));
    }
    Ok((beta - 1.0) * (-beta * x.ln() - (1.0 - beta) * w1.ln()).exp())
}

/// `E[w | w >= w1] = (beta - 1) / (beta - 2) * w1`.
pub fn conditional_weight_mean(w1: f64, beta: f64) -> Result<f64> {
    if !(beta > 2.0) {
        return Err(domain("conditional_weight_mean", "beta must exceed 2"));
    }
    Ok((beta - 1.0) / (beta - 2.0) * w1)
}
