//! Geometry of the d-dimensional unit torus: circle and `L_p` distances,
//! connection thresholds, ball volumes and the distribution of sums of
//! powered coordinate distances used for finite-`p` thresholds.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{domain, GirgError, Result};
use crate::exec::Exec;
use crate::model::{kappa, ModelParams, Norm};
use crate::rng::{uniform, SeededStream};
use crate::stats::CompensatedSum;

/// A point of `[0, 1)^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(c) = coords.iter().find(|c| !(**c >= 0.0 && **c < 1.0)) {
            return Err(GirgError::InvalidParameter {
                name: "coords",
                reason: format!("coordinate {c} outside [0, 1)"),
            });
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Wraps a real number into `[0, 1)`.
#[inline]
pub fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance on the circle of circumference one.
#[inline]
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let diff = (a - b).abs();
    diff.min(1.0 - diff)
}

/// Torus distance between coordinate slices under `norm`.
#[inline]
pub fn distance_slices(x: &[f64], y: &[f64], norm: Norm) -> f64 {
    match norm {
        Norm::Infinity => x
            .iter()
            .zip(y)
            .map(|(a, b)| circle_distance(*a, *b))
            .fold(0.0, f64::max),
        Norm::P(p) => {
            let s: f64 = x.iter().zip(y).map(|(a, b)| circle_distance(*a, *b).powf(p)).sum();
            s.powf(1.0 / p)
        }
    }
}

pub fn torus_distance(x: &TorusPoint, y: &TorusPoint, norm: Norm) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(GirgError::DimensionMismatch {
            expected: x.dim(),
            actual: y.dim(),
        });
    }
    Ok(distance_slices(&x.coords, &y.coords, norm))
}

/// `min(1/2, (lambda w_u w_v / n)^(1/d) / 2)`, evaluated in log space.
pub fn connection_threshold_linf(w_u: f64, w_v: f64, params: &ModelParams) -> f64 {
    let ln = params.lambda.ln() + w_u.ln() + w_v.ln() - (params.n as f64).ln();
    (0.5 * (ln / params.d as f64).exp()).min(0.5)
}

/// Volume of the `L_inf` ball of radius `r`: `min(1, (2r)^d)`.
pub fn ball_volume_linf(r: f64, d: usize) -> f64 {
    if r >= 0.5 {
        return 1.0;
    }
    if r <= 0.0 {
        return 0.0;
    }
    (d as f64 * (2.0 * r).ln()).exp().min(1.0)
}

/// Mean and variance of `Delta^p` for `Delta` uniform on `[0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CltConstants {
    pub mu: f64,
    pub sigma2: f64,
}

pub fn clt_constants(norm: Norm) -> Result<CltConstants> {
    let p = match norm {
        Norm::Infinity => return Err(domain("clt_constants", "the maximum norm has no CLT normalisation")),
        Norm::P(p) if p >= 1.0 => p,
        Norm::P(p) => return Err(domain("clt_constants", format!("p = {p} < 1"))),
    };
    let half_p = 0.5f64.powf(p);
    Ok(CltConstants {
        mu: half_p / (p + 1.0),
        sigma2: half_p * half_p * (1.0 / (2.0 * p + 1.0) - 1.0 / ((p + 1.0) * (p + 1.0))),
    })
}

/// Lattice approximation of the law of `S = sum_{i<=d} Delta_i^p`, with
/// `Delta_i` i.i.d. circle distances of uniform points (uniform on `[0, 1/2]`).
///
/// The single-term law is binned exactly into `bins` cells of width `h`, the
/// d-fold convolution is taken by raising its discrete Fourier transform to the
/// d-th power, and the resulting distribution is spread uniformly over each
/// lattice cell so the CDF is piecewise linear.
#[derive(Debug, Clone)]
pub struct SumPowerDistribution {
    d: usize,
    p: f64,
    h: f64,
    /// CDF at the knots `(J + d/2 + 1/2) h`, `J = 0..len`.
    cdf: Vec<f64>,
}

/// Upper bound on the FFT length used by [`SumPowerDistribution`].
pub const MAX_FFT_LEN: usize = 1 << 22;
/// Default single-term resolution cap.
pub const DEFAULT_TERM_BINS: usize = 1 << 16;

impl SumPowerDistribution {
    /// Builds the distribution with the largest single-term resolution (at most
    /// `DEFAULT_TERM_BINS`) that keeps the FFT within `MAX_FFT_LEN`.
    pub fn new(d: usize, p: f64) -> Result<Self> {
        Self::with_bins(d, p, Self::default_bins(d))
    }

    pub fn default_bins(d: usize) -> usize {
        let fit = (MAX_FFT_LEN / 2) / d.max(1);
        let mut bins = DEFAULT_TERM_BINS.min(fit.max(16));
        // round down to a power of two for reproducible halving
        bins = 1 << (usize::BITS - 1 - bins.leading_zeros());
        bins
    }

    pub fn with_bins(d: usize, p: f64, bins: usize) -> Result<Self> {
        if d == 0 {
            return Err(domain("SumPowerDistribution", "d must be >= 1"));
        }
        if !(p >= 1.0) || !p.is_finite() {
            return Err(domain("SumPowerDistribution", format!("need finite p >= 1, got {p}")));
        }
        if bins < 2 {
            return Err(domain("SumPowerDistribution", "need at least two bins"));
        }
        let top = 0.5f64.powf(p);
        let h = top / bins as f64;
        // P(Delta^p <= y) = 2 y^(1/p)
        let term_cdf = |y: f64| (2.0 * y.powf(1.0 / p)).min(1.0);
        let masses: Vec<f64> = (0..bins)
            .map(|j| term_cdf((j + 1) as f64 * h) - term_cdf(j as f64 * h))
            .collect();
        let len = d * (bins - 1) + 1;
        let cdf = if d == 1 {
            cumulative(&masses)
        } else {
            let fft_len = len.next_power_of_two();
            if fft_len > MAX_FFT_LEN {
                return Err(domain(
                    "SumPowerDistribution",
                    format!("lattice of {len} points exceeds the FFT budget"),
                ));
            }
            let mut planner = FftPlanner::<f64>::new();
            let fwd = planner.plan_fft_forward(fft_len);
            let inv = planner.plan_fft_inverse(fft_len);
            let mut buf: Vec<Complex<f64>> = masses
                .iter()
                .map(|&m| Complex::new(m, 0.0))
                .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
                .take(fft_len)
                .collect();
            fwd.process(&mut buf);
            for z in buf.iter_mut() {
                *z = complex_powu(*z, d);
            }
            inv.process(&mut buf);
            let scale = 1.0 / fft_len as f64;
            let probs: Vec<f64> = buf[..len].iter().map(|z| (z.re * scale).max(0.0)).collect();
            cumulative(&probs)
        };
        Ok(Self { d, p, h, cdf })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn knot(&self, j: isize) -> f64 {
        (j as f64 + self.d as f64 / 2.0 + 0.5) * self.h
    }

    fn cdf_at_index(&self, j: isize) -> f64 {
        if j < 0 {
            0.0
        } else {
            self.cdf[(j as usize).min(self.cdf.len() - 1)]
        }
    }

    /// `P(S <= s)`.
    pub fn cdf(&self, s: f64) -> f64 {
        let x = s / self.h - self.d as f64 / 2.0 - 0.5;
        if x < -1.0 {
            return 0.0;
        }
        let j = x.floor() as isize;
        if j >= self.cdf.len() as isize - 1 {
            return 1.0;
        }
        let frac = x - j as f64;
        let lo = self.cdf_at_index(j);
        let hi = self.cdf_at_index(j + 1);
        lo + frac * (hi - lo)
    }

    /// Smallest `s` with `P(S <= s) = q`, linear within a lattice cell.
    pub fn quantile(&self, q: f64) -> f64 {
        let total = *self.cdf.last().unwrap();
        let target = q * total;
        let idx = self.cdf.partition_point(|&c| c < target);
        let j = idx as isize;
        let lo = self.cdf_at_index(j - 1);
        let hi = self.cdf_at_index(j);
        let frac = if hi > lo { (target - lo) / (hi - lo) } else { 0.0 };
        self.knot(j - 1) + frac * self.h
    }
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = CompensatedSum::default();
    probs
        .iter()
        .map(|&p| {
            acc.add(p);
            acc.value()
        })
        .collect()
}

fn complex_powu(mut base: Complex<f64>, mut exp: usize) -> Complex<f64> {
    let mut acc = Complex::new(1.0, 0.0);
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// A finite-`p` connection threshold together with its estimated accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpThreshold {
    pub t: f64,
    /// Absolute change of `t` between the chosen resolution and half of it.
    pub achieved_accuracy: f64,
}

/// Threshold `t` with `P(||x_u - x_v||_p <= t) = kappa_uv / n` for uniform
/// points, by lattice convolution.
pub fn threshold_quantile_lp(w_u: f64, w_v: f64, params: &ModelParams, accuracy: f64) -> Result<LpThreshold> {
    let p = match params.norm {
        Norm::P(p) => p,
        Norm::Infinity => {
            return Err(domain("threshold_quantile_lp", "requires a finite norm index"));
        }
    };
    let q = kappa(w_u, w_v, params) / params.n as f64;
    quantile_threshold_for_probability(q, params.d, p, accuracy)
}

/// Threshold for a target marginal probability `q` in (0, 1).
pub fn quantile_threshold_for_probability(q: f64, d: usize, p: f64, accuracy: f64) -> Result<LpThreshold> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(
            "threshold_quantile_lp",
            format!("target probability {q} outside (0, 1)"),
        ));
    }
    let bins = SumPowerDistribution::default_bins(d);
    let fine = SumPowerDistribution::with_bins(d, p, bins)?;
    let coarse = SumPowerDistribution::with_bins(d, p, bins / 2)?;
    let t = fine.quantile(q).powf(1.0 / p);
    let achieved = (t - coarse.quantile(q).powf(1.0 / p)).abs();
    if achieved > accuracy {
        return Err(GirgError::AccuracyUnreachable {
            requested: accuracy,
            achieved,
        });
    }
    Ok(LpThreshold {
        t,
        achieved_accuracy: achieved,
    })
}

/// Monte Carlo route: empirical `q`-quantile of `||x_u - x_v||_p` over
/// `samples` uniform pairs, with the binomial-order-statistic accuracy.
pub fn threshold_quantile_lp_mc(
    q: f64,
    d: usize,
    p: f64,
    samples: usize,
    stream: &SeededStream,
) -> Result<LpThreshold> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(
            "threshold_quantile_lp_mc",
            format!("target probability {q} outside (0, 1)"),
        ));
    }
    if samples < 100 {
        return Err(domain("threshold_quantile_lp_mc", "need at least 100 samples"));
    }
    let blocks = Exec::default().map_blocks(samples as u64, 1 << 16, |b, _, len| {
        let mut rng = stream.rng_at(b);
        (0..len)
            .map(|_| (0..d).map(|_| (0.5 * uniform(&mut rng)).powf(p)).sum::<f64>())
            .collect::<Vec<f64>>()
    });
    let mut sums = blocks.concat();
    let m = sums.len() as f64;
    let rank = |x: f64| ((x * m).ceil() as usize).clamp(1, sums.len()) - 1;
    let spread = (q * (1.0 - q) / m).sqrt();
    let (lo_r, mid_r, hi_r) = (
        rank((q - 2.0 * spread).max(0.0)),
        rank(q),
        rank((q + 2.0 * spread).min(1.0)),
    );
    let mid = *sums.select_nth_unstable_by(mid_r, f64::total_cmp).1;
    let lo = *sums.select_nth_unstable_by(lo_r, f64::total_cmp).1;
    let hi = *sums.select_nth_unstable_by(hi_r, f64::total_cmp).1;
    let t = mid.powf(1.0 / p);
    Ok(LpThreshold {
        t,
        achieved_accuracy: (hi.powf(1.0 / p) - lo.powf(1.0 / p)) / 4.0,
    })
}

/// Adjacency rule for one pair of vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairThreshold {
    /// Capped pair: adjacent at every distance.
    Always,
    /// Maximum norm: every circle distance at most `t`.
    Linf(f64),
    /// Finite `p`: `sum Delta_i^p <= s`.
    LpPow { s: f64, p: f64 },
}

impl PairThreshold {
    #[inline]
    pub fn admits(&self, x: &[f64], y: &[f64]) -> bool {
        match *self {
            PairThreshold::Always => true,
            PairThreshold::Linf(t) => x.iter().zip(y).all(|(a, b)| circle_distance(*a, *b) <= t),
            PairThreshold::LpPow { s, p } => {
                let mut acc = 0.0;
                for (a, b) in x.iter().zip(y) {
                    acc += circle_distance(*a, *b).powf(p);
                    if acc > s {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Largest per-coordinate separation any adjacent pair can have.
    pub fn linf_radius(&self) -> f64 {
        match *self {
            PairThreshold::Always => 0.5,
            PairThreshold::Linf(t) => t,
            PairThreshold::LpPow { s, p } => s.powf(1.0 / p).min(0.5),
        }
    }
}

/// Precomputed connection rule for a parameter set.
///
/// Under the maximum norm the threshold factorises as
/// `t_uv = base * f(w_u) * f(w_v)` with `f(w) = w^(1/d)`, which avoids a
/// transcendental call per pair.
#[derive(Debug, Clone)]
pub struct Connector {
    params: ModelParams,
    base: f64,
    lp: Option<SumPowerDistribution>,
}

impl Connector {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let lp = match params.norm {
            Norm::Infinity => None,
            Norm::P(p) => Some(SumPowerDistribution::new(params.d, p)?),
        };
        let d = params.d as f64;
        Ok(Self {
            params: *params,
            base: 0.5 * ((params.lambda.ln() - (params.n as f64).ln()) / d).exp(),
            lp,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `w^(1/d)`.
    #[inline]
    pub fn factor(&self, w: f64) -> f64 {
        (w.ln() / self.params.d as f64).exp()
    }

    /// Threshold from precomputed factors (maximum norm) and weights.
    #[inline]
    pub fn threshold_with_factors(&self, w_u: f64, w_v: f64, f_u: f64, f_v: f64) -> PairThreshold {
        match &self.lp {
            None => {
                let t = self.base * f_u * f_v;
                if t >= 0.5 {
                    PairThreshold::Always
                } else {
                    PairThreshold::Linf(t)
                }
            }
            Some(dist) => {
                let q = kappa(w_u, w_v, &self.params) / self.params.n as f64;
                if q >= 1.0 {
                    PairThreshold::Always
                } else {
                    PairThreshold::LpPow {
                        s: dist.quantile(q),
                        p: dist.p(),
                    }
                }
            }
        }
    }

    pub fn threshold(&self, w_u: f64, w_v: f64) -> PairThreshold {
        self.threshold_with_factors(w_u, w_v, self.factor(w_u), self.factor(w_v))
    }

    pub fn adjacent(&self, w_u: f64, w_v: f64, x: &[f64], y: &[f64]) -> bool {
        self.threshold(w_u, w_v).admits(x, y)
    }
}
