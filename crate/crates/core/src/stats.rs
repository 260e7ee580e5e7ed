//! Estimators, error bars and small statistical helpers shared by the
//! Monte Carlo layers.

use serde::Serialize;
use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{GirgError, Result};

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateWithError {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    /// Success count for Bernoulli estimators.
    pub successes: Option<u64>,
}

impl EstimateWithError {
    /// Bernoulli estimate. Uses the normal-approximation standard error, or the
    /// half-width of the z = 1 Wilson interval when fewer than ten successes or
    /// ten failures were observed.
    pub fn bernoulli(successes: u64, trials: u64) -> Self {
        assert!(trials > 0, "Bernoulli estimate needs at least one trial");
        assert!(successes <= trials);
        let n = trials as f64;
        let p = successes as f64 / n;
        let stderr = if successes < 10 || trials - successes < 10 {
            wilson_half_width(p, n, 1.0)
        } else {
            (p * (1.0 - p) / n).sqrt()
        };
        Self {
            mean: p,
            stderr,
            trials,
            successes: Some(successes),
        }
    }

    pub fn new(mean: f64, stderr: f64, trials: u64) -> Self {
        Self {
            mean,
            stderr,
            trials,
            successes: None,
        }
    }

    /// Multiplies the estimate (and its error) by an exactly known factor.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            mean: self.mean * factor,
            stderr: self.stderr * factor.abs(),
            trials: self.trials,
            successes: self.successes,
        }
    }

    /// `|mean - value| <= sigmas * stderr`.
    pub fn within(&self, value: f64, sigmas: f64) -> bool {
        (self.mean - value).abs() <= sigmas * self.stderr
    }

    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value) / self.stderr
    }
}

fn wilson_half_width(p: f64, n: f64, z: f64) -> f64 {
    let z2 = z * z;
    z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
}

/// Least-squares slope of `ln(value)` against `ln(x)` with its standard error.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(GirgError::InvalidParameter {
            name: "points",
            reason: format!("need at least 3 points, got {}", points.len()),
        });
    }
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(GirgError::InvalidParameter {
            name: "points",
            reason: format!("log-log fit needs positive coordinates, got ({x}, {y})"),
        });
    }
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(GirgError::InvalidParameter {
            name: "points",
            reason: "all abscissae are equal".into(),
        });
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (rss / (m - 2.0) / sxx).sqrt();
    Ok((slope, stderr))
}

/// Standard Gaussian distribution function and its inverse.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardNormal;

impl StandardNormal {
    pub fn cdf(x: f64) -> f64 {
        0.5 * erfc(-x / std::f64::consts::SQRT_2)
    }

    pub fn pdf(x: f64) -> f64 {
        (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
    }

    /// Inverse distribution function, refined with one Newton step.
    pub fn quantile(q: f64) -> f64 {
        assert!(q > 0.0 && q < 1.0, "quantile argument must lie in (0, 1)");
        let x = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * q);
        let density = Self::pdf(x);
        if density > 0.0 {
            x - (Self::cdf(x) - q) / density
        } else {
            x
        }
    }
}

/// Population variance divided by the squared mean.
pub fn relative_variance(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(GirgError::InvalidParameter {
            name: "samples",
            reason: "empty sample".into(),
        });
    }
    let m = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / m;
    if mean == 0.0 {
        return Err(GirgError::ZeroMean);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
    Ok(var / (mean * mean))
}

/// Mean and standard error of the mean (unbiased sample variance).
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let m = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / m;
    if samples.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let m = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / m).max((i + 1) as f64 / m - f)
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

/// Raw-moment accumulator for the sample covariance of paired draws, with a
/// standard error from the variance of the centred products.
#[derive(Debug, Clone, Copy, Default)]
pub struct CovarianceAccumulator {
    count: u64,
    sx: f64,
    sy: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
    sxxy: f64,
    sxyy: f64,
    sxxyy: f64,
}

impl CovarianceAccumulator {
    pub fn push(&mut self, x: f64, y: f64) {
        self.count += 1;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.syy += y * y;
        self.sxy += x * y;
        self.sxxy += x * x * y;
        self.sxyy += x * y * y;
        self.sxxyy += x * x * y * y;
    }

    pub fn merge(&mut self, o: &Self) {
        self.count += o.count;
        self.sx += o.sx;
        self.sy += o.sy;
        self.sxx += o.sxx;
        self.syy += o.syy;
        self.sxy += o.sxy;
        self.sxxy += o.sxxy;
        self.sxyy += o.sxyy;
        self.sxxyy += o.sxxyy;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean_x(&self) -> f64 {
        self.sx / self.count as f64
    }

    pub fn mean_y(&self) -> f64 {
        self.sy / self.count as f64
    }

    /// Returns `(covariance, stderr)`.
    pub fn covariance(&self) -> (f64, f64) {
        let n = self.count as f64;
        let (a, b) = (self.sx / n, self.sy / n);
        let exy = self.sxy / n;
        let cov = exy - a * b;
        // E[(x-a)^2 (y-b)^2] expanded in raw moments.
        let ez2 = self.sxxyy / n - 2.0 * b * self.sxxy / n + b * b * self.sxx / n - 2.0 * a * self.sxyy / n
            + 4.0 * a * b * exy
            - 2.0 * a * b * b * a
            + a * a * self.syy / n
            - 2.0 * a * a * b * b
            + a * a * b * b;
        let var = (ez2 - cov * cov).max(0.0);
        (cov, (var / n).sqrt())
    }
}
