use serde::Serialize;

use super::BoundInterval;
use crate::error::{domain, GirgError, Result};
use crate::stats::CompensatedSum;

fn invalid(name: &'static str, reason: impl Into<String>) -> GirgError {
    GirgError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// `1 - (kappa/n)^(1/d)` without cancellation for large `d`.
#[inline]
pub fn one_minus_root(kappa_over_n: f64, d: f64) -> f64 {
    if kappa_over_n >= 1.0 {
        0.0
    } else {
        -(kappa_over_n.ln() / d).exp_m1()
    }
}

/// Bounds `n^k (2k)^(-k) <= C(n, k) <= (e n / k)^k` for `1 <= k <= n/2`.
pub fn binomial_approx_bounds(n: u64, k: u64) -> Result<BoundInterval> {
    if k == 0 || 2 * k > n {
        return Err(domain(
            "binomial_approx_bounds",
            format!("need 1 <= k <= n/2 (n={n}, k={k})"),
        ));
    }
    let (nf, kf) = (n as f64, k as f64);
    let lower = kf * (nf.ln() - (2.0 * kf).ln());
    let upper = kf * (1.0 + nf.ln() - kf.ln());
    Ok(BoundInterval::new(lower.exp(), upper.exp()))
}

/// Same bounds as [`binomial_approx_bounds`] in natural log.
pub fn binomial_approx_log_bounds(n: u64, k: u64) -> Result<BoundInterval> {
    if k == 0 || 2 * k > n {
        return Err(domain(
            "binomial_approx_log_bounds",
            format!("need 1 <= k <= n/2 (n={n}, k={k})"),
        ));
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok(BoundInterval::new(
        kf * (nf.ln() - (2.0 * kf).ln()),
        kf * (1.0 + nf.ln() - kf.ln()),
    ))
}

/// Upper bound on the probability that `k` random vertices form a star
/// centred at the one of minimal weight, with that weight in `[w_minus, w_plus]`.
///
/// At `k (3 - beta) = 2` the weight integral becomes `ln(w_plus / w_minus)`.
pub fn star_prob_upper(k: usize, beta: f64, w0: f64, lambda: f64, n: f64, w_minus: f64, w_plus: f64) -> Result<f64> {
    if !(beta > 2.0) {
        return Err(invalid("beta", format!("{beta} must exceed 2")));
    }
    if k < 2 {
        return Err(invalid("k", "must be at least 2"));
    }
    if !(w0 > 0.0 && w_minus >= w0 && w_plus >= w_minus) {
        return Err(domain(
            "star_prob_upper",
            format!("need w0 <= w_minus <= w_plus (w0={w0}, w_minus={w_minus}, w_plus={w_plus})"),
        ));
    }
    let kf = k as f64;
    let x = kf * (3.0 - beta) - 2.0;
    let ln_ratio = (w_plus / w_minus).ln();
    // (w_plus^x - w_minus^x) / x
    let integral = if x.abs() < 1e-9 {
        ln_ratio
    } else {
        (x * w_minus.ln()).exp() * (x * ln_ratio).exp_m1() / x
    };
    let ln_const = ((beta - 1.0) * kf).ln()
        + (beta - 1.0) * kf * w0.ln()
        + (kf - 1.0) * ((lambda / n).ln() + ((beta - 1.0) / (beta - 2.0)).ln());
    Ok(ln_const.exp() * integral)
}

/// Exact probability that `k` vertices form a clique given the star around
/// vertex 1, when the other `k - 1` vertices share weight `ratio * w1`.
pub fn cond_clique_prob_uniform(k: usize, d: usize, ratio: f64) -> Result<f64> {
    if k < 2 {
        return Err(invalid("k", "must be at least 2"));
    }
    if d == 0 {
        return Err(invalid("d", "must be at least 1"));
    }
    if !(ratio >= 1.0) || !ratio.is_finite() {
        return Err(domain(
            "cond_clique_prob_uniform",
            format!("ratio {ratio} must be >= 1"),
        ));
    }
    if k == 2 {
        return Ok(1.0);
    }
    let r1 = ratio.powf(1.0 / d as f64);
    if r1 >= 2.0 {
        return Ok(1.0);
    }
    let kf = k as f64;
    let per_dim = 0.5f64.powi(k as i32 - 1) * r1.powi(k as i32 - 2) * ((2.0 - kf) * r1 + 2.0 * (kf - 1.0));
    let p = per_dim.powi(d as i32);
    assert!((0.0..=1.0 + 1e-12).contains(&p), "probability {p} out of range");
    Ok(p.min(1.0))
}

/// `[(1/2)^(d(k-1)) k^d, c^(d(k-2)) (1/2)^(d(k-1)) k^d]`, upper end capped at 1.
pub fn star_clique_sandwich(k: usize, d: usize, c: f64) -> Result<BoundInterval> {
    if k < 3 {
        return Err(invalid("k", "must be at least 3"));
    }
    if d == 0 {
        return Err(invalid("d", "must be at least 1"));
    }
    if !(c >= 1.0) {
        return Err(invalid("c", format!("{c} must be >= 1")));
    }
    let (kf, df) = (k as f64, d as f64);
    let ln_lower = df * (kf.ln() - (kf - 1.0) * std::f64::consts::LN_2);
    let ln_upper = ln_lower + df * (kf - 2.0) * c.ln();
    Ok(BoundInterval::new(ln_lower.exp(), ln_upper.exp().min(1.0)))
}

/// A bound that may be vacuous outside its regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HighDimBound {
    pub value: f64,
    pub ln_value: f64,
    /// False when the formula left `[0, 1]` and the trivial bound was returned.
    pub valid: bool,
}

impl HighDimBound {
    fn from_ln(ln_value: f64) -> Self {
        Self {
            value: ln_value.exp(),
            ln_value,
            valid: true,
        }
    }
}

/// Upper bound on `Pr[E(U_k) ⊇ A]`:
/// `(1 - (kappa0/n)^(r/d) sum_A (1 - (kappa_ij/n)^(1/d)))^d`, `r = (3(k-2)+1)(k-1)`.
/// `kappa_list` holds `kappa_ij` for the edges of `A`.
pub fn highdim_superset_upper(k: usize, d: usize, kappa_list: &[f64], kappa0: f64, n: f64) -> Result<HighDimBound> {
    if k < 3 || d == 0 {
        return Err(invalid("k", "need k >= 3 and d >= 1"));
    }
    let df = d as f64;
    let r = ((3 * (k - 2) + 1) * (k - 1)) as f64;
    let sum: CompensatedSum = kappa_list.iter().map(|&kp| one_minus_root(kp / n, df)).collect();
    let factor = ((kappa0 / n).min(1.0).ln() * r / df).exp();
    let inner = factor * sum.value();
    if inner > 1.0 {
        return Ok(HighDimBound {
            value: 1.0,
            ln_value: 0.0,
            valid: false,
        });
    }
    Ok(HighDimBound::from_ln(df * (-inner).ln_1p()))
}

/// Lower bound `prod_i (1 - sum_{A_i^-} (1 - (kappa_ij/n)^(1/d)))^d`, where
/// `A_i^-` are the edges of `A` from `i` to lower-indexed vertices.
/// `kappa` is a `k x k` matrix, row-major.
pub fn highdim_superset_lower(
    d: usize,
    kappa: &[f64],
    k: usize,
    n: f64,
    edge_set: &[(usize, usize)],
) -> Result<HighDimBound> {
    if kappa.len() != k * k {
        return Err(GirgError::DimensionMismatch {
            expected: k * k,
            actual: kappa.len(),
        });
    }
    if d == 0 {
        return Err(invalid("d", "must be at least 1"));
    }
    let df = d as f64;
    let mut sums = vec![CompensatedSum::default(); k];
    for &(a, b) in edge_set {
        if a == b || a >= k || b >= k {
            return Err(invalid("edge_set", format!("bad edge ({a}, {b}) for k = {k}")));
        }
        let hi = a.max(b);
        sums[hi].add(one_minus_root(kappa[a * k + b] / n, df));
    }
    let mut ln_total = 0.0;
    for s in &sums {
        let v = s.value();
        if v >= 1.0 {
            return Ok(HighDimBound {
                value: 0.0,
                ln_value: f64::NEG_INFINITY,
                valid: false,
            });
        }
        ln_total += df * (-v).ln_1p();
    }
    Ok(HighDimBound::from_ln(ln_total))
}

/// Exact conditional triangle probability `Pr[v2 ~ v3 | v1 ~ v2, v1 ~ v3]`
/// for constant weights: `(3 - 3/a + 1/a^2)^d` with per-dimension arc
/// `a = (kappa0/n)^(1/d)`. Defined for `a` in `[2/3, 1]`.
pub fn triangle_cond_prob(a_per_dim: f64, d: usize) -> Result<f64> {
    if !(2.0 / 3.0 - 1e-15..=1.0).contains(&a_per_dim) {
        return Err(domain(
            "triangle_cond_prob",
            format!("arc {a_per_dim} outside [2/3, 1]"),
        ));
    }
    let q = 3.0 - 3.0 / a_per_dim + 1.0 / (a_per_dim * a_per_dim);
    Ok(q.powi(d as i32))
}

/// [`triangle_cond_prob`] from `kappa0 / n`, in log space.
pub fn triangle_cond_prob_from_kappa(kappa0: f64, n: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    let x = -(kappa0 / n).min(1.0).ln() / df;
    if x > (1.5f64).ln() + 1e-15 {
        return Err(domain(
            "triangle_cond_prob_from_kappa",
            format!("arc exp(-{x}) below 2/3"),
        ));
    }
    // q - 1 = -3 (e^x - 1) + (e^{2x} - 1)
    let qm1 = -3.0 * x.exp_m1() + (2.0 * x).exp_m1();
    Ok((df * qm1.ln_1p()).exp())
}

/// Effective exponent `1 - 3 ln(n)^2 / (4 d^2)` of `kappa0/n` in the
/// conditional triangle probability, with the third-order error scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleExponent {
    pub exponent: f64,
    pub third_order: f64,
    /// `(kappa0 / n)^exponent`.
    pub predicted_probability: f64,
}

pub fn triangle_exponent_correction(n: f64, d: f64, kappa0: f64) -> TriangleExponent {
    let l = n.ln();
    let exponent = 1.0 - 3.0 * l * l / (4.0 * d * d);
    TriangleExponent {
        exponent,
        third_order: l.powi(3) / d.powi(3),
        predicted_probability: ((kappa0 / n).ln() * exponent).exp(),
    }
}

/// Interval `[x - e x^2, x]` with `x = -ell ln(psi) / d`, containing `1 - psi^(ell/d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneMinusPower {
    pub interval: BoundInterval,
    pub exact: f64,
    /// `x <= 0.1`; outside this the interval is valid but loose.
    pub in_regime: bool,
}

pub fn one_minus_power_bounds(psi: f64, ell: f64, d: f64) -> Result<OneMinusPower> {
    if !(psi > 0.0 && psi < 1.0) {
        return Err(domain("one_minus_power_bounds", format!("psi = {psi} outside (0, 1)")));
    }
    if !(ell >= 0.0) || !(d > 0.0) {
        return Err(domain("one_minus_power_bounds", "need ell >= 0 and d > 0"));
    }
    let x = -ell * psi.ln() / d;
    Ok(OneMinusPower {
        interval: BoundInterval::new(x - std::f64::consts::E * x * x, x),
        exact: -(-x).exp_m1(),
        in_regime: x <= 0.1,
    })
}

/// Independent-edge reference value `prod min(1, kappa_ij / n)`.
pub fn irg_superset_probability(kappa_list: &[f64], n: f64) -> f64 {
    kappa_list.iter().map(|&k| (k / n).min(1.0)).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn star_bound_example() {
        let v = star_prob_upper(3, 2.5, 1.0, 1.0, 1000.0, 1.0, 10.0).unwrap();
        // C = -9, (lambda/n)^2 = 1e-6, ((beta-1)/(beta-2))^2 = 9
        let expected = -9.0 * 1e-6 * 9.0 * (10f64.powf(-0.5) - 1.0);
        assert_relative_eq!(v, expected, max_relative = 1e-12);
        assert_relative_eq!(v, 5.539e-5, max_relative = 1e-3);
        assert_eq!(star_prob_upper(3, 2.5, 1.0, 1.0, 1000.0, 4.0, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn star_bound_is_continuous_at_singularity() {
        // k (3 - beta) = 2 at beta = 3 - 2/k
        let b = 3.0 - 2.0 / 4.0;
        let at = star_prob_upper(4, b, 1.0, 1.0, 100.0, 1.0, 5.0).unwrap();
        let near = star_prob_upper(4, b + 1e-7, 1.0, 1.0, 100.0, 1.0, 5.0).unwrap();
        assert_relative_eq!(at, near, max_relative = 1e-5);
    }

    #[test]
    fn uniform_formula_values() {
        assert_relative_eq!(cond_clique_prob_uniform(3, 1, 1.0).unwrap(), 0.75);
        assert_relative_eq!(cond_clique_prob_uniform(3, 2, 1.0).unwrap(), 0.5625);
        assert_eq!(cond_clique_prob_uniform(2, 7, 3.0).unwrap(), 1.0);
        assert_eq!(cond_clique_prob_uniform(4, 1, 2.5).unwrap(), 1.0);
    }

    #[test]
    fn sandwich_values() {
        let s = star_clique_sandwich(3, 1, 1.0).unwrap();
        assert_relative_eq!(s.lower, 0.75, epsilon = 1e-15);
        assert_relative_eq!(s.upper, 0.75, epsilon = 1e-15);
        let s = star_clique_sandwich(4, 2, 1.0).unwrap();
        assert_relative_eq!(s.lower, 0.25, epsilon = 1e-15);
        let s = star_clique_sandwich(3, 4, 1.2).unwrap();
        assert_relative_eq!(s.lower, 81.0 / 256.0, epsilon = 1e-15);
        assert_relative_eq!(s.upper, 1.2f64.powi(4) * 81.0 / 256.0, epsilon = 1e-14);
    }

    #[test]
    fn triangle_formula() {
        assert_relative_eq!(triangle_cond_prob(2.0 / 3.0, 1).unwrap(), 0.75, epsilon = 1e-12);
        assert_relative_eq!(triangle_cond_prob(1.0, 9).unwrap(), 1.0);
        assert_relative_eq!(triangle_cond_prob(0.9, 2).unwrap(), 0.812_223, epsilon = 1e-6);
        assert!(triangle_cond_prob(0.5, 1).is_err());
        let p = triangle_cond_prob_from_kappa(0.81, 1.0, 2).unwrap();
        assert_relative_eq!(p, triangle_cond_prob(0.9, 2).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn high_dim_trivial_cases() {
        assert_eq!(highdim_superset_upper(3, 10, &[], 1.0, 100.0).unwrap().value, 1.0);
        assert_eq!(
            highdim_superset_upper(3, 10, &[100.0; 3], 1.0, 100.0).unwrap().value,
            1.0
        );
        let kappa = vec![100.0; 9];
        assert_eq!(
            highdim_superset_lower(10, &kappa, 3, 100.0, &[(0, 1), (1, 2), (0, 2)])
                .unwrap()
                .value,
            1.0
        );
        assert_eq!(highdim_superset_lower(10, &[1.0; 9], 3, 100.0, &[]).unwrap().value, 1.0);
        let vac = highdim_superset_lower(1, &[1.0; 9], 3, 100.0, &[(0, 2), (1, 2)]).unwrap();
        assert!(!vac.valid && vac.value == 0.0);
    }

    #[test]
    fn exponent_and_one_minus_power() {
        let t = triangle_exponent_correction(10f64.exp(), 100.0, 1.0);
        assert_relative_eq!(t.exponent, 0.9925, epsilon = 1e-12);
        let b = one_minus_power_bounds(0.01, 1.0, 1000.0).unwrap();
        assert!(b.interval.contains(b.exact) && b.in_regime);
        let z = one_minus_power_bounds(0.3, 0.0, 5.0).unwrap();
        assert_eq!((z.interval.lower, z.interval.upper, z.exact), (0.0, 0.0, 0.0));
        assert!(one_minus_power_bounds(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn binomial_bounds_small() {
        assert!(binomial_approx_bounds(10, 1).unwrap().contains(10.0));
        assert!(binomial_approx_bounds(20, 5).unwrap().contains(15504.0));
        assert!(binomial_approx_bounds(10, 6).is_err());
    }
}
