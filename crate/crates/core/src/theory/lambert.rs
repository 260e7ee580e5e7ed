use crate::error::{domain, Result};

/// Principal branch of the Lambert W function for `z >= 0`, by Halley iteration.
pub fn lambert_w(z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain("lambert_w", format!("z = {z} is outside [0, inf)")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut w = if z < 1.0 {
        z.ln_1p()
    } else if z < std::f64::consts::E {
        0.5 * z.ln_1p() + 0.25
    } else {
        let l = z.ln();
        l - l.ln()
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(w)
}

/// Clique size `k` solving `(a k)^(-k) = n^(-1-eps)` with `a = c1 exp(c2 d)`,
/// i.e. `k = exp(W(a L)) / a` with `L = (1 + eps) ln n`. The factor
/// `a^(-k)` is the `exp(-c2 d k)` decay of the expected clique count.
pub fn clique_number_point_prediction(n: f64, d: f64, c1: f64, c2: f64, epsilon: f64) -> Result<f64> {
    if !(n > 1.0) || !(c1 > 0.0) || !(c2 >= 0.0) || !(d >= 0.0) || !(epsilon > -1.0) {
        return Err(domain(
            "clique_number_point_prediction",
            format!("need n > 1, c1 > 0, c2 >= 0, d >= 0, eps > -1 (n={n}, c1={c1}, c2={c2}, d={d}, eps={epsilon})"),
        ));
    }
    let ln_a = c1.ln() + c2 * d;
    let l = (1.0 + epsilon) * n.ln();
    let z = (ln_a + l.ln()).exp();
    let w = lambert_w(z)?;
    // exp(W(z)) = z / W(z), so k = L / W(aL)
    Ok(if w > 0.0 { l / w } else { (-ln_a).exp() })
}

/// Leading-order form `(1+eps) ln n / (ln(c1 (1+eps)) + c2 d + ln ln n)`.
pub fn clique_number_asymptotic_form(n: f64, d: f64, c1: f64, c2: f64, epsilon: f64) -> f64 {
    let l = (1.0 + epsilon) * n.ln();
    l / ((c1 * (1.0 + epsilon)).ln() + c2 * d + n.ln().ln())
}
