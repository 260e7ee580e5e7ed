use std::fmt;

use serde::Serialize;

use crate::error::{GirgError, Result};

/// Growth of the dimension relative to `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DRegime {
    /// `d = Theta(1)` (for the clique number: `d = O(log log n)`).
    Constant,
    /// `d = omega(1)` and `d = o(log n)` (clique number: `omega(log log n)`).
    Sublog,
    /// `d = omega(log n)`.
    Superlog,
    /// `d = omega(log^2 n)`.
    SuperlogSquared,
    /// The limit `d -> infinity` at fixed `n`.
    Infinite,
}

impl std::str::FromStr for DRegime {
    type Err = GirgError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "constant" => DRegime::Constant,
            "sublog" => DRegime::Sublog,
            "superlog" => DRegime::Superlog,
            "superlog2" | "superlog-squared" => DRegime::SuperlogSquared,
            "infinite" | "inf" => DRegime::Infinite,
            other => return Err(GirgError::Parse(format!("unknown d regime '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegimeLabel {
    GeometricDominated,
    NongeometricDominated,
    Vanishing,
    Boundary,
}

/// Symbolic factor multiplying `n^exponent`, or the full form when no
/// polynomial exponent exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AsymptoticForm {
    /// `Theta(k)^(-k)`.
    ThetaKPowNegK,
    /// `exp(-Theta(1) d k) Theta(k)^(-k)`.
    ExpNegDkThetaKPowNegK,
    /// `exp(-Theta(1) d)`.
    ExpNegD,
    /// `2^exponent` with an explicit exponent (e.g. `-dk`).
    PowerOfTwo(f64),
    /// `Theta(1)`.
    ThetaOne,
    /// `o(1)`.
    LittleOOne,
    /// `Omega(exp(ln^3 n / d^2))`.
    OmegaExpLn3OverD2,
    /// `Theta(exp(ln^3 n / d^2))`.
    ThetaExpLn3OverD2,
    /// `Theta(log n / log log n)`.
    LogOverLogLog,
    /// `Theta(log n / d)`.
    LogOverD,
    /// `Omega(log n / d)`.
    OmegaLogOverD,
    /// `O(1)`.
    BigOOne,
    /// At most 3.
    AtMostThree,
}

impl fmt::Display for AsymptoticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticForm::ThetaKPowNegK => write!(f, "Theta(k)^-k"),
            AsymptoticForm::ExpNegDkThetaKPowNegK => write!(f, "exp(-Theta(1)dk)Theta(k)^-k"),
            AsymptoticForm::ExpNegD => write!(f, "exp(-Theta(1)d)"),
            AsymptoticForm::PowerOfTwo(e) => write!(f, "2^({e})"),
            AsymptoticForm::ThetaOne => write!(f, "Theta(1)"),
            AsymptoticForm::LittleOOne => write!(f, "o(1)"),
            AsymptoticForm::OmegaExpLn3OverD2 => write!(f, "Omega(exp(ln^3(n)/d^2))"),
            AsymptoticForm::ThetaExpLn3OverD2 => write!(f, "Theta(exp(ln^3(n)/d^2))"),
            AsymptoticForm::LogOverLogLog => write!(f, "Theta(log(n)/loglog(n))"),
            AsymptoticForm::LogOverD => write!(f, "Theta(log(n)/d)"),
            AsymptoticForm::OmegaLogOverD => write!(f, "Omega(log(n)/d)"),
            AsymptoticForm::BigOOne => write!(f, "O(1)"),
            AsymptoticForm::AtMostThree => write!(f, "<=3"),
        }
    }
}

/// One cell of an asymptotic table: `n^n_exponent * form`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimePrediction {
    pub label: RegimeLabel,
    pub n_exponent: Option<f64>,
    pub form: AsymptoticForm,
    /// The parameters sit on a phase boundary the tables leave open.
    pub boundary: bool,
}

impl RegimePrediction {
    fn new(label: RegimeLabel, n_exponent: Option<f64>, form: AsymptoticForm) -> Self {
        Self {
            label,
            n_exponent,
            form,
            boundary: false,
        }
    }

    fn flagged(mut self, boundary: bool) -> Self {
        if boundary {
            self.boundary = true;
            self.label = RegimeLabel::Boundary;
        }
        self
    }
}

const BOUNDARY_TOL: f64 = 1e-9;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 2.0) {
        return Err(GirgError::InvalidParameter {
            name: "beta",
            reason: format!("{beta} must exceed 2"),
        });
    }
    Ok(())
}

fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(GirgError::InvalidParameter {
            name: "k",
            reason: "must be at least 3".into(),
        });
    }
    Ok(())
}

/// `k > 2 / (3 - beta)` with `2 < beta < 3`, and whether `k` sits on the boundary.
fn heavy_core_branch(k: usize, beta: f64) -> (bool, bool) {
    if beta >= 3.0 {
        return (false, false);
    }
    let kc = 2.0 / (3.0 - beta);
    let kf = k as f64;
    (kf > kc + BOUNDARY_TOL, (kf - kc).abs() <= BOUNDARY_TOL)
}

/// Upper bound on `q_k`: `n^((k/2)(1-beta))` above the phase transition, `n^(1-k)` otherwise.
pub fn qk_regime_upper(k: usize, beta: f64) -> Result<RegimePrediction> {
    check_beta(beta)?;
    check_k(k)?;
    let kf = k as f64;
    let (heavy, boundary) = heavy_core_branch(k, beta);
    let p = if heavy {
        RegimePrediction::new(
            RegimeLabel::NongeometricDominated,
            Some(kf / 2.0 * (1.0 - beta)),
            AsymptoticForm::ThetaOne,
        )
    } else {
        RegimePrediction::new(
            RegimeLabel::GeometricDominated,
            Some(1.0 - kf),
            AsymptoticForm::ThetaOne,
        )
    };
    Ok(p.flagged(boundary || (beta - 3.0).abs() <= BOUNDARY_TOL))
}

/// Lower bound on `q_k` for low dimension; the geometric branch carries `2^(-dk)`.
pub fn qk_lower_lowdim(k: usize, beta: f64, d: usize) -> Result<RegimePrediction> {
    let mut p = qk_regime_upper(k, beta)?;
    if p.n_exponent == Some(1.0 - k as f64) {
        p.form = AsymptoticForm::PowerOfTwo(-((d * k) as f64));
    }
    Ok(p)
}

/// Expected number of `k`-cliques: the cell of the `k >= 4` table, or of the
/// triangle table for `k = 3`. `beta = inf` selects constant weights.
pub fn expected_kk_regime(beta: f64, k: usize, d: DRegime) -> Result<RegimePrediction> {
    check_beta(beta)?;
    check_k(k)?;
    let kf = k as f64;
    let heavy_exp = kf / 2.0 * (3.0 - beta);
    let beta_three = (beta - 3.0).abs() <= BOUNDARY_TOL;
    use AsymptoticForm as F;
    use RegimeLabel as L;
    if k == 3 {
        let seven_thirds = (beta - 7.0 / 3.0).abs() <= BOUNDARY_TOL;
        let low_d = matches!(d, DRegime::Constant | DRegime::Sublog);
        let p = if beta < 7.0 / 3.0 {
            RegimePrediction::new(L::NongeometricDominated, Some(heavy_exp), F::ThetaOne)
        } else if beta < 3.0 {
            if low_d {
                RegimePrediction::new(L::GeometricDominated, Some(1.0), F::ExpNegD)
            } else {
                RegimePrediction::new(L::NongeometricDominated, Some(heavy_exp), F::ThetaOne)
            }
        } else {
            let constant_weights = beta.is_infinite();
            match d {
                DRegime::Constant | DRegime::Sublog => {
                    RegimePrediction::new(L::GeometricDominated, Some(1.0), F::ExpNegD)
                }
                DRegime::Superlog => RegimePrediction::new(
                    L::GeometricDominated,
                    None,
                    if constant_weights {
                        F::ThetaExpLn3OverD2
                    } else {
                        F::OmegaExpLn3OverD2
                    },
                ),
                DRegime::SuperlogSquared | DRegime::Infinite => {
                    RegimePrediction::new(L::NongeometricDominated, Some(0.0), F::ThetaOne)
                }
            }
        };
        return Ok(p.flagged(seven_thirds || beta_three));
    }
    let (heavy, boundary) = heavy_core_branch(k, beta);
    let p = if heavy {
        RegimePrediction::new(L::NongeometricDominated, Some(heavy_exp), F::ThetaKPowNegK)
    } else if beta < 3.0 {
        match d {
            DRegime::Constant => RegimePrediction::new(L::GeometricDominated, Some(1.0), F::ThetaKPowNegK),
            DRegime::Sublog => RegimePrediction::new(L::GeometricDominated, Some(1.0), F::ExpNegDkThetaKPowNegK),
            _ => RegimePrediction::new(L::NongeometricDominated, Some(heavy_exp), F::ThetaKPowNegK),
        }
    } else {
        match d {
            DRegime::Constant => RegimePrediction::new(L::GeometricDominated, Some(1.0), F::ThetaKPowNegK),
            DRegime::Sublog => RegimePrediction::new(L::GeometricDominated, Some(1.0), F::ExpNegDkThetaKPowNegK),
            _ => RegimePrediction::new(L::Vanishing, None, F::LittleOOne),
        }
    };
    Ok(p.flagged(boundary || beta_three))
}

/// Clique number: `Theta(n^((3-beta)/2))` for `beta < 3`; for `beta >= 3`
/// it depends on how `d` compares to `log log n` and `log n`.
pub fn clique_number_regime(beta: f64, d: DRegime) -> Result<RegimePrediction> {
    check_beta(beta)?;
    use AsymptoticForm as F;
    use RegimeLabel as L;
    if beta < 3.0 - BOUNDARY_TOL {
        return Ok(RegimePrediction::new(
            L::NongeometricDominated,
            Some((3.0 - beta) / 2.0),
            F::ThetaOne,
        ));
    }
    let at_three = (beta - 3.0).abs() <= BOUNDARY_TOL;
    let p = match d {
        DRegime::Constant => RegimePrediction::new(L::GeometricDominated, None, F::LogOverLogLog),
        DRegime::Sublog => RegimePrediction::new(
            L::GeometricDominated,
            None,
            if at_three { F::OmegaLogOverD } else { F::LogOverD },
        ),
        _ => RegimePrediction::new(L::Vanishing, None, if at_three { F::BigOOne } else { F::AtMostThree }),
    };
    Ok(p.flagged(at_three))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qk_branches() {
        assert_eq!(qk_regime_upper(5, 2.5).unwrap().n_exponent, Some(-3.75));
        assert_eq!(qk_regime_upper(3, 2.5).unwrap().n_exponent, Some(-2.0));
        assert_eq!(qk_regime_upper(6, 3.5).unwrap().n_exponent, Some(-5.0));
        assert!(qk_regime_upper(4, 2.5).unwrap().boundary);
        let low = qk_lower_lowdim(3, 3.5, 4).unwrap();
        assert_eq!(low.n_exponent, Some(-2.0));
        assert_eq!(low.form, AsymptoticForm::PowerOfTwo(-12.0));
        assert_eq!(qk_lower_lowdim(5, 2.5, 4).unwrap().form, AsymptoticForm::ThetaOne);
    }

    #[test]
    fn table_cells() {
        let c = expected_kk_regime(2.5, 5, DRegime::Constant).unwrap();
        assert_eq!((c.n_exponent, c.form), (Some(1.25), AsymptoticForm::ThetaKPowNegK));
        let c = expected_kk_regime(3.5, 4, DRegime::Superlog).unwrap();
        assert_eq!((c.label, c.form), (RegimeLabel::Vanishing, AsymptoticForm::LittleOOne));
        let c = expected_kk_regime(2.5, 3, DRegime::Sublog).unwrap();
        assert_eq!((c.n_exponent, c.form), (Some(1.0), AsymptoticForm::ExpNegD));
        assert!(expected_kk_regime(7.0 / 3.0, 3, DRegime::Sublog).unwrap().boundary);
        let c = expected_kk_regime(f64::INFINITY, 3, DRegime::Superlog).unwrap();
        assert_eq!(c.form, AsymptoticForm::ThetaExpLn3OverD2);
    }

    #[test]
    fn clique_number_cells() {
        assert_eq!(
            clique_number_regime(2.5, DRegime::Superlog).unwrap().n_exponent,
            Some(0.25)
        );
        assert_eq!(
            clique_number_regime(3.5, DRegime::Superlog).unwrap().form,
            AsymptoticForm::AtMostThree
        );
        assert_eq!(
            clique_number_regime(3.5, DRegime::Constant).unwrap().form,
            AsymptoticForm::LogOverLogLog
        );
        assert!(clique_number_regime(3.0, DRegime::Sublog).unwrap().boundary);
    }
}
