//! Closed-form bounds, exact formulas and asymptotic regime predictions.
//!
//! Everything here is a pure function. Quantities of the form `(kappa/n)^(1/d)`
//! are evaluated in log space so that dimensions in the tens of thousands
//! do not lose all precision.

mod bounds;
mod lambert;
mod regimes;

pub use bounds::*;
pub use lambert::*;
pub use regimes::*;

use serde::Serialize;

/// Closed interval `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
}

impl BoundInterval {
    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower <= upper, "[{lower}, {upper}]");
        Self { lower, upper }
    }

    pub fn point(x: f64) -> Self {
        Self { lower: x, upper: x }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// Containment with absolute slack on both sides.
    pub fn contains_with_slack(&self, x: f64, slack: f64) -> bool {
        self.lower - slack <= x && x <= self.upper + slack
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}
