//! Geometric inhomogeneous random graphs (GIRGs) and their clique structure.
//!
//! The crate provides model parameters and weights, torus geometry with
//! connection thresholds for any `L_p` norm, graph samplers, exact clique
//! counting, Monte Carlo estimators of clique probabilities, closed-form
//! bounds and regime predictions, and distances between graph distributions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cliques;
pub mod distance;
pub mod error;
pub mod exec;
pub mod model;
pub mod rng;
pub mod samplers;
pub mod stats;
pub mod theory;
pub mod torus;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{GirgError, Result};
pub use exec::Exec;
pub use model::{ModelParams, Norm, WeightSequence};
pub use rng::SeededStream;
pub use samplers::GraphSample;
pub use stats::EstimateWithError;
