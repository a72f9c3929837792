//! Supervised classification of diffusion paths.
//!
//! Labelled paths are drawn from a two-class mixture of SDEs sharing a
//! diffusion coefficient. Class drifts and the squared diffusion are
//! estimated by ball-constrained B-spline least squares, and a plug-in
//! classifier is assembled from discretised Girsanov log-likelihoods. The
//! [`harness`] module runs Monte-Carlo experiments that measure how excess
//! risk and estimation error decay with the sample size.

pub mod classify;
pub mod error;
pub mod estimate;
pub mod harness;
pub mod model;
pub mod par;
pub mod simulate;
pub mod spline;

pub use error::{Error, Result};
