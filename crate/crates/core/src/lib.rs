//! Escape-time laboratory for stochastic gradient dynamics.
//!
//! The crate pairs closed-form Kramers predictions for how long SGD and SGLD
//! stay in a loss valley ([`kramers`]) with Monte Carlo experiments that
//! measure the same quantity ([`escape_mc`]) on analytic test functions and
//! small models over synthetic data ([`landscapes`]). [`noise_lab`] checks
//! the premise behind the SGD prediction: minibatch gradient noise is close
//! to Gaussian with covariance `H/B` near a minimum.
//!
//! [`experiment`] wires these into config-driven runs that write CSV, JSON
//! and SVG artifacts; the `sgd-diffusion` binary is a thin front end to it.

pub mod dynamics;
pub mod error;
pub mod escape_mc;
pub mod experiment;
pub mod kramers;
pub mod landscapes;
pub mod linalg;
pub mod noise_lab;
pub mod plot;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
