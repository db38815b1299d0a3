//! Noncoherent capacity pre-log machinery for temporally correlated Rayleigh
//! block-fading MIMO channels.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: the channel `y = sqrt(rho/T) ybar + n`, sampling and the
//!   Gaussian law of `y` given the input.
//! * [`index_sets`]: row-selection sets `I_r`, pilot sets `P_t`, data sets
//!   `D_t` and the auxiliary sets used by the inductive witness.
//! * [`jacobian`]: the square Jacobian of the map `(s, x_D) -> P ybar`,
//!   its determinant, genericity trials, the explicit nonsingular witness and
//!   the Bézout exponent.
//! * [`bounds`]: exact rational pre-log bounds.
//! * [`montecarlo`]: seeded Monte Carlo estimates (log-determinant
//!   integrability, conditional entropy growth, mutual-information slope).
//! * [`cli`]: the `prelog` command-line front end.
//!
//! Stochastic routines take explicit seeds. Work is split into independent
//! per-sample ChaCha streams so results do not depend on thread scheduling;
//! with the default `parallel` feature the sample loops run on rayon.

pub mod bounds;
pub mod cli;
mod error;
pub mod exec;
pub mod index_sets;
pub mod jacobian;
pub mod linalg;
pub mod model;
pub mod montecarlo;
pub mod rng;

pub use error::{Error, Result};
pub use model::{Dims, Snr};
