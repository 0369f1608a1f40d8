//! Nash equilibria of finite n-player extensive-form games with perfect
//! recall, computed by tracing interior-point logarithmic-barrier homotopy
//! paths over the sequence-form representation.
//!
//! The crate provides:
//! - [`game`]: the extensive-form tree, its JSON interchange format, and
//!   perfect-recall validation;
//! - [`seqform`]: the sequence-form representation, payoff/best-response
//!   evaluation, equilibrium residuals, and strategy/plan conversions;
//! - [`normal_form`]: the reduced normal form and a brute-force equilibrium
//!   oracle for small games;
//! - [`homotopy`]: the two barrier systems (LGNE and LBNE) as residuals with
//!   analytic Jacobians in the reduced variables `(x, nu, t)`;
//! - [`tracer`]: the predictor-corrector path tracer;
//! - [`gamegen`]: seeded random game families for benchmarking;
//! - [`bench`]: the benchmark harness.

pub mod bench;
pub mod error;
pub mod game;
pub mod gamegen;
pub mod homotopy;
pub mod normal_form;
pub mod seqform;
pub mod tracer;

pub use error::{Error, Result};
