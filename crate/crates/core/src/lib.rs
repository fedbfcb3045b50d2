//! Operational reliability of `(n-r+1)`-out-of-`n` systems whose components
//! carry both a random lifetime `X` and a random power `W` that decays over
//! time as `W * phi(t)`.
//!
//! The system is up at time `t` while at least `n-r+1` components are alive
//! and every live component still delivers more than `s` units of power.
//! In terms of order statistics this is the event
//! `X_{r:n} > t, min(W_[r:n], ..., W_[n:n]) > s / phi(t)`, where `W_[i:n]`
//! is the power paired with the `i`-th smallest lifetime (its concomitant).
//!
//! The crate is organized as:
//!
//! * [`distributions`], [`copula`], [`decay`]: the building blocks of a
//!   [`SystemModel`].
//! * [`reliability`]: quadrature-based evaluation of the joint survival
//!   function, joint density, operational reliability, residual-life law and
//!   mean residual life.
//! * [`montecarlo`]: an independent simulation oracle for every analytic
//!   quantity, with standard errors.
//! * [`quadrature`]: adaptive Gauss-Kronrod integration.
//! * [`config`] and [`cli`]: the model file format and the `powrel` command.
//!
//! ```
//! use power_reliability::{
//!     CopulaSpec, DecaySpec, DistributionSpec, EvalPoint, SystemModel,
//! };
//!
//! let model = SystemModel::new(
//!     6,
//!     5,
//!     DistributionSpec::Exponential { rate: 1.0 },
//!     DistributionSpec::Exponential { rate: 1.0 },
//!     CopulaSpec::Fgm { alpha: 1.0 },
//!     DecaySpec::Exponential { theta: 1.0 },
//! )
//! .unwrap();
//! let analysis = model.analysis();
//! let p = analysis
//!     .operational_reliability(EvalPoint::new(0.5, 2.0).unwrap())
//!     .unwrap();
//! assert!(p > 0.0 && p < 1.0);
//! ```

pub mod cli;
pub mod config;
pub mod copula;
pub mod decay;
pub mod distributions;
mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod reliability;

pub use copula::CopulaSpec;
pub use decay::DecaySpec;
pub use distributions::DistributionSpec;
pub use error::{Error, Result};

pub use montecarlo::{Estimate, MonteCarlo, PointEstimate, SystemDraw};
pub use quadrature::{Integral, QuadratureConfig};
pub use reliability::{Analysis, EvalPoint, SystemModel, ThresholdConvention};
