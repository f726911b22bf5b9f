//! Equilibrium exercise thresholds and values of step-up and step-down
//! credit default swap games when the firm's log-asset value is a
//! spectrally negative jump diffusion with exponential jumps.
//!
//! The analytic engine is [`scale`] (the scale function), [`kernel`] (the
//! game's closed forms), [`equilibrium`] (the threshold search) and
//! [`valuation`] (contract values and premia). [`mc`] is an independent
//! Monte Carlo oracle; [`cli`] backs the `swapgame` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod kernel;
pub mod levy;
pub mod mc;
pub mod roots;
pub mod scale;
pub mod valuation;

pub use equilibrium::{solve_thresholds, Case, EquilibriumSolution, SolverOptions};
pub use error::{Error, Result};
pub use kernel::{Barrier, ContractTerms, GameKernel, GameTerms, StepDirection};
pub use levy::{calibrate_drift, ModelParams};
pub use mc::{McConfig, McEstimate};
pub use scale::ScaleCoefficients;
pub use valuation::{equilibrium_premium, GameValuation, PremiumTemplate, Region};
