//! Optimal fuzzy (randomized) confidence intervals.
//!
//! For a reference point `o`, the membership `ψ_o(ω | τ)` inverts the family
//! of most powerful tests of `τ` against `o`: at every `τ` it has coverage
//! exactly `γ` while putting as little probability as possible on `τ` when
//! the data come from `o`. The crate provides
//!
//! * [`np`]: the generic optimal membership for two finite measures, the
//!   oracle every closed form is checked against;
//! * [`knapsack`]: the fractional knapsack solver and its mapping onto the
//!   two-measure problem;
//! * [`binomial`], [`poisson`], [`normal`]: closed-form memberships, the
//!   usual comparison intervals and, for the bounded normal mean, closed-form
//!   expected lengths;
//! * [`length`]: expected length and its lower bound for discrete families;
//! * [`specfun`]: the special functions all of the above rely on.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod binomial;
pub mod error;
pub mod family;
pub mod grid;
pub mod knapsack;
pub mod length;
pub mod normal;
pub mod np;
pub mod poisson;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use family::{coverage, DiscreteFamily};
pub use grid::Grid;
pub use knapsack::{KnapsackInstance, KnapsackSolution};
pub use length::{ELCurve, QuadratureSpec};
pub use np::{construct_psi_star, DiscreteMeasure, Partition, PsiStar};
