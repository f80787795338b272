//! Numerical laboratory for the 1+1 dimensional square-root Klein-Gordon
//! (Salpeter) equation.
//!
//! * [`kinematics`], [`grid`], [`units`]: dispersion relation, plane-wave
//!   superpositions, periodic grids and the position/momentum transform.
//! * [`specfun`]: Macdonald functions and the Hamiltonian kernels.
//! * [`operators`]: spectral functions of `p` (square-root Hamiltonian,
//!   truncated gradient series, the `A`/`B` operators, propagators).
//! * [`densities`]: Born and Dirac density/current pairs and continuity checks.
//! * [`lorentz`]: boosts, the Born-rule counterexample and the spinor-boost
//!   four-vector check.
//! * [`cli`]: the `salpeter` command-line front end.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod densities;
pub mod error;
pub mod grid;
pub mod identities;
pub mod kinematics;
pub mod lorentz;
pub mod operators;
pub mod rng;
pub mod specfun;
pub mod units;

pub use error::{Error, Result};
pub use grid::{GridSpec, GridState, MomentumState};
pub use kinematics::{Event, PlaneWaveMode, SuperpositionState};
pub use lorentz::Boost;
pub use units::UnitSystem;
