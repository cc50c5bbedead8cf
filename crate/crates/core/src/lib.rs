//! Lagrangian finite-volume simulator for the one-dimensional viscous,
//! radiative and reactive gas
//!
//! ```text
//! v_t = u_x
//! u_t + p_x = (mu u_x / v)_x
//! e_t + p u_x = mu u_x^2 / v + (kappa theta_x / v)_x + lambda phi z
//! z_t = (d z_x / v^2)_x - phi z
//! ```
//!
//! with `p = R theta / v + a theta^4 / 3`, `e = C_v theta + a v theta^4`,
//! `kappa = kappa1 + kappa2 v theta^b` and `phi = K theta^beta exp(-A / theta)`,
//! plus diagnostics for the energy functionals of the system and a
//! manufactured-solution verification harness.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which the tolerances of the
//! verification suite assume.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constitutive;
pub mod domain;
pub mod error;
pub mod functionals;
pub mod integrator;
pub mod scalar;
pub mod tridiag;
pub mod verification;

pub use constitutive::{GasParameters, Partials};
pub use domain::{Boundary, Grid, InitialFamily, ScenarioSpec, State};
pub use error::{Result, SimError};
pub use functionals::{DiagnosticsRecord, Norms};
pub use integrator::{RunSettings, SimulationOutput, StepControls, StepOutcome};
pub use scalar::Real;

pub type Params64 = GasParameters<f64>;
pub type Grid64 = Grid<f64>;
pub type State64 = State<f64>;
pub type Scenario64 = ScenarioSpec<f64>;
pub type Record64 = DiagnosticsRecord<f64>;
pub type Output64 = SimulationOutput<f64>;
pub type Params32 = GasParameters<f32>;
pub type State32 = State<f32>;
