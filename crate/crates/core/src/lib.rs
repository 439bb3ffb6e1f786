//! Bifurcation analysis of the delayed footbridge lateral-vibration
//! oscillator
//!
//! ```text
//! x'' + alpha2 x' + x = kappa tanh(K3 x'(t - tau)).
//! ```
//!
//! The crate covers the full local picture of this model:
//!
//! - [`model`]: parameters, the time-rescaling reduction and the Taylor
//!   coefficients of the feedback nonlinearity;
//! - [`spectrum`]: the characteristic quasi-polynomial, crossing frequencies
//!   and critical delays, stability charts, root counting and tracking;
//! - [`hopf`]: Hopf normal forms and limit-cycle predictions, with the delay
//!   or the gain detuning as the bifurcation parameter;
//! - [`double_hopf`]: double-Hopf points, the cubic/linear unfolding
//!   coefficient tables, the truncated amplitude system and its phase
//!   portrait, and the invariant-torus non-degeneracy quantities;
//! - [`sim`]: an independent direct integrator for the full nonlinear delay
//!   equation (method of steps, exact tanh feedback) with amplitude,
//!   frequency and Poincare-section extraction.
//!
//! Every analytic prediction carries a numerically checkable contract, and
//! the simulator deliberately shares no code with the normal-form algebra so
//! it can serve as an oracle against it.

pub mod check;
pub mod double_hopf;
pub mod error;
pub mod hopf;
pub mod model;
pub mod quad;
pub mod sim;
pub mod spectrum;

#[cfg(test)]
pub(crate) mod testutil;

pub use check::Check;
pub use error::{Error, Result};
pub use model::{normalize, taylor_coeffs, NormalizedModel, Normalization, PhysicalParams, Scenario};
pub use num_complex::Complex64;
