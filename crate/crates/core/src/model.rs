//! Model parameters and the reduction to the normalized oscillator.
//!
//! The physical single-mode model is
//!
//! ```text
//! M_f x'' + C_f x' + K_f x = K1 K2 Mp_g tanh(K3 x'(t - tau))
//! ```
//!
//! Rescaling time by `sqrt(K_f / M_f)` brings the linear restoring
//! coefficient to 1 and leaves a four-parameter family
//!
//! ```text
//! x'' + alpha2 x' + x = kappa tanh(K3 x'(t - tau)),
//! ```
//!
//! which every other module consumes. The odd nonlinearity expands as
//! `kappa tanh(K3 y) = alpha3 y + alpha4 y^3 + alpha5 y^5 + O(y^7)`.

use crate::error::{require_nonnegative, require_positive, Error, Result};
use serde::{Deserialize, Serialize};

/// Dimensional parameters of the footbridge mode and the pedestrian forcing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Modal mass `M_f` (kg).
    pub modal_mass: f64,
    /// Modal damping `C_f` (kg/s).
    pub modal_damping: f64,
    /// Modal stiffness `K_f` (kg/s^2).
    pub modal_stiffness: f64,
    /// Ratio of lateral force to pedestrian weight `K1` (dimensionless).
    pub force_ratio: f64,
    /// Fraction of pedestrians synchronized to the deck `K2` (dimensionless).
    pub sync_fraction: f64,
    /// Modal pedestrian self-weight `Mp g` (N).
    pub pedestrian_weight: f64,
    /// Saturation rate `K3` of the velocity feedback (s/m).
    pub saturation_rate: f64,
    /// Interaction delay `tau` (s).
    pub delay: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        require_positive(self.modal_mass, "modal_mass")?;
        require_positive(self.modal_damping, "modal_damping")?;
        require_positive(self.modal_stiffness, "modal_stiffness")?;
        require_positive(self.force_ratio, "force_ratio")?;
        require_positive(self.sync_fraction, "sync_fraction")?;
        require_positive(self.pedestrian_weight, "pedestrian_weight")?;
        require_positive(self.saturation_rate, "saturation_rate")?;
        require_nonnegative(self.delay, "delay")?;
        Ok(())
    }
}

/// The normalized oscillator `x'' + alpha2 x' + x = kappa tanh(K3 x'(t-tau))`
/// together with the Taylor coefficients of its nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedModel {
    /// Damping `alpha2 > 0`.
    pub alpha2: f64,
    /// Feedback gain `kappa > 0`.
    pub kappa: f64,
    /// Saturation rate `K3 > 0` (dimensionless after rescaling).
    pub k3: f64,
    /// Delay `tau >= 0` (dimensionless after rescaling).
    pub tau: f64,
}

impl NormalizedModel {
    pub fn new(alpha2: f64, kappa: f64, k3: f64, tau: f64) -> Result<Self> {
        require_positive(alpha2, "alpha2")?;
        require_positive(kappa, "kappa")?;
        require_positive(k3, "k3")?;
        require_nonnegative(tau, "tau")?;
        Ok(Self { alpha2, kappa, k3, tau })
    }

    /// Linear feedback gain `alpha3 = kappa * K3 > 0`.
    pub fn alpha3(&self) -> f64 {
        self.kappa * self.k3
    }

    /// Cubic Taylor coefficient `alpha4 = -kappa K3^3 / 3 < 0`.
    pub fn alpha4(&self) -> f64 {
        -self.kappa * self.k3.powi(3) / 3.0
    }

    /// Quintic Taylor coefficient `alpha5 = 2 kappa K3^5 / 15 > 0`. Carried
    /// for completeness; the simulator always evaluates the exact tanh.
    pub fn alpha5(&self) -> f64 {
        2.0 * self.kappa * self.k3.powi(5) / 15.0
    }

    /// The feedback force `kappa tanh(K3 y)`; odd in `y`, bounded by `kappa`.
    pub fn nonlinearity(&self, y: f64) -> f64 {
        self.kappa * (self.k3 * y).tanh()
    }

    pub fn with_tau(&self, tau: f64) -> Self {
        Self { tau, ..*self }
    }

    /// Same oscillator with the linear gain replaced by `alpha3`, holding the
    /// saturation rate fixed (so `kappa = alpha3 / K3`).
    pub fn with_alpha3(&self, alpha3: f64) -> Self {
        Self { kappa: alpha3 / self.k3, ..*self }
    }
}

/// Result of the time rescaling: the normalized model plus the factor that
/// maps normalized frequencies/rates back to physical ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub model: NormalizedModel,
    /// `sqrt(K_f / M_f)`; a normalized frequency `w` corresponds to the
    /// physical angular frequency `scale * w`, and a normalized time `t` to
    /// the physical time `t / scale`.
    pub time_scale: f64,
}

/// Rescale time by `sqrt(K_f / M_f)` so the linear restoring coefficient is 1.
pub fn normalize(p: &PhysicalParams) -> Result<Normalization> {
    p.validate()?;
    let alpha1 = p.modal_stiffness / p.modal_mass;
    let scale = alpha1.sqrt();
    let alpha2 = (p.modal_damping / p.modal_mass) / scale;
    let kappa = (p.force_ratio * p.sync_fraction * p.pedestrian_weight / p.modal_mass) / alpha1;
    let k3 = scale * p.saturation_rate;
    let tau = scale * p.delay;
    Ok(Normalization { model: NormalizedModel::new(alpha2, kappa, k3, tau)?, time_scale: scale })
}

/// Taylor coefficients `(alpha3, alpha4, alpha5)` of `kappa tanh(K3 y)`.
pub fn taylor_coeffs(kappa: f64, k3: f64) -> Result<(f64, f64, f64)> {
    require_positive(kappa, "kappa")?;
    require_positive(k3, "k3")?;
    Ok((kappa * k3, -kappa * k3.powi(3) / 3.0, 2.0 * kappa * k3.powi(5) / 15.0))
}

/// Scenario description accepted on the CLI surface: either the normalized
/// coefficients directly or the physical parameter block. The loader
/// dispatches on which keys are present.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scenario {
    Normalized { alpha2: f64, kappa: f64, k3: f64, tau: f64 },
    Physical(PhysicalParams),
}

impl Scenario {
    /// The normalized model plus the time-scale factor (1 for an already
    /// normalized scenario).
    pub fn resolve(&self) -> Result<Normalization> {
        match *self {
            Scenario::Normalized { alpha2, kappa, k3, tau } => Ok(Normalization {
                model: NormalizedModel::new(alpha2, kappa, k3, tau)?,
                time_scale: 1.0,
            }),
            Scenario::Physical(ref p) => normalize(p),
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| Error::InvalidParameter(format!("scenario JSON: {e}")))
    }
}
