//! Hopf normal forms and limit-cycle predictions.
//!
//! Two bifurcation scenarios are covered:
//!
//! - **Delay as parameter** (`hopf_in_tau`): at a simple crossing
//!   `tau0 = tau_j^{+/-}` with `alpha3 > alpha2`, the reduction onto the
//!   critical pair yields the resonant cubic coefficient and the familiar
//!   square-root amplitude law in `mu = tau - tau0`. The plus branch is
//!   supercritical, the minus branch subcritical.
//! - **Gain detuning as parameter** (`hopf_in_alpha`): at `tau0 = 2 pi j`
//!   with the linear gain on resonance (`alpha3 = alpha2`), the detuning
//!   `mu = alpha3 - alpha2` drives a supercritical Hopf with critical
//!   frequency 1.
//!
//! All reductions are performed in rescaled time `t -> tau t`; the reported
//! crossing slope and frequency are converted back to original time at the
//! boundary so they match the root derivatives from [`crate::spectrum`].

use crate::check::Check;
use crate::error::{Error, Result};
use crate::model::NormalizedModel;
use crate::spectrum::{
    adjoint_eigenfunction, bilinear_form, critical_delay, critical_delays, crossing_derivatives,
    mode_eigenfunction, normalization_d, ordering, Branch, OrderingCase,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HopfCase {
    TauBranchPlus,
    TauBranchMinus,
    AlphaAtResonance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criticality {
    Supercritical,
    Subcritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleStability {
    Stable,
    Unstable,
}

/// A Hopf bifurcation value with its normal-form data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HopfPoint {
    pub case: HopfCase,
    pub j: usize,
    pub alpha2: f64,
    pub kappa: f64,
    pub k3: f64,
    /// Linear gain of the crossing: `kappa K3` for the delay cases, `alpha2`
    /// at resonance.
    pub alpha3: f64,
    pub tau0: f64,
    /// Crossing frequency in original time (`omega_{+/-}`, or 1 at resonance).
    pub omega0: f64,
    /// Normalization of the adjoint eigenfunction; real and equal to
    /// `1 / (2 + tau0 alpha2)` in the resonance case.
    pub d0: Complex64,
    /// `(1 + w0^2 + alpha2 tau0 w0^2)^2 + tau0^2 w0^2 (w0^2 - 1)^2`
    /// (delay cases only).
    pub d_c: Option<f64>,
    /// `d sigma / d tau` at the crossing in original time; equals the
    /// closed-form crossing derivative of the spectrum module.
    pub crossing_slope: f64,
    /// `d(Re lambda)/d mu` of the rescaled reduction
    /// (`= tau0 * crossing_slope` for the delay cases, `tau0 D0` at
    /// resonance).
    pub rescaled_sigma_slope: f64,
    /// `d(Im lambda)/d mu` of the rescaled reduction.
    pub rescaled_omega_slope: f64,
    /// Resonant cubic coefficient `f_{1,21}(0)`; its real part is negative
    /// for every admissible parameter set.
    pub cubic: Complex64,
    pub criticality: Criticality,
    pub cycle_stability: CycleStability,
    /// `a(mu) = amplitude_coef * sqrt(mu_sign * mu)` to leading order.
    pub amplitude_coef: f64,
    /// Sign of `mu` on which the cycle exists (+1 plus branch / resonance,
    /// -1 minus branch).
    pub mu_sign: f64,
    /// Trust radius for the amplitude law; beyond it the O(|mu|^{3/2})
    /// remainder is uncontrolled and predictions carry a warning flag.
    pub mu_trust: f64,
    /// Internal consistency checks evaluated at construction.
    pub checks: Vec<Check>,
}

/// Leading-order cycle prediction at detuning `mu`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CyclePrediction {
    pub mu: f64,
    /// Peak amplitude of `x1`; the state is `x1 = a cos(w t)`,
    /// `x2 = -a w0 sin(w t)` to leading order.
    pub amplitude: f64,
    /// Angular frequency in original time.
    pub frequency: f64,
    /// False when `|mu|` exceeds the trust radius.
    pub within_trust: bool,
}

/// Hopf analysis with the delay as bifurcation parameter, at
/// `tau0 = tau_j^{branch}`.
pub fn hopf_in_tau(model: &NormalizedModel, branch: Branch, j: usize) -> Result<HopfPoint> {
    let alpha2 = model.alpha2;
    let alpha3 = model.alpha3();
    let alpha4 = model.alpha4();
    if !(alpha3 > alpha2) {
        return Err(Error::InvalidParameter(
            "hopf_in_tau requires alpha3 > alpha2 > 0 (use hopf_in_alpha on the resonance curve)"
                .into(),
        ));
    }
    if branch == Branch::Resonant {
        return Err(Error::InvalidParameter(
            "resonant branch is handled by hopf_in_alpha".into(),
        ));
    }
    let (tau0, omega0) = critical_delay(alpha2, alpha3, branch, j)?;
    reject_double_hopf(alpha2, alpha3, branch, tau0)?;

    let w2 = omega0 * omega0;
    let d0 = normalization_d(omega0, tau0, alpha3);
    let d_c = (1.0 + w2 + alpha2 * tau0 * w2).powi(2) + tau0 * tau0 * w2 * (w2 - 1.0).powi(2);
    let rescaled_sigma_slope = tau0 * w2 * (w2 - 1.0) * (w2 + 1.0) / d_c;
    let rescaled_omega_slope = omega0 * (1.0 + w2) * (1.0 + w2 + alpha2 * tau0 * w2) / d_c;
    let derivs = crossing_derivatives(alpha2, alpha3, branch, j)?;
    let crossing_slope = derivs.sigma_prime;

    let x_inner = alpha2 + w2 + tau0 * alpha3 * alpha3 * w2;
    let scale = 3.0 * tau0 * alpha4 / (alpha3 * d_c);
    let cubic = Complex64::new(
        scale * w2 * w2 * x_inner,
        scale * omega0 * w2 * (w2 + 1.0) * (w2 - 1.0),
    );

    let criticality = match branch {
        Branch::Plus => Criticality::Supercritical,
        Branch::Minus => Criticality::Subcritical,
        Branch::Resonant => unreachable!(),
    };
    let cycle_stability = tau_cycle_stability(alpha2, alpha3, j)?;

    // a(mu) = (2 / (K3 w0)) sqrt((w0^2+1)(w0^2-1) mu / x_inner); the radicand
    // is positive on the branch's half-line.
    let radicand_scale = (w2 + 1.0) * (w2 - 1.0) / x_inner;
    let mu_sign = radicand_scale.signum();
    let amplitude_coef = 2.0 / (model.k3 * omega0) * radicand_scale.abs().sqrt();
    let mu_trust = 0.1 * 2.0 * PI / omega0;

    let mut checks = vec![
        Check::sign("d_c_positive", d_c, true),
        Check::sign("re_cubic_negative", cubic.re, false),
        Check::residual(
            "rescaled_slope_identity",
            rescaled_sigma_slope - tau0 * crossing_slope,
            1e-10 * (1.0 + rescaled_sigma_slope.abs()),
        ),
        Check::residual("d0_modulus_identity", d0.norm_sqr() * d_c - 1.0, 1e-10),
    ];
    checks.push(normalization_checks(omega0, tau0, alpha3, d0)?);

    Ok(HopfPoint {
        case: match branch {
            Branch::Plus => HopfCase::TauBranchPlus,
            Branch::Minus => HopfCase::TauBranchMinus,
            Branch::Resonant => unreachable!(),
        },
        j,
        alpha2,
        kappa: model.kappa,
        k3: model.k3,
        alpha3,
        tau0,
        omega0,
        d0,
        d_c: Some(d_c),
        crossing_slope,
        rescaled_sigma_slope,
        rescaled_omega_slope,
        cubic,
        criticality,
        cycle_stability,
        amplitude_coef,
        mu_sign,
        mu_trust,
        checks,
    })
}

/// Hopf analysis with the gain detuning `mu = alpha3 - alpha2` as the
/// bifurcation parameter, at fixed `tau0 = 2 pi j`, `j >= 1`. The model's
/// `kappa`, `K3` supply the cubic coefficient `alpha4`; the linear gain at
/// criticality is `alpha2`.
pub fn hopf_in_alpha(model: &NormalizedModel, j: usize) -> Result<HopfPoint> {
    if j == 0 {
        return Err(Error::InvalidParameter(
            "j = 0 is degenerate: the delay vanishes at tau_0 = 0".into(),
        ));
    }
    let alpha2 = model.alpha2;
    let alpha4 = model.alpha4();
    let tau0 = 2.0 * PI * j as f64;
    let d_cap = 1.0 / (2.0 + tau0 * alpha2);
    let d0 = normalization_d(1.0, tau0, alpha2);
    let cubic = Complex64::new(3.0 * tau0 * alpha4 * d_cap, 0.0);
    // Leading-order amplitude: 2 sqrt(mu / (kappa K3^3)).
    let amplitude_coef = 2.0 / (model.kappa * model.k3.powi(3)).sqrt();

    let mut checks = vec![
        Check::sign("d0_positive", d_cap, true),
        Check::sign("re_cubic_negative", cubic.re, false),
        Check::residual("d0_closed_form", (d0 - Complex64::new(d_cap, 0.0)).norm(), 1e-12),
        Check::residual(
            "slope_cubic_ratio",
            tau0 * d_cap / (-cubic.re) - 1.0 / (-3.0 * alpha4),
            1e-12,
        ),
    ];
    checks.push(normalization_checks(1.0, tau0, alpha2, d0)?);

    Ok(HopfPoint {
        case: HopfCase::AlphaAtResonance,
        j,
        alpha2,
        kappa: model.kappa,
        k3: model.k3,
        alpha3: alpha2,
        tau0,
        omega0: 1.0,
        d0,
        d_c: None,
        crossing_slope: tau0 * d_cap,
        rescaled_sigma_slope: tau0 * d_cap,
        rescaled_omega_slope: 0.0,
        cubic,
        criticality: Criticality::Supercritical,
        cycle_stability: CycleStability::Stable,
        amplitude_coef,
        mu_sign: 1.0,
        mu_trust: 0.1,
        checks,
    })
}

impl HopfPoint {
    /// Leading-order amplitude and frequency of the bifurcating cycle at
    /// detuning `mu`. Rejects `mu` of the wrong sign (the radicand of the
    /// amplitude law would be negative).
    pub fn predicted_cycle(&self, mu: f64) -> Result<CyclePrediction> {
        if mu * self.mu_sign < 0.0 {
            return Err(Error::WrongMuSign {
                mu,
                expected: if self.mu_sign > 0.0 { "mu > 0" } else { "mu < 0" },
            });
        }
        let amplitude = self.amplitude_coef * (self.mu_sign * mu).sqrt();
        let frequency = match self.case {
            // omega_rescaled(mu) / (tau0 + mu), unscaled exactly.
            HopfCase::TauBranchPlus | HopfCase::TauBranchMinus => {
                (self.tau0 * self.omega0 + self.rescaled_omega_slope * mu) / (self.tau0 + mu)
            }
            HopfCase::AlphaAtResonance => 1.0,
        };
        Ok(CyclePrediction {
            mu,
            amplitude,
            frequency,
            within_trust: mu.abs() <= self.mu_trust,
        })
    }

    /// True iff every construction-time check passed.
    pub fn consistent(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

/// Theorem-2 style stability of the bifurcating cycle: stable exactly in the
/// interleaved ordering with `j <= m`.
fn tau_cycle_stability(alpha2: f64, alpha3: f64, j: usize) -> Result<CycleStability> {
    Ok(match ordering(alpha2, alpha3)? {
        OrderingCase::Interleaved { m } if j <= m => CycleStability::Stable,
        _ => CycleStability::Unstable,
    })
}

/// Reject delay values where the opposite branch crosses simultaneously.
fn reject_double_hopf(alpha2: f64, alpha3: f64, branch: Branch, tau0: f64) -> Result<()> {
    let other = match branch {
        Branch::Plus => Branch::Minus,
        Branch::Minus => Branch::Plus,
        Branch::Resonant => return Ok(()),
    };
    // index of the nearest member of the opposite progression
    let set = critical_delays(alpha2, alpha3, 0)?;
    let (w, first) = match other {
        Branch::Plus => (set.omega_plus.unwrap(), set.branch_plus[0]),
        Branch::Minus => (set.omega_minus.unwrap(), set.branch_minus[0]),
        Branch::Resonant => unreachable!(),
    };
    let gap = 2.0 * PI / w;
    let l = ((tau0 - first) / gap).round().max(0.0);
    let nearest = first + gap * l;
    if (nearest - tau0).abs() < 1e-9 {
        return Err(Error::DoubleHopfCoincidence {
            tau: tau0,
            other: match other {
                Branch::Plus => "plus",
                Branch::Minus => "minus",
                Branch::Resonant => unreachable!(),
            },
        });
    }
    Ok(())
}

/// Quadrature checks of the eigenbasis normalization `<q*, q> = 1`,
/// `<q*, conj q> = 0`.
fn normalization_checks(omega0: f64, tau0: f64, alpha3: f64, d0: Complex64) -> Result<Check> {
    let q = mode_eigenfunction(omega0, tau0);
    let qs = adjoint_eigenfunction(omega0, tau0, d0);
    let unit = bilinear_form(&qs, &q, alpha3, tau0)?;
    let qbar = move |theta: f64| {
        let v = q(theta);
        [v[0].conj(), v[1].conj()]
    };
    let ortho = bilinear_form(&qs, &qbar, alpha3, tau0)?;
    let resid = (unit - Complex64::new(1.0, 0.0)).norm().max(ortho.norm());
    Ok(Check::residual("eigenbasis_normalization", resid, 1e-10))
}

/// Amplitude-law samples `(mu, a(mu))` for CSV sweep plotting.
pub fn amplitude_curve(point: &HopfPoint, mu_max: f64, samples: usize) -> Vec<(f64, f64)> {
    (0..=samples)
        .map(|i| {
            let mu = self_sign(point.mu_sign) * mu_max.abs() * i as f64 / samples.max(1) as f64;
            let a = point.amplitude_coef * (point.mu_sign * mu).max(0.0).sqrt();
            (mu, a)
        })
        .collect()
}

fn self_sign(s: f64) -> f64 {
    if s >= 0.0 {
        1.0
    } else {
        -1.0
    }
}
