//! Double-Hopf points `tau_k^+ = tau_l^-` and their two-parameter unfolding.
//!
//! At such a point the characteristic equation carries two simple purely
//! imaginary pairs `+/- i w10`, `+/- i w20` with `w10 w20 = 1`. This module
//! locates the points, checks the order-6 nonresonance condition, assembles
//! the cubic and linear coefficient tables of the reduced normal form,
//! exposes the truncated amplitude system with its equilibria and
//! `(sigma1, sigma2)`-plane regions, and evaluates the quantities entering
//! the invariant-torus (KAM) non-degeneracy check.

mod amplitude;
mod unfolding;

pub use amplitude::{
    amplitude_flow, classify_sigma_region, equilibria, flow_jacobian, integrate_flow,
    predicted_attractors, AmplitudeEquilibria, EqName, Equilibrium, SigmaBoundary, SigmaLocus,
    SigmaRegion,
};
pub use unfolding::{
    cubic_coeffs, deltas, fd_linear_response, kam_nondegeneracy, linear_unfolding,
    root_slope_response, unfolding, CubicCoeffs, KamReport, LinearResponse, UnfoldingCoeffs,
};

use crate::check::Check;
use crate::error::{require_positive, Error, Result};
use crate::spectrum::{char_fn, normalization_d};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Residual tolerance on `h(i w_j0, tau0)` for an accepted point.
pub const POINT_RESIDUAL_TOL: f64 = 1e-8;
/// Detuning values `alpha30^2 - alpha2^2` forbidden by the order-6
/// nonresonance condition: `(n1 - n2)^2 / (n1 n2)` over `0 < n1 < n2`,
/// `n1 + n2 <= 6`.
pub const FORBIDDEN_DETUNINGS: [f64; 5] =
    [1.0 / 6.0, 0.5, 4.0 / 3.0, 9.0 / 4.0, 16.0 / 5.0];
/// Tolerance for the nonresonance comparison.
pub const NONRESONANCE_TOL: f64 = 1e-6;

/// A located intersection `tau_k^+(alpha3) = tau_l^-(alpha3)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoubleHopfPoint {
    pub k: usize,
    pub l: usize,
    pub alpha2: f64,
    /// Critical gain `alpha30 > alpha2`.
    pub alpha30: f64,
    /// Common critical delay.
    pub tau0: f64,
    /// Fast crossing frequency `w10 > 1`.
    pub omega1: f64,
    /// Slow crossing frequency `w20 = 1 / w10`.
    pub omega2: f64,
    /// Adjoint normalizations `d_j = (1 + w_j^2 + tau0 alpha30 w_j^2 e^{-i tau0 w_j})^{-1}`.
    pub d1: Complex64,
    pub d2: Complex64,
    pub nonresonant_to_order_6: bool,
    /// Frequency-identity and residual checks evaluated at construction.
    pub checks: Vec<Check>,
}

impl DoubleHopfPoint {
    pub fn consistent(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }

    /// `beta_j = (1 + w_j^2 + tau0 alpha2 w_j^2)^2 + tau0^2 w_j^2 (w_j^2 - 1)^2`.
    pub fn beta(&self, j: usize) -> f64 {
        let w2 = if j == 1 { self.omega1 * self.omega1 } else { self.omega2 * self.omega2 };
        (1.0 + w2 + self.tau0 * self.alpha2 * w2).powi(2)
            + self.tau0 * self.tau0 * w2 * (w2 - 1.0).powi(2)
    }

    /// `d_j e^{-i tau0 w_j}` (the common phase of the resonant cubic terms).
    pub fn d_phase(&self, j: usize) -> Complex64 {
        let (d, w) = if j == 1 { (self.d1, self.omega1) } else { (self.d2, self.omega2) };
        d * (-Complex64::i() * self.tau0 * w).exp()
    }
}

fn tau_plus(alpha2: f64, alpha3: f64, k: usize) -> f64 {
    let b = alpha3 * alpha3 - alpha2 * alpha2;
    let wp = 0.5 * ((4.0 + b).sqrt() + b.sqrt());
    (2.0 * std::f64::consts::PI * (1.0 + k as f64) - (alpha2 / alpha3).acos()) / wp
}

fn tau_minus(alpha2: f64, alpha3: f64, l: usize) -> f64 {
    let b = alpha3 * alpha3 - alpha2 * alpha2;
    let wm = 0.5 * ((4.0 + b).sqrt() - b.sqrt());
    ((alpha2 / alpha3).acos() + 2.0 * std::f64::consts::PI * l as f64) / wm
}

/// Locate the intersection `tau_k^+ = tau_l^-` inside `alpha3` in
/// `(bracket_lo, bracket_hi)`, by bisection refined to `|g| < 1e-12` in the
/// delay residual `g = tau_k^+ - tau_l^-`.
pub fn find_double_hopf(
    alpha2: f64,
    k: usize,
    l: usize,
    bracket: (f64, f64),
) -> Result<DoubleHopfPoint> {
    require_positive(alpha2, "alpha2")?;
    let (lo0, hi0) = bracket;
    if !(lo0 > alpha2) || !(hi0 > lo0) {
        return Err(Error::InvalidParameter(
            "bracket must satisfy alpha2 < lo < hi".into(),
        ));
    }
    let g = |a3: f64| tau_plus(alpha2, a3, k) - tau_minus(alpha2, a3, l);
    // scan for a sign change inside the bracket
    let n = 256;
    let mut lo = f64::NAN;
    let mut hi = f64::NAN;
    let mut prev_x = lo0;
    let mut prev_g = g(prev_x);
    for i in 1..=n {
        let x = lo0 + (hi0 - lo0) * i as f64 / n as f64;
        let gx = g(x);
        if prev_g == 0.0 || prev_g * gx < 0.0 {
            lo = prev_x;
            hi = x;
            break;
        }
        prev_x = x;
        prev_g = gx;
    }
    if lo.is_nan() {
        return Err(Error::NoIntersection { lo: lo0, hi: hi0 });
    }
    // bisection
    let mut lo_g = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm.abs() < 1e-13 {
            lo = mid;
            hi = mid;
            break;
        }
        if lo_g * gm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            lo_g = gm;
        }
        if hi - lo < f64::EPSILON * lo.abs() {
            break;
        }
    }
    // secant polish
    let mut a = lo;
    let mut b = 0.5 * (lo + hi);
    for _ in 0..8 {
        let (ga, gb) = (g(a), g(b));
        if (gb - ga).abs() < 1e-300 {
            break;
        }
        let c = b - gb * (b - a) / (gb - ga);
        a = b;
        b = c;
    }
    let alpha30 = if g(b).abs() <= g(0.5 * (lo + hi)).abs() { b } else { 0.5 * (lo + hi) };
    let resid_g = g(alpha30).abs();
    if resid_g > 1e-12 {
        return Err(Error::ModelInconsistency(format!(
            "intersection refinement stalled, |tau_k^+ - tau_l^-| = {resid_g:.3e}"
        )));
    }
    build_point(alpha2, k, l, alpha30)
}

fn build_point(alpha2: f64, k: usize, l: usize, alpha30: f64) -> Result<DoubleHopfPoint> {
    let b = alpha30 * alpha30 - alpha2 * alpha2;
    let omega1 = 0.5 * ((4.0 + b).sqrt() + b.sqrt());
    let omega2 = 0.5 * ((4.0 + b).sqrt() - b.sqrt());
    let tau0 = tau_plus(alpha2, alpha30, k);
    let d1 = normalization_d(omega1, tau0, alpha30);
    let d2 = normalization_d(omega2, tau0, alpha30);

    let r1 = char_fn(Complex64::new(0.0, omega1), tau0, alpha2, alpha30).norm();
    let r2 = char_fn(Complex64::new(0.0, omega2), tau0, alpha2, alpha30).norm();
    let ta = 1.0 + tau0 * alpha2;
    let mut checks = vec![
        Check::residual("residual_h_omega1", r1, POINT_RESIDUAL_TOL),
        Check::residual("residual_h_omega2", r2, POINT_RESIDUAL_TOL),
        Check::residual("omega_product", omega1 * omega2 - 1.0, 1e-12),
        Check::residual("omega_sum_radical", omega1 + omega2 - (4.0 + b).sqrt(), 1e-12),
        Check::residual("omega_diff_radical", omega1 - omega2 - b.sqrt(), 1e-12),
        Check::residual(
            "omega_sq_sum",
            omega1 * omega1 + omega2 * omega2 - (2.0 + b),
            1e-12,
        ),
        Check::residual(
            "omega_sq_diff",
            omega1 * omega1 - omega2 * omega2 - (b * (4.0 + b)).sqrt(),
            1e-12,
        ),
        Check::residual(
            "cross_identity_12",
            (omega1 * omega1 - 1.0)
                * (1.0 + omega2 * omega2 + tau0 * alpha2 * omega2 * omega2)
                - (omega1 * omega1 - omega2 * omega2
                    + tau0 * alpha2 * (1.0 - omega2 * omega2)),
            1e-10,
        ),
        Check::residual(
            "cross_identity_21",
            (omega2 * omega2 - 1.0)
                * (1.0 + omega1 * omega1 + tau0 * alpha2 * omega1 * omega1)
                - (omega2 * omega2 - omega1 * omega1
                    + tau0 * alpha2 * (1.0 - omega1 * omega1)),
            1e-10,
        ),
        Check::residual(
            "cross_identity_product",
            (1.0 + omega1 * omega1 + tau0 * alpha2 * omega1 * omega1)
                * (1.0 + omega2 * omega2 + tau0 * alpha2 * omega2 * omega2)
                - (1.0 + ta * ta + ta * (omega1 * omega1 + omega2 * omega2)),
            1e-9,
        ),
        Check::sign("alpha30_above_alpha2", alpha30 - alpha2, true),
    ];
    if r1 > POINT_RESIDUAL_TOL || r2 > POINT_RESIDUAL_TOL {
        return Err(Error::ModelInconsistency(format!(
            "characteristic residuals too large: {r1:.3e}, {r2:.3e}"
        )));
    }
    let mut point = DoubleHopfPoint {
        k,
        l,
        alpha2,
        alpha30,
        tau0,
        omega1,
        omega2,
        d1,
        d2,
        nonresonant_to_order_6: false,
        checks: Vec::new(),
    };
    point.nonresonant_to_order_6 = check_nonresonance(&point);
    checks.push(Check::sign(
        "nonresonant_to_order_6",
        if point.nonresonant_to_order_6 { 1.0 } else { -1.0 },
        true,
    ));
    point.checks = checks;
    Ok(point)
}

/// Order-6 nonresonance: `alpha30^2 - alpha2^2` keeps a distance of at least
/// [`NONRESONANCE_TOL`] from every forbidden value `(n1-n2)^2/(n1 n2)`.
pub fn check_nonresonance(pt: &DoubleHopfPoint) -> bool {
    let v = pt.alpha30 * pt.alpha30 - pt.alpha2 * pt.alpha2;
    FORBIDDEN_DETUNINGS.iter().all(|&f| (v - f).abs() > NONRESONANCE_TOL)
}

/// Scan `alpha3 in (alpha2, alpha2 + 5]` with step 1e-2 for intersections of
/// every branch pair `(k, l) <= (kl_max, kl_max)` and refine each hit.
pub fn scan_double_hopf(alpha2: f64, kl_max: usize) -> Result<Vec<DoubleHopfPoint>> {
    require_positive(alpha2, "alpha2")?;
    let mut found = Vec::new();
    let step = 1e-2;
    let n = (5.0 / step) as usize;
    for k in 0..=kl_max {
        for l in 0..=kl_max {
            let g = |a3: f64| tau_plus(alpha2, a3, k) - tau_minus(alpha2, a3, l);
            let mut prev_x = alpha2 + 1e-6;
            let mut prev_g = g(prev_x);
            for i in 1..=n {
                let x = alpha2 + step * i as f64;
                let gx = g(x);
                if prev_g * gx < 0.0 {
                    if let Ok(pt) = find_double_hopf(alpha2, k, l, (prev_x, x)) {
                        found.push(pt);
                    }
                }
                prev_x = x;
                prev_g = gx;
            }
        }
    }
    found.sort_by(|p, q| p.tau0.partial_cmp(&q.tau0).unwrap());
    Ok(found)
}
