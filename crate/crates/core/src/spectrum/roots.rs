//! Root finding on the characteristic quasi-polynomial: Newton polishing and
//! continuation in the delay, argument-principle counting over a right-half-
//! plane rectangle, and a collocation-based rightmost-root solver.

use super::{char_fn, char_fn_dlambda, char_fn_dtau, critical_delays, CRITICALITY_TOL};
use crate::error::{require_nonnegative, require_positive, Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A root branch `lambda(tau)` sampled along a delay interval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootLocus {
    pub alpha2: f64,
    pub alpha3: f64,
    pub taus: Vec<f64>,
    pub roots: Vec<Complex64>,
}

impl RootLocus {
    pub fn last(&self) -> (f64, Complex64) {
        (*self.taus.last().unwrap(), *self.roots.last().unwrap())
    }

    /// Largest |h| over the stored samples.
    pub fn max_residual(&self) -> f64 {
        self.taus
            .iter()
            .zip(&self.roots)
            .map(|(&t, &l)| char_fn(l, t, self.alpha2, self.alpha3).norm())
            .fold(0.0, f64::max)
    }
}

/// Newton-polish a root of `h(., tau)` from `seed`; converges quadratically
/// near simple roots.
pub fn newton_polish(
    seed: Complex64,
    tau: f64,
    alpha2: f64,
    alpha3: f64,
) -> Result<Complex64> {
    let mut lam = seed;
    for _ in 0..60 {
        let f = char_fn(lam, tau, alpha2, alpha3);
        let df = char_fn_dlambda(lam, tau, alpha2, alpha3);
        if df.norm() < 1e-12 {
            return Err(Error::TrackingFailed {
                at: tau,
                reason: format!("derivative collapse near lambda = {lam}"),
            });
        }
        let step = f / df;
        lam -= step;
        if step.norm() < 1e-14 * (1.0 + lam.norm()) {
            return Ok(lam);
        }
    }
    let resid = char_fn(lam, tau, alpha2, alpha3).norm();
    if resid < 1e-10 {
        Ok(lam)
    } else {
        Err(Error::TrackingFailed { at: tau, reason: format!("Newton stalled, |h| = {resid:.3e}") })
    }
}

/// Continue a simple root from `tau_start` to `tau_end` with an adaptive
/// predictor-corrector. Every accepted sample satisfies |h| <= 1e-10.
pub fn track_root(
    alpha2: f64,
    alpha3: f64,
    tau_start: f64,
    tau_end: f64,
    seed: Complex64,
) -> Result<RootLocus> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    require_nonnegative(tau_start.min(tau_end), "tau")?;
    if char_fn(seed, tau_start, alpha2, alpha3).norm() > 1e-8 {
        return Err(Error::InvalidParameter(
            "seed does not satisfy |h(seed, tau_start)| <= 1e-8".into(),
        ));
    }
    let mut lam = newton_polish(seed, tau_start, alpha2, alpha3)?;
    let mut tau = tau_start;
    let span = tau_end - tau_start;
    let mut dt = span / 100.0;
    let mut locus = RootLocus {
        alpha2,
        alpha3,
        taus: vec![tau],
        roots: vec![lam],
    };
    let done = |t: f64| {
        if span >= 0.0 {
            t >= tau_end - 1e-15
        } else {
            t <= tau_end + 1e-15
        }
    };
    let mut steps = 0usize;
    while !done(tau) {
        steps += 1;
        if steps > 200_000 {
            return Err(Error::TrackingFailed { at: tau, reason: "step budget exhausted".into() });
        }
        let mut h_step = dt;
        if span >= 0.0 {
            h_step = h_step.min(tau_end - tau);
        } else {
            h_step = h_step.max(tau_end - tau);
        }
        let dl = char_fn_dlambda(lam, tau, alpha2, alpha3);
        if dl.norm() < 1e-10 {
            return Err(Error::TrackingFailed { at: tau, reason: "derivative collapse".into() });
        }
        let slope = -char_fn_dtau(lam, tau, alpha3) / dl;
        let predicted = lam + slope * h_step;
        match newton_polish(predicted, tau + h_step, alpha2, alpha3) {
            Ok(next) if (next - predicted).norm() < 0.5 * (1.0 + lam.norm()) => {
                tau += h_step;
                lam = next;
                locus.taus.push(tau);
                locus.roots.push(lam);
                // gentle growth back toward the nominal step
                dt = (dt * 1.5).clamp(-span.abs() / 50.0, span.abs() / 50.0).copysign(span);
                if dt == 0.0 {
                    dt = span / 100.0;
                }
            }
            _ => {
                dt *= 0.5;
                if dt.abs() < 1e-12 * (1.0 + tau.abs()) {
                    return Err(Error::TrackingFailed {
                        at: tau,
                        reason: "step size collapsed".into(),
                    });
                }
            }
        }
    }
    Ok(locus)
}

/// Number of characteristic roots with `Re(lambda) > 0`, by winding-number
/// integration of `arg h` over the rectangle `[eps, R] x [-iH, iH]` with
/// `R = H = 1.5 + alpha2 + alpha3` (an a-priori bound: any root with
/// `Re(lambda) >= 0` has `|lambda| <= 1 + alpha2 + alpha3`).
///
/// Refuses with a marginal error when `tau` is within [`CRITICALITY_TOL`] of
/// a critical delay or when the nearest crossing root is predicted to sit
/// within the left contour edge.
pub fn count_unstable_roots(alpha2: f64, alpha3: f64, tau: f64) -> Result<u32> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    require_nonnegative(tau, "tau")?;
    const EPS: f64 = 1e-6;

    // Guard: a root crossing near tau would straddle the left edge.
    let j_max = ((tau / (2.0 * PI) + 2.0) * (1.0 + alpha3)) as usize + 2;
    let set = critical_delays(alpha2, alpha3, j_max)?;
    if let Some((dist, critical)) = set.nearest_critical(tau) {
        if dist < CRITICALITY_TOL {
            return Err(Error::Marginal { tau, critical });
        }
        // |sigma| ~ |sigma'| * dist near a simple crossing (the resonant
        // branch grazes quadratically; use the quadratic estimate there).
        let sigma_scale = if alpha3 == alpha2 { dist * dist } else { dist };
        if sigma_scale * 0.01 < EPS && dist < 1e-3 {
            // Conservative: only refuse when genuinely close.
            let est = estimate_axis_clearance(alpha2, alpha3, tau, critical);
            if est < 2.0 * EPS {
                return Err(Error::NearContourRoot { distance: est });
            }
        }
    }

    let r = 1.5 + alpha2 + alpha3;
    let corners = [
        Complex64::new(EPS, -r),
        Complex64::new(r, -r),
        Complex64::new(r, r),
        Complex64::new(EPS, r),
        Complex64::new(EPS, -r),
    ];
    let mut total = 0.0f64;
    for w in corners.windows(2) {
        // pre-split each edge so no initial segment can hide a full turn
        let pieces = 64;
        for p in 0..pieces {
            let za = w[0] + (w[1] - w[0]) * (p as f64 / pieces as f64);
            let zb = w[0] + (w[1] - w[0]) * ((p + 1) as f64 / pieces as f64);
            total += edge_arg_change(za, zb, tau, alpha2, alpha3, 0)?;
        }
    }
    let winding = total / (2.0 * PI);
    let rounded = winding.round();
    if (winding - rounded).abs() > 1e-6 {
        return Err(Error::ModelInconsistency(format!(
            "winding number {winding} not integral to 1e-6"
        )));
    }
    Ok(rounded.max(0.0) as u32)
}

/// Real part of the crossing root nearest the imaginary axis, estimated from
/// the crossing derivative at the closest critical delay.
fn estimate_axis_clearance(alpha2: f64, alpha3: f64, tau: f64, critical: f64) -> f64 {
    use super::{crossing_derivatives, Branch};
    let dist = (tau - critical).abs();
    if alpha3 == alpha2 {
        // grazing contact: sigma ~ sigma'' dist^2 / 2
        let j = (critical / (2.0 * PI)).round() as usize;
        match crossing_derivatives(alpha2, alpha3, Branch::Resonant, j) {
            Ok(d) => 0.5 * d.sigma_double_prime.unwrap_or(1.0).abs() * dist * dist,
            Err(_) => dist * dist,
        }
    } else {
        // smallest |sigma'| of the two branches is the safe estimate
        let sp = crossing_derivatives(alpha2, alpha3, Branch::Plus, 0)
            .map(|d| d.sigma_prime.abs())
            .unwrap_or(1.0);
        let sm = crossing_derivatives(alpha2, alpha3, Branch::Minus, 0)
            .map(|d| d.sigma_prime.abs())
            .unwrap_or(1.0);
        sp.min(sm) * dist
    }
}

/// Continuous change of `arg h` along the segment `[za, zb]`, subdividing
/// until the complex-log change (magnitude and phase together) of each
/// piece is small. Controlling |log h| rather than the bare phase prevents
/// a segment that winds a full turn while returning to a similar value from
/// being accepted at face value.
fn edge_arg_change(
    za: Complex64,
    zb: Complex64,
    tau: f64,
    alpha2: f64,
    alpha3: f64,
    depth: u32,
) -> Result<f64> {
    const LOG_CAP: f64 = 0.75;
    let fa = char_fn(za, tau, alpha2, alpha3);
    let fb = char_fn(zb, tau, alpha2, alpha3);
    let scale = 1.0 + za.norm_sqr().max(zb.norm_sqr());
    if fa.norm() < 1e-13 * scale || fb.norm() < 1e-13 * scale {
        return Err(Error::NearContourRoot { distance: fa.norm().min(fb.norm()) });
    }
    let dphi = (fb / fa).arg();
    let dlog = Complex64::new((fb.norm() / fa.norm()).ln(), dphi);
    if dlog.norm() <= LOG_CAP {
        if depth >= 50 {
            return Ok(dphi);
        }
        // midpoint confirmation
        let mid = 0.5 * (za + zb);
        let fm = char_fn(mid, tau, alpha2, alpha3);
        if fm.norm() < 1e-13 * scale {
            return Err(Error::NearContourRoot { distance: fm.norm() });
        }
        let l1 = Complex64::new((fm.norm() / fa.norm()).ln(), (fm / fa).arg());
        let l2 = Complex64::new((fb.norm() / fm.norm()).ln(), (fb / fm).arg());
        if l1.norm() <= LOG_CAP && l2.norm() <= LOG_CAP && (l1.im + l2.im - dphi).abs() < 1e-9 {
            return Ok(dphi);
        }
    }
    if depth >= 50 {
        return Err(Error::NearContourRoot { distance: fa.norm().min(fb.norm()) });
    }
    let mid = 0.5 * (za + zb);
    Ok(edge_arg_change(za, mid, tau, alpha2, alpha3, depth + 1)?
        + edge_arg_change(mid, zb, tau, alpha2, alpha3, depth + 1)?)
}

/// The `count` rightmost characteristic roots with nonnegative imaginary
/// part, computed by Chebyshev collocation of the solution-operator
/// generator and Newton-polished on `h`. Intended for locating the dominant
/// root; accuracy is certified by the returned residuals being below 1e-10.
pub fn rightmost_roots(alpha2: f64, alpha3: f64, tau: f64, count: usize) -> Result<Vec<Complex64>> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    require_nonnegative(tau, "tau")?;
    if tau == 0.0 {
        // Quadratic: lambda^2 + (alpha2 - alpha3) lambda + 1 = 0.
        let b = alpha2 - alpha3;
        let disc = Complex64::new(b * b - 4.0, 0.0).sqrt();
        let mut roots = vec![
            (Complex64::new(-b, 0.0) + disc) / 2.0,
            (Complex64::new(-b, 0.0) - disc) / 2.0,
        ];
        roots.retain(|r| r.im >= -1e-12);
        roots.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
        roots.truncate(count);
        return Ok(roots);
    }

    let n = if tau * (1.0 + alpha2 + alpha3) > 40.0 { 96 } else { 48 };
    // Chebyshev points mapped to [-tau, 0]; node 0 is theta = 0.
    let theta: Vec<f64> = (0..=n).map(|k| (PI * k as f64 / n as f64).cos()).collect();
    let d = chebyshev_diff_matrix(&theta, 2.0 / tau);

    // Generator discretization: rows at interior/history nodes enforce
    // (A phi)(theta_k) = phi'(theta_k); the row at theta = 0 applies the
    // delayed right-hand side. State components interleaved (x1, x2) per node.
    let dim = 2 * (n + 1);
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    for k in 1..=n {
        for j in 0..=n {
            a[(2 * k, 2 * j)] = d[(k, j)];
            a[(2 * k + 1, 2 * j + 1)] = d[(k, j)];
        }
    }
    // x1' = x2; x2' = -x1 - alpha2 x2 + alpha3 x2(-tau)
    a[(0, 1)] = 1.0;
    a[(1, 0)] = -1.0;
    a[(1, 1)] = -alpha2;
    a[(1, 2 * n + 1)] += alpha3;

    let eigs = a.complex_eigenvalues();
    let mut polished: Vec<Complex64> = Vec::new();
    for e in eigs.iter() {
        if e.im < -1e-9 || e.re < -2.0 - alpha2 {
            continue;
        }
        if let Ok(root) = newton_polish(*e, tau, alpha2, alpha3) {
            if char_fn(root, tau, alpha2, alpha3).norm() < 1e-10
                && root.im >= -1e-9
                && !polished.iter().any(|r| (r - root).norm() < 1e-7)
            {
                polished.push(root);
            }
        }
    }
    polished.sort_by(|x, y| y.re.partial_cmp(&x.re).unwrap());
    polished.truncate(count);
    if polished.is_empty() {
        return Err(Error::InsufficientData("no collocation eigenvalue converged on h".into()));
    }
    Ok(polished)
}

/// Chebyshev differentiation matrix on the given extreme points, scaled by
/// `jac` (the derivative of the affine map from [-1, 1] to the interval).
fn chebyshev_diff_matrix(theta: &[f64], jac: f64) -> DMatrix<f64> {
    let n = theta.len() - 1;
    let c = |k: usize| -> f64 {
        let base = if k == 0 || k == n { 2.0 } else { 1.0 };
        base * if k % 2 == 0 { 1.0 } else { -1.0 }
    };
    let mut d = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                d[(i, j)] = c(i) / c(j) / (theta[i] - theta[j]);
            }
        }
    }
    for i in 0..=n {
        let mut s = 0.0;
        for j in 0..=n {
            if i != j {
                s += d[(i, j)];
            }
        }
        d[(i, i)] = -s;
    }
    d * jac
}
