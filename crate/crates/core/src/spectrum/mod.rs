//! The characteristic quasi-polynomial
//!
//! ```text
//! h(lambda, tau) = lambda^2 + alpha2 lambda + 1 - alpha3 lambda e^{-lambda tau}
//! ```
//!
//! and everything derived from it: crossing frequencies and delays, crossing
//! derivatives, branch ordering, stability verdicts, root counting/tracking
//! and the parameter-plane partition.

mod bilinear;
pub mod charts;
mod roots;

pub use bilinear::{adjoint_eigenfunction, bilinear_form, mode_eigenfunction, normalization_d};
pub use roots::{count_unstable_roots, newton_polish, rightmost_roots, track_root, RootLocus};

use crate::error::{require_nonnegative, require_positive, Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Residual tolerance for "this value satisfies h = 0".
pub const RESIDUAL_TOL: f64 = 1e-10;
/// |tau - tau_c| below this is treated as sitting at criticality.
pub const CRITICALITY_TOL: f64 = 1e-9;
/// Tolerance on the tangency condition separating the interleaved and
/// swapped orderings.
pub const TANGENT_TOL: f64 = 1e-10;

/// Which family of critical delays a crossing belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Crossings at frequency `omega_+` (destabilizing, `sigma' > 0`).
    Plus,
    /// Crossings at frequency `omega_-` (stabilizing, `sigma' < 0`).
    Minus,
    /// The merged branch at `alpha3 = alpha2` (grazing, `sigma' = 0`).
    Resonant,
}

/// Arrangement of the two critical-delay progressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderingCase {
    /// `tau_0^- < tau_0^+ < tau_1^- < ... < tau_m^- < tau_m^+ < tau_{m+1}^+`;
    /// `m + 1` stability windows exist.
    Interleaved { m: usize },
    /// `tau_0^+ = tau_0^-`: the windows degenerate to a point.
    Tangent,
    /// `tau_j^+ < tau_j^-` for every `j`: no stability window.
    Swapped,
    /// `alpha3 < alpha2`: no crossings at all.
    SubcriticalNone,
    /// `alpha3 = alpha2`: the single merged branch `tau_j = 2 pi j`.
    Resonant,
}

/// Region of the `(alpha2, alpha3)` first quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// `alpha3 < alpha2`: delay-independent stability.
    D1,
    /// Interleaved orderings: delay windows of stability.
    D2,
    /// Swapped orderings: unstable for every delay.
    D3,
    /// `alpha3 = alpha2`.
    C1,
    /// The tangency curve between D2 and D3.
    C2,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Region::D1 => "D1",
            Region::D2 => "D2",
            Region::D3 => "D3",
            Region::C1 => "C1",
            Region::C2 => "C2",
        };
        f.write_str(s)
    }
}

/// The crossing frequencies and the critical-delay sequences they generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalDelaySet {
    pub alpha2: f64,
    pub alpha3: f64,
    pub omega_plus: Option<f64>,
    pub omega_minus: Option<f64>,
    /// `tau_j^+`, strictly increasing with gap `2 pi / omega_+`.
    pub branch_plus: Vec<f64>,
    /// `tau_j^-`, strictly increasing with gap `2 pi / omega_-`.
    pub branch_minus: Vec<f64>,
    /// `tau_j = 2 pi j`, present only when `alpha3 = alpha2`.
    pub resonant_branch: Option<Vec<f64>>,
    pub ordering: OrderingCase,
}

impl CriticalDelaySet {
    /// Delay windows `(tau_j^-, tau_j^+)`, `j = 0..=m`, on which the zero
    /// solution is stable (empty unless the ordering is interleaved).
    pub fn stability_windows(&self) -> Vec<(f64, f64)> {
        match self.ordering {
            OrderingCase::Interleaved { m } => (0..=m)
                .filter(|&j| j < self.branch_plus.len() && j < self.branch_minus.len())
                .map(|j| (self.branch_minus[j], self.branch_plus[j]))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Distance from `tau` to the nearest stored critical delay, with the
    /// delay itself.
    pub fn nearest_critical(&self, tau: f64) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        let all = self
            .branch_plus
            .iter()
            .chain(self.branch_minus.iter())
            .chain(self.resonant_branch.iter().flatten());
        for &t in all {
            let d = (tau - t).abs();
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, t));
            }
        }
        best
    }

    /// Number of root pairs in the open right half plane at delay `tau`
    /// (crossing bookkeeping; `None` at the resonant/subcritical cases where
    /// the answer is identically zero is still `Some(0)`).
    pub fn unstable_pairs(&self, tau: f64) -> u32 {
        if self.alpha3 <= self.alpha2 {
            return 0;
        }
        let plus = self.count_below(&self.branch_plus, self.gap_plus(), tau);
        let minus = self.count_below(&self.branch_minus, self.gap_minus(), tau);
        (1 + plus as i64 - minus as i64).max(0) as u32
    }

    fn gap_plus(&self) -> f64 {
        2.0 * PI / self.omega_plus.expect("plus branch requires omega_plus")
    }

    fn gap_minus(&self) -> f64 {
        2.0 * PI / self.omega_minus.expect("minus branch requires omega_minus")
    }

    /// Number of members of the arithmetic progression below `tau`, valid
    /// beyond the stored prefix.
    fn count_below(&self, stored: &[f64], gap: f64, tau: f64) -> usize {
        let first = match stored.first() {
            Some(&t) => t,
            None => return 0,
        };
        if tau <= first {
            0
        } else {
            ((tau - first) / gap).floor() as usize + 1
        }
    }
}

/// Stability classification of the zero solution at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub region: Region,
    pub unstable_root_pairs: u32,
    pub stable: bool,
    /// Delay intervals of stability; populated only in region D2.
    pub stability_windows: Vec<(f64, f64)>,
}

/// Derivatives of the tracked root at a critical delay (Lemma-2-style closed
/// forms; signs: `sigma'(tau_j^+) > 0`, `sigma'(tau_j^-) < 0`, all
/// `omega' < 0`, and on the resonant branch `sigma' = 0 > sigma''`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingDerivatives {
    pub sigma_prime: f64,
    pub omega_prime: f64,
    /// Present only on the resonant branch, where `sigma_prime` vanishes.
    pub sigma_double_prime: Option<f64>,
}

/// `h(lambda, tau) = lambda^2 + alpha2 lambda + 1 - alpha3 lambda e^{-lambda tau}`.
pub fn char_fn(lambda: Complex64, tau: f64, alpha2: f64, alpha3: f64) -> Complex64 {
    lambda * lambda + alpha2 * lambda + 1.0 - alpha3 * lambda * (-lambda * tau).exp()
}

/// `dh/dlambda`.
pub fn char_fn_dlambda(lambda: Complex64, tau: f64, alpha2: f64, alpha3: f64) -> Complex64 {
    2.0 * lambda + alpha2 - alpha3 * (-lambda * tau).exp() * (1.0 - lambda * tau)
}

/// `dh/dtau`.
pub fn char_fn_dtau(lambda: Complex64, tau: f64, alpha3: f64) -> Complex64 {
    alpha3 * lambda * lambda * (-lambda * tau).exp()
}

/// The positive roots of `w^4 + (alpha2^2 - alpha3^2 - 2) w^2 + 1 = 0`:
/// `Some((omega_plus, omega_minus))` when `alpha3 > alpha2`, `Some((1, 1))`
/// at `alpha3 = alpha2`, `None` when `alpha3 < alpha2` (no purely imaginary
/// characteristic roots for any delay).
pub fn omega_pm(alpha2: f64, alpha3: f64) -> Result<Option<(f64, f64)>> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    if alpha3 < alpha2 {
        return Ok(None);
    }
    if alpha3 == alpha2 {
        return Ok(Some((1.0, 1.0)));
    }
    let b = alpha3 * alpha3 - alpha2 * alpha2;
    let a = 4.0 + b;
    let sp = 0.5 * (a.sqrt() + b.sqrt());
    let sm = 0.5 * (a.sqrt() - b.sqrt());
    Ok(Some((sp, sm)))
}

/// Critical delays up to index `j_max` on each branch.
pub fn critical_delays(alpha2: f64, alpha3: f64, j_max: usize) -> Result<CriticalDelaySet> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    if alpha3 < alpha2 {
        return Ok(CriticalDelaySet {
            alpha2,
            alpha3,
            omega_plus: None,
            omega_minus: None,
            branch_plus: Vec::new(),
            branch_minus: Vec::new(),
            resonant_branch: None,
            ordering: OrderingCase::SubcriticalNone,
        });
    }
    if alpha3 == alpha2 {
        let taus = (0..=j_max).map(|j| 2.0 * PI * j as f64).collect();
        return Ok(CriticalDelaySet {
            alpha2,
            alpha3,
            omega_plus: Some(1.0),
            omega_minus: Some(1.0),
            branch_plus: Vec::new(),
            branch_minus: Vec::new(),
            resonant_branch: Some(taus),
            ordering: OrderingCase::Resonant,
        });
    }
    let (wp, wm) = omega_pm(alpha2, alpha3)?.expect("alpha3 > alpha2");
    // acos lands in [0, pi/2] since 0 < alpha2/alpha3 < 1.
    let phi = (alpha2 / alpha3).acos();
    let branch_plus: Vec<f64> =
        (0..=j_max).map(|j| (2.0 * PI - phi + 2.0 * PI * j as f64) / wp).collect();
    let branch_minus: Vec<f64> =
        (0..=j_max).map(|j| (phi + 2.0 * PI * j as f64) / wm).collect();
    let ordering = ordering(alpha2, alpha3)?;
    Ok(CriticalDelaySet {
        alpha2,
        alpha3,
        omega_plus: Some(wp),
        omega_minus: Some(wm),
        branch_plus,
        branch_minus,
        resonant_branch: None,
        ordering,
    })
}

fn tau_on_branch(alpha2: f64, alpha3: f64, branch: Branch, j: usize) -> Result<(f64, f64)> {
    match branch {
        Branch::Resonant => {
            if alpha3 != alpha2 {
                return Err(Error::InvalidParameter(
                    "resonant branch exists only at alpha3 = alpha2".into(),
                ));
            }
            Ok((2.0 * PI * j as f64, 1.0))
        }
        Branch::Plus | Branch::Minus => {
            if alpha3 <= alpha2 {
                return Err(Error::InvalidParameter(
                    "plus/minus branches exist only for alpha3 > alpha2".into(),
                ));
            }
            let (wp, wm) = omega_pm(alpha2, alpha3)?.expect("alpha3 > alpha2");
            let phi = (alpha2 / alpha3).acos();
            Ok(match branch {
                Branch::Plus => ((2.0 * PI - phi + 2.0 * PI * j as f64) / wp, wp),
                Branch::Minus => ((phi + 2.0 * PI * j as f64) / wm, wm),
                Branch::Resonant => unreachable!(),
            })
        }
    }
}

/// The critical delay and crossing frequency for one `(branch, j)`.
pub fn critical_delay(alpha2: f64, alpha3: f64, branch: Branch, j: usize) -> Result<(f64, f64)> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    tau_on_branch(alpha2, alpha3, branch, j)
}

/// Closed-form crossing derivatives at `tau_j` of the given branch.
pub fn crossing_derivatives(
    alpha2: f64,
    alpha3: f64,
    branch: Branch,
    j: usize,
) -> Result<CrossingDerivatives> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    let (tau, w) = tau_on_branch(alpha2, alpha3, branch, j)?;
    match branch {
        Branch::Resonant => {
            let s2 = -4.0 * alpha2 / ((1.0 + alpha2 * tau) * (2.0 + alpha2 * tau).powi(2));
            let wp = -alpha2 / (2.0 + tau * alpha2);
            Ok(CrossingDerivatives {
                sigma_prime: 0.0,
                omega_prime: wp,
                sigma_double_prime: Some(s2),
            })
        }
        Branch::Plus | Branch::Minus => {
            let w2 = w * w;
            let den = 4.0 + alpha3 * alpha3 - alpha2 * alpha2
                + 2.0 * tau * alpha2
                + tau * (tau * alpha3 * alpha3 + 2.0 * alpha2) * w2;
            let sp = (w2 - 1.0) * (w2 + 1.0) / den;
            let wp = -w * (tau * alpha3 * alpha3 * w2 + alpha2 * w2 + alpha2) / den;
            Ok(CrossingDerivatives { sigma_prime: sp, omega_prime: wp, sigma_double_prime: None })
        }
    }
}

/// Value of the tangency discriminant `alpha2/alpha3 - cos(pi (1 - sqrt(b/a)))`:
/// positive in the interleaved case, zero on the tangency curve, negative in
/// the swapped case.
pub fn tangency_discriminant(alpha2: f64, alpha3: f64) -> f64 {
    let b = alpha3 * alpha3 - alpha2 * alpha2;
    let a = 4.0 + b;
    alpha2 / alpha3 - (PI * (1.0 - (b / a).sqrt())).cos()
}

/// Ordering of the two progressions for `alpha3 > alpha2 > 0`. The
/// interleaving index `m` is found by direct comparison of the progressions.
pub fn ordering(alpha2: f64, alpha3: f64) -> Result<OrderingCase> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    if alpha3 <= alpha2 {
        return Err(Error::InvalidParameter("ordering requires alpha3 > alpha2 > 0".into()));
    }
    let g = tangency_discriminant(alpha2, alpha3);
    if g.abs() <= TANGENT_TOL {
        return Ok(OrderingCase::Tangent);
    }
    if g < 0.0 {
        return Ok(OrderingCase::Swapped);
    }
    let (wp, wm) = omega_pm(alpha2, alpha3)?.expect("alpha3 > alpha2");
    let phi = (alpha2 / alpha3).acos();
    let tau_p = |j: usize| (2.0 * PI - phi + 2.0 * PI * j as f64) / wp;
    let tau_m = |j: usize| (phi + 2.0 * PI * j as f64) / wm;
    // tau_j^+ - tau_j^- decreases strictly with j, so the last j with
    // tau_j^+ > tau_j^- is the interleaving index.
    let mut m = 0usize;
    let cap = 100_000_000usize;
    let mut j = 0usize;
    while tau_p(j) > tau_m(j) {
        m = j;
        j += 1;
        if j > cap {
            return Err(Error::InvalidParameter(
                "interleaving index exceeds 1e8; parameters are numerically on C1".into(),
            ));
        }
    }
    debug_assert!(j > 0, "positive discriminant implies tau_0^+ > tau_0^-");
    Ok(OrderingCase::Interleaved { m })
}

/// Partition of the first quadrant per the stability chart.
pub fn classify_region(alpha2: f64, alpha3: f64) -> Result<Region> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    if alpha3 < alpha2 {
        return Ok(Region::D1);
    }
    if alpha3 == alpha2 {
        return Ok(Region::C1);
    }
    Ok(match ordering(alpha2, alpha3)? {
        OrderingCase::Interleaved { .. } => Region::D2,
        OrderingCase::Tangent => Region::C2,
        OrderingCase::Swapped => Region::D3,
        OrderingCase::SubcriticalNone | OrderingCase::Resonant => unreachable!(),
    })
}

/// Stability of the zero solution at delay `tau`. Refuses with
/// [`Error::Marginal`] when `tau` is within [`CRITICALITY_TOL`] of a critical
/// delay.
pub fn stability(alpha2: f64, alpha3: f64, tau: f64) -> Result<StabilityVerdict> {
    require_positive(alpha2, "alpha2")?;
    require_positive(alpha3, "alpha3")?;
    require_nonnegative(tau, "tau")?;
    let region = classify_region(alpha2, alpha3)?;
    if region == Region::D1 {
        return Ok(StabilityVerdict {
            region,
            unstable_root_pairs: 0,
            stable: true,
            stability_windows: Vec::new(),
        });
    }
    // Enough indices to cover tau on both branches, and the full window list
    // in the interleaved case.
    let mut j_max = ((tau / (2.0 * PI) + 2.0) * (1.0 + alpha3)) as usize + 2;
    if alpha3 > alpha2 {
        if let OrderingCase::Interleaved { m } = ordering(alpha2, alpha3)? {
            j_max = j_max.max(m + 1);
        }
    }
    let set = critical_delays(alpha2, alpha3, j_max)?;
    if let Some((dist, critical)) = set.nearest_critical(tau) {
        if dist < CRITICALITY_TOL {
            return Err(Error::Marginal { tau, critical });
        }
    }
    if region == Region::C1 {
        return Ok(StabilityVerdict {
            region,
            unstable_root_pairs: 0,
            stable: true,
            stability_windows: Vec::new(),
        });
    }
    let pairs = set.unstable_pairs(tau);
    let windows = set.stability_windows();
    Ok(StabilityVerdict {
        region,
        unstable_root_pairs: pairs,
        stable: pairs == 0,
        stability_windows: windows,
    })
}

#[cfg(test)]
mod tests;
