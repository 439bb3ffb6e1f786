//! The truncated planar amplitude system of the double-Hopf unfolding,
//!
//! ```text
//! rho1' = 2 rho1 (sigma1 - rho1 - delta1 rho2),
//! rho2' = 2 rho2 (sigma2 - delta2 rho1 - rho2),
//! ```
//!
//! on the closed positive quadrant, with `delta1 delta2 = 4` and
//! `delta1 > 2 > delta2 > 0`. Fifth-order terms are omitted: the local
//! topology does not depend on them.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance deciding a boundary hit in the sigma plane.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Open regions of the `(sigma1, sigma2)` plane, anticlockwise from the
/// third quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaRegion {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

/// Bifurcation curves bounding the regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaBoundary {
    /// `sigma1 = 0`.
    H1,
    /// `sigma2 = 0`.
    H2,
    /// `sigma1 = delta1 sigma2`, `sigma2 > 0` (torus birth from the mode-2
    /// cycle).
    T1,
    /// `sigma2 = delta2 sigma1`, `sigma1 > 0` (torus death on the mode-1
    /// cycle).
    T2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaLocus {
    Region(SigmaRegion),
    Boundary(SigmaBoundary),
}

/// Classify `(sigma1, sigma2) != (0, 0)`; points within [`BOUNDARY_TOL`]
/// (relative) of a bifurcation curve are reported as that boundary.
pub fn classify_sigma_region(
    sigma1: f64,
    sigma2: f64,
    delta1: f64,
    delta2: f64,
) -> Result<SigmaLocus> {
    if !(delta1 > 0.0 && delta2 > 0.0) {
        return Err(Error::InvalidParameter("deltas must be positive".into()));
    }
    let scale = sigma1.abs().max(sigma2.abs());
    if scale == 0.0 {
        return Err(Error::InvalidParameter("(0, 0) is the organizing center, not a region".into()));
    }
    let tol = BOUNDARY_TOL * scale;
    if sigma1.abs() <= tol {
        return Ok(SigmaLocus::Boundary(SigmaBoundary::H1));
    }
    if sigma2.abs() <= tol {
        return Ok(SigmaLocus::Boundary(SigmaBoundary::H2));
    }
    let t1 = sigma1 - delta1 * sigma2;
    if sigma2 > 0.0 && t1.abs() <= BOUNDARY_TOL * sigma1.abs().max((delta1 * sigma2).abs()) {
        return Ok(SigmaLocus::Boundary(SigmaBoundary::T1));
    }
    let t2 = sigma2 - delta2 * sigma1;
    if sigma1 > 0.0 && t2.abs() <= BOUNDARY_TOL * sigma2.abs().max((delta2 * sigma1).abs()) {
        return Ok(SigmaLocus::Boundary(SigmaBoundary::T2));
    }
    let region = match (sigma1 > 0.0, sigma2 > 0.0) {
        (false, false) => SigmaRegion::I,
        (true, false) => SigmaRegion::II,
        (false, true) => SigmaRegion::VI,
        (true, true) => {
            if t1 > 0.0 {
                // below T1 (sigma2 < sigma1 / delta1)
                SigmaRegion::III
            } else if t2 < 0.0 {
                // between T1 and T2
                SigmaRegion::IV
            } else {
                SigmaRegion::V
            }
        }
    };
    Ok(SigmaLocus::Region(region))
}

/// Right-hand side of the truncated amplitude system. Rejects negative
/// amplitudes.
pub fn amplitude_flow(
    delta1: f64,
    delta2: f64,
    sigma: (f64, f64),
    rho: (f64, f64),
) -> Result<(f64, f64)> {
    if rho.0 < 0.0 || rho.1 < 0.0 {
        return Err(Error::InvalidParameter(format!("amplitudes must be nonnegative: {rho:?}")));
    }
    Ok((
        2.0 * rho.0 * (sigma.0 - rho.0 - delta1 * rho.1),
        2.0 * rho.1 * (sigma.1 - delta2 * rho.0 - rho.1),
    ))
}

/// Jacobian of the flow at `rho`.
pub fn flow_jacobian(
    delta1: f64,
    delta2: f64,
    sigma: (f64, f64),
    rho: (f64, f64),
) -> [[f64; 2]; 2] {
    [
        [2.0 * (sigma.0 - 2.0 * rho.0 - delta1 * rho.1), -2.0 * delta1 * rho.0],
        [-2.0 * delta2 * rho.1, 2.0 * (sigma.1 - delta2 * rho.0 - 2.0 * rho.1)],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EqName {
    E0,
    E1,
    E2,
    E3,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Equilibrium {
    pub name: EqName,
    pub location: (f64, f64),
    /// Real parts suffice: the Jacobians here have real spectrum on the
    /// axes, and the interior point is a saddle; complex pairs are reported
    /// by their common real part twice.
    pub eigenvalues: (f64, f64),
    pub stable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeEquilibria {
    pub region: SigmaRegion,
    pub equilibria: Vec<Equilibrium>,
    pub torus_present: bool,
}

impl AmplitudeEquilibria {
    pub fn equilibrium(&self, name: EqName) -> Option<&Equilibrium> {
        self.equilibria.iter().find(|e| e.name == name)
    }

    /// Names of the stable equilibria (the region's attractor set).
    pub fn attractors(&self) -> Vec<EqName> {
        self.equilibria.iter().filter(|e| e.stable).map(|e| e.name).collect()
    }
}

/// The attractor set each region must exhibit (region IV is bistable).
pub fn predicted_attractors(region: SigmaRegion) -> &'static [EqName] {
    match region {
        SigmaRegion::I => &[EqName::E0],
        SigmaRegion::II | SigmaRegion::III => &[EqName::E1],
        SigmaRegion::IV => &[EqName::E1, EqName::E2],
        SigmaRegion::V | SigmaRegion::VI => &[EqName::E2],
    }
}

/// Equilibria of the truncated system in the closed positive quadrant, with
/// stability. Refuses sigma on a bifurcation curve (degenerate collisions).
pub fn equilibria(delta1: f64, delta2: f64, sigma: (f64, f64)) -> Result<AmplitudeEquilibria> {
    let region = match classify_sigma_region(sigma.0, sigma.1, delta1, delta2)? {
        SigmaLocus::Region(r) => r,
        SigmaLocus::Boundary(_) => return Err(Error::OnBoundary(sigma.0, sigma.1)),
    };
    let mut eqs = Vec::new();
    let eig_at = |rho: (f64, f64)| -> (f64, f64) {
        let j = flow_jacobian(delta1, delta2, sigma, rho);
        if j[0][1] == 0.0 || j[1][0] == 0.0 {
            (j[0][0], j[1][1])
        } else {
            let tr = j[0][0] + j[1][1];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let disc = tr * tr - 4.0 * det;
            if disc >= 0.0 {
                (0.5 * (tr + disc.sqrt()), 0.5 * (tr - disc.sqrt()))
            } else {
                (0.5 * tr, 0.5 * tr)
            }
        }
    };
    let mut push = |name: EqName, rho: (f64, f64)| {
        let ev = eig_at(rho);
        eqs.push(Equilibrium {
            name,
            location: rho,
            eigenvalues: ev,
            stable: ev.0 < 0.0 && ev.1 < 0.0,
        });
    };
    push(EqName::E0, (0.0, 0.0));
    if sigma.0 > 0.0 {
        push(EqName::E1, (sigma.0, 0.0));
    }
    if sigma.1 > 0.0 {
        push(EqName::E2, (0.0, sigma.1));
    }
    let denom = delta1 * delta2 - 1.0;
    let rho10 = -(sigma.0 - delta1 * sigma.1) / denom;
    let rho20 = (delta2 * sigma.0 - sigma.1) / denom;
    if rho10 > 0.0 && rho20 > 0.0 {
        push(EqName::E3, (rho10, rho20));
    }
    Ok(AmplitudeEquilibria { region, equilibria: eqs, torus_present: region == SigmaRegion::IV })
}

/// Integrate the flow with fixed-step RK4 until it parks on an equilibrium
/// (velocity below `1e-12`) or `t_max` elapses; returns the final state.
pub fn integrate_flow(
    delta1: f64,
    delta2: f64,
    sigma: (f64, f64),
    rho0: (f64, f64),
    t_max: f64,
) -> Result<(f64, f64)> {
    if rho0.0 < 0.0 || rho0.1 < 0.0 {
        return Err(Error::InvalidParameter("initial amplitudes must be nonnegative".into()));
    }
    let f = |r: (f64, f64)| -> (f64, f64) {
        (
            2.0 * r.0 * (sigma.0 - r.0 - delta1 * r.1),
            2.0 * r.1 * (sigma.1 - delta2 * r.0 - r.1),
        )
    };
    let scale = sigma.0.abs().max(sigma.1.abs()).max(1.0);
    let dt = 0.01 / scale;
    let mut r = rho0;
    let mut t = 0.0;
    while t < t_max {
        let k1 = f(r);
        let k2 = f((r.0 + 0.5 * dt * k1.0, r.1 + 0.5 * dt * k1.1));
        let k3 = f((r.0 + 0.5 * dt * k2.0, r.1 + 0.5 * dt * k2.1));
        let k4 = f((r.0 + dt * k3.0, r.1 + dt * k3.1));
        r.0 += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        r.1 += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        // the quadrant is invariant; clip the integration error
        r.0 = r.0.max(0.0);
        r.1 = r.1.max(0.0);
        t += dt;
        let v = f(r);
        if v.0.abs().max(v.1.abs()) < 1e-12 * scale {
            break;
        }
    }
    Ok(r)
}
