//! Tabular emitters for the stability chart and the critical-delay curves.
//!
//! CSV columns are documented in the repository README; all floats are
//! written with 17 significant digits so files round-trip bit-exactly.

use super::{classify_region, critical_delays, stability, Branch, Region};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Fixed-format float: 17 significant digits, round-trip exact for f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One cell of the `(alpha2, alpha3)` stability chart.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChartCell {
    pub alpha2: f64,
    pub alpha3: f64,
    pub region: Region,
    /// Populated when the chart is evaluated at a fixed delay.
    pub stable: Option<bool>,
    pub unstable_root_pairs: Option<u32>,
}

/// Classify a rectangular grid; `tau` additionally resolves per-cell
/// stability. Cells that land exactly on a critical delay are reported with
/// `stable = None`.
pub fn stability_chart(
    alpha2s: &[f64],
    alpha3s: &[f64],
    tau: Option<f64>,
) -> Result<Vec<ChartCell>> {
    let mut cells = Vec::with_capacity(alpha2s.len() * alpha3s.len());
    for &a2 in alpha2s {
        for &a3 in alpha3s {
            let region = classify_region(a2, a3)?;
            let (stable, pairs) = match tau {
                None => (None, None),
                Some(t) => match stability(a2, a3, t) {
                    Ok(v) => (Some(v.stable), Some(v.unstable_root_pairs)),
                    Err(Error::Marginal { .. }) => (None, None),
                    Err(e) => return Err(e),
                },
            };
            cells.push(ChartCell {
                alpha2: a2,
                alpha3: a3,
                region,
                stable,
                unstable_root_pairs: pairs,
            });
        }
    }
    Ok(cells)
}

/// Write chart cells as CSV: `alpha2,alpha3,region[,stable,unstable_pairs]`.
pub fn write_stability_csv<W: Write>(w: &mut W, cells: &[ChartCell]) -> std::io::Result<()> {
    let with_tau = cells.iter().any(|c| c.stable.is_some());
    if with_tau {
        writeln!(w, "alpha2,alpha3,region,stable,unstable_pairs")?;
    } else {
        writeln!(w, "alpha2,alpha3,region")?;
    }
    for c in cells {
        if with_tau {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_f64(c.alpha2),
                fmt_f64(c.alpha3),
                c.region,
                c.stable.map_or("marginal".into(), |s| s.to_string()),
                c.unstable_root_pairs.map_or("".into(), |n| n.to_string()),
            )?;
        } else {
            writeln!(w, "{},{},{}", fmt_f64(c.alpha2), fmt_f64(c.alpha3), c.region)?;
        }
    }
    Ok(())
}

/// One sample of a critical-delay curve `tau_j^{branch}(alpha3)` at fixed
/// `alpha2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvePoint {
    pub branch: Branch,
    pub j: usize,
    pub alpha3: f64,
    pub tau: f64,
}

/// Sample `tau_j^+(alpha3)` and `tau_j^-(alpha3)` for `j <= j_max` over an
/// `alpha3` range (strictly above `alpha2`), dropping values above `tau_cap`.
pub fn critical_delay_curves(
    alpha2: f64,
    alpha3_lo: f64,
    alpha3_hi: f64,
    samples: usize,
    j_max: usize,
    tau_cap: f64,
) -> Result<Vec<CurvePoint>> {
    if !(alpha3_lo > alpha2) || !(alpha3_hi > alpha3_lo) {
        return Err(Error::InvalidParameter(
            "critical-delay curves need alpha2 < alpha3_lo < alpha3_hi".into(),
        ));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let mut out = Vec::new();
    for i in 0..samples {
        let a3 = alpha3_lo + (alpha3_hi - alpha3_lo) * i as f64 / (samples - 1) as f64;
        let set = critical_delays(alpha2, a3, j_max)?;
        for (j, &t) in set.branch_plus.iter().enumerate() {
            if t <= tau_cap {
                out.push(CurvePoint { branch: Branch::Plus, j, alpha3: a3, tau: t });
            }
        }
        for (j, &t) in set.branch_minus.iter().enumerate() {
            if t <= tau_cap {
                out.push(CurvePoint { branch: Branch::Minus, j, alpha3: a3, tau: t });
            }
        }
    }
    Ok(out)
}

/// Write curve points as CSV: `branch,j,alpha3,tau`.
pub fn write_curves_csv<W: Write>(w: &mut W, pts: &[CurvePoint]) -> std::io::Result<()> {
    writeln!(w, "branch,j,alpha3,tau")?;
    for p in pts {
        let b = match p.branch {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
            Branch::Resonant => "resonant",
        };
        writeln!(w, "{},{},{},{}", b, p.j, fmt_f64(p.alpha3), fmt_f64(p.tau))?;
    }
    Ok(())
}
