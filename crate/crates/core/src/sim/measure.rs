//! Amplitude, frequency and Poincare-section extraction from a trajectory.

use super::Trajectory;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Noise floor below which a settled trajectory counts as fully decayed.
pub const NOISE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AmplitudeMeasurement {
    /// Mean |x1| over the local extrema after the transient cutoff.
    pub amplitude: f64,
    pub n_extrema: usize,
    /// Relative peak-to-peak variation of the last 20 cycles of maxima.
    pub drift: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FrequencyMeasurement {
    /// Angular frequency from mean zero-upcrossing spacing.
    pub omega: f64,
    /// Angular frequency of the discrete-spectrum peak.
    pub omega_spectral: f64,
}

/// Local extrema of `x1` after `t0`: the extremum times are the zeros of
/// `x2 = x1'`, refined by bisection on the dense output.
fn extrema_of_x1(traj: &Trajectory, t0: f64) -> Vec<(f64, f64)> {
    let h = traj.step;
    let start = ((t0 / h).ceil() as usize).max(1);
    let mut out = Vec::new();
    for i in start..traj.states.len() {
        let a = traj.states[i - 1][1];
        let b = traj.states[i][1];
        if a == 0.0 || a * b >= 0.0 {
            continue;
        }
        let mut lo = (i - 1) as f64 * h;
        let mut hi = i as f64 * h;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let v = traj.sample(mid)[1];
            if v == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (v > 0.0) == (a > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        out.push((t, traj.sample(t)[0]));
    }
    out
}

/// Mean |x1| over local extrema after `t0`, with the settling check:
/// the last 20 cycles of maxima must vary by less than 1% peak-to-peak.
pub fn measure_amplitude(traj: &Trajectory, t0: f64) -> Result<AmplitudeMeasurement> {
    let ext = extrema_of_x1(traj, t0);
    let peak = traj
        .states
        .iter()
        .skip((t0 / traj.step) as usize)
        .map(|s| s[0].abs())
        .fold(0.0, f64::max);
    if peak < NOISE_FLOOR {
        return Ok(AmplitudeMeasurement { amplitude: 0.0, n_extrema: ext.len(), drift: 0.0 });
    }
    if ext.len() < 44 {
        return Err(Error::NotSettled(format!(
            "only {} extrema after the cutoff; need at least 44 (20 cycles + margin)",
            ext.len()
        )));
    }
    // last 20 cycles ~ last 40 extrema
    let maxima: Vec<f64> = ext.iter().rev().take(40).map(|e| e.1.abs()).collect();
    let hi = maxima.iter().cloned().fold(f64::MIN, f64::max);
    let lo = maxima.iter().cloned().fold(f64::MAX, f64::min);
    let mean: f64 = maxima.iter().sum::<f64>() / maxima.len() as f64;
    let drift = (hi - lo) / mean.max(1e-300);
    if drift > 0.01 {
        return Err(Error::NotSettled(format!(
            "amplitude drift {:.3}% over the last 20 cycles exceeds 1%",
            100.0 * drift
        )));
    }
    let amplitude = ext.iter().map(|e| e.1.abs()).sum::<f64>() / ext.len() as f64;
    Ok(AmplitudeMeasurement { amplitude, n_extrema: ext.len(), drift })
}

/// Upward zero crossings of `x1` after `t0`.
fn upcrossings(traj: &Trajectory, t0: f64) -> Vec<f64> {
    let h = traj.step;
    let start = ((t0 / h).ceil() as usize).max(1);
    let mut out = Vec::new();
    for i in start..traj.states.len() {
        let a = traj.states[i - 1][0];
        let b = traj.states[i][0];
        if a < 0.0 && b >= 0.0 {
            let mut lo = (i - 1) as f64 * h;
            let mut hi = i as f64 * h;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if traj.sample(mid)[0] < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    out
}

/// Dominant angular frequency from the mean zero-upcrossing spacing of `x1`,
/// cross-checked against the discrete-spectrum peak (1% agreement required).
pub fn measure_frequency(traj: &Trajectory, t0: f64) -> Result<FrequencyMeasurement> {
    let peak = traj
        .states
        .iter()
        .skip((t0 / traj.step) as usize)
        .map(|s| s[0].abs())
        .fold(0.0, f64::max);
    if peak < NOISE_FLOOR {
        return Err(Error::InsufficientData(
            "signal below the noise floor; amplitude is zero".into(),
        ));
    }
    let ups = upcrossings(traj, t0);
    if ups.len() < 3 {
        return Err(Error::InsufficientData(
            "fewer than 3 upward zero crossings; amplitude is zero or the run is too short".into(),
        ));
    }
    let span = ups.last().unwrap() - ups.first().unwrap();
    let period = span / (ups.len() - 1) as f64;
    let omega = 2.0 * PI / period;

    let omega_spectral = spectral_peak(traj, t0, omega);
    if (omega_spectral - omega).abs() > 0.01 * omega {
        return Err(Error::ModelInconsistency(format!(
            "crossing frequency {omega} and spectral peak {omega_spectral} disagree beyond 1%"
        )));
    }
    Ok(FrequencyMeasurement { omega, omega_spectral })
}

/// Location of the power maximum of x1 over a frequency window around the
/// seed, by direct discrete Fourier sums with parabolic peak refinement.
fn spectral_peak(traj: &Trajectory, t0: f64, seed: f64) -> f64 {
    let start = (t0 / traj.step).ceil() as usize;
    let xs: Vec<f64> = traj.states[start..].iter().map(|s| s[0]).collect();
    let n = xs.len();
    let power = |omega: f64| -> f64 {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (k, &x) in xs.iter().enumerate() {
            let ph = omega * (k as f64) * traj.step;
            re += x * ph.cos();
            im -= x * ph.sin();
        }
        (re * re + im * im) / (n as f64)
    };
    let lo = 0.7 * seed;
    let hi = 1.3 * seed;
    let m = 120;
    let mut best = (lo, f64::MIN);
    let mut grid = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let w = lo + (hi - lo) * i as f64 / m as f64;
        let p = power(w);
        grid.push(p);
        if p > best.1 {
            best = (w, p);
        }
    }
    // parabolic refinement around the grid peak
    let i = grid
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    if i == 0 || i == m {
        return best.0;
    }
    let dw = (hi - lo) / m as f64;
    let (pm, p0, pp) = (grid[i - 1], grid[i], grid[i + 1]);
    let denom = pm - 2.0 * p0 + pp;
    if denom.abs() < 1e-300 {
        return best.0;
    }
    let corr = 0.5 * (pm - pp) / denom;
    lo + dw * (i as f64 + corr)
}

/// Section points `(x1(t), x2(t - lag))` at upward crossings of `x2`
/// through zero after `t0`. A periodic orbit yields a tight cluster, a
/// torus a closed-curve-like spread.
pub fn poincare_section(traj: &Trajectory, t0: f64, lag: f64) -> Result<Vec<[f64; 2]>> {
    let h = traj.step;
    let start = ((t0 / h).ceil() as usize).max(1);
    let mut pts = Vec::new();
    for i in start..traj.states.len() {
        let a = traj.states[i - 1][1];
        let b = traj.states[i][1];
        if a < 0.0 && b >= 0.0 {
            let mut lo = (i - 1) as f64 * h;
            let mut hi = i as f64 * h;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if traj.sample(mid)[1] < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            if t - lag >= -traj.tau {
                pts.push([traj.sample(t)[0], traj.sample(t - lag)[1]]);
            }
        }
    }
    if pts.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "only {} section crossings after the cutoff",
            pts.len()
        )));
    }
    Ok(pts)
}

/// Diameter of a point set (max pairwise distance).
pub fn cluster_diameter(points: &[[f64; 2]]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dx = points[i][0] - points[j][0];
            let dy = points[i][1] - points[j][1];
            d = d.max((dx * dx + dy * dy).sqrt());
        }
    }
    d
}
