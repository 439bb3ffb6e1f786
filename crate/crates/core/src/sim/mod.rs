//! Direct numerical integration of the full nonlinear delay equation
//!
//! ```text
//! x1' = x2,
//! x2' = -x1 - alpha2 x2 + kappa tanh(K3 x2(t - tau)),
//! ```
//!
//! by the method of steps with classical fourth-order Runge-Kutta. The
//! delayed velocity is read from cubic Hermite dense output of the stored
//! solution (from the history function on the first delay interval). The
//! step is constrained to divide the delay exactly, so the derivative
//! discontinuities propagating from the history junction always sit on mesh
//! nodes and the scheme retains its full order.
//!
//! The integrator always evaluates the exact tanh feedback, never a Taylor
//! truncation, which keeps it independent of the normal-form algebra it is
//! used to validate.

mod measure;

pub use measure::{
    cluster_diameter, measure_amplitude, measure_frequency, poincare_section,
    AmplitudeMeasurement, FrequencyMeasurement,
};

use crate::error::{Error, Result};
use crate::model::NormalizedModel;
use serde::{Deserialize, Serialize};

/// State blow-up bound; exceeding it aborts with a divergence report.
pub const BLOWUP_BOUND: f64 = 1e6;

/// Initial data on `[-tau, 0]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum History {
    /// Constant state.
    Constant { x1: f64, x2: f64 },
    /// `x1 = a cos(w t)`, `x2 = -a w sin(w t)` (a small rotating seed).
    Sinusoid { amplitude: f64, omega: f64 },
    /// Uniform samples on `[-tau, 0]`, interpolated linearly.
    Table { dt: f64, states: Vec<[f64; 2]> },
}

impl History {
    pub fn eval(&self, t: f64) -> [f64; 2] {
        match self {
            History::Constant { x1, x2 } => [*x1, *x2],
            History::Sinusoid { amplitude, omega } => [
                amplitude * (omega * t).cos(),
                -amplitude * omega * (omega * t).sin(),
            ],
            History::Table { dt, states } => {
                // states[0] at t = -(n-1) dt, last at t = 0
                let n = states.len();
                if n == 1 {
                    return states[0];
                }
                let t0 = -((n - 1) as f64) * dt;
                let s = ((t - t0) / dt).clamp(0.0, (n - 1) as f64);
                let k = (s.floor() as usize).min(n - 2);
                let w = s - k as f64;
                [
                    states[k][0] * (1.0 - w) + states[k + 1][0] * w,
                    states[k][1] * (1.0 - w) + states[k + 1][1] * w,
                ]
            }
        }
    }
}

/// Integration settings. `step` must divide `tau` (to 1e-9 relative).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub step: f64,
    pub duration: f64,
    /// Transient cutoff used by the measurement routines.
    pub transient: f64,
    pub history: History,
}

impl SimConfig {
    /// Amplitude-study defaults: `h = tau / 200`, `T = 400 (2 pi / omega0)`,
    /// `T0 = 0.75 T`, sinusoidal seed of the given amplitude.
    pub fn cycle_study(tau: f64, omega0: f64, seed_amplitude: f64) -> Self {
        let duration = 400.0 * 2.0 * std::f64::consts::PI / omega0;
        let step = if tau > 0.0 { tau / 200.0 } else { duration / 200_000.0 };
        SimConfig {
            step,
            duration,
            transient: 0.75 * duration,
            history: History::Sinusoid { amplitude: seed_amplitude, omega: omega0 },
        }
    }

    /// Same defaults with the run length scaled by `cycles` instead of 400.
    pub fn cycle_study_with_length(tau: f64, omega0: f64, seed_amplitude: f64, cycles: f64) -> Self {
        let mut cfg = Self::cycle_study(tau, omega0, seed_amplitude);
        cfg.duration = cycles * 2.0 * std::f64::consts::PI / omega0;
        cfg.transient = 0.75 * cfg.duration;
        cfg
    }

    fn validate(&self, tau: f64) -> Result<usize> {
        if !(self.step > 0.0) {
            return Err(Error::InvalidParameter("step must be positive".into()));
        }
        if !(self.transient < self.duration) {
            return Err(Error::InvalidParameter("transient cutoff must precede duration".into()));
        }
        if tau == 0.0 {
            return Ok(0);
        }
        let ratio = tau / self.step;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "tau/step = {ratio} is not an integer; align the mesh with the delay"
            )));
        }
        Ok(n as usize)
    }
}

/// Dense solution on a uniform mesh, with the per-node derivatives that
/// define the cubic Hermite interpolant.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub alpha2: f64,
    pub kappa: f64,
    pub k3: f64,
    pub tau: f64,
    pub step: f64,
    /// `states[i]` at `t = i * step`.
    pub states: Vec<[f64; 2]>,
    pub derivs: Vec<[f64; 2]>,
    pub history: History,
    pub transient: f64,
}

impl Trajectory {
    pub fn t_end(&self) -> f64 {
        (self.states.len() - 1) as f64 * self.step
    }

    pub fn final_state(&self) -> [f64; 2] {
        *self.states.last().unwrap()
    }

    /// Dense evaluation; history for `t < 0`, Hermite between mesh nodes.
    pub fn sample(&self, t: f64) -> [f64; 2] {
        if t < 0.0 {
            return self.history.eval(t);
        }
        let n = self.states.len() - 1;
        let s = (t / self.step).min(n as f64);
        let k = (s.floor() as usize).min(n - 1);
        let u = s - k as f64;
        let mut out = [0.0; 2];
        for c in 0..2 {
            out[c] = hermite(
                self.states[k][c],
                self.states[k + 1][c],
                self.derivs[k][c] * self.step,
                self.derivs[k + 1][c] * self.step,
                u,
            );
        }
        out
    }
}

#[inline]
fn hermite(y0: f64, y1: f64, m0: f64, m1: f64, u: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * y0
        + (u3 - 2.0 * u2 + u) * m0
        + (-2.0 * u3 + 3.0 * u2) * y1
        + (u3 - u2) * m1
}

/// Integrate the model's delay equation.
pub fn simulate(model: &NormalizedModel, cfg: &SimConfig) -> Result<Trajectory> {
    simulate_components(model.alpha2, model.kappa, model.k3, model.tau, cfg)
}

/// Integrate with raw coefficients; `kappa = 0` runs the unforced damped
/// oscillator (useful for integrator diagnostics).
pub fn simulate_components(
    alpha2: f64,
    kappa: f64,
    k3: f64,
    tau: f64,
    cfg: &SimConfig,
) -> Result<Trajectory> {
    if !(alpha2 > 0.0) || kappa < 0.0 || !(k3 > 0.0) || tau < 0.0 {
        return Err(Error::InvalidParameter(
            "simulate needs alpha2 > 0, kappa >= 0, k3 > 0, tau >= 0".into(),
        ));
    }
    let n_delay = cfg.validate(tau)?;
    let h = cfg.step;
    let n_steps = (cfg.duration / h).ceil() as usize;
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut derivs = Vec::with_capacity(n_steps + 1);

    let force = |x2_delayed: f64| kappa * (k3 * x2_delayed).tanh();
    let rhs = |x: [f64; 2], x2d: f64| -> [f64; 2] {
        [x[1], -x[0] - alpha2 * x[1] + force(x2d)]
    };

    let x0 = cfg.history.eval(0.0);
    let d0 = rhs(x0, if tau == 0.0 { x0[1] } else { cfg.history.eval(-tau)[1] });
    states.push(x0);
    derivs.push(d0);

    // delayed velocity at t (always in the already-computed past)
    let delayed = |states: &Vec<[f64; 2]>, derivs: &Vec<[f64; 2]>, t: f64| -> f64 {
        if t < 0.0 {
            return cfg.history.eval(t)[1];
        }
        let s = t / h;
        let k = s.floor() as usize;
        let k = k.min(states.len().saturating_sub(2));
        let u = s - k as f64;
        if k + 1 >= states.len() {
            // exact node hit at the frontier
            return states[k][1];
        }
        hermite(states[k][1], states[k + 1][1], derivs[k][1] * h, derivs[k + 1][1] * h, u)
    };

    for i in 0..n_steps {
        let t = i as f64 * h;
        let y = states[i];
        if tau == 0.0 {
            // plain RK4 on the ODE (the delayed argument is the stage value)
            let k1 = rhs(y, y[1]);
            let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]];
            let k2 = rhs(y2, y2[1]);
            let y3 = [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]];
            let k3v = rhs(y3, y3[1]);
            let y4 = [y[0] + h * k3v[0], y[1] + h * k3v[1]];
            let k4 = rhs(y4, y4[1]);
            push_step(&mut states, &mut derivs, y, [k1, k2, k3v, k4], h, |x| {
                rhs(x, x[1])
            })?;
        } else {
            let d_beg = delayed(&states, &derivs, t - tau);
            let d_mid = delayed(&states, &derivs, t + 0.5 * h - tau);
            let d_end = delayed(&states, &derivs, t + h - tau);
            let k1 = rhs(y, d_beg);
            let k2 = rhs([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]], d_mid);
            let k3v = rhs([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]], d_mid);
            let k4 = rhs([y[0] + h * k3v[0], y[1] + h * k3v[1]], d_end);
            push_step(&mut states, &mut derivs, y, [k1, k2, k3v, k4], h, |x| {
                rhs(x, d_end)
            })?;
        }
        let last = states.last().unwrap();
        if !last[0].is_finite() || last[0].abs().max(last[1].abs()) > BLOWUP_BOUND {
            return Err(Error::Divergence { at: t + h, bound: BLOWUP_BOUND });
        }
        let _ = n_delay;
    }

    Ok(Trajectory {
        alpha2,
        kappa,
        k3,
        tau,
        step: h,
        states,
        derivs,
        history: cfg.history.clone(),
        transient: cfg.transient,
    })
}

fn push_step<F>(
    states: &mut Vec<[f64; 2]>,
    derivs: &mut Vec<[f64; 2]>,
    y: [f64; 2],
    k: [[f64; 2]; 4],
    h: f64,
    rhs_at_end: F,
) -> Result<()>
where
    F: Fn([f64; 2]) -> [f64; 2],
{
    let next = [
        y[0] + h / 6.0 * (k[0][0] + 2.0 * k[1][0] + 2.0 * k[2][0] + k[3][0]),
        y[1] + h / 6.0 * (k[0][1] + 2.0 * k[1][1] + 2.0 * k[2][1] + k[3][1]),
    ];
    states.push(next);
    derivs.push(rhs_at_end(next));
    Ok(())
}
