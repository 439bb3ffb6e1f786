use thiserror::Error;

/// Errors surfaced by the analysis routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested delay sits on (or numerically at) a critical delay, so a
    /// clean stable/unstable verdict does not exist.
    #[error("delay {tau} is within tolerance of the critical delay {critical}")]
    Marginal { tau: f64, critical: f64 },

    /// A characteristic root sits too close to the counting contour.
    #[error("characteristic root within {distance:.3e} of the counting contour")]
    NearContourRoot { distance: f64 },

    #[error("root tracking stalled at tau = {at}: {reason}")]
    TrackingFailed { at: f64, reason: String },

    #[error("no sign change of tau_k^+ - tau_l^- inside the bracket [{lo}, {hi}]")]
    NoIntersection { lo: f64, hi: f64 },

    #[error("quadrature did not reach tolerance {tol:.1e} (estimated error {err:.3e})")]
    QuadratureNonConvergence { tol: f64, err: f64 },

    /// Two computation paths that must agree (or a sign contract that must
    /// hold) failed; the message names the quantity and the residual.
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    /// A Hopf value coincides with one on the opposite branch; the point is a
    /// double-Hopf point and must be analyzed as such.
    #[error("tau = {tau} is a double-Hopf coincidence (matches the {other} branch); use the double-Hopf analysis")]
    DoubleHopfCoincidence { tau: f64, other: &'static str },

    #[error("wrong sign of mu for this branch: mu = {mu} but the cycle exists for {expected}")]
    WrongMuSign { mu: f64, expected: &'static str },

    #[error("simulation diverged at t = {at} (|state| > {bound:.1e})")]
    Divergence { at: f64, bound: f64 },

    #[error("trajectory not settled: {0}")]
    NotSettled(String),

    #[error("sigma = ({0}, {1}) lies on a bifurcation boundary of the amplitude system")]
    OnBoundary(f64, f64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(value: f64, name: &str) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be strictly positive and finite, got {value}"
        )));
    }
    Ok(())
}

pub(crate) fn require_nonnegative(value: f64, name: &str) -> Result<()> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be nonnegative and finite, got {value}"
        )));
    }
    Ok(())
}
