//! The bilinear pairing between adjoint and direct eigenfunctions of the
//! rescaled linearization, evaluated concretely for this model:
//!
//! ```text
//! <psi, phi> = psi(0) phi(0) + tau0 * int_{-1}^{0} psi(xi + 1) A2 phi(xi) dxi,
//! ```
//!
//! with `A2 = [[0, 0], [0, alpha3]]`. `psi` is row-valued on [0, 1], `phi`
//! column-valued on [-1, 0].

use crate::error::Result;
use crate::quad;
use num_complex::Complex64;

/// Row-valued adjoint function type: `s in [0, 1] -> (psi1, psi2)`.
pub type RowFn<'a> = &'a dyn Fn(f64) -> [Complex64; 2];
/// Column-valued function type: `theta in [-1, 0] -> (phi1, phi2)`.
pub type ColFn<'a> = &'a dyn Fn(f64) -> [Complex64; 2];

/// Evaluate the pairing by adaptive quadrature to 1e-12.
pub fn bilinear_form(psi: RowFn, phi: ColFn, alpha3: f64, tau0: f64) -> Result<Complex64> {
    let p0 = psi(0.0);
    let q0 = phi(0.0);
    let boundary = p0[0] * q0[0] + p0[1] * q0[1];
    // Only the (2,2) entry of A2 is nonzero.
    let integral = quad::integrate(
        |xi| {
            let p = psi(xi + 1.0);
            let q = phi(xi);
            p[1] * alpha3 * q[1]
        },
        -1.0,
        0.0,
        1e-12,
    )?;
    Ok(boundary + tau0 * integral)
}

/// Direct eigenfunction `q(theta) = (1, i w0)^T e^{i tau0 w0 theta}` of the
/// rescaled linearization at the crossing frequency `w0`.
pub fn mode_eigenfunction(omega0: f64, tau0: f64) -> impl Fn(f64) -> [Complex64; 2] {
    move |theta: f64| {
        let phase = (Complex64::i() * tau0 * omega0 * theta).exp();
        [phase, Complex64::i() * omega0 * phase]
    }
}

/// Adjoint eigenfunction `q*(s) = d (1, -i w0) e^{-i tau0 w0 s}` with the
/// caller-supplied normalization constant `d`.
pub fn adjoint_eigenfunction(
    omega0: f64,
    tau0: f64,
    d: Complex64,
) -> impl Fn(f64) -> [Complex64; 2] {
    move |s: f64| {
        let phase = (-Complex64::i() * tau0 * omega0 * s).exp();
        [d * phase, -d * Complex64::i() * omega0 * phase]
    }
}

/// Normalization constant `d = (1 + w0^2 + tau0 alpha3 w0^2 e^{-i tau0 w0})^{-1}`
/// making `<q*, q> = 1`.
pub fn normalization_d(omega0: f64, tau0: f64, alpha3: f64) -> Complex64 {
    let w2 = omega0 * omega0;
    (Complex64::new(1.0 + w2, 0.0)
        + tau0 * alpha3 * w2 * (-Complex64::i() * tau0 * omega0).exp())
    .inv()
}
