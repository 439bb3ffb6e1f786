//! Adaptive Simpson quadrature for complex-valued integrands.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut worst = 0.0f64;
    let v = adapt(&f, a, b, fa, fm, fb, whole, tol, 40, &mut worst);
    match v {
        Some(x) => Ok(x),
        None => Err(Error::QuadratureNonConvergence { tol, err: worst }),
    }
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + 4.0 * fm + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
    worst: &mut f64,
) -> Option<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = (left + right - whole).norm() / 15.0;
    if err <= tol || (b - a) < f64::EPSILON * 16.0 {
        if depth == 0 && err > tol {
            *worst = worst.max(err);
            return None;
        }
        return Some(left + right + (left + right - whole) / 15.0);
    }
    if depth == 0 {
        *worst = worst.max(err);
        return None;
    }
    let l = adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, worst)?;
    let r = adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, worst)?;
    Some(l + r)
}
