//! The field equation.
//!
//! Residual form (zero on solutions):
//!
//! ```text
//! R[u] = w (u_tt - u_rr) - (1 - β) u_r / r + sin 2u / (2r²) [α² (u_t² - u_r²) + 1] + V'(u)
//! ```
//!
//! and, dividing by the leading coefficient `w >= 1`, the explicit form
//!
//! ```text
//! u_tt = u_rr + (1 - β)/w · u_r / r - sin 2u / (2r² w) [α² (u_t² - u_r²) + 1] - V'(u)/w.
//! ```
//!
//! `V'` is the variational derivative of the optional potential; with it the
//! energy density gains `+V(u)` and stays exactly conserved.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::jet::Jet;
use crate::params::{Params, Potential};
use crate::real::Real;
use crate::state::{derivs_at, FieldState};

/// Cells per rayon task in the stencil sweep.
pub(crate) const SWEEP_CHUNK: usize = 2048;

/// Pointwise coefficients `β = α² sin²u / r²` and `w = 1 + β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeffBundle {
    pub w: f64,
    pub beta: f64,
}

#[inline]
pub fn coeffs(u: f64, r: f64, alpha: f64) -> CoeffBundle {
    let s = u.sin() * alpha / r;
    let beta = s * s;
    CoeffBundle { w: 1.0 + beta, beta }
}

/// `w = 1 + α² sin²u / r²`.
pub fn coeff_w(u: f64, r: f64, params: &Params) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    Ok(coeffs(u, r, params.alpha()).w)
}

/// `dV/du`.
pub fn potential_force(u: f64, params: &Params) -> f64 {
    potential_force_generic(u, params)
}

pub(crate) fn potential_force_generic<T: Real>(u: T, params: &Params) -> T {
    let l2 = T::lift(params.lambda_pot() * params.lambda_pot());
    match params.potential() {
        Potential::None => T::lift(0.0),
        Potential::V1 => l2 * u.sin(),
        Potential::V2 => T::lift(2.0) * l2 * (T::lift(1.0) - u.cos()) * u.sin(),
    }
}

/// Residual of the field equation on a jet; vanishes on classical solutions.
pub fn pde_residual(jet: &Jet, params: &Params) -> f64 {
    residual_generic(jet, params)
}

pub(crate) fn residual_generic<T: Real>(jet: &Jet<T>, params: &Params) -> T {
    let one = T::lift(1.0);
    let a2 = T::lift(params.alpha() * params.alpha());
    let r = jet.r;
    let r2 = r * r;
    let s = jet.u.sin();
    let beta = a2 * s * s / r2;
    let w = one + beta;
    let sin2u = (T::lift(2.0) * jet.u).sin();
    w * (jet.utt - jet.urr) - (one - beta) * jet.ur / r
        + sin2u / (T::lift(2.0) * r2) * (a2 * (jet.ut.square() - jet.ur.square()) + one)
        + potential_force_generic(jet.u, params)
}

/// `u_tt` from the explicit form at one point.
#[inline]
pub fn accel_point(u: f64, ut: f64, ur: f64, urr: f64, r: f64, params: &Params) -> f64 {
    let alpha = params.alpha();
    let CoeffBundle { w, beta } = coeffs(u, r, alpha);
    let nonlin = (2.0 * u).sin() / (2.0 * r * r) * (alpha * alpha * (ut * ut - ur * ur) + 1.0);
    urr + (1.0 - beta) / w * ur / r - nonlin / w - potential_force(u, params) / w
}

/// Parallel stencil sweep writing `u_tt` for every cell into `out`.
/// Cells are independent, so the result does not depend on the thread count.
pub(crate) fn accel_into(
    u: &[f64],
    v: &[f64],
    outer: [f64; 2],
    grid: &RadialGrid,
    params: &Params,
    out: &mut [f64],
) {
    let dr = grid.dr();
    out.par_chunks_mut(SWEEP_CHUNK)
        .enumerate()
        .for_each(|(c, chunk)| {
            let base = c * SWEEP_CHUNK;
            for (k, slot) in chunk.iter_mut().enumerate() {
                let j = base + k;
                let (ur, urr) = derivs_at(u, outer, j, dr);
                *slot = accel_point(u[j], v[j], ur, urr, grid.center(j), params);
            }
        });
}

/// `u_tt` at every cell of `state`.
pub fn semilinear_accel(state: &FieldState, grid: &RadialGrid, params: &Params) -> Result<Vec<f64>> {
    let mut out = vec![0.0; state.len()];
    accel_into(&state.u, &state.v, state.outer, grid, params, &mut out);
    if out.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite { t: state.t });
    }
    Ok(out)
}
