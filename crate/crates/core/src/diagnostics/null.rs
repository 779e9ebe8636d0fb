//! The null quantity
//!
//! ```text
//! D = -(1 - β)(u_t² - u_r²)/2 + sin²u/(2r²) - sin 2u · u_r / r
//! ```
//!
//! which satisfies `∂_t(r m) - ∂_r(r e) = D` on solutions, and its bound
//! `D² <= C (e + m)(e - m)`.

use rayon::prelude::*;

use crate::dynamics::SWEEP_CHUNK;
use crate::grid::RadialGrid;
use crate::params::Params;
use crate::state::{derivs_at, FieldState};

/// Smallest `C` with `D² <= C (e + m)(e - m)` for all arguments.
///
/// Random search over `u ∈ [-π, π]`, `u_t, u_r ∈ [-10, 10]`, `r ∈ (0, 10]`
/// followed by local refinement drives the ratio to 9 from below. In the
/// limit `sin u / r → 0`, with `X = (u_t + u_r) r / sin u = tan a` and
/// `Y = (u_t - u_r) r / sin u = tan b`, the ratio becomes
/// `(cos(a + b) - 2 sin(a - b))²`, whose supremum is 9.
pub const C_BOUND: f64 = 9.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NullPoint {
    pub d: f64,
    pub e_plus_m: f64,
    pub e_minus_m: f64,
}

impl NullPoint {
    /// `D² / ((e+m)(e-m))`, zero where both sides vanish.
    pub fn ratio(&self) -> f64 {
        let prod = self.e_plus_m * self.e_minus_m;
        if prod > 0.0 {
            self.d * self.d / prod
        } else if self.d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// `C (e+m)(e-m) - D²`.
    pub fn slack(&self, c: f64) -> f64 {
        c * self.e_plus_m * self.e_minus_m - self.d * self.d
    }
}

/// `D` and the potential-free `e ± m` at one point.
pub fn null_point(u: f64, ut: f64, ur: f64, r: f64, alpha: f64) -> NullPoint {
    let s = u.sin() / r;
    let c_sin = 0.5 * s * s;
    let beta = alpha * alpha * s * s;
    let w = 1.0 + beta;
    NullPoint {
        d: -(1.0 - beta) * (ut * ut - ur * ur) * 0.5 + c_sin - (2.0 * u).sin() * ur / r,
        e_plus_m: 0.5 * w * (ut + ur) * (ut + ur) + c_sin,
        e_minus_m: 0.5 * w * (ut - ur) * (ut - ur) + c_sin,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NullReport {
    pub points: Vec<NullPoint>,
    /// Largest `D² / ((e+m)(e-m))` over the cells.
    pub max_ratio: f64,
    /// Smallest `C_BOUND (e+m)(e-m) - D²` over the cells.
    pub min_slack: f64,
}

impl NullReport {
    pub fn d(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.d).collect()
    }
}

pub fn null_quantity_d(state: &FieldState, grid: &RadialGrid, params: &Params) -> NullReport {
    let dr = grid.dr();
    let alpha = params.alpha();
    let points: Vec<NullPoint> = (0..state.len())
        .into_par_iter()
        .with_min_len(SWEEP_CHUNK)
        .map(|j| {
            let (ur, _) = derivs_at(&state.u, state.outer, j, dr);
            null_point(state.u[j], state.v[j], ur, grid.center(j), alpha)
        })
        .collect();
    let max_ratio = points.iter().map(NullPoint::ratio).fold(0.0, f64::max);
    let min_slack = points.iter().map(|p| p.slack(C_BOUND)).fold(f64::INFINITY, f64::min);
    NullReport { points, max_ratio, min_slack }
}
