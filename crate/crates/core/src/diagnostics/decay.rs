use std::f64::consts::PI;

use crate::grid::RadialGrid;
use crate::params::Params;
use crate::sum::argmax_by;
use crate::state::FieldState;

use super::cone::slice_energy;
use super::densities::densities;

/// `I(z) = ∫_0^z |sin w| dw`: odd in `z`, `1 - cos z` on `[0, π]`, and
/// grows by 2 per half-period.
pub fn i_functional(z: f64) -> f64 {
    let a = z.abs();
    let k = (a / PI).floor();
    let rem = a - k * PI;
    (2.0 * k + 1.0 - rem.cos()).copysign(z)
}

/// Decay ratios of one slice.
///
/// `cauchy_schwarz = max_j α |I(u_j)| / (r_j √E)` is at most 1 for exact
/// solutions, `E` being the energy of `[0, R]`. `sqrt_r = max_j |u_j| / √r_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayReport {
    pub energy: f64,
    pub cauchy_schwarz: f64,
    pub cauchy_schwarz_radius: f64,
    pub sqrt_r: f64,
}

pub fn decay_report(state: &FieldState, grid: &RadialGrid, params: &Params) -> DecayReport {
    let dens = densities(state, grid, params);
    let energy = slice_energy(&dens, grid, grid.radius()).expect("full disk");
    decay_with_energy(state, grid, params.alpha(), energy)
}

pub(crate) fn decay_with_energy(state: &FieldState, grid: &RadialGrid, alpha: f64, energy: f64) -> DecayReport {
    let n = state.len();
    let sqrt_r = argmax_by(n, |j| state.u[j].abs() / grid.center(j).sqrt()).map_or(0.0, |m| m.1);
    if energy <= 0.0 {
        return DecayReport {
            energy,
            cauchy_schwarz: 0.0,
            cauchy_schwarz_radius: 0.0,
            sqrt_r,
        };
    }
    let root = energy.sqrt();
    let (j, cs) = argmax_by(n, |j| alpha * i_functional(state.u[j]).abs() / (grid.center(j) * root))
        .unwrap_or((0, 0.0));
    DecayReport {
        energy,
        cauchy_schwarz: cs,
        cauchy_schwarz_radius: grid.center(j),
        sqrt_r,
    }
}
