//! Field states and the discrete radial derivatives.
//!
//! Ghost cells: the inner ghosts come from the odd extension
//! `u(-r) = -u(r)`, which encodes `u(t, 0) = 0`; the outer ghosts hold the
//! values of the initial data just outside `r = R` (frozen Dirichlet).

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub t: f64,
    /// `u` at the cell centers.
    pub u: Vec<f64>,
    /// `u_t` at the cell centers.
    pub v: Vec<f64>,
    /// Frozen values of `u` at `r_N` and `r_{N+1}`.
    pub outer: [f64; 2],
}

impl FieldState {
    pub fn new(t: f64, u: Vec<f64>, v: Vec<f64>, outer: [f64; 2], grid: &RadialGrid) -> Result<Self> {
        let n = grid.cells();
        if u.len() != n || v.len() != n {
            return Err(Error::InvalidParameter(format!(
                "state has {} / {} values for a grid of {n} cells",
                u.len(),
                v.len()
            )));
        }
        let state = FieldState { t, u, v, outer };
        if !state.is_finite() {
            return Err(Error::NonFinite { t });
        }
        Ok(state)
    }

    /// The rest state `u ≡ 0, u_t ≡ 0`.
    pub fn zero(grid: &RadialGrid) -> Self {
        FieldState {
            t: 0.0,
            u: vec![0.0; grid.cells()],
            v: vec![0.0; grid.cells()],
            outer: [0.0; 2],
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.u.iter().chain(&self.v).chain(&self.outer).all(|x| x.is_finite())
    }

    /// `u` with two ghost cells on each side: index `k` holds `u_{k-2}`.
    pub fn ghosted(&self) -> Vec<f64> {
        ghost_extend(&self.u, self.outer)
    }

    /// Value of `u` at cell index `j ∈ [-2, N+1]`.
    #[inline]
    pub fn u_at(&self, j: isize) -> f64 {
        u_at(&self.u, self.outer, j)
    }
}

pub(crate) fn ghost_extend(u: &[f64], outer: [f64; 2]) -> Vec<f64> {
    let n = u.len();
    let mut g = Vec::with_capacity(n + 4);
    g.push(-u[1]);
    g.push(-u[0]);
    g.extend_from_slice(u);
    g.extend_from_slice(&outer);
    g
}

#[inline]
pub(crate) fn u_at(u: &[f64], outer: [f64; 2], j: isize) -> f64 {
    let n = u.len() as isize;
    if j < 0 {
        -u[(-1 - j) as usize]
    } else if j >= n {
        outer[(j - n) as usize]
    } else {
        u[j as usize]
    }
}

/// Centered first and second differences at cell `j`.
#[inline]
pub(crate) fn derivs_at(u: &[f64], outer: [f64; 2], j: usize, dr: f64) -> (f64, f64) {
    let j = j as isize;
    let (um, u0, up) = (u_at(u, outer, j - 1), u_at(u, outer, j), u_at(u, outer, j + 1));
    ((up - um) / (2.0 * dr), (up - 2.0 * u0 + um) / (dr * dr))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpatialDerivs {
    pub ur: Vec<f64>,
    pub urr: Vec<f64>,
}

/// Second-order centered `u_r` and `u_rr` at every cell.
pub fn spatial_derivs(state: &FieldState, grid: &RadialGrid) -> SpatialDerivs {
    let dr = grid.dr();
    let (ur, urr) = (0..state.len())
        .map(|j| derivs_at(&state.u, state.outer, j, dr))
        .unzip();
    SpatialDerivs { ur, urr }
}
