//! Radial evolver and verification engine for the 2+1 dimensional
//! equivariant (co-rotation index 1) Skyrme equation
//!
//! ```text
//! w (u_tt - u_rr) - (1 - β) u_r / r + sin 2u / (2 r²) [α² (u_t² - u_r²) + 1] = 0,
//! β = α² sin²u / r²,  w = 1 + β,
//! ```
//!
//! on a staggered radial grid, together with the conserved energy, the
//! energy/flux ledger on backward light cones, the multiplier identities and
//! the non-concentration diagnostics built on top of them.
//!
//! Module map:
//! - [`params`], [`grid`], [`state`], [`jet`]: parameters, grid, field
//!   states with the r = 0 parity rule, pointwise jets.
//! - [`dynamics`]: the equation in residual form and in explicit form
//!   `u_tt = F(u, u_t, u_r, u_rr)`.
//! - [`integrator`]: RK4 method of lines, CFL control, observers, blow-up
//!   flags.
//! - [`initdata`]: initial data families and the `r,u,v` CSV format.
//! - [`diagnostics`]: densities, slice/annulus energies, mantle flux,
//!   cone averages, decay ratios and the null quantity `D`.
//! - [`identities`]: the multiplier identities as exact jet oracles and as
//!   discrete residuals on numerical trajectories.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod identities;
pub mod initdata;
pub mod integrator;
pub mod jet;
pub mod params;
pub mod real;
pub mod state;
pub mod sum;

pub use crate::error::{Error, Result};
pub use crate::grid::{make_grid, RadialGrid};
pub use crate::jet::Jet;
pub use crate::params::{Params, Potential};
pub use crate::state::{spatial_derivs, FieldState, SpatialDerivs};
