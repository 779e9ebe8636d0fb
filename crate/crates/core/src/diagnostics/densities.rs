use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::SWEEP_CHUNK;
use crate::error::Error;
use crate::grid::RadialGrid;
use crate::params::Params;
use crate::state::{derivs_at, FieldState};

/// All densities at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointDensities {
    pub e: f64,
    pub m: f64,
    pub w: f64,
    /// `w u_t² / 2`
    pub c_ut: f64,
    /// `w u_r² / 2`
    pub c_ur: f64,
    /// `sin²u / (2r²)`
    pub c_sin: f64,
    pub d_ut2: f64,
    pub d_ur2: f64,
    /// `α² sin²u / r² · u_r²`
    pub d_sinur: f64,
    /// `α² sin²u / r² · u_t²`
    pub d_sinut: f64,
    /// `V(u)`, zero without potential.
    pub pot: f64,
    /// `e - m = w (u_t - u_r)²/2 + sin²u/(2r²) + V`, evaluated without cancellation.
    pub e_minus_m: f64,
    /// `e + m`, likewise.
    pub e_plus_m: f64,
}

impl PointDensities {
    pub fn at(u: f64, ut: f64, ur: f64, r: f64, params: &Params) -> Self {
        let alpha = params.alpha();
        let s = u.sin() / r;
        let c_sin = 0.5 * s * s;
        let beta = alpha * alpha * s * s;
        let w = 1.0 + beta;
        let c_ut = 0.5 * w * ut * ut;
        let c_ur = 0.5 * w * ur * ur;
        let pot = params.potential_energy(u);
        PointDensities {
            e: c_ut + c_ur + c_sin + pot,
            m: w * ut * ur,
            w,
            c_ut,
            c_ur,
            c_sin,
            d_ut2: ut * ut,
            d_ur2: ur * ur,
            d_sinur: beta * ur * ur,
            d_sinut: beta * ut * ut,
            pot,
            e_minus_m: 0.5 * w * (ut - ur) * (ut - ur) + c_sin + pot,
            e_plus_m: 0.5 * w * (ut + ur) * (ut + ur) + c_sin + pot,
        }
    }

    pub fn get(&self, kind: DensityKind) -> f64 {
        match kind {
            DensityKind::Energy => self.e,
            DensityKind::Momentum => self.m,
            DensityKind::Ut2 => self.d_ut2,
            DensityKind::Ur2 => self.d_ur2,
            DensityKind::SinUr => self.d_sinur,
            DensityKind::SinUt => self.d_sinut,
            DensityKind::CSin => self.c_sin,
            DensityKind::Pot => self.pot,
        }
    }
}

/// Scalar densities that can be integrated over slices and cones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DensityKind {
    Energy,
    Momentum,
    Ut2,
    Ur2,
    SinUr,
    SinUt,
    CSin,
    Pot,
}

impl DensityKind {
    pub const ALL: [DensityKind; 8] = [
        DensityKind::Energy,
        DensityKind::Momentum,
        DensityKind::Ut2,
        DensityKind::Ur2,
        DensityKind::SinUr,
        DensityKind::SinUt,
        DensityKind::CSin,
        DensityKind::Pot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DensityKind::Energy => "e",
            DensityKind::Momentum => "m",
            DensityKind::Ut2 => "ut2",
            DensityKind::Ur2 => "ur2",
            DensityKind::SinUr => "sinur",
            DensityKind::SinUt => "sinut",
            DensityKind::CSin => "csin",
            DensityKind::Pot => "pot",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        DensityKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownDensity(s.to_owned()))
    }
}

/// Densities at every cell of one state.
#[derive(Clone, Debug, PartialEq)]
pub struct Densities {
    pub t: f64,
    pub cells: Vec<PointDensities>,
}

impl Densities {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn series(&self, kind: DensityKind) -> Vec<f64> {
        self.cells.iter().map(|c| c.get(kind)).collect()
    }
}

pub fn densities(state: &FieldState, grid: &RadialGrid, params: &Params) -> Densities {
    let dr = grid.dr();
    let cells = (0..state.len())
        .into_par_iter()
        .with_min_len(SWEEP_CHUNK)
        .map(|j| {
            let (ur, _) = derivs_at(&state.u, state.outer, j, dr);
            PointDensities::at(state.u[j], state.v[j], ur, grid.center(j), params)
        })
        .collect();
    Densities { t: state.t, cells }
}
