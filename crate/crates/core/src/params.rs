use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Optional potential term `V(u)`, with `n·U = cos u` for equivariant maps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Potential {
    /// Pure Skyrme model.
    #[default]
    None,
    /// `V = λ² (1 - cos u)`
    V1,
    /// `V = λ² (1 - cos u)²`
    V2,
}

/// Physical constants of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    alpha: f64,
    potential: Potential,
    lambda_pot: f64,
}

impl Params {
    pub fn new(alpha: f64, potential: Potential, lambda_pot: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        if !(lambda_pot >= 0.0 && lambda_pot.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda_pot must be non-negative and finite, got {lambda_pot}"
            )));
        }
        Ok(Params {
            alpha,
            potential,
            lambda_pot,
        })
    }

    /// Skyrme coupling only, no potential.
    pub fn skyrme(alpha: f64) -> Result<Self> {
        Self::new(alpha, Potential::None, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn potential(&self) -> Potential {
        self.potential
    }

    /// The potential coupling; zero whenever the potential is switched off.
    pub fn lambda_pot(&self) -> f64 {
        match self.potential {
            Potential::None => 0.0,
            _ => self.lambda_pot,
        }
    }

    pub fn has_potential(&self) -> bool {
        self.potential != Potential::None
    }

    /// Same coupling with the potential removed.
    pub fn without_potential(&self) -> Params {
        Params {
            alpha: self.alpha,
            potential: Potential::None,
            lambda_pot: 0.0,
        }
    }

    /// Potential energy density `V(u)`.
    pub fn potential_energy(&self, u: f64) -> f64 {
        let l2 = self.lambda_pot * self.lambda_pot;
        match self.potential {
            Potential::None => 0.0,
            Potential::V1 => l2 * (1.0 - u.cos()),
            Potential::V2 => l2 * (1.0 - u.cos()).powi(2),
        }
    }

    /// `sup_u V(u)`.
    pub fn potential_bound(&self) -> f64 {
        let l2 = self.lambda_pot * self.lambda_pot;
        match self.potential {
            Potential::None => 0.0,
            Potential::V1 => 2.0 * l2,
            Potential::V2 => 4.0 * l2,
        }
    }
}
