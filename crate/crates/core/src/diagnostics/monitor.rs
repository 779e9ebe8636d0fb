use crate::error::Result;
use crate::grid::RadialGrid;
use crate::integrator::Observer;
use crate::params::Params;
use crate::state::FieldState;

use super::cone::{slice_energy, ConeSpec, FluxLedger};
use super::decay::{decay_with_energy, DecayReport};
use super::densities::{densities, Densities};
use super::null::null_quantity_d;

/// Worst cases of the pointwise inequalities on one state.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointwiseCheck {
    /// `min e`.
    pub min_energy: f64,
    /// `max (|m| - e) / max(e, tiny)`; non-positive when `|m| <= e` holds.
    pub momentum_excess: f64,
    /// `max (V - sup V)`; non-positive when the potential bound holds.
    pub potential_excess: f64,
}

impl PointwiseCheck {
    pub fn of(dens: &Densities, params: &Params) -> Self {
        let bound = params.potential_bound();
        let mut chk = PointwiseCheck {
            min_energy: f64::INFINITY,
            momentum_excess: f64::NEG_INFINITY,
            potential_excess: f64::NEG_INFINITY,
        };
        for c in &dens.cells {
            chk.min_energy = chk.min_energy.min(c.e);
            chk.momentum_excess = chk
                .momentum_excess
                .max((c.m.abs() - c.e) / c.e.max(f64::MIN_POSITIVE));
            chk.potential_excess = chk.potential_excess.max(c.pot - bound);
        }
        chk
    }

    /// True when `e >= 0`, `|m| <= e` and `V <= sup V` hold up to round-off.
    pub fn holds(&self) -> bool {
        self.min_energy >= 0.0 && self.momentum_excess <= 4.0 * f64::EPSILON && self.potential_excess <= 1e-14
    }
}

/// Per-observation diagnostics of the whole slice.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceRecord {
    pub t: f64,
    pub decay: DecayReport,
    pub null_max_ratio: f64,
    pub null_min_slack: f64,
    pub pointwise: PointwiseCheck,
}

/// Observer that feeds every configured cone ledger and records slice
/// diagnostics, computing the densities once per observation.
#[derive(Debug)]
pub struct Monitor {
    pub ledgers: Vec<FluxLedger>,
    pub slices: Vec<SliceRecord>,
    pub record_slices: bool,
    errors: Vec<String>,
}

impl Monitor {
    pub fn new(cones: &[ConeSpec]) -> Self {
        Monitor {
            ledgers: cones.iter().copied().map(FluxLedger::new).collect(),
            slices: Vec::new(),
            record_slices: true,
            errors: Vec::new(),
        }
    }

    /// Ledger only, no per-slice decay and null diagnostics.
    pub fn ledgers_only(cones: &[ConeSpec]) -> Self {
        Monitor { record_slices: false, ..Monitor::new(cones) }
    }

    /// Errors raised while recording, if any.
    pub fn errors(&self) -> &[String] {
        &self.errors
    }

    fn record(&mut self, state: &FieldState, grid: &RadialGrid, params: &Params) -> Result<()> {
        let dens = densities(state, grid, params);
        for ledger in &mut self.ledgers {
            ledger.record(&dens, grid)?;
        }
        if self.record_slices {
            let energy = slice_energy(&dens, grid, grid.radius())?;
            let decay = decay_with_energy(state, grid, params.alpha(), energy);
            let null = null_quantity_d(state, grid, params);
            self.slices.push(SliceRecord {
                t: state.t,
                decay,
                null_max_ratio: null.max_ratio,
                null_min_slack: null.min_slack,
                pointwise: PointwiseCheck::of(&dens, params),
            });
        }
        Ok(())
    }
}

impl Observer for Monitor {
    fn observe(&mut self, state: &FieldState, grid: &RadialGrid, params: &Params) {
        if let Err(e) = self.record(state, grid, params) {
            self.errors.push(format!("t = {}: {e}", state.t));
        }
    }
}
