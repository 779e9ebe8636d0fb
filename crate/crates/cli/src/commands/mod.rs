//! One module per subcommand.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use skyrme_core::diagnostics::{ConeSpec, DensityKind, FluxLedger, Monitor};
use skyrme_core::initdata::build_initial;
use skyrme_core::integrator::{evolve, RunStatus, RunSummary};
use skyrme_core::{Error, Params};

use crate::{CliError, Loaded};

pub mod concentration;
pub mod converge;
pub mod identity;
pub mod init_dump;
pub mod simulate;

/// Densities whose cone averages are reported.
pub(crate) const AVERAGED: [DensityKind; 7] = [
    DensityKind::Energy,
    DensityKind::Ut2,
    DensityKind::Ur2,
    DensityKind::SinUr,
    DensityKind::SinUt,
    DensityKind::CSin,
    DensityKind::Pot,
];

pub(crate) struct Trajectory {
    pub params: Params,
    pub summary: RunSummary,
    pub monitor: Monitor,
}

impl Trajectory {
    /// Fails on a non-finite state; a blow-up flag is a valid outcome.
    pub fn finite(&self) -> Result<(), CliError> {
        match self.summary.status {
            RunStatus::NonFinite => Err(CliError::NonFinite(self.summary.t_final)),
            _ => Ok(()),
        }
    }
}

pub(crate) fn run_monitored(loaded: &Loaded, cones: &[ConeSpec], slices: bool) -> Result<Trajectory, CliError> {
    let config = &loaded.config;
    let grid = config.grid()?;
    let params = config.params()?;
    let mut state = build_initial(&loaded.profile_spec(), &grid)?;
    let mut monitor = if slices { Monitor::new(cones) } else { Monitor::ledgers_only(cones) };
    let summary = evolve(&mut state, &grid, &params, &config.run.run_config(), &mut [&mut monitor])?;
    if let Some(e) = monitor.errors().first() {
        return Err(Error::InvalidParameter(format!("monitor: {e}")).into());
    }
    Ok(Trajectory { params, summary, monitor })
}

/// Cone averages keyed by the bits of `T`, when the ledger reaches the apex.
pub(crate) fn cone_averages(ledger: &FluxLedger) -> Option<Vec<HashMap<u64, f64>>> {
    let nearest = ledger.rows.iter().map(|r| r.time_to_apex).fold(f64::INFINITY, f64::min);
    if ledger.rows.len() < 3 || nearest > ledger.spacing() * (1.0 + 1e-9) {
        return None;
    }
    Some(
        AVERAGED
            .iter()
            .map(|&kind| {
                ledger
                    .cone_average_series(kind)
                    .into_iter()
                    .map(|(big, avg)| (big.to_bits(), avg))
                    .collect()
            })
            .collect(),
    )
}

/// Target file for an output, or a config error naming the missing entry.
pub(crate) fn required(loaded: &Loaded, out: Option<&Path>, key: &str, name: &str) -> Result<PathBuf, CliError> {
    loaded
        .output_path(out, name)
        .ok_or_else(|| CliError::Config(format!("output.{key} must be set for this command")))
}

/// Largest `s_j - s_i` over `i < j`; zero for non-increasing sequences.
pub(crate) fn worst_rise(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut low = f64::INFINITY;
    let mut rise: f64 = 0.0;
    for v in values {
        rise = rise.max(v - low);
        low = low.min(v);
    }
    rise
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_rise_examples() {
        assert_eq!(worst_rise([3.0, 2.0, 1.0]), 0.0);
        assert_eq!(worst_rise([1.0, 3.0, 0.0, 2.5]), 2.5);
        assert_eq!(worst_rise(std::iter::empty()), 0.0);
    }
}
