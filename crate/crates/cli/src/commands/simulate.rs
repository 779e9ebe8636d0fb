//! `simulate`: one run with every cone ledger and slice diagnostic.

use std::collections::HashMap;
use std::path::Path;

use serde::Serialize;
use skyrme_core::diagnostics::{ConeSpec, SliceRecord, C_BOUND};
use skyrme_core::integrator::{RunStatus, RunSummary};

use super::{cone_averages, run_monitored, Trajectory};
use crate::output::{write_json, Cell, Header, Table};
use crate::{CliError, Loaded};

pub const TIMESERIES_HEADER: [&str; 18] = [
    "cone", "t", "T", "E", "E_annulus", "F_accum", "avg_e", "avg_ut2", "avg_ur2", "avg_sinur", "avg_sinut",
    "avg_csin", "ratio1", "ratio2", "d_ratio", "d_slack", "min_e", "m_excess",
];

#[derive(Debug, Serialize)]
struct ConeReport {
    t_apex: f64,
    lambda_frac: f64,
    rows: usize,
    initial_energy: f64,
    max_imbalance: f64,
    /// `max |E + F - E(0)| / E(0)`, or the absolute imbalance when `E(0) = 0`.
    relative_drift: f64,
    /// `min F / E(0)`, or `min F` when `E(0) = 0`.
    min_flux_fraction: f64,
    drift_within_tolerance: bool,
}

#[derive(Debug, Serialize)]
struct Bounds {
    c_bound: f64,
    max_d_ratio: f64,
    min_d_slack: f64,
    max_ratio1: f64,
    max_ratio2: f64,
    min_energy_density: f64,
    max_momentum_excess: f64,
    max_potential_excess: f64,
    pointwise_holds: bool,
}

#[derive(Debug, Serialize)]
struct Summary {
    #[serde(flatten)]
    header: Header,
    status: RunStatus,
    run: RunSummary,
    initial_energy: f64,
    final_energy: f64,
    energy_drift_tolerance: f64,
    cones: Vec<ConeReport>,
    bounds: Bounds,
    timeseries: Option<String>,
}

/// Configured cones, or the cone of the whole grid at `t = 0`.
pub fn cones_or_default(loaded: &Loaded) -> Result<Vec<ConeSpec>, CliError> {
    let cones = loaded.config.cone_specs()?;
    if !cones.is_empty() {
        return Ok(cones);
    }
    Ok(vec![ConeSpec::new(loaded.config.grid.radius, 0.5)?])
}

pub fn run(loaded: &Loaded, out: Option<&Path>) -> Result<(), CliError> {
    let cones = cones_or_default(loaded)?;
    let traj = run_monitored(loaded, &cones, true)?;
    let output = &loaded.config.output;
    let ts_path = loaded.output_path(out, &output.timeseries);
    if let Some(path) = &ts_path {
        write_timeseries(path, &traj)?;
    }
    if let Some(path) = loaded.output_path(out, &output.summary) {
        let summary = summarize(loaded, &traj, ts_path.map(|p| p.display().to_string()));
        write_json(&path, &summary)?;
    }
    traj.finite()
}

fn slices_by_time(traj: &Trajectory) -> HashMap<u64, &SliceRecord> {
    traj.monitor.slices.iter().map(|s| (s.t.to_bits(), s)).collect()
}

fn write_timeseries(path: &Path, traj: &Trajectory) -> Result<(), CliError> {
    let slices = slices_by_time(traj);
    let mut table = Table::create(path, &TIMESERIES_HEADER)?;
    for (k, ledger) in traj.monitor.ledgers.iter().enumerate() {
        let averages = cone_averages(ledger);
        for row in &ledger.rows {
            let key = row.time_to_apex.to_bits();
            let avg = |i: usize| averages.as_ref().and_then(|a| a[i].get(&key).copied());
            let slice = slices.get(&row.t.to_bits());
            let from_slice = |f: fn(&SliceRecord) -> f64| slice.map(|s| f(s));
            table.row(&[
                Cell::Int(k),
                Cell::Num(row.t),
                Cell::Num(row.time_to_apex),
                Cell::Num(row.energy),
                Cell::Opt((!row.annulus.empty).then_some(row.annulus.energy)),
                Cell::Num(row.flux),
                Cell::Opt(avg(0)),
                Cell::Opt(avg(1)),
                Cell::Opt(avg(2)),
                Cell::Opt(avg(3)),
                Cell::Opt(avg(4)),
                Cell::Opt(avg(5)),
                Cell::Opt(from_slice(|s| s.decay.cauchy_schwarz)),
                Cell::Opt(from_slice(|s| s.decay.sqrt_r)),
                Cell::Opt(from_slice(|s| s.null_max_ratio)),
                Cell::Opt(from_slice(|s| s.null_min_slack)),
                Cell::Opt(from_slice(|s| s.pointwise.min_energy)),
                Cell::Opt(from_slice(|s| s.pointwise.momentum_excess)),
            ])?;
        }
    }
    table.finish()
}

fn cone_report(ledger: &skyrme_core::diagnostics::FluxLedger, tolerance: f64) -> ConeReport {
    let e0 = ledger.rows.first().map_or(0.0, |r| r.energy);
    let scale = if e0 > 0.0 { e0 } else { 1.0 };
    let max_imbalance = ledger.max_imbalance();
    let min_flux = ledger.rows.iter().map(|r| r.flux).fold(0.0, f64::min);
    ConeReport {
        t_apex: ledger.cone.t_apex(),
        lambda_frac: ledger.cone.lambda_frac(),
        rows: ledger.rows.len(),
        initial_energy: e0,
        max_imbalance,
        relative_drift: max_imbalance / scale,
        min_flux_fraction: min_flux / scale,
        drift_within_tolerance: max_imbalance / scale < tolerance,
    }
}

fn bounds(slices: &[SliceRecord]) -> Bounds {
    let max = |f: fn(&SliceRecord) -> f64| slices.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let min = |f: fn(&SliceRecord) -> f64| slices.iter().map(f).fold(f64::INFINITY, f64::min);
    Bounds {
        c_bound: C_BOUND,
        max_d_ratio: max(|s| s.null_max_ratio),
        min_d_slack: min(|s| s.null_min_slack),
        max_ratio1: max(|s| s.decay.cauchy_schwarz),
        max_ratio2: max(|s| s.decay.sqrt_r),
        min_energy_density: min(|s| s.pointwise.min_energy),
        max_momentum_excess: max(|s| s.pointwise.momentum_excess),
        max_potential_excess: max(|s| s.pointwise.potential_excess),
        pointwise_holds: slices.iter().all(|s| s.pointwise.holds()),
    }
}

fn summarize(loaded: &Loaded, traj: &Trajectory, timeseries: Option<String>) -> Summary {
    let tolerance = loaded.config.tolerances.energy_drift;
    let slices = &traj.monitor.slices;
    Summary {
        header: Header::new("simulate", loaded),
        status: traj.summary.status,
        run: traj.summary,
        initial_energy: slices.first().map_or(f64::NAN, |s| s.decay.energy),
        final_energy: slices.last().map_or(f64::NAN, |s| s.decay.energy),
        energy_drift_tolerance: tolerance,
        cones: traj.monitor.ledgers.iter().map(|l| cone_report(l, tolerance)).collect(),
        bounds: bounds(slices),
        timeseries,
    }
}
