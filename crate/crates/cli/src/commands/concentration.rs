//! `concentration-study`: cone energy, annulus energy and cone averages as
//! the apex is approached.

use std::path::Path;

use serde::Serialize;
use skyrme_core::diagnostics::{DensityKind, FluxLedger};

use super::{cone_averages, run_monitored, worst_rise, AVERAGED};
use crate::output::{write_json, Cell, Header, Table};
use crate::{CliError, Loaded};

pub const CONCENTRATION_HEADER: [&str; 12] = [
    "cone", "t", "T", "E", "E_annulus", "avg_e", "avg_ut2", "avg_ur2", "avg_sinur", "avg_sinut", "avg_csin",
    "avg_pot",
];

#[derive(Debug, Serialize)]
struct SeriesVerdict {
    name: String,
    points: usize,
    /// Largest increase of the series toward the apex.
    max_rise: f64,
    /// `max_rise / E(0)`, or `max_rise` when `E(0) = 0`.
    relative_rise: f64,
    non_increasing: bool,
}

#[derive(Debug, Serialize)]
struct PotentialBound {
    /// Largest `avg_pot(T) / (sup V · T² / 6)`.
    max_ratio: f64,
    holds: bool,
}

#[derive(Debug, Serialize)]
struct ConeStudy {
    t_apex: f64,
    lambda_frac: f64,
    initial_energy: f64,
    series: Vec<SeriesVerdict>,
    potential_bound: Option<PotentialBound>,
}

#[derive(Debug, Serialize)]
struct Report {
    #[serde(flatten)]
    header: Header,
    trend_tolerance: f64,
    cones: Vec<ConeStudy>,
    all_non_increasing: bool,
    concentration: Option<String>,
}

pub fn run(loaded: &Loaded, out: Option<&Path>) -> Result<(), CliError> {
    let config = &loaded.config;
    let cones = config.cone_specs()?;
    if cones.is_empty() {
        return Err(CliError::Config("concentration-study needs at least one [[cones]] entry".into()));
    }
    if let Some(c) = cones.iter().find(|c| c.t_apex() > config.run.t_end) {
        return Err(CliError::Config(format!(
            "cone apex {} lies beyond run.t_end = {}",
            c.t_apex(),
            config.run.t_end
        )));
    }
    let report_path = loaded.output_path(out, &config.output.report);
    let csv_path = loaded.output_path(out, &config.output.concentration);
    if report_path.is_none() && csv_path.is_none() {
        return Err(CliError::Config("output.report or output.concentration must be set".into()));
    }
    let traj = run_monitored(loaded, &cones, false)?;
    traj.finite()?;
    let ledgers = &traj.monitor.ledgers;
    if let Some(path) = &csv_path {
        write_table(path, ledgers)?;
    }
    let tolerance = config.tolerances.trend;
    let bound = traj.params.potential_bound();
    let studies: Vec<ConeStudy> = ledgers
        .iter()
        .map(|l| study(l, tolerance, traj.params.has_potential().then_some(bound)))
        .collect();
    let report = Report {
        header: Header::new("concentration-study", loaded),
        trend_tolerance: tolerance,
        all_non_increasing: studies.iter().all(|s| s.series.iter().all(|v| v.non_increasing)),
        cones: studies,
        concentration: csv_path.map(|p| p.display().to_string()),
    };
    if let Some(path) = report_path {
        write_json(&path, &report)?;
    }
    Ok(())
}

fn write_table(path: &Path, ledgers: &[FluxLedger]) -> Result<(), CliError> {
    let mut table = Table::create(path, &CONCENTRATION_HEADER)?;
    for (k, ledger) in ledgers.iter().enumerate() {
        let averages = cone_averages(ledger);
        for row in &ledger.rows {
            let key = row.time_to_apex.to_bits();
            let mut cells = vec![
                Cell::Int(k),
                Cell::Num(row.t),
                Cell::Num(row.time_to_apex),
                Cell::Num(row.energy),
                Cell::Opt((!row.annulus.empty).then_some(row.annulus.energy)),
            ];
            cells.extend((0..AVERAGED.len()).map(|i| Cell::Opt(averages.as_ref().and_then(|a| a[i].get(&key).copied()))));
            table.row(&cells)?;
        }
    }
    table.finish()
}

fn verdict(name: String, values: Vec<f64>, scale: f64, tolerance: f64) -> SeriesVerdict {
    let max_rise = worst_rise(values.iter().copied());
    SeriesVerdict {
        name,
        points: values.len(),
        max_rise,
        relative_rise: max_rise / scale,
        non_increasing: max_rise / scale <= tolerance,
    }
}

fn study(ledger: &FluxLedger, tolerance: f64, bound: Option<f64>) -> ConeStudy {
    let e0 = ledger.rows.first().map_or(0.0, |r| r.energy);
    let scale = if e0 > 0.0 { e0 } else { 1.0 };
    let mut series = vec![
        verdict("E".into(), ledger.rows.iter().map(|r| r.energy).collect(), scale, tolerance),
        verdict(
            "E_annulus".into(),
            ledger.rows.iter().filter(|r| !r.annulus.empty).map(|r| r.annulus.energy).collect(),
            scale,
            tolerance,
        ),
    ];
    let reaches_apex = cone_averages(ledger).is_some();
    for kind in AVERAGED.into_iter().filter(|&k| k != DensityKind::Pot) {
        // ordered toward the apex
        let values: Vec<f64> = if reaches_apex {
            ledger.cone_average_series(kind).into_iter().rev().map(|(_, v)| v).collect()
        } else {
            Vec::new()
        };
        series.push(verdict(format!("avg_{}", kind.name()), values, scale, tolerance));
    }
    let potential_bound = bound.filter(|_| reaches_apex).map(|sup| {
        let max_ratio = ledger
            .cone_average_series(DensityKind::Pot)
            .into_iter()
            .map(|(big, avg)| avg / (sup * big * big / 6.0))
            .fold(0.0, f64::max);
        PotentialBound { max_ratio, holds: max_ratio <= 1.0 + 1e-9 }
    });
    ConeStudy {
        t_apex: ledger.cone.t_apex(),
        lambda_frac: ledger.cone.lambda_frac(),
        initial_energy: e0,
        series,
        potential_bound,
    }
}
