//! `identity-check`: oracle battery plus the discrete residual study.

use std::path::Path;

use serde::Serialize;
use skyrme_core::diagnostics::ConeSpec;
use skyrme_core::identities::{oracle_battery, residual_study, OracleStat, ResidualSample, StudyConfig};

use super::required;
use crate::output::{write_json, Header};
use crate::{CliError, Loaded};

#[derive(Debug, Serialize)]
struct PresetReport {
    preset: String,
    /// Largest normalized oracle defect over all α and both identities.
    max_oracle_defect: f64,
    residuals: Vec<ResidualSample>,
    order: Option<f64>,
    /// All residual norms vanish.
    exact: bool,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct Report {
    #[serde(flatten)]
    header: Header,
    samples: usize,
    seed: u64,
    alphas: Vec<f64>,
    defect_threshold: f64,
    order_floor: f64,
    battery: Vec<OracleStat>,
    random_max_defect: f64,
    presets: Vec<PresetReport>,
    passed: bool,
}

fn max_defect<'a>(stats: impl Iterator<Item = &'a OracleStat>) -> f64 {
    stats.map(|s| s.max_abc_defect.max(s.max_ru_defect)).fold(0.0, f64::max)
}

pub fn run(loaded: &Loaded, out: Option<&Path>) -> Result<(), CliError> {
    let config = &loaded.config;
    let id = &config.identity;
    let presets = config.presets()?;
    if id.alphas.is_empty() {
        return Err(CliError::Config("identity.alphas must not be empty".into()));
    }
    let path = required(loaded, out, "report", &config.output.report)?;
    let params = config.params()?;
    let cone = match (&id.cone, config.cones.first()) {
        (Some(c), _) | (None, Some(c)) => c.spec()?,
        (None, None) => ConeSpec::new(config.grid.radius, 0.5)?,
    };

    let battery = oracle_battery(id.samples, id.seed, &presets, &id.alphas);
    let study = StudyConfig {
        radius: config.grid.radius,
        resolutions: id.resolutions.clone(),
        initial: loaded.profile_spec(),
        cfl: config.run.cfl,
        t_center: id.t_center,
        stride: id.stride,
        cone,
    };
    let mults: Vec<_> = presets.iter().map(|p| p.multiplier()).collect();
    let studies = residual_study(&study, &mults, &params)?;

    let reports: Vec<PresetReport> = presets
        .iter()
        .zip(studies)
        .map(|(p, s)| {
            let max_oracle_defect = max_defect(battery.iter().filter(|b| b.preset == p.name()));
            let exact = s.samples.iter().all(|r| r.norm == 0.0);
            let order_ok = exact || s.order.is_some_and(|o| o >= id.order_floor);
            PresetReport {
                preset: p.name().to_owned(),
                max_oracle_defect,
                exact,
                passed: max_oracle_defect <= id.defect_threshold && order_ok,
                residuals: s.samples,
                order: s.order,
            }
        })
        .collect();
    let random_max_defect = max_defect(battery.iter().filter(|b| b.preset == "random"));
    let passed = reports.iter().all(|r| r.passed) && random_max_defect <= id.defect_threshold;
    let report = Report {
        header: Header::new("identity-check", loaded),
        samples: id.samples,
        seed: id.seed,
        alphas: id.alphas.clone(),
        defect_threshold: id.defect_threshold,
        order_floor: id.order_floor,
        battery,
        random_max_defect,
        presets: reports,
        passed,
    };
    write_json(&path, &report)?;
    if !passed {
        return Err(CliError::CheckFailed("identity defect above threshold or order below floor".into()));
    }
    Ok(())
}
