//! `converge`: self-convergence over doubling resolutions.

use std::path::Path;

use serde::Serialize;
use skyrme_core::integrator::{self_convergence_series, SelfConvergence};

use super::required;
use crate::output::{write_json, Header};
use crate::{CliError, Loaded};

#[derive(Debug, Serialize)]
struct Estimate {
    #[serde(flatten)]
    estimate: SelfConvergence,
    /// Identical solutions at all three resolutions.
    exact: bool,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct Report {
    #[serde(flatten)]
    header: Header,
    radius: f64,
    resolutions: Vec<usize>,
    order_floor: f64,
    estimates: Vec<Estimate>,
    passed: bool,
}

pub fn run(loaded: &Loaded, out: Option<&Path>) -> Result<(), CliError> {
    let config = &loaded.config;
    let resolutions = &config.converge.resolutions;
    if resolutions.len() < 3 {
        return Err(CliError::Config(format!(
            "converge.resolutions needs at least 3 entries, got {}",
            resolutions.len()
        )));
    }
    let path = required(loaded, out, "report", &config.output.report)?;
    let params = config.params()?;
    let series = self_convergence_series(
        config.grid.radius,
        resolutions,
        &loaded.profile_spec(),
        &params,
        config.run.t_end,
        config.run.cfl,
    )?;
    let floor = config.converge.order_floor;
    let estimates: Vec<Estimate> = series
        .into_iter()
        .map(|estimate| {
            let exact = estimate.coarse_diff == 0.0 && estimate.fine_diff == 0.0;
            Estimate { estimate, exact, passed: exact || estimate.order >= floor }
        })
        .collect();
    let passed = estimates.iter().all(|e| e.passed);
    let report = Report {
        header: Header::new("converge", loaded),
        radius: config.grid.radius,
        resolutions: resolutions.clone(),
        order_floor: floor,
        estimates,
        passed,
    };
    write_json(&path, &report)?;
    if !passed {
        return Err(CliError::CheckFailed(format!("self-convergence order below {floor}")));
    }
    Ok(())
}
