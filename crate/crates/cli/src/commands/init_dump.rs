//! `init-dump`: the built initial state as `r,u,v` CSV.

use std::io::Write;
use std::path::Path;

use skyrme_core::initdata::{build_initial, write_initial_csv};

use super::required;
use crate::output::create;
use crate::{CliError, Loaded};

pub fn run(loaded: &Loaded, out: Option<&Path>) -> Result<(), CliError> {
    let grid = loaded.config.grid()?;
    let state = build_initial(&loaded.profile_spec(), &grid)?;
    let path = required(loaded, out, "initial", &loaded.config.output.initial)?;
    let mut w = create(&path)?;
    write_initial_csv(&state, &grid, &mut w)?;
    w.flush().map_err(|e| CliError::io(&path, e))
}
