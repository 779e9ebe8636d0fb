//! Run configuration, read from TOML.
//!
//! ```toml
//! [grid]
//! radius = 1.0
//! cells = 1024
//!
//! [params]
//! alpha = 1.0
//! potential = "none"        # none | v1 | v2
//! lambda_pot = 0.0
//!
//! [run]
//! t_end = 0.5
//! cfl = 0.5
//! observe_every = 1
//!
//! [initial]
//! displacement = { family = "arctan", amplitude = 1.0, scale = 0.25 }
//! velocity = { family = "zero" }
//! # or: file = "data.csv", relative to the config file
//!
//! [[cones]]
//! t_apex = 1.0
//! lambda_frac = 0.5
//! ```
//!
//! Sections `[output]`, `[tolerances]`, `[identity]` and `[converge]` are
//! optional.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use skyrme_core::diagnostics::ConeSpec;
use skyrme_core::identities::Preset;
use skyrme_core::initdata::{Profile, ProfileSpec};
use skyrme_core::integrator::RunConfig;
use skyrme_core::{make_grid, Params, Potential, RadialGrid};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub grid: GridConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub cones: Vec<ConeConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub identity: IdentityConfig,
    #[serde(default)]
    pub converge: ConvergeConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub radius: f64,
    pub cells: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub alpha: f64,
    #[serde(default)]
    pub potential: Potential,
    #[serde(default)]
    pub lambda_pot: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig { alpha: 1.0, potential: Potential::None, lambda_pot: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub t_end: f64,
    pub cfl: f64,
    pub observe_every: usize,
    pub blowup_grad_threshold: f64,
    pub blowup_value_threshold: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        let d = RunConfig::default();
        RunSection {
            t_end: d.t_end,
            cfl: d.cfl,
            observe_every: d.observe_every,
            blowup_grad_threshold: d.blowup_grad_threshold,
            blowup_value_threshold: d.blowup_value_threshold,
        }
    }
}

impl RunSection {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            t_end: self.t_end,
            cfl: self.cfl,
            observe_every: self.observe_every,
            blowup_grad_threshold: self.blowup_grad_threshold,
            blowup_value_threshold: self.blowup_value_threshold,
        }
    }
}

/// Analytic profiles, or a CSV file in the `r,u,v` format.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displacement: Option<Profile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<Profile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub t_apex: f64,
    #[serde(default = "default_lambda_frac")]
    pub lambda_frac: f64,
}

fn default_lambda_frac() -> f64 {
    0.5
}

impl ConeConfig {
    pub fn spec(&self) -> Result<ConeSpec, CliError> {
        ConeSpec::new(self.t_apex, self.lambda_frac).map_err(CliError::from)
    }
}

/// File names inside the output directory; an empty name disables that output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub timeseries: String,
    pub summary: String,
    pub concentration: String,
    pub report: String,
    pub initial: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
            timeseries: "timeseries.csv".into(),
            summary: "summary.json".into(),
            concentration: "concentration.csv".into(),
            report: "report.json".into(),
            initial: "initial.csv".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative interior-cone drift `max |E + F - E(0)| / E(0)`.
    pub energy_drift: f64,
    /// Allowed rise of a monitored series, relative to the cone's `E(0)`.
    pub trend: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { energy_drift: 1e-5, trend: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdentityConfig {
    pub presets: Vec<String>,
    pub alphas: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub defect_threshold: f64,
    pub resolutions: Vec<usize>,
    pub t_center: f64,
    pub stride: usize,
    pub order_floor: f64,
    /// Mask cone of the discrete residual; defaults to the first `[[cones]]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeConfig>,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            presets: Preset::ALL.iter().map(|p| p.name().to_owned()).collect(),
            alphas: vec![0.5, 1.0, 2.0],
            samples: 10_000,
            seed: 1,
            defect_threshold: 1e-10,
            resolutions: vec![256, 512, 1024],
            t_center: 0.5,
            stride: 2,
            order_floor: 1.7,
            cone: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergeConfig {
    pub resolutions: Vec<usize>,
    pub order_floor: f64,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        ConvergeConfig { resolutions: vec![128, 256, 512], order_floor: 1.9 }
    }
}

/// A parsed config with the directory its relative paths resolve against.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub config: Config,
    pub base: PathBuf,
    /// SHA-256 of the canonical serialization.
    pub hash: String,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let config: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn load(path: &Path) -> Result<Loaded, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let config = Config::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let hash = config.hash();
        Ok(Loaded { config, base, hash })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.grid()?;
        self.params()?;
        self.run.run_config().validate()?;
        match (&self.initial.file, &self.initial.displacement, &self.initial.velocity) {
            (Some(_), None, None) => {}
            (Some(_), _, _) => {
                return Err(CliError::Config("initial: give either a file or analytic profiles, not both".into()))
            }
            (None, d, v) => {
                for p in [d, v].into_iter().flatten() {
                    p.validate()?;
                }
            }
        }
        for cone in &self.cones {
            cone.spec()?;
        }
        if let Some(cone) = &self.identity.cone {
            cone.spec()?;
        }
        let o = &self.output;
        if [&o.timeseries, &o.summary, &o.concentration, &o.report, &o.initial].iter().all(|s| s.is_empty()) {
            return Err(CliError::Config("output: at least one output must be requested".into()));
        }
        if self.identity.presets.is_empty() {
            return Err(CliError::Config("identity.presets must not be empty".into()));
        }
        for name in &self.identity.presets {
            name.parse::<Preset>()?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<RadialGrid, CliError> {
        make_grid(self.grid.radius, self.grid.cells).map_err(CliError::from)
    }

    pub fn params(&self) -> Result<Params, CliError> {
        Params::new(self.params.alpha, self.params.potential, self.params.lambda_pot).map_err(CliError::from)
    }

    pub fn cone_specs(&self) -> Result<Vec<ConeSpec>, CliError> {
        self.cones.iter().map(ConeConfig::spec).collect()
    }

    pub fn presets(&self) -> Result<Vec<Preset>, CliError> {
        self.identity.presets.iter().map(|n| n.parse::<Preset>().map_err(CliError::from)).collect()
    }
}

impl Loaded {
    pub fn profile_spec(&self) -> ProfileSpec {
        let init = &self.config.initial;
        match &init.file {
            Some(file) => ProfileSpec::FromFile(self.base.join(file)),
            None => ProfileSpec::Analytic {
                displacement: init.displacement.unwrap_or(Profile::Zero),
                velocity: init.velocity.unwrap_or(Profile::Zero),
            },
        }
    }

    /// Output directory, overridden by `--out`.
    pub fn output_path(&self, out: Option<&Path>, name: &str) -> Option<PathBuf> {
        if name.is_empty() {
            return None;
        }
        let dir = out.map(Path::to_path_buf).unwrap_or_else(|| self.config.output.dir.clone());
        Some(dir.join(name))
    }
}
