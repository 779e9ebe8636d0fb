//! Writing CSV and JSON artifacts.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{CliError, Loaded, SCHEMA_VERSION};

/// Fields shared by every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub schema_version: u32,
    pub command: &'static str,
    pub config_hash: String,
}

impl Header {
    pub fn new(command: &'static str, loaded: &Loaded) -> Self {
        Header { schema_version: SCHEMA_VERSION, command, config_hash: loaded.hash.clone() }
    }
}

pub fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(path, e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

/// CSV writer with a header row.
pub struct Table {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl Table {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(create(path)?);
        writer.write_record(header).map_err(|e| csv_error(path, e))?;
        Ok(Table { path: path.to_path_buf(), writer })
    }

    pub fn row(&mut self, fields: &[Cell]) -> Result<(), CliError> {
        let record: Vec<String> = fields.iter().map(Cell::render).collect();
        self.writer.write_record(&record).map_err(|e| csv_error(&self.path, e))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e))
}

/// One CSV field; `None` renders as an empty field.
pub enum Cell {
    Int(usize),
    Num(f64),
    Opt(Option<f64>),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(k) => k.to_string(),
            Cell::Num(x) => format!("{x:e}"),
            Cell::Opt(Some(x)) => format!("{x:e}"),
            Cell::Opt(None) => String::new(),
        }
    }
}
