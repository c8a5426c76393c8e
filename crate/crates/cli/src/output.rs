use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::job::Command;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => unreachable!("errors carry their own exit code"),
        }
    }
}

/// Result of a command: the structured payload and its table and text
/// renderings. A failing outcome names a witness.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub payload: Value,
    pub witness: Option<Value>,
    pub csv: String,
    pub text: String,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.payload).expect("payloads serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
            Format::Text => self.text.clone(),
        }
    }
}

/// CSV with a header row; fields are quoted where needed.
pub fn csv_table<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payloads serialize")
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    code: &'a str,
    message: String,
}

#[derive(Serialize)]
struct Timing {
    wall_seconds: f64,
}

/// Sidecar report: the only place timing is recorded.
#[derive(Serialize)]
pub struct Report<'a> {
    command: Command,
    status: Status,
    exit_code: u8,
    threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorReport<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    payload: Option<&'a Value>,
    timing: Timing,
}

impl<'a> Report<'a> {
    pub fn new(command: Command, threads: usize, result: &'a Result<Outcome, CliError>, wall_seconds: f64) -> Self {
        let timing = Timing { wall_seconds };
        match result {
            Ok(o) => Report {
                command,
                status: o.status,
                exit_code: o.status.exit_code(),
                threads,
                error: None,
                witness: o.witness.as_ref(),
                payload: Some(&o.payload),
                timing,
            },
            Err(e) => Report {
                command,
                status: Status::Error,
                exit_code: e.exit_code(),
                threads,
                error: Some(ErrorReport { code: e.code(), message: e.to_string() }),
                witness: None,
                payload: None,
                timing,
            },
        }
    }
}

/// `<out>.report.json` next to the data file.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name: OsString = out.file_name().map(OsString::from).unwrap_or_default();
    name.push(".report.json");
    out.with_file_name(name)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
