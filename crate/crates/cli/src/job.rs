use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    FglCheck,
    FglInvert,
    FglAct,
    LazardRanks,
    SteenrodPsi,
    SteenrodPoincare,
    SteenrodVerify,
    SteenrodDuality,
    AmitsurE2,
    AdamsE2,
    FlatnessWitness,
}

/// One job: a command, its parameter table, input files and an optional
/// output path. Relative input paths resolve against the job file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    pub input_paths: Vec<PathBuf>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(skip)]
    base_dir: PathBuf,
}

impl JobSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut job: JobSpec =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        job.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(job)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn params<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_value(serde_json::Value::Object(self.params.clone()))
            .map_err(|e| CliError::Parse(format!("parameters: {e}")))
    }

    /// Parses input file `i` as JSON.
    pub fn input<T: DeserializeOwned>(&self, i: usize, what: &str) -> Result<T, CliError> {
        let path = self
            .input_paths
            .get(i)
            .ok_or_else(|| CliError::Parse(format!("missing input {}: {what}", i + 1)))?;
        let path = self.resolve(path);
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}
