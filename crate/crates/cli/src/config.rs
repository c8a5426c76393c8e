use std::path::{Path, PathBuf};

use dirac_core::descent::DEFAULT_LEVEL_BOUND;
use dirac_core::formal::DEFAULT_LAZARD_BOUND;
use dirac_core::steenrod::DualityOrientation;
use serde::Deserialize;

use crate::error::CliError;
use crate::output::Format;

/// Environment variable naming the config file when `--config` is absent.
pub const CONFIG_ENV: &str = "DIRAC_CONFIG";

/// Resource bounds and defaults, read from a TOML file. Flags override.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub threads: Option<usize>,
    pub format: Option<Format>,
    /// Largest degree `lazard-ranks` accepts.
    pub lazard_bound: i64,
    /// Largest number of basis elements in one cochain level.
    pub level_bound: usize,
    pub duality_orientation: DualityOrientation,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            threads: None,
            format: None,
            lazard_bound: DEFAULT_LAZARD_BOUND,
            level_bound: DEFAULT_LEVEL_BOUND,
            duality_orientation: DualityOrientation::default(),
        }
    }
}

impl Config {
    pub fn load(flag: Option<&Path>) -> Result<Self, CliError> {
        let path: Option<PathBuf> = flag.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        let Some(path) = path else { return Ok(Config::default()) };
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}
