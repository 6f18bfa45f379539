use std::path::{Path, PathBuf};

use adictrop::valpoly::{FieldProfile, ResidueField};
use adictrop::{Error, Result, ValueGroup};
use serde::{Deserialize, Serialize};

pub const SEED_VAR: &str = "ADICTROP_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Dot,
    Svg,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Svg => "svg",
            Format::Text => "txt",
        }
    }
}

/// Input files that may be named in a config instead of on the command line.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub refine: Option<PathBuf>,
    pub complex: Option<PathBuf>,
    pub cone: Option<PathBuf>,
}

/// Job settings read from a JSON file and overridden by command-line flags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// `Q` or `F_p`.
    pub field: Option<String>,
    pub gamma: Option<u64>,
    pub uniformizer: Option<String>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    /// Directory receiving every artifact of the command.
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub inputs: Inputs,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<JobConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidValue(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidValue(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `over` win.
    pub fn merge(self, over: JobConfig) -> JobConfig {
        JobConfig {
            field: over.field.or(self.field),
            gamma: over.gamma.or(self.gamma),
            uniformizer: over.uniformizer.or(self.uniformizer),
            format: over.format.or(self.format),
            seed: over.seed.or(self.seed),
            out: over.out.or(self.out),
            inputs: Inputs {
                refine: over.inputs.refine.or(self.inputs.refine),
                complex: over.inputs.complex.or(self.inputs.complex),
                cone: over.inputs.cone.or(self.inputs.cone),
            },
        }
    }

    /// Checks every field, returning the field profile. `uniformizer` is the
    /// symbol used when none is configured.
    pub fn validate(&self, uniformizer: &str) -> Result<FieldProfile> {
        let residue: ResidueField = self.field.as_deref().unwrap_or("Q").parse()?;
        let gamma = ValueGroup::new(self.gamma.unwrap_or(1))?;
        let profile = FieldProfile { residue, gamma, uniformizer: String::new() };
        profile.with_uniformizer(self.uniformizer.as_deref().unwrap_or(uniformizer))
    }

    /// The environment variable overrides the configured seed.
    pub fn seed(&self, default: u64) -> Result<u64> {
        match std::env::var(SEED_VAR) {
            Ok(s) => s.trim().parse().map_err(|_| Error::InvalidValue(format!("{SEED_VAR}={s:?} is not an unsigned integer"))),
            Err(_) => Ok(self.seed.unwrap_or(default)),
        }
    }
}
