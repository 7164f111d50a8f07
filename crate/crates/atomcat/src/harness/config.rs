use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::atomspec::AtomOptions;
use crate::gf::Field;
use crate::linmod::{DEFAULT_BUDGET, DEFAULT_ISO_CAP};
use crate::Error;

pub const ENV_PREFIX: &str = "ATOMCAT_";

pub const DEFAULT_DEPTH: usize = 3;
pub const DEFAULT_SEED: u64 = 42;

/// Knobs shared by every command. `out` is a directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub field: u32,
    pub budget: usize,
    pub iso_cap: u64,
    pub depth: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { field: 2, budget: DEFAULT_BUDGET, iso_cap: DEFAULT_ISO_CAP, depth: DEFAULT_DEPTH, seed: DEFAULT_SEED, out: None }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Error> {
    value.trim().parse().map_err(|_| Error::Config(format!("{ENV_PREFIX}{key}={value:?} does not parse")))
}

impl RunConfig {
    /// Defaults overridden by `ATOMCAT_FIELD`, `ATOMCAT_BUDGET`, `ATOMCAT_ISO_CAP`,
    /// `ATOMCAT_DEPTH`, `ATOMCAT_SEED` and `ATOMCAT_OUT`.
    pub fn from_env() -> Result<RunConfig, Error> {
        RunConfig::default().with_overrides(|k| std::env::var(format!("{ENV_PREFIX}{k}")).ok())
    }

    /// Applies overrides looked up by unprefixed key (`FIELD`, `BUDGET`, ...).
    pub fn with_overrides(mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<RunConfig, Error> {
        if let Some(v) = lookup("FIELD") {
            self.field = parse("FIELD", &v)?;
        }
        if let Some(v) = lookup("BUDGET") {
            self.budget = parse("BUDGET", &v)?;
        }
        if let Some(v) = lookup("ISO_CAP") {
            self.iso_cap = parse("ISO_CAP", &v)?;
        }
        if let Some(v) = lookup("DEPTH") {
            self.depth = parse("DEPTH", &v)?;
        }
        if let Some(v) = lookup("SEED") {
            self.seed = parse("SEED", &v)?;
        }
        if let Some(v) = lookup("OUT") {
            self.out = Some(PathBuf::from(v));
        }
        self.validate()
    }

    pub fn validate(self) -> Result<RunConfig, Error> {
        Field::new(self.field)?;
        for (name, v) in [("budget", self.budget as u64), ("iso-cap", self.iso_cap), ("depth", self.depth as u64)] {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        Ok(self)
    }

    pub fn field(&self) -> Field {
        Field::new(self.field).expect("validated")
    }

    pub fn atom_options(&self) -> AtomOptions {
        AtomOptions { budget: self.budget, iso_cap: self.iso_cap }
    }
}
