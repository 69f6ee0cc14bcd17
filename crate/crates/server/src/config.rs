//! Service configuration: a TOML file plus environment overrides.
//!
//! ```toml
//! port = 8080
//! bind = "127.0.0.1"
//!
//! [tables]
//! antoine = "antoine.csv"
//! nrtl_pairs = "nrtl_pairs.csv"
//! unifac_groups = "groups.csv"
//! unifac_interactions = "interactions.csv"
//! unifac_modified_groups = "mod_groups.csv"
//! unifac_modified_interactions = "mod_interactions.csv"
//!
//! [adapters]
//! antoine_url = "http://127.0.0.1:9000/antoine"
//! activity_url = "http://127.0.0.1:9000/activity"
//! timeout_s = 10
//! ```
//!
//! Every key is optional; bundled demo tables fill whatever is not given.
//! Relative table paths resolve against the directory of the config file.
//! `THERMOPROP_PORT`, `THERMOPROP_ANTOINE_TABLE`, `THERMOPROP_NRTL_PAIRS`,
//! `THERMOPROP_UNIFAC_GROUPS`, `THERMOPROP_UNIFAC_INTERACTIONS`,
//! `THERMOPROP_UNIFAC_MODIFIED_GROUPS` and `THERMOPROP_UNIFAC_MODIFIED_INTERACTIONS`
//! override the file.

use std::fs::File;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

use thermoprop::activity::{UnifacParameterTable, UnifacVariant};
use thermoprop::registry::{
    demo_unifac_table, ActivitySource, AntoineTable, ExternalActivitySource, ExternalAntoineSource,
    NrtlPairTable, ProviderRegistry, UnifacSource,
};

use crate::transport::HttpTransport;

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("environment variable {var} = `{value}` is invalid")]
    Env { var: &'static str, value: String },
    #[error("table {path}: {message}")]
    Table { path: PathBuf, message: String },
    #[error("{0} is set without its partner file")]
    Incomplete(&'static str),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tables {
    pub antoine: Option<PathBuf>,
    pub nrtl_pairs: Option<PathBuf>,
    pub unifac_groups: Option<PathBuf>,
    pub unifac_interactions: Option<PathBuf>,
    pub unifac_modified_groups: Option<PathBuf>,
    pub unifac_modified_interactions: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Adapters {
    pub antoine_url: Option<String>,
    pub activity_url: Option<String>,
    pub timeout_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub port: u16,
    pub bind: String,
    pub tables: Tables,
    pub adapters: Adapters,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            port: DEFAULT_PORT,
            bind: "127.0.0.1".into(),
            tables: Tables::default(),
            adapters: Adapters::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str, base_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let mut cfg: Config = toml::from_str(text)?;
        if let Some(dir) = base_dir {
            let t = &mut cfg.tables;
            for p in [
                &mut t.antoine,
                &mut t.nrtl_pairs,
                &mut t.unifac_groups,
                &mut t.unifac_interactions,
                &mut t.unifac_modified_groups,
                &mut t.unifac_modified_interactions,
            ]
            .into_iter()
            .flatten()
            {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    /// Reads `path` (or starts from defaults) and applies the process environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
                    path: p.to_owned(),
                    source,
                })?;
                Self::from_toml(&text, p.parent())?
            }
            None => Self::default(),
        };
        cfg.with_env(|k| std::env::var(k).ok())
    }

    pub fn with_env(mut self, var: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        if let Some(v) = var("THERMOPROP_PORT") {
            self.port = v.trim().parse().map_err(|_| ConfigError::Env {
                var: "THERMOPROP_PORT",
                value: v,
            })?;
        }
        let t = &mut self.tables;
        for (name, slot) in [
            ("THERMOPROP_ANTOINE_TABLE", &mut t.antoine),
            ("THERMOPROP_NRTL_PAIRS", &mut t.nrtl_pairs),
            ("THERMOPROP_UNIFAC_GROUPS", &mut t.unifac_groups),
            ("THERMOPROP_UNIFAC_INTERACTIONS", &mut t.unifac_interactions),
            ("THERMOPROP_UNIFAC_MODIFIED_GROUPS", &mut t.unifac_modified_groups),
            ("THERMOPROP_UNIFAC_MODIFIED_INTERACTIONS", &mut t.unifac_modified_interactions),
        ] {
            if let Some(v) = var(name) {
                *slot = Some(PathBuf::from(v));
            }
        }
        Ok(self)
    }

    fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.adapters.timeout_s.unwrap_or(10.0).max(0.001))
    }

    /// Loads every configured table and wires up the adapters.
    ///
    /// Activity models: `nrtl` (configured or bundled pairs), `nrtl-demo`
    /// (bundled pairs), `unifac`, `unifac-modified`, and `external` when an
    /// activity adapter is configured.
    pub fn build_registry(&self) -> Result<ProviderRegistry, ConfigError> {
        let t = &self.tables;
        let antoine = match &t.antoine {
            Some(p) => AntoineTable::from_csv(p.display().to_string(), open(p)?).map_err(|e| table_err(p, e))?,
            None => AntoineTable::demo(),
        };
        let demo_pairs: Arc<dyn ActivitySource> = Arc::new(NrtlPairTable::demo());
        let pairs: Arc<dyn ActivitySource> = match &t.nrtl_pairs {
            Some(p) => Arc::new(NrtlPairTable::from_csv(open(p)?).map_err(|e| table_err(p, e))?),
            None => demo_pairs.clone(),
        };
        let original = Arc::new(unifac_table(
            UnifacVariant::Original,
            (&t.unifac_groups, &t.unifac_interactions),
            "unifac_groups / unifac_interactions",
        )?);
        let modified = Arc::new(unifac_table(
            UnifacVariant::Modified,
            (&t.unifac_modified_groups, &t.unifac_modified_interactions),
            "unifac_modified_groups / unifac_modified_interactions",
        )?);

        let mut registry = ProviderRegistry::new().with_antoine_source(Arc::new(antoine));
        if let Some(url) = &self.adapters.antoine_url {
            let transport = Arc::new(HttpTransport::new(url.clone(), self.timeout()));
            registry = registry.with_antoine_source(Arc::new(ExternalAntoineSource::new(url.clone(), transport)));
        }
        registry = registry
            .with_activity_source("nrtl", pairs)
            .with_activity_source("nrtl-demo", demo_pairs)
            .with_activity_source("unifac", Arc::new(UnifacSource::new(original.clone())))
            .with_activity_source("unifac-modified", Arc::new(UnifacSource::new(modified)))
            .with_group_table(original);
        if let Some(url) = &self.adapters.activity_url {
            let transport = Arc::new(HttpTransport::new(url.clone(), self.timeout()));
            registry = registry.with_activity_source("external", Arc::new(ExternalActivitySource::new(transport)));
        }
        Ok(registry)
    }
}

fn open(p: &Path) -> Result<File, ConfigError> {
    File::open(p).map_err(|source| ConfigError::Io {
        path: p.to_owned(),
        source,
    })
}

fn table_err(p: &Path, e: impl std::fmt::Display) -> ConfigError {
    ConfigError::Table {
        path: p.to_owned(),
        message: e.to_string(),
    }
}

fn unifac_table(
    variant: UnifacVariant,
    files: (&Option<PathBuf>, &Option<PathBuf>),
    label: &'static str,
) -> Result<UnifacParameterTable, ConfigError> {
    match files {
        (None, None) => Ok(demo_unifac_table(variant)),
        (Some(g), Some(i)) => UnifacParameterTable::from_csv(variant, open(g)?, open(i)?).map_err(|e| table_err(g, e)),
        _ => Err(ConfigError::Incomplete(label)),
    }
}
