use std::path::{Path, PathBuf};

use langrobust::providers::ProviderConfig;
use langrobust::variantgen::GenerationPolicy;
use serde::{Deserialize, Serialize};

use crate::error::{CliResult, Failure};

/// Settings read from `--config`. Command-line flags override these.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub provider: Option<ProviderConfig>,
    pub generation: Option<GenerationPolicy>,
    pub prompt_asset: Option<PathBuf>,
    pub embedding_table: Option<PathBuf>,
    pub tagger_asset: Option<PathBuf>,
    pub prealign_config: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub mock_provider: Option<String>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
        let mut c: Config =
            serde_json::from_str(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
        // Relative asset paths are taken relative to the config file.
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut c.prompt_asset, &mut c.embedding_table, &mut c.tagger_asset, &mut c.prealign_config, &mut c.cache_dir, &mut c.out_dir]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        c.validate()?;
        Ok(c)
    }

    /// Every referenced asset must exist.
    pub fn validate(&self) -> CliResult<()> {
        for (name, p) in [
            ("prompt_asset", &self.prompt_asset),
            ("embedding_table", &self.embedding_table),
            ("tagger_asset", &self.tagger_asset),
            ("prealign_config", &self.prealign_config),
        ] {
            if let Some(p) = p {
                if !p.exists() {
                    return Err(Failure::validation(format!("{name}: {} does not exist", p.display())));
                }
            }
        }
        if self.workers == Some(0) {
            return Err(Failure::validation("workers must be at least 1"));
        }
        Ok(())
    }
}
