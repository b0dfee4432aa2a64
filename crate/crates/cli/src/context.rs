use std::path::{Path, PathBuf};
use std::sync::Arc;

use langrobust::corpus::{load_split, CorpusError, DatasetSplit, VariantStyle};
use langrobust::providers::{
    ChatProvider, DiskCache, EmbeddingProvider, HttpChatProvider, HttpClient, HttpEmbeddingProvider, MockChatProvider,
    MockEmbeddingProvider, MockKind, ProviderConfig,
};
use serde::Serialize;

use crate::args::GlobalArgs;
use crate::config::Config;
use crate::error::{CliResult, Failure};

/// Dimension of the offline embedding provider.
const MOCK_EMBEDDING_DIM: usize = 64;

/// Settings after merging the config file with command-line flags.
pub struct Context {
    pub config: Config,
    pub seed: Option<u64>,
    pub workers: usize,
    pub out_dir: PathBuf,
    pub mocks: Option<Vec<MockKind>>,
    pub json: bool,
}

fn parse_mocks(set: &str) -> CliResult<Vec<MockKind>> {
    let mut out = Vec::new();
    for name in set.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name.eq_ignore_ascii_case("all") {
            out.extend(VariantStyle::VARIANTS.iter().map(|&s| MockKind::for_style(s)));
            continue;
        }
        let kind = MockKind::parse(name).ok_or_else(|| Failure::usage(format!("unknown mock provider `{name}`")))?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    if out.is_empty() {
        return Err(Failure::usage("--mock-provider needs at least one mock kind"));
    }
    Ok(out)
}

impl Context {
    pub fn new(global: &GlobalArgs) -> CliResult<Self> {
        let config = match &global.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let workers = global.workers.or(config.workers).unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        });
        if workers == 0 {
            return Err(Failure::usage("--workers must be at least 1"));
        }
        let mocks = match global.mock_provider.as_deref().or(config.mock_provider.as_deref()) {
            Some(s) => Some(parse_mocks(s)?),
            None => None,
        };
        Ok(Self {
            seed: global.seed.or(config.seed),
            out_dir: global.out_dir.clone().or_else(|| config.out_dir.clone()).unwrap_or_else(|| PathBuf::from(".")),
            config,
            workers,
            mocks,
            json: global.json,
        })
    }

    pub fn require_seed(&self, what: &str) -> CliResult<u64> {
        self.seed.ok_or_else(|| Failure::usage(format!("{what} is randomized: pass --seed or set `seed` in the config")))
    }

    pub fn out_path(&self, name: impl AsRef<Path>) -> CliResult<PathBuf> {
        std::fs::create_dir_all(&self.out_dir)
            .map_err(|e| Failure::validation(format!("{}: {e}", self.out_dir.display())))?;
        Ok(self.out_dir.join(name))
    }

    pub fn cache(&self, flag: Option<&PathBuf>) -> CliResult<Option<Arc<DiskCache>>> {
        match flag.or(self.config.cache_dir.as_ref()) {
            Some(dir) => Ok(Some(Arc::new(DiskCache::open(dir)?))),
            None => Ok(None),
        }
    }

    fn provider_config(&self) -> CliResult<&ProviderConfig> {
        self.config.provider.as_ref().ok_or_else(|| {
            Failure::validation("no provider configured: add a `provider` section to the config or pass --mock-provider")
        })
    }

    fn http_client(&self) -> CliResult<Arc<HttpClient>> {
        Ok(Arc::new(HttpClient::from_config(self.provider_config()?)?))
    }

    /// The chat provider for `kind`: its mock when selected, otherwise the
    /// configured HTTP endpoint.
    pub fn chat_provider(&self, kind: MockKind, cache: Option<Arc<DiskCache>>) -> CliResult<Box<dyn ChatProvider>> {
        if let Some(mocks) = &self.mocks {
            if mocks.contains(&kind) {
                return Ok(Box::new(MockChatProvider::new(kind, self.seed.unwrap_or(0))));
            }
            return Err(Failure::usage(format!("--mock-provider does not include `{}`", kind.name())));
        }
        let client = self.http_client()?;
        let model = self.provider_config()?.chat_model_id.clone();
        Ok(Box::new(HttpChatProvider::new(client, model, cache)))
    }

    /// The single mock named for pre-alignment, or the HTTP provider.
    pub fn prealign_provider(&self, cache: Option<Arc<DiskCache>>) -> CliResult<Box<dyn ChatProvider>> {
        match self.mocks.as_deref() {
            Some([kind]) => Ok(Box::new(MockChatProvider::new(*kind, self.seed.unwrap_or(0)))),
            Some(_) => Err(Failure::usage("pre-alignment takes exactly one mock kind, e.g. --mock-provider inverse_syntax")),
            None => {
                let client = self.http_client()?;
                let model = self.provider_config()?.chat_model_id.clone();
                Ok(Box::new(HttpChatProvider::new(client, model, cache)))
            }
        }
    }

    pub fn embedding_provider(&self, cache: Option<Arc<DiskCache>>) -> CliResult<Box<dyn EmbeddingProvider>> {
        if self.mocks.is_some() {
            return Ok(Box::new(MockEmbeddingProvider::new(MOCK_EMBEDDING_DIM)));
        }
        let client = self.http_client()?;
        let model = self.provider_config()?.embedding_model_id.clone();
        Ok(Box::new(HttpEmbeddingProvider::new(client, model, cache)))
    }

    /// Writes `report` as pretty JSON and returns its path.
    pub fn write_json<T: Serialize>(&self, name: &str, report: &T) -> CliResult<PathBuf> {
        let path = self.out_path(name)?;
        let text = serde_json::to_string_pretty(report)? + "\n";
        write_file(&path, &text)?;
        Ok(path)
    }

    /// Prints the JSON report with `--json`, else the table.
    pub fn emit<T: Serialize>(&self, report: &T, table: &Table) -> CliResult<()> {
        if self.json {
            say(&(serde_json::to_string_pretty(report)? + "\n"));
        } else {
            say(&table.render());
        }
        Ok(())
    }
}

/// Writes to stdout, ignoring a closed pipe.
pub fn say(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

pub fn load(path: &Path) -> CliResult<DatasetSplit> {
    load_split(path).map_err(|e| match e {
        // already names the path
        CorpusError::Io { .. } => Failure::from(e),
        _ => Failure::from(e).context(format!("loading {}", path.display())),
    })
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

/// File stem used to name outputs derived from `path`.
pub fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "split".into())
}

/// Plain left-aligned text table.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self) -> String {
        let cols = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate().take(cols) {
                widths[i] = widths[i].max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

pub fn fmt4(x: f64) -> String {
    format!("{x:.4}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt4).unwrap_or_else(|| "-".into())
}
