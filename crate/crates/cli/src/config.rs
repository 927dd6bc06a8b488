use std::path::{Path, PathBuf};

use ceo_adapt::adapt::AdaptConfig;
use ceo_adapt::molecule::Ordering;
use ceo_adapt::Execution;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Adapt,
    /// One VQE over every single and double excitation, exact exponential.
    Uccsd,
    /// Same operators as a product of exponentials, one per excitation.
    UccsdTrotterized,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    /// `iterations.csv` and `summary.json`.
    #[default]
    Csv,
    /// Additionally `iterations.json` with the full per-iteration records.
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExecutionChoice {
    Sequential,
    #[default]
    Parallel,
}

impl From<ExecutionChoice> for Execution {
    fn from(c: ExecutionChoice) -> Self {
        match c {
            ExecutionChoice::Sequential => Execution::Sequential,
            ExecutionChoice::Parallel => Execution::Parallel,
        }
    }
}

/// One experiment. Relative paths resolve against the config file's directory.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub fixture: PathBuf,
    #[serde(default)]
    pub geometry: Option<String>,
    /// Free-form name used by `compare`; defaults to the output directory name.
    #[serde(default)]
    pub label: Option<String>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub ordering: Ordering,
    /// Reserved: every algorithm here is deterministic.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: ReportFormat,
    #[serde(default)]
    pub execution: ExecutionChoice,
    #[serde(default)]
    pub adapt: AdaptConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.adapt
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Reads, parses and anchors relative paths at the file's directory.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.fixture = base.join(&cfg.fixture);
        cfg.output_dir = base.join(&cfg.output_dir);
        Ok(cfg)
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| {
            self.output_dir
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "run".to_owned())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ceo_adapt::adapt::PoolChoice;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = RunConfig::parse("fixture = \"h2.fcidump\"\noutput_dir = \"out\"\n").unwrap();
        assert_eq!(cfg.method, Method::Adapt);
        assert_eq!(cfg.ordering, Ordering::Interleaved);
        assert_eq!(cfg.adapt, AdaptConfig::default());
        assert_eq!(cfg.label(), "out");
    }

    #[test]
    fn nested_adapt_section() {
        let text = r#"
            fixture = "lih.fcidump"
            output_dir = "runs/lih"
            ordering = "block"
            [adapt]
            pool = "qeb"
            tetris = true
            max_iterations = 7
            [adapt.optimizer]
            gradient_tolerance = 1e-6
        "#;
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.adapt.pool, PoolChoice::Qeb);
        assert!(cfg.adapt.tetris);
        assert_eq!(cfg.adapt.max_iterations, 7);
        assert_eq!(cfg.adapt.optimizer.gradient_tolerance, 1e-6);
        assert_eq!(cfg.ordering, Ordering::Block);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_config_errors() {
        for text in [
            "fixture = \"a\"\noutput_dir = \"b\"\ncolour = 3\n",
            "fixture = \"a\"\noutput_dir = \"b\"\n[adapt]\npool = \"nope\"\n",
            "fixture = \"a\"\noutput_dir = \"b\"\n[adapt]\nepsilon = -1.0\n",
            "output_dir = \"b\"\n",
        ] {
            assert!(
                matches!(RunConfig::parse(text), Err(CliError::Config(_))),
                "{text}"
            );
        }
    }
}
