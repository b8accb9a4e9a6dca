use std::path::PathBuf;

use commchar_core::distribution::DEFAULT_BINS;
use commchar_core::{Criterion, DetectParams, EstimatorParams, ProfileConfig};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Detect,
    Domsets,
    Slopes,
    Metrics,
    Keywords,
    Report,
    All,
}

impl Stage {
    fn needs_communities(self) -> bool {
        !matches!(self, Stage::Detect | Stage::All)
    }
}

/// Everything that determines a run's output. The output directory is not
/// recorded in the manifest, so runs into different directories compare
/// equal.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub graph: PathBuf,
    pub communities: Option<PathBuf>,
    pub metadata: Option<PathBuf>,
    pub detect: DetectParams,
    pub k: usize,
    pub p: f64,
    pub estimator: EstimatorParams,
    pub bins: usize,
    #[serde(skip)]
    pub out: PathBuf,
    pub format: OutputFormat,
    pub workers: usize,
}

impl RunConfig {
    pub fn new(graph: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            graph: graph.into(),
            communities: None,
            metadata: None,
            detect: DetectParams::default(),
            k: 5,
            p: 0.8,
            estimator: EstimatorParams::default(),
            bins: DEFAULT_BINS,
            out: out.into(),
            format: OutputFormat::Csv,
            workers: 1,
        }
    }

    /// Sets the one seed that drives both detection and the estimators.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.detect.rng_seed = seed;
        self.estimator.seed = seed;
        self
    }

    pub fn profile(&self) -> ProfileConfig {
        ProfileConfig {
            k: self.k,
            p: self.p,
            estimator: self.estimator,
        }
    }

    pub fn validate(&self, stage: Stage) -> Result<(), CliError> {
        Criterion::Size(self.k).validate()?;
        Criterion::Ratio(self.p).validate()?;
        self.estimator.validate()?;
        self.detect.validate()?;
        if self.bins == 0 {
            return Err(CliError::Config("--bins must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        if stage.needs_communities() && self.communities.is_none() {
            return Err(CliError::Config(format!(
                "{} needs --communities",
                serde_json::to_string(&stage).unwrap().trim_matches('"')
            )));
        }
        if stage == Stage::Keywords && self.metadata.is_none() {
            return Err(CliError::Config("keywords needs --metadata".into()));
        }
        Ok(())
    }
}
