use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use nrecur_core::ClaimId;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Construct,
    Simulate,
    Cycle,
    #[default]
    Verify,
    Chain,
    Basin,
}

/// Which family `construct`, `simulate` and `cycle` operate on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    /// Single neuron, one per lane.
    X,
    /// Destabilized single neuron, one per lane.
    V,
    /// Shuffled composition of all lanes.
    #[default]
    Y,
    /// Target system, one per bifurcation index.
    W,
    /// Perturbed shuffled system, one per bifurcation index.
    Z,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TraceFormat {
    /// One `0`/`1` per step, a newline after every `memory` symbols.
    #[default]
    TextBits,
    /// One `value×count` line per run.
    RunLength,
}

impl TraceFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TraceFormat::TextBits => "bits",
            TraceFormat::RunLength => "rle",
        }
    }
}

/// One experiment: a TOML file with every field optional, then flag
/// overrides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Scale. Required except in `verify`, which defaults to m in {6, 11}.
    pub m: Option<usize>,
    /// Bifurcation indices; all valid ones when absent.
    pub d: Option<Vec<usize>>,
    pub mode: Mode,
    pub system: SystemKind,
    /// Lane for x and v systems; all lanes when absent.
    pub lane: Option<usize>,
    /// Step budget for cycle search; derived from the formulas when absent.
    pub budget: Option<u64>,
    /// Claim ids to run in `verify`; empty or `["all"]` runs everything.
    pub claims: Vec<String>,
    pub out: PathBuf,
    pub emit_traces: bool,
    pub trace_format: TraceFormat,
    /// Steps for `simulate`.
    pub steps: u64,
    /// Seed for basin sampling and the composition fuzz.
    pub seed: u64,
    /// Adds m in {16, 21} to the default verify scales.
    pub long: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            m: None,
            d: None,
            mode: Mode::default(),
            system: SystemKind::default(),
            lane: None,
            budget: None,
            claims: Vec::new(),
            out: PathBuf::from("nrecur-out"),
            emit_traces: false,
            trace_format: TraceFormat::default(),
            steps: 1000,
            seed: 0,
            long: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if let Some(m) = self.m {
            if m < 2 {
                bail!("m must be at least 2, got {m}");
            }
        } else if self.mode != Mode::Verify {
            bail!("mode {} needs m", format!("{:?}", self.mode).to_lowercase());
        }
        if self.budget == Some(0) {
            bail!("budget must be positive");
        }
        if self.steps == 0 && self.mode == Mode::Simulate {
            bail!("steps must be positive");
        }
        self.claim_filter()?;
        Ok(())
    }

    /// `None` means every claim.
    pub fn claim_filter(&self) -> anyhow::Result<Option<Vec<ClaimId>>> {
        if self.claims.is_empty() || self.claims.iter().any(|c| c == "all") {
            return Ok(None);
        }
        self.claims
            .iter()
            .map(|c| c.parse::<ClaimId>().map_err(anyhow::Error::from))
            .collect::<anyhow::Result<Vec<_>>>()
            .map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(ExperimentConfig::from_toml_str("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn full_file() {
        let c = ExperimentConfig::from_toml_str(
            r#"
            m = 6
            d = [0, 1]
            mode = "cycle"
            system = "z"
            budget = 5000
            claims = ["prop1", "chain"]
            out = "runs/a"
            emit_traces = true
            trace_format = "run-length"
            seed = 9
            "#,
        )
        .unwrap();
        assert_eq!(c.m, Some(6));
        assert_eq!(c.mode, Mode::Cycle);
        assert_eq!(c.system, SystemKind::Z);
        assert_eq!(c.trace_format, TraceFormat::RunLength);
        assert_eq!(
            c.claim_filter().unwrap(),
            Some(vec![ClaimId::Prop1, ClaimId::Chain])
        );
        c.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        assert!(ExperimentConfig::from_toml_str("mm = 3").is_err());
        assert!(ExperimentConfig::from_toml_str("mode = \"dance\"").is_err());
        let c = ExperimentConfig {
            m: Some(1),
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = ExperimentConfig {
            mode: Mode::Cycle,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = ExperimentConfig {
            claims: vec!["prop9".into()],
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }
}
