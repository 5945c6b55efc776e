use std::path::Path;

use anyhow::Context;
use nrecur_core::{ClaimResult, CycleReport, WindowParams};
use serde::Serialize;

use crate::config::ExperimentConfig;

/// Everything one run produced. Field names are the documented schema.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub params: Vec<WindowParams>,
    pub systems: Vec<SystemSummary>,
    pub cycles: Vec<CycleRow>,
    pub chain: Option<ChainSummary>,
    pub claims: Vec<ClaimResult>,
    pub diagnostics: Vec<String>,
    pub all_passed: bool,
    pub wall_clock_seconds: f64,
}

impl RunReport {
    pub fn new(config: ExperimentConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            config,
            params: Vec::new(),
            systems: Vec::new(),
            cycles: Vec::new(),
            chain: None,
            claims: Vec::new(),
            diagnostics: Vec::new(),
            all_passed: true,
            wall_clock_seconds: 0.0,
        }
    }

    /// Recomputes `all_passed` from claims and cycle rows.
    pub fn settle(&mut self) {
        self.all_passed = self.claims.iter().all(|c| c.passed)
            && self.cycles.iter().all(CycleRow::passed)
            && self.chain.as_ref().map_or(true, ChainSummary::holds);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanSummary {
    pub b0: Vec<usize>,
    pub a: Vec<usize>,
    pub tot: usize,
    pub lambda: String,
    pub beta: String,
    pub xi: String,
    pub theta2: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemSummary {
    pub label: String,
    pub memory: usize,
    pub threshold: String,
    pub denominator: String,
    /// `(j, a_j)` for every nonzero coefficient of `x(n - j)`.
    pub weights: Vec<(usize, String)>,
    pub init_ones: usize,
    pub plan: Option<PlanSummary>,
    /// Filled by `simulate`.
    pub steps: Option<u64>,
    pub trace_ones: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleRow {
    pub m: usize,
    pub system: String,
    pub d: Option<usize>,
    pub i: Option<usize>,
    pub report: Option<CycleReport>,
    pub error: Option<String>,
}

impl CycleRow {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.report.as_ref().is_some_and(CycleReport::matches)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainSummary {
    pub m: usize,
    pub periods: Vec<u64>,
    /// `divides[n]`: period `n + 1` divides period `n`.
    pub divides: Vec<bool>,
    pub zero_fixed_point: bool,
}

impl ChainSummary {
    pub fn holds(&self) -> bool {
        self.zero_fixed_point && self.divides.iter().all(|&b| b)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    m: usize,
    system: &'a str,
    d: Option<usize>,
    i: Option<usize>,
    #[serde(rename = "T_measured")]
    t_measured: Option<u64>,
    #[serde(rename = "P_measured")]
    p_measured: Option<u64>,
    #[serde(rename = "T_predicted")]
    t_predicted: Option<u64>,
    #[serde(rename = "P_predicted")]
    p_predicted: Option<u64>,
    #[serde(rename = "match")]
    matches: bool,
}

pub fn write_cycles_csv(rows: &[CycleRow], path: &Path) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        let r = row.report.as_ref();
        w.serialize(CsvRow {
            m: row.m,
            system: &row.system,
            d: row.d,
            i: row.i,
            t_measured: r.map(|r| r.measured_transient),
            p_measured: r.map(|r| r.measured_period),
            t_predicted: r.and_then(|r| r.predicted_transient),
            p_predicted: r.and_then(|r| r.predicted_period),
            matches: row.passed(),
        })
        .with_context(|| format!("writing {}", path.display()))?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
