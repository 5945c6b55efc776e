use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use nrecur_core::construction::{
    build_v, build_w, build_x, build_y, build_z_with_plan, perturbation_plan,
};
use nrecur_core::cycles::detect_cycle;
use nrecur_core::engine::run;
use nrecur_core::numtheory::{to_u64, window_params};
use nrecur_core::verify::{
    check_basin, check_chain, default_suite, evaluate_all, measure_y, period_chain, theory_budget,
    BasinSelector,
};
use nrecur_core::{
    CompiledSystem, CycleReport, Error, PerturbationPlan, RecurrenceSystem, WindowParams,
};

use crate::config::{ExperimentConfig, Mode, SystemKind};
use crate::report::{
    write_cycles_csv, ChainSummary, CycleRow, PlanSummary, RunReport, SystemSummary,
};
use crate::trace::export_trace;

/// Traces longer than this are not written in `cycle` mode.
const TRACE_CAP: u64 = 10_000_000;

const DEFAULT_SCALES: [usize; 2] = [6, 11];
const LONG_SCALES: [usize; 2] = [16, 21];

struct Selected {
    system: RecurrenceSystem,
    d: Option<usize>,
    i: Option<usize>,
    plan: Option<PerturbationPlan>,
    /// Formula values of `(T, P)`.
    predicted: (u64, u64),
}

fn select(params: &WindowParams, config: &ExperimentConfig) -> anyhow::Result<Vec<Selected>> {
    let lanes: Vec<usize> = config.lane.map_or_else(|| (0..params.rho).collect(), |i| vec![i]);
    let ds: Vec<usize> = config.d.clone().unwrap_or_else(|| (0..params.rho).collect());
    let mut out = Vec::new();
    match config.system {
        SystemKind::X | SystemKind::V => {
            for i in lanes {
                let x = config.system == SystemKind::X;
                let system = if x { build_x(params, i)? } else { build_v(params, i)? };
                let p = params.primes[i] as u64;
                let predicted = if x { (0, p) } else { (params.k as u64 - p, 1) };
                out.push(Selected { system, d: None, i: Some(i), plan: None, predicted });
            }
        }
        SystemKind::Y => out.push(Selected {
            system: build_y(params),
            d: None,
            i: None,
            plan: None,
            predicted: (0, to_u64(&params.l2())?),
        }),
        SystemKind::W | SystemKind::Z => {
            for d in ds {
                let l0 = to_u64(&params.cycle_lengths(d)?.l0)?;
                if config.system == SystemKind::W {
                    out.push(Selected {
                        system: build_w(params, d)?,
                        d: Some(d),
                        i: None,
                        plan: None,
                        predicted: (params.w_transient(d)?, l0),
                    });
                } else {
                    let plan = perturbation_plan(params, d)?;
                    out.push(Selected {
                        system: build_z_with_plan(params, &plan)?,
                        d: Some(d),
                        i: None,
                        predicted: (to_u64(&params.z_transient(d)?)?, l0),
                        plan: Some(plan),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn summarize(s: &Selected) -> SystemSummary {
    let plan = s.plan.as_ref().map(|p| PlanSummary {
        b0: p.b0.iter().copied().collect(),
        a: p.a.iter().copied().collect(),
        tot: p.tot,
        lambda: p.lambda.to_string(),
        beta: p.beta_d.to_string(),
        xi: p.xi_d.to_string(),
        theta2: p.theta2.to_string(),
    });
    SystemSummary {
        label: s.system.label.clone(),
        memory: s.system.memory,
        threshold: s.system.threshold.to_string(),
        denominator: s.system.common_denominator().to_string(),
        weights: s
            .system
            .nonzero_weights()
            .map(|(j, w)| (j, w.to_string()))
            .collect(),
        init_ones: s.system.init.iter().filter(|&&b| b).count(),
        plan,
        steps: None,
        trace_ones: None,
    }
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect::<String>()
        .trim_matches('_')
        .to_owned()
}

struct Runner<'a> {
    config: &'a ExperimentConfig,
    report: RunReport,
    traces: Vec<(String, usize, Vec<bool>)>,
}

impl Runner<'_> {
    fn scale(&self) -> anyhow::Result<WindowParams> {
        let m = self.config.m.context("m is required for this mode")?;
        Ok(window_params(m)?)
    }

    fn construct(&mut self, params: &WindowParams) -> anyhow::Result<()> {
        for s in select(params, self.config)? {
            self.report.systems.push(summarize(&s));
        }
        Ok(())
    }

    fn simulate(&mut self, params: &WindowParams) -> anyhow::Result<()> {
        for s in select(params, self.config)? {
            let cs = CompiledSystem::compile(&s.system)?;
            let trace = run(&cs, &s.system.init, self.config.steps)?;
            let mut summary = summarize(&s);
            summary.steps = Some(self.config.steps);
            summary.trace_ones = Some(trace.iter().filter(|&&b| b).count());
            self.report.systems.push(summary);
            if self.config.emit_traces {
                self.traces.push((s.system.label.clone(), s.system.memory, trace));
            }
        }
        Ok(())
    }

    fn measure(&self, params: &WindowParams, s: &Selected) -> nrecur_core::Result<CycleReport> {
        let (t, p) = s.predicted;
        if self.config.system == SystemKind::Y && self.config.budget.is_none() {
            return measure_y(params);
        }
        let cs = CompiledSystem::compile(&s.system)?;
        let budget = self
            .config
            .budget
            .unwrap_or_else(|| theory_budget(t, p, s.system.memory));
        Ok(detect_cycle(&cs, &s.system.init, budget)?.with_prediction(t, p))
    }

    fn cycle(&mut self, params: &WindowParams) -> anyhow::Result<()> {
        for s in select(params, self.config)? {
            let outcome = self.measure(params, &s);
            let (report, error) = match outcome {
                Ok(r) => (Some(r), None),
                Err(e @ (Error::BudgetExceeded { .. } | Error::PredictionFailed { .. })) => {
                    self.report
                        .diagnostics
                        .push(format!("{}: {e}", s.system.label));
                    (None, Some(e.to_string()))
                }
                Err(e) => return Err(e.into()),
            };
            if self.config.emit_traces {
                if let Some(r) = &report {
                    let steps = r.measured_transient + r.measured_period;
                    if steps <= TRACE_CAP {
                        let cs = CompiledSystem::compile(&s.system)?;
                        let trace = run(&cs, &s.system.init, steps)?;
                        self.traces.push((s.system.label.clone(), s.system.memory, trace));
                    } else {
                        self.report.diagnostics.push(format!(
                            "{}: trace of {steps} steps not written (cap {TRACE_CAP})",
                            s.system.label
                        ));
                    }
                }
            }
            self.report.cycles.push(CycleRow {
                m: params.m,
                system: s.system.label.clone(),
                d: s.d,
                i: s.i,
                report,
                error,
            });
        }
        Ok(())
    }

    fn chain(&mut self, params: &WindowParams) -> anyhow::Result<()> {
        let links = period_chain(params)?;
        let periods: Vec<u64> = links.iter().map(|l| l.report.measured_period).collect();
        let divides = periods.windows(2).map(|w| w[0] % w[1] == 0).collect();
        self.report.chain = Some(ChainSummary {
            m: params.m,
            divides,
            zero_fixed_point: links.last().is_some_and(|l| l.zero_attractor),
            periods,
        });
        for link in links {
            self.report.cycles.push(CycleRow {
                m: params.m,
                system: link.label,
                d: link.d,
                i: None,
                report: Some(link.report),
                error: None,
            });
        }
        self.report.claims.push(check_chain(params.m)?);
        Ok(())
    }

    fn basin(&mut self, params: &WindowParams) -> anyhow::Result<()> {
        let beta_min = params.beta_m[params.beta_min_index()];
        let ds: Vec<usize> = match &self.config.d {
            Some(ds) => ds.clone(),
            None => (0..params.rho.min(beta_min)).collect(),
        };
        for d in ds {
            let selector = BasinSelector::auto(beta_min.saturating_sub(d), self.config.seed);
            let task = nrecur_core::ClaimTask {
                seed: self.config.seed,
                ..nrecur_core::ClaimTask::new(nrecur_core::ClaimId::Basin, Some(params.m), Some(d))
            };
            let result = match check_basin(params.m, d, selector) {
                Ok(r) => r,
                Err(Error::HypothesisUnmet { .. }) => task.evaluate(),
                Err(e) => return Err(e.into()),
            };
            self.report.claims.push(result);
        }
        Ok(())
    }

    fn verify(&mut self) -> anyhow::Result<()> {
        let scales: Vec<usize> = match self.config.m {
            Some(m) => vec![m],
            None if self.config.long => DEFAULT_SCALES.iter().chain(&LONG_SCALES).copied().collect(),
            None => DEFAULT_SCALES.to_vec(),
        };
        for &m in &scales {
            self.report.params.push(window_params(m)?);
        }
        let mut tasks = default_suite(&scales, self.config.seed)?;
        if let Some(filter) = self.config.claim_filter()? {
            tasks.retain(|t| filter.contains(&t.claim));
        }
        if let Some(ds) = &self.config.d {
            tasks.retain(|t| t.d.map_or(true, |d| ds.contains(&d)));
        }
        if tasks.is_empty() {
            bail!("claim filter selects no work");
        }
        self.report.claims = evaluate_all(&tasks);
        Ok(())
    }

    fn execute(&mut self) -> anyhow::Result<()> {
        if self.config.mode == Mode::Verify {
            return self.verify();
        }
        let params = self.scale()?;
        self.report.params.push(params.clone());
        match self.config.mode {
            Mode::Construct => self.construct(&params),
            Mode::Simulate => self.simulate(&params),
            Mode::Cycle => self.cycle(&params),
            Mode::Chain => self.chain(&params),
            Mode::Basin => self.basin(&params),
            Mode::Verify => unreachable!("handled above"),
        }
    }
}

/// Runs the experiment and writes `report.json`, `cycles.csv` (when there
/// are cycle rows) and traces under `config.out`.
pub fn cmd_run(config: &ExperimentConfig) -> anyhow::Result<RunReport> {
    config.validate()?;
    let started = Instant::now();
    let mut runner = Runner {
        config,
        report: RunReport::new(config.clone()),
        traces: Vec::new(),
    };
    runner.execute()?;
    let Runner {
        mut report, traces, ..
    } = runner;
    report.settle();
    report.wall_clock_seconds = started.elapsed().as_secs_f64();

    let out = &config.out;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    if !report.cycles.is_empty() {
        write_cycles_csv(&report.cycles, &out.join("cycles.csv"))?;
    }
    if !traces.is_empty() {
        let dir = out.join("traces");
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (label, memory, trace) in &traces {
            let path: PathBuf =
                dir.join(format!("{}.{}", file_stem(label), config.trace_format.extension()));
            export_trace(trace, *memory, &path, config.trace_format)?;
        }
    }
    let path = out.join("report.json");
    let json = serde_json::to_string_pretty(&report)?;
    fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stems_are_path_safe() {
        assert_eq!(file_stem("z(m=6,d=0)"), "z_m_6_d_0");
        assert_eq!(file_stem("x(m=11,i=2)"), "x_m_11_i_2");
    }

    #[test]
    fn selection_predictions() {
        let p = window_params(6).unwrap();
        let cfg = |system| ExperimentConfig {
            m: Some(6),
            system,
            ..Default::default()
        };
        let v = select(&p, &cfg(SystemKind::V)).unwrap();
        assert_eq!(v.iter().map(|s| s.predicted).collect::<Vec<_>>(), vec![(53, 1), (57, 1)]);
        let z = select(&p, &cfg(SystemKind::Z)).unwrap();
        assert_eq!(z.iter().map(|s| s.predicted).collect::<Vec<_>>(), vec![(139, 26), (556, 1)]);
        let w = select(&p, &cfg(SystemKind::W)).unwrap();
        assert_eq!(w.iter().map(|s| s.predicted).collect::<Vec<_>>(), vec![(105, 26), (114, 1)]);
    }
}
