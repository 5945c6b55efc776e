//! Executable checks of the structural and dynamical claims.
//!
//! Every claim is identified by a [`ClaimId`] and evaluated for concrete
//! parameters into a [`ClaimResult`]. A failing result always carries a
//! [`Counterexample`] naming the time step or index where the expectation
//! broke. The same registry feeds the test suite and the command line.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::construction::{
    b0_algebraic, build_v, build_w, build_x, build_y, build_z_with_plan, chain_perturbation,
    compute_b0, constant_system, perturbation_plan, shuffle_compose, single_weights,
    x_closed_form, y_closed_form, B0Method, C3Reading, IndexSets, RecurrenceSystem,
};
use crate::cycles::{attractor_states, detect_cycle, state_at, verify_predicted, CycleReport};
use crate::engine::{run, CompiledSystem};
use crate::error::{Error, Result};
use crate::numtheory::{is_prime, to_u64, window_params, WindowParams};

/// Largest `L2` for which the shuffled-system claims join the default suite.
pub const SHUFFLED_STEP_LIMIT: u64 = 50_000_000;

/// Periods up to this size are measured from scratch; larger ones are
/// certified against the formula with [`verify_predicted`].
const DETECT_LIMIT: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimId {
    WindowParamBounds,
    Prop1,
    Prop2,
    PosDisjoint,
    XCycle,
    VFixed,
    SumBounds,
    S1Range,
    YCycle,
    YDeshuffle,
    WCycle,
    B0MethodsAgree,
    ChainEqualsDirect,
    Phases,
    ZSummary,
    Chain,
    Basin,
    Example1Period2,
    Example1Period3,
    DivisorRule,
}

/// Which checker evaluates a claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimKind {
    Static,
    Dynamics,
    Phases,
    Chain,
    Basin,
    Composition,
}

impl ClaimId {
    pub const ALL: [ClaimId; 20] = [
        ClaimId::WindowParamBounds,
        ClaimId::Prop1,
        ClaimId::Prop2,
        ClaimId::PosDisjoint,
        ClaimId::XCycle,
        ClaimId::VFixed,
        ClaimId::SumBounds,
        ClaimId::S1Range,
        ClaimId::YCycle,
        ClaimId::YDeshuffle,
        ClaimId::WCycle,
        ClaimId::B0MethodsAgree,
        ClaimId::ChainEqualsDirect,
        ClaimId::Phases,
        ClaimId::ZSummary,
        ClaimId::Chain,
        ClaimId::Basin,
        ClaimId::Example1Period2,
        ClaimId::Example1Period3,
        ClaimId::DivisorRule,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::WindowParamBounds => "window_param_bounds",
            ClaimId::Prop1 => "prop1",
            ClaimId::Prop2 => "prop2",
            ClaimId::PosDisjoint => "pos_disjoint",
            ClaimId::XCycle => "x_cycle",
            ClaimId::VFixed => "v_fixed",
            ClaimId::SumBounds => "sum_bounds",
            ClaimId::S1Range => "s1_range",
            ClaimId::YCycle => "y_cycle",
            ClaimId::YDeshuffle => "y_deshuffle",
            ClaimId::WCycle => "w_cycle",
            ClaimId::B0MethodsAgree => "b0_methods_agree",
            ClaimId::ChainEqualsDirect => "chain_equals_direct",
            ClaimId::Phases => "phases",
            ClaimId::ZSummary => "z_summary",
            ClaimId::Chain => "chain",
            ClaimId::Basin => "basin",
            ClaimId::Example1Period2 => "example1_period2",
            ClaimId::Example1Period3 => "example1_period3",
            ClaimId::DivisorRule => "divisor_rule",
        }
    }

    pub fn kind(self) -> ClaimKind {
        use ClaimId::*;
        match self {
            WindowParamBounds | Prop1 | Prop2 | PosDisjoint | B0MethodsAgree
            | ChainEqualsDirect => ClaimKind::Static,
            XCycle | VFixed | SumBounds | S1Range | YCycle | YDeshuffle | WCycle | ZSummary => {
                ClaimKind::Dynamics
            }
            Phases => ClaimKind::Phases,
            Chain => ClaimKind::Chain,
            Basin => ClaimKind::Basin,
            Example1Period2 | Example1Period3 | DivisorRule => ClaimKind::Composition,
        }
    }

    /// Claims evaluated once per bifurcation index `d`.
    pub fn per_bifurcation(self) -> bool {
        matches!(
            self,
            ClaimId::WCycle | ClaimId::ZSummary | ClaimId::Phases | ClaimId::Basin
        )
    }

    /// Claims that simulate the shuffled systems over a full long cycle.
    fn needs_shuffled_run(self) -> bool {
        matches!(
            self,
            ClaimId::SumBounds
                | ClaimId::YCycle
                | ClaimId::YDeshuffle
                | ClaimId::WCycle
                | ClaimId::ZSummary
                | ClaimId::Phases
                | ClaimId::Chain
                | ClaimId::Basin
        )
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownClaim(pub String);

impl fmt::Display for UnknownClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown claim id {:?}", self.0)
    }
}

impl std::error::Error for UnknownClaim {}

impl FromStr for ClaimId {
    type Err = UnknownClaim;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownClaim(s.to_owned()))
    }
}

/// Where and how a claim broke.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Time step of the offending output, when the claim is about a trace.
    pub time: Option<u64>,
    pub expected: String,
    pub observed: String,
}

impl Counterexample {
    pub fn at(time: u64, expected: impl fmt::Display, observed: impl fmt::Display) -> Self {
        Self {
            time: Some(time),
            expected: expected.to_string(),
            observed: observed.to_string(),
        }
    }

    pub fn value(expected: impl fmt::Display, observed: impl fmt::Display) -> Self {
        Self {
            time: None,
            expected: expected.to_string(),
            observed: observed.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: ClaimId,
    pub m: Option<usize>,
    pub d: Option<usize>,
    /// Lane index of the failure, for claims checked lane by lane.
    pub i: Option<usize>,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<Counterexample>,
}

/// How `check_basin` picks the free initial prefixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasinSelector {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

impl BasinSelector {
    /// Exhaustive up to 2^10 prefixes, otherwise 64 seeded samples.
    pub fn auto(free_bits: usize, seed: u64) -> Self {
        if free_bits <= 10 {
            BasinSelector::Exhaustive
        } else {
            BasinSelector::Sample { count: 64, seed }
        }
    }
}

/// One unit of work for the registry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimTask {
    pub claim: ClaimId,
    pub m: Option<usize>,
    pub d: Option<usize>,
    pub seed: u64,
}

impl ClaimTask {
    pub fn new(claim: ClaimId, m: Option<usize>, d: Option<usize>) -> Self {
        Self {
            claim,
            m,
            d,
            seed: 0,
        }
    }

    fn try_evaluate(&self) -> Result<ClaimResult> {
        let m = || {
            self.m.ok_or(Error::UnsupportedClaim {
                claim: self.claim.as_str(),
                checker: "a task without m",
            })
        };
        let d = || {
            self.d.ok_or(Error::UnsupportedClaim {
                claim: self.claim.as_str(),
                checker: "a task without d",
            })
        };
        match self.claim.kind() {
            ClaimKind::Static => check_static(self.claim, m()?),
            ClaimKind::Dynamics => check_dynamics(self.claim, m()?, self.d),
            ClaimKind::Phases => check_phases(m()?, d()?),
            ClaimKind::Chain => check_chain(m()?),
            ClaimKind::Basin => {
                let params = window_params(m()?)?;
                let free = params.beta_m[params.beta_min_index()].saturating_sub(d()?);
                check_basin(m()?, d()?, BasinSelector::auto(free, self.seed))
            }
            ClaimKind::Composition => check_composition(self.claim, self.seed),
        }
    }

    /// Runs the check; operational errors become failing results.
    pub fn evaluate(&self) -> ClaimResult {
        self.try_evaluate().unwrap_or_else(|err| {
            Ctx::new(self.claim, self.m, self.d).fail(
                None,
                Counterexample::value("check completes", format!("error: {err}")),
                err.to_string(),
            )
        })
    }
}

/// Every claim that is feasible for each `m` at desk scale, plus the
/// composition claims once. Claims that simulate the shuffled systems are
/// kept only when `L2 <= SHUFFLED_STEP_LIMIT`.
pub fn default_suite(ms: &[usize], seed: u64) -> Result<Vec<ClaimTask>> {
    let mut tasks = Vec::new();
    for &m in ms {
        let params = window_params(m)?;
        let shuffled_ok = to_u64(&params.l2()).is_ok_and(|l2| l2 <= SHUFFLED_STEP_LIMIT);
        let beta_min = params.beta_m[params.beta_min_index()];
        for claim in ClaimId::ALL {
            if claim.kind() == ClaimKind::Composition || (claim.needs_shuffled_run() && !shuffled_ok)
            {
                continue;
            }
            if claim.per_bifurcation() {
                for d in 0..params.rho {
                    if claim == ClaimId::Basin && d >= beta_min {
                        continue;
                    }
                    tasks.push(ClaimTask {
                        seed,
                        ..ClaimTask::new(claim, Some(m), Some(d))
                    });
                }
            } else {
                tasks.push(ClaimTask {
                    seed,
                    ..ClaimTask::new(claim, Some(m), None)
                });
            }
        }
    }
    for claim in [
        ClaimId::Example1Period2,
        ClaimId::Example1Period3,
        ClaimId::DivisorRule,
    ] {
        tasks.push(ClaimTask {
            seed,
            ..ClaimTask::new(claim, None, None)
        });
    }
    Ok(tasks)
}

/// Evaluates independent tasks in parallel; results keep the task order.
pub fn evaluate_all(tasks: &[ClaimTask]) -> Vec<ClaimResult> {
    tasks.par_iter().map(ClaimTask::evaluate).collect()
}

struct Ctx {
    claim: ClaimId,
    m: Option<usize>,
    d: Option<usize>,
}

impl Ctx {
    fn new(claim: ClaimId, m: Option<usize>, d: Option<usize>) -> Self {
        Self { claim, m, d }
    }

    fn pass(&self, detail: impl Into<String>) -> ClaimResult {
        ClaimResult {
            claim: self.claim,
            m: self.m,
            d: self.d,
            i: None,
            passed: true,
            detail: detail.into(),
            counterexample: None,
        }
    }

    fn fail(
        &self,
        i: Option<usize>,
        counterexample: Counterexample,
        detail: impl Into<String>,
    ) -> ClaimResult {
        ClaimResult {
            claim: self.claim,
            m: self.m,
            d: self.d,
            i,
            passed: false,
            detail: detail.into(),
            counterexample: Some(counterexample),
        }
    }
}

fn unsupported(claim: ClaimId, checker: &'static str) -> Error {
    Error::UnsupportedClaim {
        claim: claim.as_str(),
        checker,
    }
}

/// Search budget comfortably above what Brent's method needs for `(T, P)`.
pub fn theory_budget(transient: u64, period: u64, memory: usize) -> u64 {
    4 * (transient + period) + 4 * memory as u64 + 64
}

/// Measures `(T, P)` of `system` and attaches the prediction.
pub fn measure(system: &RecurrenceSystem, transient: u64, period: u64) -> Result<CycleReport> {
    let cs = CompiledSystem::compile(system)?;
    let budget = theory_budget(transient, period, system.memory);
    Ok(detect_cycle(&cs, &system.init, budget)?.with_prediction(transient, period))
}

/// `y` has transient 0 and period `L2`: measured outright when `L2` is
/// small, certified against the formula otherwise.
pub fn measure_y(params: &WindowParams) -> Result<CycleReport> {
    let y = build_y(params);
    let l2 = to_u64(&params.l2())?;
    if l2 <= DETECT_LIMIT {
        return measure(&y, 0, l2);
    }
    let cs = CompiledSystem::compile(&y)?;
    match verify_predicted(&cs, &y.init, 0, l2) {
        Ok(report) => Ok(report),
        Err(Error::PredictionFailed { .. }) => {
            let budget = theory_budget(0, l2, y.memory);
            Ok(detect_cycle(&cs, &y.init, budget)?.with_prediction(0, l2))
        }
        Err(err) => Err(err),
    }
}

fn pair(report: &CycleReport) -> String {
    format!("(T={}, P={})", report.measured_transient, report.measured_period)
}

fn predicted(report: &CycleReport) -> String {
    format!(
        "(T={}, P={})",
        report.predicted_transient.unwrap_or_default(),
        report.predicted_period.unwrap_or_default()
    )
}

fn mismatch(ctx: &Ctx, i: Option<usize>, label: &str, report: &CycleReport) -> ClaimResult {
    ctx.fail(
        i,
        Counterexample {
            time: Some(report.measured_transient),
            expected: predicted(report),
            observed: pair(report),
        },
        format!("{label}: measured {} differs from formula", pair(report)),
    )
}

// ---------------------------------------------------------------- static

pub fn check_static(claim: ClaimId, m: usize) -> Result<ClaimResult> {
    let params = window_params(m)?;
    let ctx = Ctx::new(claim, Some(m), None);
    match claim {
        ClaimId::WindowParamBounds => Ok(window_bounds(&ctx, &params)),
        ClaimId::Prop1 => prop1(&ctx, &params),
        ClaimId::Prop2 => Ok(prop2(&ctx, &params)),
        ClaimId::PosDisjoint => Ok(pos_disjoint(&ctx, &params)),
        ClaimId::B0MethodsAgree => b0_agree(&ctx, &params),
        ClaimId::ChainEqualsDirect => chain_direct(&ctx, &params),
        _ => Err(unsupported(claim, "check_static")),
    }
}

fn window_bounds(ctx: &Ctx, p: &WindowParams) -> ClaimResult {
    let m = p.m;
    let rho_cap = (m - 1).div_ceil(2);
    if p.rho != p.primes.len() || p.rho > rho_cap {
        return ctx.fail(
            None,
            Counterexample::value(format!("rho <= {rho_cap}"), format!("rho = {}", p.rho)),
            "prime count bound",
        );
    }
    if p.k != (6 * m - 1) * p.rho || p.h != p.rho * p.k {
        return ctx.fail(
            None,
            Counterexample::value(
                format!("k = {}, h = {}", (6 * m - 1) * p.rho, p.rho * p.rho * (6 * m - 1)),
                format!("k = {}, h = {}", p.k, p.h),
            ),
            "memory lengths",
        );
    }
    for (i, &q) in p.primes.iter().enumerate() {
        let checks = [
            (is_prime(q) && 2 * m < q && q < 3 * m, "prime in (2m, 3m)"),
            (i == 0 || p.primes[i - 1] > q, "strictly descending"),
            (p.alphas[i] + q == 3 * m, "alpha = 3m - p"),
            (p.k == q * p.mu[i] + p.beta_m[i], "k = p mu + beta"),
            (p.beta_m[i] < q, "0 <= beta < p"),
            (2 * p.rho <= p.mu[i] && p.mu[i] <= 3 * p.rho, "2 rho <= mu <= 3 rho"),
        ];
        if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
            return ctx.fail(
                Some(i),
                Counterexample::value(
                    *what,
                    format!("p = {q}, mu = {}, beta = {}", p.mu[i], p.beta_m[i]),
                ),
                format!("lane {i} violates {what}"),
            );
        }
    }
    ctx.pass(format!(
        "primes {:?}, rho = {}, mu = {:?}, beta = {:?}",
        p.primes, p.rho, p.mu, p.beta_m
    ))
}

fn prop1(ctx: &Ctx, p: &WindowParams) -> Result<ClaimResult> {
    let sets = IndexSets::new(p);
    let mut checked = 0usize;
    let mut largest = 0usize;
    for (i, &q) in p.primes.iter().enumerate() {
        for d in 1..q {
            let card = sets.e_set(i, d)?.len();
            checked += 1;
            largest = largest.max(card);
            if card + 1 > p.rho {
                return Ok(ctx.fail(
                    Some(i),
                    Counterexample::value(
                        format!("card E(lane {i}, {d}) <= {}", p.rho - 1),
                        card,
                    ),
                    format!("E set too large at offset {d}"),
                ));
            }
        }
    }
    Ok(ctx.pass(format!(
        "{checked} (lane, offset) pairs, largest card E = {largest} <= {}",
        p.rho - 1
    )))
}

fn prop2(ctx: &Ctx, p: &WindowParams) -> ClaimResult {
    let (a, theta) = single_weights(p);
    let sets = IndexSets::new(p);
    if let Some(&j) = sets.g.iter().find(|&&j| a[j - 1] != 0) {
        return ctx.fail(
            None,
            Counterexample::value(format!("weight 0 at {j} (outside F)"), a[j - 1]),
            "nonzero weight outside F",
        );
    }
    let mut sums = Vec::with_capacity(p.rho);
    for (i, pos) in sets.pos.iter().enumerate() {
        let sum: i64 = pos.iter().map(|&j| a[j - 1]).sum();
        if sum != theta {
            return ctx.fail(
                Some(i),
                Counterexample::value(format!("sum over Pos = {theta}"), sum),
                format!("lane {i} weight sum"),
            );
        }
        sums.push(sum);
    }
    ctx.pass(format!("lane sums {sums:?} = 2 rho"))
}

fn pos_disjoint(ctx: &Ctx, p: &WindowParams) -> ClaimResult {
    let sets = IndexSets::new(p);
    for (i, a) in sets.pos.iter().enumerate() {
        for (j, b) in sets.pos.iter().enumerate().skip(i + 1) {
            if let Some(x) = a.intersection(b).next() {
                return ctx.fail(
                    Some(i),
                    Counterexample::value(format!("Pos({i}) and Pos({j}) disjoint"), format!("both contain {x}")),
                    "overlapping Pos sets",
                );
            }
        }
    }
    let all: BTreeSet<usize> = sets.f.union(&sets.g).copied().collect();
    let top = sets.pos.iter().flatten().max().copied().unwrap_or(0);
    if !sets.pairwise_disjoint() || all.len() != p.k || sets.f.len() + sets.g.len() != p.k || top > p.k {
        return ctx.fail(
            None,
            Counterexample::value(
                format!("F and G partition 1..={}", p.k),
                format!("|F| = {}, |G| = {}, max Pos = {top}", sets.f.len(), sets.g.len()),
            ),
            "F/G partition",
        );
    }
    ctx.pass(format!("|F| = {} = 2 rho^2, |G| = {}", sets.f.len(), sets.g.len()))
}

fn b0_agree(ctx: &Ctx, p: &WindowParams) -> Result<ClaimResult> {
    let mut tots = Vec::with_capacity(p.rho);
    let mut residue_reading_agrees = true;
    for d in 0..p.rho {
        let alg = compute_b0(p, d, B0Method::Algebraic)?;
        let def = compute_b0(p, d, B0Method::Definitional)?;
        if let Some(&f) = alg.symmetric_difference(&def).next() {
            return Ok(ctx.fail(
                None,
                Counterexample::value(
                    format!("d = {d}: {f} in scan = {}", def.contains(&f)),
                    format!("{f} in residue union = {}", alg.contains(&f)),
                ),
                format!("B0({d}) constructions differ"),
            ));
        }
        residue_reading_agrees &= b0_algebraic(p, d, C3Reading::CanonicalResidue)? == def;
        tots.push(def.len());
    }
    Ok(ctx.pass(format!(
        "Tot = {tots:?}; {} reading matches the scan, {} reading {}",
        C3Reading::CongruenceClass,
        C3Reading::CanonicalResidue,
        if residue_reading_agrees { "also matches" } else { "does not" }
    )))
}

fn chain_direct(ctx: &Ctx, p: &WindowParams) -> Result<ClaimResult> {
    let plans = (0..p.rho)
        .map(|d| perturbation_plan(p, d))
        .collect::<Result<Vec<_>>>()?;
    for d in 0..p.rho - 1 {
        let z = build_z_with_plan(p, &plans[d])?;
        let chained = chain_perturbation(&z, &plans[d], &plans[d + 1])?;
        let direct = build_z_with_plan(p, &plans[d + 1])?;
        let ctx_d = Ctx::new(ctx.claim, ctx.m, Some(d));
        if let Some(j) = (0..direct.memory).find(|&j| chained.weights[j] != direct.weights[j]) {
            return Ok(ctx_d.fail(
                None,
                Counterexample::value(
                    format!("weight {} = {}", j + 1, direct.weights[j]),
                    &chained.weights[j],
                ),
                format!("weights differ chaining {d} -> {}", d + 1),
            ));
        }
        if chained.threshold != direct.threshold || chained.init != direct.init {
            return Ok(ctx_d.fail(
                None,
                Counterexample::value(
                    format!("threshold {}", direct.threshold),
                    &chained.threshold,
                ),
                format!("threshold or window differs chaining {d} -> {}", d + 1),
            ));
        }
    }
    Ok(ctx.pass(format!("{} chained steps equal direct construction", p.rho - 1)))
}

// -------------------------------------------------------------- dynamics

pub fn check_dynamics(claim: ClaimId, m: usize, d: Option<usize>) -> Result<ClaimResult> {
    let params = window_params(m)?;
    let ctx = Ctx::new(claim, Some(m), d);
    let need_d = || d.ok_or(unsupported(claim, "check_dynamics without d"));
    match claim {
        ClaimId::XCycle => x_cycle(&ctx, &params),
        ClaimId::VFixed => v_fixed(&ctx, &params),
        ClaimId::SumBounds => sum_bounds(&ctx, &params),
        ClaimId::S1Range => s1_range(&ctx, &params),
        ClaimId::YCycle => y_cycle(&ctx, &params),
        ClaimId::YDeshuffle => y_deshuffle(&ctx, &params),
        ClaimId::WCycle => w_cycle(&ctx, &params, need_d()?),
        ClaimId::ZSummary => z_summary(&ctx, &params, need_d()?),
        _ => Err(unsupported(claim, "check_dynamics")),
    }
}

fn x_cycle(ctx: &Ctx, p: &WindowParams) -> Result<ClaimResult> {
    for i in 0..p.rho {
        let x = build_x(p, i)?;
        let q = p.primes[i] as u64;
        let report = measure(&x, 0, q)?;
        if !report.matches() {
            return Ok(mismatch(ctx, Some(i), &x.label, &report));
        }
        let cs = CompiledSystem::compile(&x)?;
        let trace = run(&cs, &x.init, 2 * q)?;
        if let Some(t) = (0..trace.len()).find(|&t| trace[t] != x_closed_form(p, i, t as u64)) {
            return Ok(ctx.fail(
                Some(i),
                Counterexample::at(t as u64, x_closed_form(p, i, t as u64) as u8, trace[t] as u8),
                format!("{} departs from its closed form", x.label),
            ));
        }
    }
    Ok(ctx.pass(format!("periods {:?}, transients 0, closed form holds", p.primes)))
}

fn v_fixed(ctx: &Ctx, p: &WindowParams) -> Result<ClaimResult> {
    let mut transients = Vec::with_capacity(p.rho);
    for i in 0..p.rho {
        let v = build_v(p, i)?;
        let t = (p.k - p.primes[i]) as u64;
        let report = measure(&v, t, 1)?;
        if !report.matches() {
            return Ok(mismatch(ctx, Some(i), &v.label, &report));
        }
        let cs = CompiledSystem::compile(&v)?;
        let state = state_at(&cs, &v.init, t)?;
        if !state.is_all_zero() {
            return Ok(ctx.fail(
                Some(i),
                Counterexample::at(t, "all-zero window", format!("{} ones", state.popcount())),
                format!("{} fixed point is not zero", v.label),
            ));
        }
        transients.push(t);
    }
    Ok(ctx.pass(format!("transients {transients:?} = k - p, zero fixed point")))
}

fn sum_bounds(ctx: &Ctx, p: &WindowParams) -> Result<ClaimResult> {
    for i in 0..p.rho {
        let x = build_x(p, i)?;
        let cs = CompiledSystem::compile(&x)?;
        let mut sim = cs.simulate(&x.init)?;
        let (lo, hi) = (p.mu[i] as u32, p.mu[i] as u32 + 1);
        for t in 0..2 * p.primes[i] as u64 {
            let ones = sim.state().popcount();
            if ones < lo || ones > hi {
                return Ok(ctx.fail(
                    Some(i),
                    Counterexample::at(p.k as u64 + t, format!("{lo} <= window sum <= {hi}"), ones),
                    format!("{} window sum", x.label),
                ));
            }
            sim.next();
        }
    }
    let y = build_y(p);
    let cs = CompiledSystem::compile(&y)?;
    let mut sim = cs.simulate(&y.init)?;
    let lo = p.sum_mu(0..p.rho) as u32;
    let hi = lo + p.rho as u32;
    let l2 = to_u64(&p.l2())?;
    for t in 0..l2 {
        let ones = sim.state().popcount();
        if ones < lo || ones > hi {
            return Ok(ctx.fail(
                None,
                Counterexample::at(p.h as u64 + t, format!("{lo} <= window sum <= {hi}"), ones),
                "y window sum",
            ));
        }
        sim.next();
    }
    Ok(ctx.pass(format!(
        "x windows within [mu, mu + 1]; y windows within [{lo}, {hi}] over one period"
    )))
}

fn s1_range(ctx: &Ctx, p: &WindowParams) -> Result<ClaimResult> {
    let (_, theta) = single_weights(p);
    for i in 0..p.rho {
        let x = build_x(p, i)?;
        let cs = CompiledSystem::compile(&x)?;
        let lo = -2 * (1 + p.mu[i] as i64);
        let mut state = cs.initial_state(&x.init)?;
        for t in 0..2 * p.primes[i] as u64 {
            let s1 = cs.scaled_sum(&state);
            let fires = s1 >= theta;
            if s1 < lo || s1 > theta || fires != x_closed_form(p, i, p.k as u64 + t) {
                return Ok(ctx.fail(
                    Some(i),
                    Counterexample::at(
                        p.k as u64 + t,
                        format!("S1 in [{lo}, {}] or exactly {theta} when firing", theta - 1),
                        s1,
                    ),
                    format!("{} affine sum out of range", x.label),
                ));
            }
            cs.step(&mut state)?;
        }
    }
    Ok(ctx.pass("S1 equals the threshold exactly when firing and stays below otherwise"))
}

fn y_cycle(ctx: &Ctx, p: &WindowParams) -> Result<ClaimResult> {
    let report = measure_y(p)?;
    if !report.matches() {
        return Ok(mismatch(ctx, None, "y", &report));
    }
    Ok(ctx.pass(format!("y {} = (0, L2)", pair(&report))))
}

fn y_deshuffle(ctx: &Ctx, p: &WindowParams) -> Result<ClaimResult> {
    let y = build_y(p);
    let cs = CompiledSystem::compile(&y)?;
    let horizon = to_u64(&p.l2())? + p.h as u64;
    let sim = cs.simulate(&y.init)?;
    let outputs = y.init.iter().copied().chain(sim);
    for (t, bit) in (0..horizon).zip(outputs) {
        let expected = y_closed_form(p, t);
        if bit != expected {
            return Ok(ctx.fail(
                Some((t % p.rho as u64) as usize),
                Counterexample::at(t, expected as u8, bit as u8),
                "y lane departs from its x trace",
            ));
        }
    }
    Ok(ctx.pass(format!("y(q rho + i) = x_i(1 + q) for all t < {horizon}")))
}

fn w_cycle(ctx: &Ctx, p: &WindowParams, d: usize) -> Result<ClaimResult> {
    let w = build_w(p, d)?;
    let l0 = to_u64(&p.cycle_lengths(d)?.l0)?;
    let report = measure(&w, p.w_transient(d)?, l0)?;
    if !report.matches() {
        return Ok(mismatch(ctx, None, &w.label, &report));
    }
    Ok(ctx.pass(format!("w {}", pair(&report))))
}

fn z_summary(ctx: &Ctx, p: &WindowParams, d: usize) -> Result<ClaimResult> {
    let plan = perturbation_plan(p, d)?;
    let z = build_z_with_plan(p, &plan)?;
    let report = measure(&z, to_u64(&p.z_transient(d)?)?, to_u64(&p.cycle_lengths(d)?.l0)?)?;
    if !report.matches() {
        return Ok(mismatch(ctx, None, &z.label, &report));
    }
    if report.measured_period == 1 {
        let cs = CompiledSystem::compile(&z)?;
        let state = state_at(&cs, &z.init, report.measured_transient)?;
        if !state.is_all_zero() {
            return Ok(ctx.fail(
                None,
                Counterexample::at(report.measured_transient, "all-zero window", state.popcount()),
                "fixed point is not zero",
            ));
        }
    }
    Ok(ctx.pass(format!("z {} with Tot = {}", pair(&report), plan.tot)))
}

// ---------------------------------------------------------------- phases

/// Inclusive time window; empty when `start > end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub start: u64,
    pub end: u64,
}

impl Window {
    fn new(start: u64, end: u64) -> Self {
        Self { start, end }
    }

    pub fn is_empty(&self) -> bool {
        self.start > self.end
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            self.end - self.start + 1
        }
    }

    fn times(&self) -> std::ops::RangeInclusive<u64> {
        self.start..=self.end
    }
}

/// The five consecutive regimes of `z(·, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseWindows {
    /// `z = y`.
    pub agree: Window,
    /// `z = 0` while `y = 1`.
    pub anomaly: Window,
    /// `z = y` again; empty for the last bifurcation.
    pub rejoin: Window,
    /// `z(t) = w(t - L1)` up to the end of the transient regime.
    pub track: Window,
    /// `z(t) = w(t - L1)` and `z(t) = z(t - L0)` on the cycle.
    pub cycle: Window,
}

pub fn phase_windows(p: &WindowParams, d: usize) -> Result<PhaseWindows> {
    let lengths = p.cycle_lengths(d)?;
    let l1 = to_u64(&lengths.l1)?;
    let l0 = to_u64(&lengths.l0)?;
    let (h, rho, d64) = (p.h as u64, p.rho as u64, d as u64);
    let l4 = to_u64(&p.z_transient(d)?)?;
    let l3 = to_u64(&p.phase4_end(d)?)?;
    let base = l1 + h - rho;
    Ok(PhaseWindows {
        agree: Window::new(0, base - 1),
        anomaly: Window::new(base, base + d64),
        rejoin: Window::new(base + d64 + 1, l1 + h - 1),
        track: Window::new(l1 + h, l3),
        cycle: Window::new(l4, l3 + l0),
    })
}

fn trace_to(system: &RecurrenceSystem, len: u64) -> Result<Vec<bool>> {
    let cs = CompiledSystem::compile(system)?;
    run(&cs, &system.init, len.saturating_sub(system.memory as u64))
}

pub fn check_phases(m: usize, d: usize) -> Result<ClaimResult> {
    let p = window_params(m)?;
    let ctx = Ctx::new(ClaimId::Phases, Some(m), Some(d));
    let win = phase_windows(&p, d)?;
    let lengths = p.cycle_lengths(d)?;
    let l1 = to_u64(&lengths.l1)?;
    let l0 = to_u64(&lengths.l0)?;
    let horizon = win.cycle.end + 1;
    let y = trace_to(&build_y(&p), horizon)?;
    let z = trace_to(&build_z_with_plan(&p, &perturbation_plan(&p, d)?)?, horizon)?;
    let w = trace_to(&build_w(&p, d)?, horizon - l1)?;
    let at = |v: &[bool], t: u64| v[t as usize];

    let first_bad = |name: &str, window: Window, ok: &dyn Fn(u64) -> Option<(u8, u8)>| {
        window.times().find_map(|t| {
            ok(t).map(|(want, got)| {
                ctx.fail(None, Counterexample::at(t, want, got), format!("{name} window broken"))
            })
        })
    };
    let vs = |a: bool, b: bool| (a != b).then_some((a as u8, b as u8));

    if let Some(r) = first_bad("agree", win.agree, &|t| vs(at(&y, t), at(&z, t))) {
        return Ok(r);
    }
    let anomalies = win
        .anomaly
        .times()
        .filter(|&t| !at(&z, t) && at(&y, t))
        .count() as u64;
    if let Some(r) = first_bad("anomaly", win.anomaly, &|t| vs(false, at(&z, t))) {
        return Ok(r);
    }
    if anomalies != d as u64 + 1 {
        return Ok(ctx.fail(
            None,
            Counterexample::at(win.anomaly.start, d + 1, anomalies),
            "anomaly count differs from d + 1",
        ));
    }
    if win.rejoin.is_empty() != (d + 1 == p.rho) {
        return Ok(ctx.fail(
            None,
            Counterexample::value(
                format!("rejoin window empty iff d = {}", p.rho - 1),
                format!("{} steps", win.rejoin.len()),
            ),
            "rejoin window length",
        ));
    }
    if let Some(r) = first_bad("rejoin", win.rejoin, &|t| vs(at(&y, t), at(&z, t))) {
        return Ok(r);
    }
    if let Some(r) = first_bad("track", win.track, &|t| vs(at(&w, t - l1), at(&z, t))) {
        return Ok(r);
    }
    let on_cycle = |t: u64| {
        vs(at(&w, t - l1), at(&z, t))
            .or_else(|| (t >= win.cycle.start + l0).then(|| vs(at(&z, t - l0), at(&z, t))).flatten())
    };
    if let Some(r) = first_bad("cycle", win.cycle, &on_cycle) {
        return Ok(r);
    }
    Ok(ctx.pass(format!(
        "windows {}..{}, {}..{} ({anomalies} anomalies), {} rejoin steps, track to {}, cycle {}..{}",
        win.agree.start,
        win.agree.end,
        win.anomaly.start,
        win.anomaly.end,
        win.rejoin.len(),
        win.track.end,
        win.cycle.start,
        win.cycle.end
    )))
}

// ----------------------------------------------------------------- chain

/// One step of the period chain `y, z(·, 0), ..., z(·, ρ-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub label: String,
    pub d: Option<usize>,
    pub report: CycleReport,
    /// Whether the attractor is the all-zero window.
    pub zero_attractor: bool,
}

/// Measures `y` and every `z(·, d)`, deriving each `z(·, d+1)` from
/// `z(·, d)` through the chained perturbation.
pub fn period_chain(params: &WindowParams) -> Result<Vec<ChainLink>> {
    let mut links = Vec::with_capacity(params.rho + 1);
    let y_report = measure_y(params)?;
    links.push(ChainLink {
        label: format!("y(m={})", params.m),
        d: None,
        zero_attractor: false,
        report: y_report,
    });
    let mut plan = perturbation_plan(params, 0)?;
    let mut z = build_z_with_plan(params, &plan)?;
    for d in 0..params.rho {
        if d > 0 {
            let next = perturbation_plan(params, d)?;
            z = chain_perturbation(&z, &plan, &next)?;
            plan = next;
        }
        let t = to_u64(&params.z_transient(d)?)?;
        let l0 = to_u64(&params.cycle_lengths(d)?.l0)?;
        let report = measure(&z, t, l0)?;
        let cs = CompiledSystem::compile(&z)?;
        let zero_attractor = report.measured_period == 1
            && state_at(&cs, &z.init, report.measured_transient)?.is_all_zero();
        links.push(ChainLink {
            label: z.label.clone(),
            d: Some(d),
            report,
            zero_attractor,
        });
    }
    Ok(links)
}

pub fn check_chain(m: usize) -> Result<ClaimResult> {
    let p = window_params(m)?;
    let ctx = Ctx::new(ClaimId::Chain, Some(m), None);
    let links = period_chain(&p)?;
    let periods: Vec<u64> = links.iter().map(|l| l.report.measured_period).collect();
    for (prev, next) in links.iter().zip(&links[1..]) {
        let (a, b) = (prev.report.measured_period, next.report.measured_period);
        if a % b != 0 {
            return Ok(ctx.fail(
                None,
                Counterexample::value(format!("period of {} divides {a}", next.label), b),
                format!("divisor chain broken: {periods:?}"),
            ));
        }
    }
    let last = links.last().expect("chain has rho + 1 links");
    if !last.zero_attractor {
        return Ok(ctx.fail(
            None,
            Counterexample::at(
                last.report.measured_transient,
                "all-zero fixed point",
                format!("period {}", last.report.measured_period),
            ),
            format!("{} does not end at zero", last.label),
        ));
    }
    if let Some(link) = links.iter().find(|l| !l.report.matches()) {
        return Ok(mismatch(&ctx, None, &link.label, &link.report));
    }
    let text: Vec<String> = periods.iter().map(u64::to_string).collect();
    Ok(ctx.pass(format!("periods {}, ending at the zero fixed point", text.join(" -> "))))
}

// ----------------------------------------------------------------- basin

/// Checks that every admissible rewrite of the first `β_e - d` initial
/// outputs of `z(·, d)` converges to the unperturbed attractor.
pub fn check_basin(m: usize, d: usize, selector: BasinSelector) -> Result<ClaimResult> {
    let p = window_params(m)?;
    let beta_min = p.beta_m[p.beta_min_index()];
    if d >= beta_min {
        return Err(Error::HypothesisUnmet { d, beta_min });
    }
    let ctx = Ctx::new(ClaimId::Basin, Some(m), Some(d));
    let plan = perturbation_plan(&p, d)?;
    let z = build_z_with_plan(&p, &plan)?;
    let cs = CompiledSystem::compile(&z)?;
    let t = to_u64(&p.z_transient(d)?)?;
    let l0 = to_u64(&p.cycle_lengths(d)?.l0)?;
    let budget = theory_budget(t, l0, z.memory);
    let base = detect_cycle(&cs, &z.init, budget)?;
    let cycle = attractor_states(&cs, &z.init, base.measured_transient, base.measured_period)?;

    let free = beta_min - d;
    let masks: Vec<u64> = match selector {
        BasinSelector::Exhaustive => {
            if free > 24 {
                return Err(Error::IndexOutOfRange {
                    what: "exhaustive prefix bits",
                    index: free,
                    lo: 0,
                    hi: 24,
                });
            }
            (0..1u64 << free).collect()
        }
        BasinSelector::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mask = if free >= 64 { u64::MAX } else { (1u64 << free) - 1 };
            (0..count).map(|_| rng.gen::<u64>() & mask).collect()
        }
    };
    let mut seen: HashSet<u64> = HashSet::new();
    for &mask in &masks {
        if !seen.insert(mask) {
            continue;
        }
        let mut init = z.init.clone();
        for (b, bit) in init.iter_mut().take(free).enumerate() {
            *bit = (mask >> b) & 1 == 1;
        }
        let report = detect_cycle(&cs, &init, budget)?;
        // A cycle is fixed by any one of its states, so equal periods plus
        // one shared state means equal state sets.
        let entry = state_at(&cs, &init, report.measured_transient)?;
        if report.measured_period != base.measured_period || !cycle.contains(&entry.snapshot()) {
            return Ok(ctx.fail(
                None,
                Counterexample::at(
                    report.measured_transient,
                    format!("cycle of length {} shared with the unperturbed run", base.measured_period),
                    format!("prefix {mask:0free$b}: cycle of length {}", report.measured_period),
                ),
                "prefix variant leaves the basin",
            ));
        }
    }
    Ok(ctx.pass(format!(
        "{} of {} prefix variants reach the {}-cycle",
        seen.len(),
        1u128 << free,
        base.measured_period
    )))
}

// ----------------------------------------------------------- composition

fn compose_constants(bits: &[bool]) -> Result<RecurrenceSystem> {
    let lanes: Vec<RecurrenceSystem> = bits.iter().map(|&b| constant_system(b)).collect();
    shuffle_compose(&lanes)
}

fn period_of(system: &RecurrenceSystem) -> Result<CycleReport> {
    let cs = CompiledSystem::compile(system)?;
    detect_cycle(&cs, &system.init, theory_budget(0, system.memory as u64, system.memory))
}

pub fn check_composition(claim: ClaimId, seed: u64) -> Result<ClaimResult> {
    let ctx = Ctx::new(claim, None, None);
    let example = |pattern: [bool; 6], want: u64| -> Result<ClaimResult> {
        let s = compose_constants(&pattern)?;
        let report = period_of(&s)?;
        let cs = CompiledSystem::compile(&s)?;
        let trace = run(&cs, &s.init, 24)?;
        let text: String = trace.iter().map(|&b| if b { '1' } else { '0' }).collect();
        if report.measured_period != want {
            return Ok(ctx.fail(
                None,
                Counterexample::at(report.measured_transient, want, report.measured_period),
                format!("trace {text}"),
            ));
        }
        if let Some(t) = (want as usize..trace.len()).find(|&t| trace[t] != trace[t - want as usize]) {
            return Ok(ctx.fail(
                None,
                Counterexample::at(t as u64, trace[t - want as usize] as u8, trace[t] as u8),
                format!("trace {text}"),
            ));
        }
        Ok(ctx.pass(format!("period {want}, trace {text}")))
    };
    match claim {
        ClaimId::Example1Period2 => example([false, true, false, true, false, true], 2),
        ClaimId::Example1Period3 => example([false, false, true, false, false, true], 3),
        ClaimId::DivisorRule => {
            let mut periods = BTreeSet::new();
            for s in 0..100u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s));
                let r = rng.gen_range(2..=8usize);
                let bits: Vec<bool> = (0..r).map(|_| rng.gen()).collect();
                let report = period_of(&compose_constants(&bits)?)?;
                let period = report.measured_period;
                if r as u64 % period != 0 || report.measured_transient != 0 {
                    let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    return Ok(ctx.fail(
                        None,
                        Counterexample::value(format!("period dividing {r}, transient 0"), pair(&report)),
                        format!("lane pattern {text} (seed {})", seed.wrapping_add(s)),
                    ));
                }
                periods.insert(period);
            }
            Ok(ctx.pass(format!("100 random patterns, r in 2..=8, periods seen {periods:?}")))
        }
        _ => Err(unsupported(claim, "check_composition")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pass(r: ClaimResult) {
        assert!(r.passed, "{} failed: {} {:?}", r.claim, r.detail, r.counterexample);
    }

    #[test]
    fn ids_round_trip_and_match_serde() {
        assert_eq!(ClaimId::ALL.len(), 20);
        let names: HashSet<&str> = ClaimId::ALL.iter().map(|c| c.as_str()).collect();
        assert_eq!(names.len(), 20);
        for c in ClaimId::ALL {
            assert_eq!(c.as_str().parse::<ClaimId>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
        assert!("prop3".parse::<ClaimId>().is_err());
    }

    #[test]
    fn static_claims_m6_and_m11() {
        for m in [6, 11] {
            for c in ClaimId::ALL.into_iter().filter(|c| c.kind() == ClaimKind::Static) {
                pass(check_static(c, m).unwrap());
            }
        }
    }

    #[test]
    fn prop2_sums_m6() {
        let r = check_static(ClaimId::Prop2, 6).unwrap();
        assert!(r.passed);
        assert!(r.detail.contains("[4, 4]"), "{}", r.detail);
    }

    #[test]
    fn b0_reading_reported() {
        let r = check_static(ClaimId::B0MethodsAgree, 6).unwrap();
        assert!(r.detail.contains("Tot = [10, 9]"), "{}", r.detail);
        assert!(r.detail.contains("canonical-residue reading does not"), "{}", r.detail);
    }

    #[test]
    fn wrong_checker_is_an_error() {
        assert!(matches!(
            check_static(ClaimId::YCycle, 6),
            Err(Error::UnsupportedClaim { .. })
        ));
        assert!(matches!(
            check_dynamics(ClaimId::WCycle, 6, None),
            Err(Error::UnsupportedClaim { .. })
        ));
        assert!(matches!(
            check_composition(ClaimId::Prop1, 0),
            Err(Error::UnsupportedClaim { .. })
        ));
    }

    #[test]
    fn dynamics_m6() {
        for c in [
            ClaimId::XCycle,
            ClaimId::VFixed,
            ClaimId::SumBounds,
            ClaimId::S1Range,
            ClaimId::YCycle,
            ClaimId::YDeshuffle,
        ] {
            pass(check_dynamics(c, 6, None).unwrap());
        }
        for d in 0..2 {
            pass(check_dynamics(ClaimId::WCycle, 6, Some(d)).unwrap());
            pass(check_dynamics(ClaimId::ZSummary, 6, Some(d)).unwrap());
        }
    }

    #[test]
    fn phase_windows_m6() {
        let p = window_params(6).unwrap();
        let w = phase_windows(&p, 0).unwrap();
        assert_eq!((w.agree.start, w.agree.end), (0, 171));
        assert_eq!((w.anomaly.start, w.anomaly.end), (172, 172));
        assert_eq!((w.rejoin.start, w.rejoin.end), (173, 173));
        assert_eq!(w.track.start, 174);
        assert_eq!((w.cycle.start, w.cycle.end), (139, 139 + 139 + 26));
        let w = phase_windows(&p, 1).unwrap();
        assert!(w.rejoin.is_empty());
        assert_eq!(w.anomaly.len(), 2);
    }

    #[test]
    fn phases_m6() {
        for d in 0..2 {
            pass(check_phases(6, d).unwrap());
        }
    }

    #[test]
    fn chain_m6() {
        let p = window_params(6).unwrap();
        let links = period_chain(&p).unwrap();
        let periods: Vec<u64> = links.iter().map(|l| l.report.measured_period).collect();
        assert_eq!(periods, vec![442, 26, 1]);
        assert!(links[2].zero_attractor);
        pass(check_chain(6).unwrap());
    }

    #[test]
    fn basin_m6() {
        pass(check_basin(6, 0, BasinSelector::Exhaustive).unwrap());
        pass(check_basin(6, 1, BasinSelector::Exhaustive).unwrap());
        let r = check_basin(6, 0, BasinSelector::Exhaustive).unwrap();
        assert!(r.detail.starts_with("4 of 4"), "{}", r.detail);
        assert_eq!(
            check_basin(6, 2, BasinSelector::Exhaustive).unwrap_err(),
            Error::HypothesisUnmet { d: 2, beta_min: 2 }
        );
    }

    #[test]
    fn composition_claims() {
        for c in [ClaimId::Example1Period2, ClaimId::Example1Period3, ClaimId::DivisorRule] {
            pass(check_composition(c, 7).unwrap());
        }
        let s = compose_constants(&[true; 6]).unwrap();
        assert_eq!(period_of(&s).unwrap().measured_period, 1);
    }

    #[test]
    fn suite_covers_inventory() {
        let tasks = default_suite(&[6], 0).unwrap();
        let ids: HashSet<ClaimId> = tasks.iter().map(|t| t.claim).collect();
        assert_eq!(ids.len(), ClaimId::ALL.len());
        // basin only for d < min beta = 2, phases/w/z for both d
        let per_d = tasks.iter().filter(|t| t.claim == ClaimId::Phases).count();
        assert_eq!(per_d, 2);
    }

    #[test]
    fn large_scale_suite_skips_long_runs() {
        let tasks = default_suite(&[21], 0).unwrap();
        assert!(tasks.iter().all(|t| !t.claim.needs_shuffled_run()));
        assert!(tasks.iter().any(|t| t.claim == ClaimId::Prop2));
    }

    #[test]
    fn errors_become_failures() {
        let task = ClaimTask::new(ClaimId::Basin, Some(6), Some(2));
        let r = task.evaluate();
        assert!(!r.passed);
        assert!(r.counterexample.is_some());
        let task = ClaimTask::new(ClaimId::Prop1, Some(4), None);
        assert!(!task.evaluate().passed);
    }

    #[test]
    fn evaluate_all_keeps_order() {
        let tasks = vec![
            ClaimTask::new(ClaimId::Prop2, Some(6), None),
            ClaimTask::new(ClaimId::Example1Period3, None, None),
            ClaimTask::new(ClaimId::PosDisjoint, Some(11), None),
        ];
        let results = evaluate_all(&tasks);
        let ids: Vec<ClaimId> = results.iter().map(|r| r.claim).collect();
        assert_eq!(ids, vec![ClaimId::Prop2, ClaimId::Example1Period3, ClaimId::PosDisjoint]);
        assert!(results.iter().all(|r| r.passed));
    }
}
