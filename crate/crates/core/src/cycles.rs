//! Minimal transient and period of a deterministic trajectory.
//!
//! `S(t)` denotes the window `x(t) .. x(t + memory - 1)`, so `S(0)` is the
//! initial window. The transient `T` and period `P` are the smallest values
//! with `S(T + P) = S(T)`.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::engine::{BitState, CompiledSystem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum FailedCheck {
    ZeroPeriod,
    /// `S(T + P) != S(T)`.
    NotPeriodic,
    /// `S(T - 1 + P) = S(T - 1)`: the cycle is entered earlier.
    TransientNotMinimal,
    /// `S(T + P / q) = S(T)` for the prime `q`.
    PeriodNotMinimal { prime: u64 },
}

impl fmt::Display for FailedCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailedCheck::ZeroPeriod => f.write_str("period must be at least 1"),
            FailedCheck::NotPeriodic => f.write_str("state does not recur after the period"),
            FailedCheck::TransientNotMinimal => {
                f.write_str("state one step earlier already recurs")
            }
            FailedCheck::PeriodNotMinimal { prime } => {
                write!(f, "period divided by {prime} is already a period")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub measured_transient: u64,
    pub measured_period: u64,
    pub predicted_transient: Option<u64>,
    pub predicted_period: Option<u64>,
    pub transient_matches: Option<bool>,
    pub period_matches: Option<bool>,
    pub steps_executed: u64,
}

impl CycleReport {
    fn measured(transient: u64, period: u64, steps_executed: u64) -> Self {
        Self {
            measured_transient: transient,
            measured_period: period,
            predicted_transient: None,
            predicted_period: None,
            transient_matches: None,
            period_matches: None,
            steps_executed,
        }
    }

    pub fn with_prediction(mut self, transient: u64, period: u64) -> Self {
        self.predicted_transient = Some(transient);
        self.predicted_period = Some(period);
        self.transient_matches = Some(transient == self.measured_transient);
        self.period_matches = Some(period == self.measured_period);
        self
    }

    /// True when every prediction present agrees with the measurement.
    pub fn matches(&self) -> bool {
        self.transient_matches != Some(false) && self.period_matches != Some(false)
    }
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Brent's cycle finding over full window states, then a minimality
/// certificate. `budget` caps the steps spent searching for the first
/// repeat; the certificate replays `T + P` more steps.
pub fn detect_cycle(cs: &CompiledSystem, init: &[bool], budget: u64) -> Result<CycleReport> {
    let start = cs.initial_state(init)?;
    let mut tortoise = start.clone();
    let mut hare = start.clone();
    cs.advance(&mut hare);
    let mut steps = 1u64;
    let (mut power, mut period) = (1u64, 1u64);
    while !tortoise.same_window(&hare) {
        if power == period {
            tortoise = hare.clone();
            power *= 2;
            period = 0;
        }
        if steps >= budget {
            return Err(Error::BudgetExceeded { budget });
        }
        cs.advance(&mut hare);
        steps += 1;
        period += 1;
    }

    let mut tortoise = start.clone();
    let mut hare = start;
    for _ in 0..period {
        cs.advance(&mut hare);
    }
    steps += period;
    let mut transient = 0u64;
    while !tortoise.same_window(&hare) {
        cs.advance(&mut tortoise);
        cs.advance(&mut hare);
        transient += 1;
        steps += 2;
    }

    let certified = verify_predicted(cs, init, transient, period)?;
    Ok(CycleReport::measured(
        transient,
        period,
        steps + certified.steps_executed,
    ))
}

/// Checks a predicted `(T, P)` in a single replay of `T + P` steps:
/// recurrence at `T + P`, no recurrence at `T + P/q` for each prime `q | P`,
/// and no recurrence from `T - 1`.
pub fn verify_predicted(
    cs: &CompiledSystem,
    init: &[bool],
    transient: u64,
    period: u64,
) -> Result<CycleReport> {
    let fail = |check| Error::PredictionFailed {
        transient,
        period,
        check,
    };
    if period == 0 {
        return Err(fail(FailedCheck::ZeroPeriod));
    }
    let mut state = cs.initial_state(init)?;
    let before = if transient > 0 {
        for _ in 0..transient - 1 {
            cs.advance(&mut state);
        }
        let before = state.clone();
        cs.advance(&mut state);
        Some(before)
    } else {
        None
    };
    let anchor = state.clone();

    let mut probes: Vec<(u64, u64)> = prime_factors(period)
        .into_iter()
        .map(|q| (period / q, q))
        .collect();
    probes.sort_unstable();
    let mut probes = probes.into_iter().peekable();

    let mut transient_recurs = matches!(&before, Some(b) if period == 1 && b.same_window(&anchor));
    let mut shorter: Option<u64> = None;
    for s in 1..=period {
        cs.advance(&mut state);
        if s + 1 == period {
            if let Some(b) = &before {
                transient_recurs |= b.same_window(&state);
            }
        }
        while let Some(&(offset, q)) = probes.peek() {
            if offset != s {
                break;
            }
            if shorter.is_none() && state.same_window(&anchor) {
                shorter = Some(q);
            }
            probes.next();
        }
    }
    if !state.same_window(&anchor) {
        return Err(fail(FailedCheck::NotPeriodic));
    }
    if transient_recurs {
        return Err(fail(FailedCheck::TransientNotMinimal));
    }
    if let Some(prime) = shorter {
        return Err(fail(FailedCheck::PeriodNotMinimal { prime }));
    }
    Ok(CycleReport::measured(transient, period, transient + period).with_prediction(transient, period))
}

/// Window state after `t` steps.
pub fn state_at(cs: &CompiledSystem, init: &[bool], t: u64) -> Result<BitState> {
    let mut state = cs.initial_state(init)?;
    for _ in 0..t {
        cs.advance(&mut state);
    }
    Ok(state)
}

/// Packed windows of every state on the cycle entered at `transient`.
pub fn attractor_states(
    cs: &CompiledSystem,
    init: &[bool],
    transient: u64,
    period: u64,
) -> Result<HashSet<Vec<u64>>> {
    let mut state = state_at(cs, init, transient)?;
    let mut out = HashSet::with_capacity(period as usize);
    for _ in 0..period {
        out.insert(state.snapshot());
        cs.advance(&mut state);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_v, build_x, build_y, build_z, constant_system, shuffle_compose};
    use crate::numtheory::window_params;

    fn brute_force(cs: &CompiledSystem, init: &[bool], limit: u64) -> (u64, u64) {
        let mut seen = std::collections::HashMap::new();
        let mut state = cs.initial_state(init).unwrap();
        for t in 0..limit {
            if let Some(&first) = seen.get(&state.snapshot()) {
                return (first, t - first);
            }
            seen.insert(state.snapshot(), t);
            cs.advance(&mut state);
        }
        panic!("no repeat within {limit}");
    }

    #[test]
    fn prime_factor_lists() {
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(442), vec![2, 13, 17]);
        assert_eq!(prime_factors(62031), vec![3, 23, 29, 31]);
        assert_eq!(prime_factors(64), vec![2]);
        assert_eq!(prime_factors(97), vec![97]);
    }

    #[test]
    fn x_and_v_m6() {
        let p = window_params(6).unwrap();
        let x = build_x(&p, 0).unwrap();
        let cs = CompiledSystem::compile(&x).unwrap();
        let r = detect_cycle(&cs, &x.init, 10_000).unwrap();
        assert_eq!((r.measured_transient, r.measured_period), (0, 17));

        let v = build_v(&p, 0).unwrap();
        let cs = CompiledSystem::compile(&v).unwrap();
        let r = detect_cycle(&cs, &v.init, 10_000).unwrap();
        assert_eq!((r.measured_transient, r.measured_period), (53, 1));
        assert!(state_at(&cs, &v.init, 53).unwrap().is_all_zero());
        assert!(!state_at(&cs, &v.init, 52).unwrap().is_all_zero());
    }

    #[test]
    fn z_m6_d1_fixed_point() {
        let p = window_params(6).unwrap();
        let z = build_z(&p, 1).unwrap();
        let cs = CompiledSystem::compile(&z).unwrap();
        let r = detect_cycle(&cs, &z.init, 100_000).unwrap();
        assert_eq!((r.measured_transient, r.measured_period), (556, 1));
        assert!(state_at(&cs, &z.init, 556).unwrap().is_all_zero());
    }

    #[test]
    fn verify_y_m6() {
        let p = window_params(6).unwrap();
        let y = build_y(&p);
        let cs = CompiledSystem::compile(&y).unwrap();
        let r = verify_predicted(&cs, &y.init, 0, 442).unwrap();
        assert!(r.matches());
        assert_eq!(r.steps_executed, 442);
        assert_eq!(
            verify_predicted(&cs, &y.init, 0, 221).unwrap_err(),
            Error::PredictionFailed {
                transient: 0,
                period: 221,
                check: FailedCheck::NotPeriodic
            }
        );
        assert!(matches!(
            verify_predicted(&cs, &y.init, 0, 884),
            Err(Error::PredictionFailed { check: FailedCheck::PeriodNotMinimal { prime: 2 }, .. })
        ));
        assert!(matches!(
            verify_predicted(&cs, &y.init, 5, 442),
            Err(Error::PredictionFailed { check: FailedCheck::TransientNotMinimal, .. })
        ));
        assert!(matches!(
            verify_predicted(&cs, &y.init, 0, 0),
            Err(Error::PredictionFailed { check: FailedCheck::ZeroPeriod, .. })
        ));
    }

    #[test]
    fn verify_z_m6_d0() {
        let p = window_params(6).unwrap();
        let z = build_z(&p, 0).unwrap();
        let cs = CompiledSystem::compile(&z).unwrap();
        assert!(verify_predicted(&cs, &z.init, 139, 26).unwrap().matches());
        assert!(matches!(
            verify_predicted(&cs, &z.init, 138, 26),
            Err(Error::PredictionFailed { check: FailedCheck::NotPeriodic, .. })
        ));
        assert!(matches!(
            verify_predicted(&cs, &z.init, 140, 26),
            Err(Error::PredictionFailed { check: FailedCheck::TransientNotMinimal, .. })
        ));
    }

    #[test]
    fn fixed_point_transient_probe() {
        // T-1 probe with P = 1 compares S(T-1) against S(T)
        let p = window_params(6).unwrap();
        let v = build_v(&p, 1).unwrap();
        let cs = CompiledSystem::compile(&v).unwrap();
        assert!(verify_predicted(&cs, &v.init, 57, 1).is_ok());
        assert!(matches!(
            verify_predicted(&cs, &v.init, 58, 1),
            Err(Error::PredictionFailed { check: FailedCheck::TransientNotMinimal, .. })
        ));
    }

    #[test]
    fn budget_exceeded() {
        let p = window_params(6).unwrap();
        let y = build_y(&p);
        let cs = CompiledSystem::compile(&y).unwrap();
        assert_eq!(
            detect_cycle(&cs, &y.init, 100).unwrap_err(),
            Error::BudgetExceeded { budget: 100 }
        );
    }

    #[test]
    fn brent_agrees_with_hash_oracle() {
        let p = window_params(6).unwrap();
        let mut systems = vec![build_y(&p), build_z(&p, 0).unwrap(), build_z(&p, 1).unwrap()];
        for i in 0..p.rho {
            systems.push(build_x(&p, i).unwrap());
            systems.push(build_v(&p, i).unwrap());
        }
        for s in &systems {
            let cs = CompiledSystem::compile(s).unwrap();
            let r = detect_cycle(&cs, &s.init, 1_000_000).unwrap();
            assert_eq!(
                (r.measured_transient, r.measured_period),
                brute_force(&cs, &s.init, 100_000),
                "{}",
                s.label
            );
        }
    }

    #[test]
    fn attractor_of_alternating_shuffle() {
        let lanes: Vec<_> = (0..6).map(|i| constant_system(i % 2 == 1)).collect();
        let s = shuffle_compose(&lanes).unwrap();
        let cs = CompiledSystem::compile(&s).unwrap();
        let r = detect_cycle(&cs, &s.init, 1000).unwrap();
        assert_eq!((r.measured_transient, r.measured_period), (0, 2));
        assert_eq!(attractor_states(&cs, &s.init, 0, 2).unwrap().len(), 2);
    }

    mod props {
        use super::*;
        use crate::construction::RecurrenceSystem;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn detect_matches_hash_oracle(
                weights in proptest::collection::vec(-3i64..=3, 1..9),
                threshold in -3i64..=3,
                seed_bits in proptest::collection::vec(any::<bool>(), 9),
            ) {
                let init = seed_bits[..weights.len()].to_vec();
                let s = RecurrenceSystem::from_integers(&weights, threshold, init, "rand").unwrap();
                let cs = CompiledSystem::compile(&s).unwrap();
                let r = detect_cycle(&cs, &s.init, 10_000).unwrap();
                prop_assert_eq!((r.measured_transient, r.measured_period), brute_force(&cs, &s.init, 2_000));
                prop_assert!(verify_predicted(&cs, &s.init, r.measured_transient, r.measured_period).is_ok());
            }
        }
    }
}
