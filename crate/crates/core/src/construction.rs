//! Builders for every recurrence system of the construction.
//!
//! Weight vectors are 1-based in the formulas (`a_1` multiplies `x(n-1)`);
//! in [`RecurrenceSystem::weights`] the coefficient of `x(n-j)` lives at
//! index `j - 1`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numtheory::{to_u64, WindowParams};

/// A threshold recurrence `x(n) = 1[Σ_{j=1}^{memory} a_j x(n-j) - θ]`
/// together with its initial window `x(0)..x(memory-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSystem {
    pub memory: usize,
    pub weights: Vec<BigRational>,
    pub threshold: BigRational,
    pub init: Vec<bool>,
    pub label: String,
}

impl RecurrenceSystem {
    pub fn new(
        weights: Vec<BigRational>,
        threshold: BigRational,
        init: Vec<bool>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::ShapeMismatch {
                expected: 1,
                got: 0,
            });
        }
        if init.len() != weights.len() {
            return Err(Error::ShapeMismatch {
                expected: weights.len(),
                got: init.len(),
            });
        }
        Ok(Self {
            memory: weights.len(),
            weights,
            threshold,
            init,
            label: label.into(),
        })
    }

    /// Builds a system with integer weights and threshold.
    pub fn from_integers(
        weights: &[i64],
        threshold: i64,
        init: Vec<bool>,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::new(weights.iter().map(|&w| int(w)).collect(), int(threshold), init, label)
    }

    /// Coefficient of `x(n - j)`, `1 <= j <= memory`.
    pub fn weight(&self, j: usize) -> &BigRational {
        &self.weights[j - 1]
    }

    /// `(j, a_j)` for every nonzero coefficient, `j` 1-based.
    pub fn nonzero_weights(&self) -> impl Iterator<Item = (usize, &BigRational)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(idx, w)| (idx + 1, w))
    }

    pub fn is_integral(&self) -> bool {
        self.threshold.is_integer() && self.weights.iter().all(|w| w.is_integer())
    }

    /// Least common denominator of all weights and the threshold.
    pub fn common_denominator(&self) -> BigInt {
        self.weights
            .iter()
            .chain(std::iter::once(&self.threshold))
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()))
    }

    /// Same dynamics, different initial window.
    pub fn with_init(&self, init: Vec<bool>) -> Result<Self> {
        if init.len() != self.memory {
            return Err(Error::ShapeMismatch {
                expected: self.memory,
                got: init.len(),
            });
        }
        Ok(Self {
            init,
            ..self.clone()
        })
    }
}

pub(crate) fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Single-neuron weights `a̅_1..a̅_k` (index `j - 1`) and threshold `θ̅ = 2ρ`.
///
/// Only multiples of the window primes carry weight. For `ρ` even the first
/// `3ρ/2` multiples of each prime get `+2` and the rest `-2`; for `ρ` odd
/// the first `(3ρ-1)/2` get `+2`, the last two get `-1`, and those in between
/// get `-2`.
pub fn single_weights(params: &WindowParams) -> (Vec<i64>, i64) {
    let rho = params.rho;
    let mut a = vec![0i64; params.k];
    for &p in &params.primes {
        for f in (1..=2 * rho).map(|j| j * p) {
            let w = if rho % 2 == 0 {
                if 2 * f <= 3 * rho * p {
                    2
                } else {
                    -2
                }
            } else if 2 * f <= (3 * rho - 1) * p {
                2
            } else if (3 * rho + 1) * p <= 2 * f && f <= (2 * rho - 2) * p {
                -2
            } else if f == (2 * rho - 1) * p || f == 2 * rho * p {
                -1
            } else {
                0
            };
            a[f - 1] = w;
        }
    }
    (a, params.weight_threshold())
}

/// `φ^{α_i}`: zeros for `β(m, α_i)` steps, then `μ(m, α_i)` blocks
/// `1 0^{p_i - 1}`.
pub fn initial_config_x(params: &WindowParams, i: usize) -> Result<Vec<bool>> {
    params.check_lane("lane", i)?;
    let (p, beta) = (params.primes[i], params.beta_m[i]);
    Ok((0..params.k)
        .map(|j| j >= beta && (j - beta) % p == 0)
        .collect())
}

/// `x^{α_i}(1) .. x^{α_i}(k-1)` followed by the complement of `x^{α_i}(k)`.
///
/// `x^{α_i}(k)` is evaluated from the weights, not from the closed form.
pub fn initial_config_v(params: &WindowParams, i: usize) -> Result<Vec<bool>> {
    let phi = initial_config_x(params, i)?;
    let (a, theta) = single_weights(params);
    let sum: i64 = (1..=params.k)
        .filter(|&j| phi[params.k - j])
        .map(|j| a[j - 1])
        .sum();
    let x_k = sum >= theta;
    let mut v = phi[1..].to_vec();
    v.push(!x_k);
    Ok(v)
}

/// Closed form of `x^{α_i}(t)`: one exactly when `t ≡ β(m, α_i) (mod p_i)`.
pub fn x_closed_form(params: &WindowParams, i: usize, t: u64) -> bool {
    let p = params.primes[i] as u64;
    t % p == params.beta_m[i] as u64
}

/// Closed form of `y(t)`: lane `t mod ρ` reads `x^{α_i}(1 + t div ρ)`.
pub fn y_closed_form(params: &WindowParams, t: u64) -> bool {
    let rho = params.rho as u64;
    x_closed_form(params, (t % rho) as usize, 1 + t / rho)
}

pub fn build_x(params: &WindowParams, i: usize) -> Result<RecurrenceSystem> {
    let (a, theta) = single_weights(params);
    let init = initial_config_x(params, i)?;
    RecurrenceSystem::from_integers(&a, theta, init, format!("x(m={},i={i})", params.m))
}

pub fn build_v(params: &WindowParams, i: usize) -> Result<RecurrenceSystem> {
    let (a, theta) = single_weights(params);
    let init = initial_config_v(params, i)?;
    RecurrenceSystem::from_integers(&a, theta, init, format!("v(m={},i={i})", params.m))
}

/// Dilated weights of the shuffled systems: `b_{ρj} = a̅_j`, zero elsewhere.
pub fn shuffled_weights(params: &WindowParams) -> Vec<i64> {
    let (a, _) = single_weights(params);
    let mut b = vec![0i64; params.h];
    for (j, &w) in a.iter().enumerate() {
        b[params.rho * (j + 1) - 1] = w;
    }
    b
}

pub fn y_init(params: &WindowParams) -> Vec<bool> {
    (0..params.h as u64).map(|t| y_closed_form(params, t)).collect()
}

pub fn build_y(params: &WindowParams) -> RecurrenceSystem {
    RecurrenceSystem::from_integers(
        &shuffled_weights(params),
        params.weight_threshold(),
        y_init(params),
        format!("y(m={})", params.m),
    )
    .expect("h-length weights and window")
}

/// Least non-negative `γ_i(d)` with `L1(d)/ρ ≡ γ_i(d) (mod p_i)`.
pub fn gamma(params: &WindowParams, d: usize, i: usize) -> Result<usize> {
    params.check_lane("bifurcation", d)?;
    if i <= d || i >= params.rho {
        return Err(Error::IndexOutOfRange {
            what: "gamma lane",
            index: i,
            lo: d + 1,
            hi: params.rho - 1,
        });
    }
    let l1 = params.cycle_lengths(d)?.l1;
    let per_lane = l1 / BigUint::from(params.rho);
    let r = per_lane % params.primes[i];
    Ok(to_u64(&r)? as usize)
}

/// Target system `w(·, d)`: lanes `0..=d` carry the destabilized traces,
/// lanes above `d` the x-traces advanced by `γ_i(d)`.
pub fn build_w(params: &WindowParams, d: usize) -> Result<RecurrenceSystem> {
    params.check_lane("bifurcation", d)?;
    let rho = params.rho;
    let mut init = vec![false; params.h];
    for i in 0..rho {
        if i <= d {
            for (j, bit) in initial_config_v(params, i)?.into_iter().enumerate() {
                init[rho * j + i] = bit;
            }
        } else {
            let g = gamma(params, d, i)? as u64;
            for j in 0..params.k {
                init[rho * j + i] = x_closed_form(params, i, 1 + g + j as u64);
            }
        }
    }
    RecurrenceSystem::from_integers(
        &shuffled_weights(params),
        params.weight_threshold(),
        init,
        format!("w(m={},d={d})", params.m),
    )
}

/// `Pos`, `F`, `G` and the on-demand `Q` / `E` sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSets {
    pub pos: Vec<BTreeSet<usize>>,
    pub f: BTreeSet<usize>,
    pub g: BTreeSet<usize>,
    primes: Vec<usize>,
    mu: Vec<usize>,
    beta_m: Vec<usize>,
}

impl IndexSets {
    pub fn new(params: &WindowParams) -> Self {
        let pos: Vec<BTreeSet<usize>> = params
            .primes
            .iter()
            .map(|&p| (1..=2 * params.rho).map(|j| j * p).collect())
            .collect();
        let f: BTreeSet<usize> = pos.iter().flatten().copied().collect();
        let g = (1..=params.k).filter(|j| !f.contains(j)).collect();
        Self {
            pos,
            f,
            g,
            primes: params.primes.clone(),
            mu: params.mu.clone(),
            beta_m: params.beta_m.clone(),
        }
    }

    /// `Q(α_i, d)` for `1 <= d < p_i`.
    pub fn q_set(&self, i: usize, d: usize) -> Result<BTreeSet<usize>> {
        let p = *self.primes.get(i).ok_or(Error::IndexOutOfRange {
            what: "lane",
            index: i,
            lo: 0,
            hi: self.primes.len() - 1,
        })?;
        if d == 0 || d >= p {
            return Err(Error::IndexOutOfRange {
                what: "offset",
                index: d,
                lo: 1,
                hi: p - 1,
            });
        }
        let top = if d <= self.beta_m[i] {
            self.mu[i]
        } else {
            self.mu[i] - 1
        };
        Ok((0..=top).map(|j| d + j * p).collect())
    }

    /// `E(α_i, d) = Q(α_i, d) ∩ F`.
    pub fn e_set(&self, i: usize, d: usize) -> Result<BTreeSet<usize>> {
        Ok(self
            .q_set(i, d)?
            .intersection(&self.f)
            .copied()
            .collect())
    }

    pub fn pairwise_disjoint(&self) -> bool {
        self.pos.iter().map(BTreeSet::len).sum::<usize>() == self.f.len()
    }
}

/// How `B₀(d)` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum B0Method {
    /// Union of the `C3(i, d)` residue classes.
    Algebraic,
    /// Scan of `y(h + L1(d) - ρ - f) = 1` over `1 <= f <= h - d`.
    Definitional,
}

/// Two ways to read membership in `C3(i, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum C3Reading {
    /// Every `1 <= ℓ <= h` congruent to `j` modulo `ρ p_i`.
    CongruenceClass,
    /// Only the canonical residue `j` itself (`ρ p_i` when `j = 0`).
    CanonicalResidue,
}

impl fmt::Display for C3Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            C3Reading::CongruenceClass => f.write_str("congruence-class"),
            C3Reading::CanonicalResidue => f.write_str("canonical-residue"),
        }
    }
}

/// `C0(i, p_i)`: the indices `ℓ` in `[1, h]` with `y(h - ℓ) = 1` on lane `i`.
pub fn c0_set(params: &WindowParams, i: usize) -> Result<BTreeSet<usize>> {
    params.check_lane("lane", i)?;
    let rho = params.rho;
    let step = rho * params.primes[i];
    Ok((0..=params.mu[i])
        .map(|j| rho - i + step * j)
        .filter(|&l| (1..=params.h).contains(&l))
        .collect())
}

/// The canonical residue `j ∈ [0, ρ p_i)` of `L1(d) - i` modulo `ρ p_i`.
pub fn c2_residue(params: &WindowParams, d: usize, i: usize) -> Result<usize> {
    params.check_lane("lane", i)?;
    let l1 = params.cycle_lengths(d)?.l1;
    let modulus = params.rho * params.primes[i];
    let r = to_u64(&(l1 % modulus))? as usize;
    Ok((r + modulus - i) % modulus)
}

pub fn c3_set(
    params: &WindowParams,
    d: usize,
    i: usize,
    reading: C3Reading,
) -> Result<BTreeSet<usize>> {
    let j = c2_residue(params, d, i)?;
    let modulus = params.rho * params.primes[i];
    let set = match reading {
        C3Reading::CongruenceClass => {
            let first = if j == 0 { modulus } else { j };
            (first..=params.h).step_by(modulus).collect()
        }
        C3Reading::CanonicalResidue => {
            let l = if j == 0 { modulus } else { j };
            std::iter::once(l).filter(|&l| l <= params.h).collect()
        }
    };
    Ok(set)
}

pub fn b0_algebraic(
    params: &WindowParams,
    d: usize,
    reading: C3Reading,
) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for i in 0..params.rho {
        out.extend(c3_set(params, d, i, reading)?);
    }
    Ok(out)
}

pub fn compute_b0(params: &WindowParams, d: usize, method: B0Method) -> Result<BTreeSet<usize>> {
    params.check_lane("bifurcation", d)?;
    match method {
        B0Method::Algebraic => b0_algebraic(params, d, C3Reading::CongruenceClass),
        B0Method::Definitional => {
            let l1 = to_u64(&params.cycle_lengths(d)?.l1)?;
            let base = params.h as u64 + l1 - params.rho as u64;
            Ok((1..=params.h - d)
                .filter(|&f| y_closed_form(params, base - f as u64))
                .collect())
        }
    }
}

/// Weight and threshold modifications turning `y` into `z(·, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationPlan {
    pub d: usize,
    pub b0: BTreeSet<usize>,
    /// `A(d) = ⋃_{ℓ=0}^{d} (B₀(d) + ℓ)`.
    pub a: BTreeSet<usize>,
    /// Common cardinality of every shifted copy of `B₀(d)`.
    pub tot: usize,
    pub lambda: BigRational,
    pub beta_d: BigRational,
    pub xi_d: BigRational,
    pub theta1: BigRational,
    pub theta2: BigRational,
}

impl PerturbationPlan {
    /// `B_ℓ(d) = B₀(d) + ℓ`.
    pub fn shifted(&self, l: usize) -> BTreeSet<usize> {
        self.b0.iter().map(|f| f + l).collect()
    }

    /// `8 · Tot(d)`, the denominator shared by every perturbed weight.
    pub fn denominator(&self) -> usize {
        8 * self.tot
    }
}

/// Builds the plan for step `d` with `λ = -1`.
pub fn perturbation_plan(params: &WindowParams, d: usize) -> Result<PerturbationPlan> {
    let b0 = compute_b0(params, d, B0Method::Definitional)?;
    let max_index = b0.last().copied().unwrap_or(0) + d;
    if max_index > params.h {
        return Err(Error::ShiftExceedsMemory {
            d,
            max_index,
            memory: params.h,
        });
    }
    let tot = b0.len();
    assert!(tot > 0, "B0({d}) is never empty: lane 0 has a residue class in [1, h - d]");
    let a = (0..=d).flat_map(|l| b0.iter().map(move |f| f + l)).collect();
    let lambda = int(-1);
    let beta_d = &lambda / int(tot as i64);
    let xi_d = &lambda - &beta_d / int(8);
    let theta1 = int(params.weight_threshold());
    let theta2 = &theta1 + &xi_d;
    Ok(PerturbationPlan {
        d,
        b0,
        a,
        tot,
        lambda,
        beta_d,
        xi_d,
        theta1,
        theta2,
    })
}

pub fn build_z_with_plan(params: &WindowParams, plan: &PerturbationPlan) -> Result<RecurrenceSystem> {
    let mut weights: Vec<BigRational> = shuffled_weights(params).into_iter().map(int).collect();
    for &f in &plan.a {
        weights[f - 1] += &plan.beta_d;
    }
    RecurrenceSystem::new(
        weights,
        plan.theta2.clone(),
        y_init(params),
        format!("z(m={},d={})", params.m, plan.d),
    )
}

pub fn build_z(params: &WindowParams, d: usize) -> Result<RecurrenceSystem> {
    build_z_with_plan(params, &perturbation_plan(params, d)?)
}

/// Derives `z(·, d+1)` from `z(·, d)` by the four-case weight update and the
/// telescoped threshold `θ₂(d+1) = θ₂(d) - ξ(d) + ξ(d+1)`.
pub fn chain_perturbation(
    z: &RecurrenceSystem,
    plan: &PerturbationPlan,
    next: &PerturbationPlan,
) -> Result<RecurrenceSystem> {
    if next.d != plan.d + 1 {
        return Err(Error::IndexOutOfRange {
            what: "next bifurcation",
            index: next.d,
            lo: plan.d + 1,
            hi: plan.d + 1,
        });
    }
    for set in [&plan.a, &next.a] {
        if let Some(&top) = set.last() {
            if top > z.memory {
                return Err(Error::ShapeMismatch {
                    expected: z.memory,
                    got: top,
                });
            }
        }
    }
    let mut weights = z.weights.clone();
    for (idx, w) in weights.iter_mut().enumerate() {
        let f = idx + 1;
        match (plan.a.contains(&f), next.a.contains(&f)) {
            (false, false) => {}
            (true, true) => *w = &*w - &plan.beta_d + &next.beta_d,
            (true, false) => *w -= &plan.beta_d,
            (false, true) => *w += &next.beta_d,
        }
    }
    let threshold = &z.threshold - &plan.xi_d + &next.xi_d;
    let label = match z.label.rsplit_once(",d=") {
        Some((head, _)) => format!("{head},d={}) via chain", next.d),
        None => format!("{} chained to d={}", z.label, next.d),
    };
    RecurrenceSystem::new(weights, threshold, z.init.clone(), label)
}

/// Shuffle composition of `r` lanes of one recurrence: lane `i` occupies
/// positions `r·j + i` and the dilated weight at `r·j` copies `a_j`.
pub fn shuffle_compose(systems: &[RecurrenceSystem]) -> Result<RecurrenceSystem> {
    let first = systems.first().ok_or(Error::MixedShapes("lane count (none given)"))?;
    let r = systems.len();
    for s in &systems[1..] {
        if s.memory != first.memory {
            return Err(Error::MixedShapes("memories"));
        }
        if s.threshold != first.threshold {
            return Err(Error::MixedShapes("thresholds"));
        }
        if s.weights != first.weights {
            return Err(Error::MixedShapes("weights"));
        }
    }
    let memory = first.memory * r;
    let mut weights = vec![BigRational::zero(); memory];
    for (j, w) in first.nonzero_weights() {
        weights[r * j - 1] = w.clone();
    }
    let mut init = vec![false; memory];
    for (i, s) in systems.iter().enumerate() {
        for (j, &bit) in s.init.iter().enumerate() {
            init[r * j + i] = bit;
        }
    }
    RecurrenceSystem::new(
        weights,
        first.threshold.clone(),
        init,
        format!("shuffle[{r}]({})", first.label),
    )
}

/// A memory-1 system that repeats its single initial bit forever.
pub fn constant_system(bit: bool) -> RecurrenceSystem {
    RecurrenceSystem::from_integers(&[1], 1, vec![bit], "const").expect("memory 1")
}
