//! Exact simulation of a [`RecurrenceSystem`].
//!
//! Rational weights are scaled by their least common denominator so each
//! step is a sparse integer gather followed by a sign test. No floating
//! point is involved: perturbed systems have decision margins of
//! `|β(d)| / 8`, which rounding could flip.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::construction::RecurrenceSystem;
use crate::error::{Error, Result};

const MIN_CAPACITY_BITS: usize = 4096;

/// The last `memory` outputs `x(n - memory) .. x(n - 1)`, bit-packed.
///
/// Bits are appended into a linear buffer; when the buffer fills up the live
/// window is copied back to the front, so each push is amortized O(1) and the
/// window is always a contiguous bit range.
#[derive(Debug, Clone)]
pub struct BitState {
    memory: usize,
    buf: Vec<u64>,
    capacity: usize,
    head: usize,
    time: u64,
}

impl BitState {
    /// State after the initial window `x(0) .. x(memory - 1)`; `time = memory`.
    pub fn new(init: &[bool]) -> Result<Self> {
        let memory = init.len();
        if memory == 0 {
            return Err(Error::ShapeMismatch {
                expected: 1,
                got: 0,
            });
        }
        let capacity = (4 * memory).max(MIN_CAPACITY_BITS).next_multiple_of(64);
        let mut state = Self {
            memory,
            // one spare word so unaligned reads at the end stay in bounds
            buf: vec![0; capacity / 64 + 1],
            capacity,
            head: 0,
            time: 0,
        };
        for &bit in init {
            state.write(bit);
        }
        Ok(state)
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Index `n` of the next output.
    pub fn time(&self) -> u64 {
        self.time
    }

    #[inline]
    fn bit_at(&self, pos: usize) -> bool {
        (self.buf[pos >> 6] >> (pos & 63)) & 1 == 1
    }

    /// `x(n - j)` for `1 <= j <= memory`.
    #[inline]
    pub fn back(&self, j: usize) -> bool {
        debug_assert!((1..=self.memory).contains(&j));
        self.bit_at(self.head - j)
    }

    /// Window bit `t`, oldest first: `x(n - memory + t)`.
    #[inline]
    pub fn get(&self, t: usize) -> bool {
        self.bit_at(self.head - self.memory + t)
    }

    #[inline]
    fn write(&mut self, bit: bool) {
        if self.head == self.capacity {
            self.compact();
        }
        let (w, b) = (self.head >> 6, self.head & 63);
        self.buf[w] = (self.buf[w] & !(1 << b)) | ((bit as u64) << b);
        self.head += 1;
        self.time += 1;
    }

    /// Appends `x(n)` and slides the window by one.
    #[inline]
    pub fn push(&mut self, bit: bool) {
        self.write(bit);
    }

    fn compact(&mut self) {
        let words: Vec<u64> = self.words().collect();
        self.buf[..words.len()].copy_from_slice(&words);
        self.head = self.memory;
    }

    fn word_count(&self) -> usize {
        self.memory.div_ceil(64)
    }

    #[inline]
    fn word(&self, w: usize) -> u64 {
        let start = self.head - self.memory + 64 * w;
        let (q, r) = (start >> 6, start & 63);
        let mut word = self.buf[q] >> r;
        if r != 0 {
            word |= self.buf[q + 1] << (64 - r);
        }
        let tail = self.memory & 63;
        if w + 1 == self.word_count() && tail != 0 {
            word &= (1u64 << tail) - 1;
        }
        word
    }

    /// The window as packed words, oldest bit in bit 0 of the first word.
    pub fn words(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.word_count()).map(|w| self.word(w))
    }

    pub fn snapshot(&self) -> Vec<u64> {
        self.words().collect()
    }

    /// Whether both windows hold the same bits (times may differ).
    pub fn same_window(&self, other: &BitState) -> bool {
        self.memory == other.memory && self.words().eq(other.words())
    }

    pub fn window_bits(&self) -> Vec<bool> {
        (0..self.memory).map(|t| self.get(t)).collect()
    }

    pub fn popcount(&self) -> u32 {
        self.words().map(u64::count_ones).sum()
    }

    pub fn is_all_zero(&self) -> bool {
        self.words().all(|w| w == 0)
    }
}

/// A system with weights scaled to integers by a common denominator `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledSystem {
    pub memory: usize,
    /// `(j, D · a_j)` for every nonzero `a_j`, ascending in `j`.
    pub taps: Vec<(usize, i64)>,
    /// `D · θ`.
    pub threshold: i64,
    pub denominator: BigInt,
}

fn scale(value: &BigRational, denominator: &BigInt) -> Result<i64> {
    let scaled = value * BigRational::from_integer(denominator.clone());
    debug_assert!(scaled.is_integer());
    scaled.to_integer().to_i64().ok_or_else(|| Error::ScaleOverflow {
        denominator: denominator.to_string(),
    })
}

impl CompiledSystem {
    pub fn compile(system: &RecurrenceSystem) -> Result<Self> {
        let denominator = system.common_denominator();
        let taps = system
            .nonzero_weights()
            .map(|(j, w)| Ok((j, scale(w, &denominator)?)))
            .collect::<Result<Vec<_>>>()?;
        let threshold = scale(&system.threshold, &denominator)?;
        // every partial sum minus the threshold must stay inside i64
        let bound = taps
            .iter()
            .try_fold(threshold.unsigned_abs(), |acc, &(_, w)| {
                acc.checked_add(w.unsigned_abs())
            });
        if bound.map_or(true, |b| b > i64::MAX as u64) {
            return Err(Error::ScaleOverflow {
                denominator: denominator.to_string(),
            });
        }
        Ok(Self {
            memory: system.memory,
            taps,
            threshold,
            denominator,
        })
    }

    pub fn check_shape(&self, len: usize) -> Result<()> {
        if len == self.memory {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: self.memory,
                got: len,
            })
        }
    }

    /// `D · Σ a_j x(n - j)` for the current window.
    #[inline]
    pub fn scaled_sum(&self, state: &BitState) -> i64 {
        self.taps
            .iter()
            .filter(|&&(j, _)| state.back(j))
            .map(|&(_, w)| w)
            .sum()
    }

    #[inline]
    pub(crate) fn advance(&self, state: &mut BitState) -> bool {
        let bit = self.scaled_sum(state) >= self.threshold;
        state.push(bit);
        bit
    }

    /// Computes `x(n)`, appends it to the window and returns it.
    pub fn step(&self, state: &mut BitState) -> Result<bool> {
        self.check_shape(state.memory())?;
        Ok(self.advance(state))
    }

    pub fn initial_state(&self, init: &[bool]) -> Result<BitState> {
        self.check_shape(init.len())?;
        BitState::new(init)
    }

    /// Streaming trajectory starting from `init`; yields `x(memory), x(memory+1), ...`.
    pub fn simulate(&self, init: &[bool]) -> Result<Simulator<'_>> {
        Ok(Simulator {
            system: self,
            state: self.initial_state(init)?,
        })
    }
}

/// Infinite iterator over the outputs of a compiled system.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    system: &'a CompiledSystem,
    state: BitState,
}

impl Simulator<'_> {
    pub fn state(&self) -> &BitState {
        &self.state
    }

    pub fn into_state(self) -> BitState {
        self.state
    }

    pub fn skip_steps(&mut self, steps: u64) {
        for _ in 0..steps {
            self.system.advance(&mut self.state);
        }
    }
}

impl Iterator for Simulator<'_> {
    type Item = bool;

    #[inline]
    fn next(&mut self) -> Option<bool> {
        Some(self.system.advance(&mut self.state))
    }
}

/// `init` followed by `steps` outputs.
pub fn run(cs: &CompiledSystem, init: &[bool], steps: u64) -> Result<Vec<bool>> {
    let sim = cs.simulate(init)?;
    let mut trace = init.to_vec();
    trace.extend(sim.take(steps as usize));
    Ok(trace)
}

/// Reference evaluator: full-length rational dot product at every step.
pub fn dense_oracle_run(system: &RecurrenceSystem, init: &[bool], steps: u64) -> Result<Vec<bool>> {
    if init.len() != system.memory {
        return Err(Error::ShapeMismatch {
            expected: system.memory,
            got: init.len(),
        });
    }
    let k = system.memory;
    let mut trace = init.to_vec();
    for n in k..k + steps as usize {
        let mut sum = BigRational::zero();
        for (idx, a) in system.weights.iter().enumerate() {
            if trace[n - 1 - idx] {
                sum += a;
            }
        }
        trace.push(!(sum - &system.threshold).is_negative());
    }
    Ok(trace)
}
