//! Integer parameters of the construction, all derived from the scale `m`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// Everything the construction needs to know about the prime window
/// `(2m, 3m)`.
///
/// Primes are indexed in descending order: `primes[0]` is the largest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowParams {
    pub m: usize,
    pub primes: Vec<usize>,
    pub rho: usize,
    /// `alphas[i] = 3m - primes[i]`.
    pub alphas: Vec<usize>,
    /// Memory of a single-neuron system, `(6m - 1) * rho`.
    pub k: usize,
    /// Memory of a shuffled system, `rho * k`.
    pub h: usize,
    /// `mu[i] = floor(k / primes[i])`.
    pub mu: Vec<usize>,
    /// `beta_m[i] = k - primes[i] * mu[i]`.
    pub beta_m: Vec<usize>,
}

/// Cycle lengths attached to a bifurcation index `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleLengths {
    /// Period of `w(·, d)` and `z(·, d)`.
    pub l0: BigUint,
    /// `rho * lcm(p_0..=p_d)`.
    pub l1: BigUint,
    /// Period of `y`.
    pub l2: BigUint,
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn window_params(m: usize) -> Result<WindowParams> {
    if m < 2 {
        return Err(Error::InvalidScale { m });
    }
    let (lo, hi) = (2 * m, 3 * m);
    let primes: Vec<usize> = (lo + 1..hi).rev().filter(|&p| is_prime(p)).collect();
    let rho = primes.len();
    if rho < 2 {
        return Err(Error::RhoTooSmall { m, rho, lo, hi });
    }
    let k = (6 * m - 1) * rho;
    let h = rho * k;
    let alphas = primes.iter().map(|&p| hi - p).collect();
    let mu: Vec<usize> = primes.iter().map(|&p| k / p).collect();
    let beta_m = primes.iter().zip(&mu).map(|(&p, &u)| k - p * u).collect();
    Ok(WindowParams {
        m,
        primes,
        rho,
        alphas,
        k,
        h,
        mu,
        beta_m,
    })
}

/// Least common multiple of `values`; `1` for the empty list.
pub fn lcm_list(values: &[usize]) -> BigUint {
    values
        .iter()
        .fold(BigUint::one(), |acc, &v| acc.lcm(&BigUint::from(v)))
}

/// Narrows an exact length to `u64`, failing with [`Error::Overflow`].
pub fn to_u64(value: &BigUint) -> Result<u64> {
    value
        .to_u64()
        .ok_or_else(|| Error::Overflow(value.to_string()))
}

impl WindowParams {
    pub(crate) fn check_lane(&self, what: &'static str, i: usize) -> Result<()> {
        if i < self.rho {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                what,
                index: i,
                lo: 0,
                hi: self.rho - 1,
            })
        }
    }

    pub fn cycle_lengths(&self, d: usize) -> Result<CycleLengths> {
        self.check_lane("bifurcation", d)?;
        let rho = BigUint::from(self.rho);
        let l0 = if d + 2 <= self.rho {
            &rho * lcm_list(&self.primes[d + 1..])
        } else {
            BigUint::one()
        };
        Ok(CycleLengths {
            l0,
            l1: &rho * lcm_list(&self.primes[..=d]),
            l2: &rho * lcm_list(&self.primes),
        })
    }

    /// Period of the shuffled system `y`.
    pub fn l2(&self) -> BigUint {
        BigUint::from(self.rho) * lcm_list(&self.primes)
    }

    /// Start of the cyclic phase of `z(·, d)`:
    /// `L1(d) + h + d + 1 - rho * (1 + p_d)`.
    pub fn z_transient(&self, d: usize) -> Result<BigUint> {
        let l1 = self.cycle_lengths(d)?.l1;
        let add = BigUint::from(self.h + d + 1);
        let sub = BigUint::from(self.rho * (1 + self.primes[d]));
        Ok(l1 + add - sub)
    }

    /// End of the fourth phase of `z(·, d)`:
    /// `L1(d) + 2h + d - rho * (1 + p_d)`.
    pub fn phase4_end(&self, d: usize) -> Result<BigUint> {
        Ok(self.z_transient(d)? + BigUint::from(self.h) - BigUint::one())
    }

    /// Transient of the target system `w(·, d)`:
    /// `rho * (k - p_d - 1) + d + 1`.
    pub fn w_transient(&self, d: usize) -> Result<u64> {
        self.check_lane("bifurcation", d)?;
        Ok((self.rho * (self.k - self.primes[d] - 1) + d + 1) as u64)
    }

    /// Index `e` of the smallest `beta_m` (first one on ties).
    pub fn beta_min_index(&self) -> usize {
        let mut best = 0;
        for (i, &b) in self.beta_m.iter().enumerate() {
            if b < self.beta_m[best] {
                best = i;
            }
        }
        best
    }

    pub fn sum_mu(&self, lanes: std::ops::Range<usize>) -> usize {
        self.mu[lanes].iter().sum()
    }

    pub(crate) fn weight_threshold(&self) -> i64 {
        2 * self.rho as i64
    }
}
