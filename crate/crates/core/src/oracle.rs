//! Reference counts from the classical coin-change recurrence over the value
//! axis. Shares no code with the formula routes.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::Count;
use crate::error::{Error, Result};

pub const DEFAULT_ORACLE_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    /// Largest right-hand side the oracle accepts.
    pub cap: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            cap: DEFAULT_ORACLE_CAP,
        }
    }
}

impl Oracle {
    pub fn with_cap(cap: u64) -> Self {
        Oracle { cap }
    }

    /// `ways[c]` for every `0 <= c <= b_max`: solutions of `sum a_i x_i = c`.
    pub fn counts_up_to(&self, coefficients: &[u64], b_max: u64) -> Result<Vec<Count>> {
        self.check(coefficients, b_max)?;
        let len = b_max as usize + 1;
        let mut ways = vec![BigUint::zero(); len];
        ways[0] = BigUint::one();
        for &a in coefficients {
            let a = a as usize;
            for c in a..len {
                let (lo, hi) = ways.split_at_mut(c);
                hi[0] += &lo[c - a];
            }
        }
        Ok(ways)
    }

    pub fn count(&self, coefficients: &[u64], b: u64) -> Result<Count> {
        let mut ways = self.counts_up_to(coefficients, b)?;
        Ok(ways.pop().unwrap_or_default())
    }

    /// Solutions of `sum a_i x_i <= b`.
    pub fn count_leq(&self, coefficients: &[u64], b: u64) -> Result<Count> {
        Ok(self.counts_up_to(coefficients, b)?.into_iter().sum())
    }

    /// Tuples with `sum a_j t_j = c` and `0 <= t_j <= upper_bounds[j]`.
    pub fn count_bounded(
        &self,
        coefficients: &[u64],
        upper_bounds: &[u64],
        c: u64,
    ) -> Result<Count> {
        if coefficients.len() != upper_bounds.len() {
            return Err(Error::InvalidInput(format!(
                "{} coefficients but {} bounds",
                coefficients.len(),
                upper_bounds.len()
            )));
        }
        self.check(coefficients, c)?;
        let len = c as usize + 1;
        let mut ways = vec![BigUint::zero(); len];
        ways[0] = BigUint::one();
        for (&a, &bound) in coefficients.iter().zip(upper_bounds) {
            let mut next = vec![BigUint::zero(); len];
            for (v, w) in ways.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                for k in 0..=bound {
                    let Some(target) = (k as u128)
                        .checked_mul(a as u128)
                        .map(|x| x + v as u128)
                        .filter(|&x| x < len as u128)
                    else {
                        break;
                    };
                    next[target as usize] += w;
                }
            }
            ways = next;
        }
        Ok(ways.pop().unwrap_or_default())
    }

    fn check(&self, coefficients: &[u64], b: u64) -> Result<()> {
        if coefficients.is_empty() {
            return Err(Error::InvalidInput("coefficient list is empty".into()));
        }
        if coefficients.contains(&0) {
            return Err(Error::InvalidInput("coefficients must be positive".into()));
        }
        if b > self.cap {
            return Err(Error::Resource(format!(
                "right-hand side {b} exceeds the oracle cap {}",
                self.cap
            )));
        }
        Ok(())
    }
}

pub fn count_dp(coefficients: &[u64], b: u64) -> Result<Count> {
    Oracle::default().count(coefficients, b)
}

pub fn count_leq_dp(coefficients: &[u64], b: u64) -> Result<Count> {
    Oracle::default().count_leq(coefficients, b)
}

pub fn count_bounded_dp(coefficients: &[u64], upper_bounds: &[u64], c: u64) -> Result<Count> {
    Oracle::default().count_bounded(coefficients, upper_bounds, c)
}
