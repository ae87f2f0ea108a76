//! The direct counting formula
//!
//! ```text
//! P(b) = sum over 0 <= t_i < d_i of C((b - sum a_i t_i) / M + 1, n - 1)
//! ```
//!
//! where a term is zero unless `M` divides `b - sum a_i t_i` and the quotient
//! is non-negative, and its inequality counterpart obtained by appending a
//! slack variable with coefficient 1.
//!
//! Since `sum a_i t_i <= n M - sum a_i < n M`, a nonzero term has
//! `sum a_i t_i = r + j M` for `r = b mod M` and some `0 <= j < n`, and its
//! value is `C(q - j + 1, n - 1)` with `q = b div M`. The evaluator therefore
//! tallies how many index tuples land on each `r + j M` and multiplies by the
//! `n` distinct coefficients at the end.
//!
//! The two index positions with the largest radices are not enumerated: for a
//! fixed assignment of the remaining ("outer") positions, the number of
//! `(t, u)` in the inner box with `a t + a' u = v` is a lattice-point count on
//! a line, computed in O(1). The outer positions are walked with a
//! [`MixedRadixCursor`], skipping whole blocks once the partial sum exceeds
//! `b`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{c_poly, to_u128, Count};
use crate::equation::{EquationSpec, MixedRadixCursor};
use crate::error::{Error, Result};

/// Default cap on the number of outer index tuples the direct route visits.
pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct DirectOptions {
    /// Maximum number of outer tuples to visit; `u64::MAX` disables the cap.
    pub budget: u64,
    /// Skip blocks of tuples whose weighted sum already exceeds `b`.
    pub prune: bool,
    /// Number of disjoint rank ranges evaluated in parallel.
    pub partitions: usize,
}

impl Default for DirectOptions {
    fn default() -> Self {
        DirectOptions {
            budget: DEFAULT_TERM_BUDGET,
            prune: true,
            partitions: 1,
        }
    }
}

impl DirectOptions {
    pub fn with_budget(budget: Option<u64>) -> Self {
        DirectOptions {
            budget: budget.unwrap_or(DEFAULT_TERM_BUDGET),
            ..Default::default()
        }
    }
}

/// Number of non-negative integer solutions of `sum a_i x_i = b`.
///
/// `budget` defaults to [`DEFAULT_TERM_BUDGET`].
pub fn count_eq_direct(spec: &EquationSpec, b: &BigUint, budget: Option<u64>) -> Result<Count> {
    count_eq_with(spec, b, &DirectOptions::with_budget(budget))
}

/// Number of non-negative integer solutions of `sum a_i x_i <= b`, via the
/// equation with an extra unit-coefficient slack variable.
pub fn count_leq_direct(spec: &EquationSpec, b: &BigUint, budget: Option<u64>) -> Result<Count> {
    count_leq_with(spec, b, &DirectOptions::with_budget(budget))
}

pub fn count_leq_with(spec: &EquationSpec, b: &BigUint, opts: &DirectOptions) -> Result<Count> {
    count_eq_with(&spec.with_slack(), b, opts)
}

pub fn count_eq_with(spec: &EquationSpec, b: &BigUint, opts: &DirectOptions) -> Result<Count> {
    let plan = Plan::new(spec, b)?;
    let work = plan.outer_work(b, opts.prune);
    if work > BigUint::from(opts.budget) {
        return Err(Error::BudgetExceeded {
            needed: work.to_string(),
            budget: opts.budget,
        });
    }
    let total = plan.outer_total()?;
    let parts = opts.partitions.max(1) as u128;
    let hits = if parts == 1 {
        plan.tally(0, total, opts.prune)?
    } else {
        let bounds: Vec<(u128, u128)> = (0..parts)
            .map(|k| (total * k / parts, total * (k + 1) / parts))
            .filter(|(lo, hi)| lo < hi)
            .collect();
        let partial = bounds
            .into_par_iter()
            .map(|(lo, hi)| plan.tally(lo, hi, opts.prune))
            .collect::<Result<Vec<_>>>()?;
        partial
            .into_iter()
            .fold(vec![BigUint::zero(); plan.n], |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(part) {
                    *a += p;
                }
                acc
            })
    };
    Ok(plan.combine(&hits))
}

/// Term-by-term evaluation of the direct formula over every index tuple, with
/// no grouping. Far slower than [`count_eq_direct`]; kept as a
/// reference evaluator for small instances.
pub fn count_eq_termwise(spec: &EquationSpec, b: &BigUint, budget: u64) -> Result<Count> {
    let terms = spec.term_count();
    if terms > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: terms.to_string(),
            budget,
        });
    }
    let b = BigInt::from(b.clone());
    let modulus = BigInt::from(spec.modulus().clone());
    let degree = spec.n() as u64 - 1;
    let mut cursor = spec.cursor()?;
    let mut acc = Count::zero();
    while !cursor.is_exhausted() {
        let rest = &b - BigInt::from(cursor.running_sum());
        let (f, rem) = rest.div_mod_floor(&modulus);
        if rem.is_zero() {
            acc += c_poly(&(f + 1), degree);
        }
        cursor.advance()?;
    }
    Ok(acc)
}

/// Counts `(t, u)` with `0 <= t < d`, `0 <= u < d'` and `a t + a' u = v`.
#[derive(Clone, Debug)]
enum InnerSolver {
    Single {
        a: u128,
        d: u128,
    },
    Pair {
        a1: u128,
        d1: u128,
        gcd: u128,
        /// `a2 / gcd`: spacing of the `t` solutions.
        step: u128,
        /// Inverse of `a1 / gcd` modulo `step`.
        inv: u128,
        /// `a2 (d2 - 1)`.
        span2: u128,
    },
}

impl InnerSolver {
    fn new(inner: &[(u64, u128)]) -> Result<Self> {
        match *inner {
            [(a, d)] => Ok(InnerSolver::Single { a: a as u128, d }),
            [(a1, d1), (a2, d2)] => {
                let g = a1.gcd(&a2);
                let step = (a2 / g) as u128;
                let inv = mod_inverse((a1 / g) as u128, step)
                    .ok_or_else(|| Error::Logic("coprime reduction has no inverse".into()))?;
                Ok(InnerSolver::Pair {
                    a1: a1 as u128,
                    d1,
                    gcd: g as u128,
                    step,
                    inv,
                    span2: a2 as u128 * (d2 - 1),
                })
            }
            _ => Err(Error::Logic(
                "inner block must have one or two positions".into(),
            )),
        }
    }

    fn max_sum(&self) -> u128 {
        match *self {
            InnerSolver::Single { a, d } => a * (d - 1),
            InnerSolver::Pair { a1, d1, span2, .. } => a1 * (d1 - 1) + span2,
        }
    }

    fn count(&self, v: u128) -> u128 {
        match *self {
            InnerSolver::Single { a, d } => u128::from(v.is_multiple_of(a) && v / a < d),
            InnerSolver::Pair {
                a1,
                d1,
                gcd,
                step,
                inv,
                span2,
            } => {
                if !v.is_multiple_of(gcd) {
                    return 0;
                }
                let residue = mul_mod((v / gcd) % step, inv, step);
                let lo = if v > span2 {
                    (v - span2).div_ceil(a1)
                } else {
                    0
                };
                let hi = (d1 - 1).min(v / a1);
                if lo > hi {
                    return 0;
                }
                let first = lo + (residue + step - lo % step) % step;
                if first > hi {
                    0
                } else {
                    (hi - first) / step + 1
                }
            }
        }
    }
}

fn mul_mod(x: u128, y: u128, m: u128) -> u128 {
    // both operands are below m <= 2^64
    (x * y) % m
}

fn mod_inverse(x: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (x as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u128)
}

struct Plan {
    n: usize,
    modulus: u128,
    residue: u128,
    quotient: BigUint,
    /// `b` clamped to 128 bits, used only for pruning comparisons.
    b_clamped: u128,
    inner: InnerSolver,
    inner_max: u128,
    outer_coefficients: Vec<u64>,
    outer_radices: Vec<BigUint>,
}

impl Plan {
    fn new(spec: &EquationSpec, b: &BigUint) -> Result<Self> {
        let n = spec.n();
        let modulus = to_u128(spec.modulus(), "modulus")?;
        if modulus > u128::MAX / (4 * (n as u128 + 1)) {
            return Err(Error::Resource(format!(
                "modulus {modulus} is too large for the direct route"
            )));
        }
        let (quotient, residue) = b.div_rem(spec.modulus());
        let residue = to_u128(&residue, "residue")?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| spec.radices()[j].cmp(&spec.radices()[i]).then(i.cmp(&j)));
        let split = n.min(2);
        let inner: Vec<(u64, u128)> = order[..split]
            .iter()
            .map(|&i| {
                Ok((
                    spec.coefficients()[i],
                    to_u128(&spec.radices()[i], "radix")?,
                ))
            })
            .collect::<Result<_>>()?;
        let inner = InnerSolver::new(&inner)?;
        let outer_coefficients = order[split..]
            .iter()
            .map(|&i| spec.coefficients()[i])
            .collect();
        let outer_radices = order[split..]
            .iter()
            .map(|&i| spec.radices()[i].clone())
            .collect();
        Ok(Plan {
            n,
            modulus,
            residue,
            quotient,
            b_clamped: b.to_u128().unwrap_or(u128::MAX),
            inner_max: inner.max_sum(),
            inner,
            outer_coefficients,
            outer_radices,
        })
    }

    /// Upper bound on the outer tuples visited.
    fn outer_work(&self, b: &BigUint, prune: bool) -> BigUint {
        self.outer_coefficients
            .iter()
            .zip(&self.outer_radices)
            .map(|(&a, d)| {
                if prune {
                    d.min(&(b / a + 1u32)).clone()
                } else {
                    d.clone()
                }
            })
            .product()
    }

    fn outer_total(&self) -> Result<u128> {
        let total: BigUint = self.outer_radices.iter().product();
        to_u128(&total, "outer tuple count")
    }

    fn outer_cursor(&self, rank: u128) -> Result<MixedRadixCursor> {
        let radices = self
            .outer_radices
            .iter()
            .map(|d| {
                d.to_u64()
                    .ok_or_else(|| Error::Resource(format!("radix {d} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        MixedRadixCursor::at_rank(self.outer_coefficients.clone(), radices, rank)
    }

    /// For each `j < n`, the number of index tuples with outer rank in
    /// `[start, end)` whose weighted sum is `r + j M`.
    fn tally(&self, start: u128, end: u128, prune: bool) -> Result<Vec<BigUint>> {
        let mut hits = vec![0u128; self.n];
        let mut spill = vec![BigUint::zero(); self.n];
        let mut cursor = self.outer_cursor(start)?;
        while !cursor.is_exhausted() && cursor.rank() < end {
            let outer_sum = cursor.running_sum();
            if prune && outer_sum > self.b_clamped {
                let pos = cursor
                    .lowest_nonzero()
                    .ok_or_else(|| Error::Logic("zero tuple exceeded b".into()))?;
                cursor.carry_from(pos)?;
                continue;
            }
            for (j, slot) in hits.iter_mut().enumerate() {
                let target = self.residue + j as u128 * self.modulus;
                if target < outer_sum {
                    continue;
                }
                let v = target - outer_sum;
                if v > self.inner_max {
                    break;
                }
                let found = self.inner.count(v);
                match slot.checked_add(found) {
                    Some(x) => *slot = x,
                    None => {
                        spill[j] += *slot;
                        *slot = found;
                    }
                }
            }
            cursor.advance()?;
        }
        Ok(spill.into_iter().zip(hits).map(|(s, h)| s + h).collect())
    }

    fn combine(&self, hits: &[BigUint]) -> Count {
        let q = BigInt::from(self.quotient.clone());
        let degree = self.n as u64 - 1;
        hits.iter()
            .enumerate()
            .filter(|(_, h)| !h.is_zero())
            .map(|(j, h)| h * c_poly(&(&q - j + 1), degree))
            .sum()
    }
}
