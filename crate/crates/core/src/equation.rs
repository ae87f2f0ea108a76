//! Validated equation instances `a_1 x_1 + ... + a_n x_n = b` and the
//! mixed-radix odometer over the index box `0 <= t_i < M / a_i`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{gcd_lcm_all, Count};
use crate::error::{Error, Result};

/// Positive coefficients together with a common multiple `M` of all of them
/// and the radices `d_i = M / a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSpec {
    coefficients: Vec<u64>,
    modulus: BigUint,
    radices: Vec<BigUint>,
}

impl EquationSpec {
    /// Builds a spec whose modulus is the lcm of the coefficients, or
    /// `modulus_override` when given (which must be a common multiple).
    pub fn new(coefficients: Vec<u64>, modulus_override: Option<BigUint>) -> Result<Self> {
        let (_, lcm) = gcd_lcm_all(&coefficients)?;
        let modulus = match modulus_override {
            None => lcm,
            Some(m) => {
                if m.is_zero() {
                    return Err(Error::InvalidInput("modulus must be positive".into()));
                }
                if let Some(i) = coefficients.iter().position(|&a| !(&m % a).is_zero()) {
                    return Err(Error::InvalidInput(format!(
                        "modulus {m} is not a common multiple: a{} = {} does not divide it",
                        i + 1,
                        coefficients[i]
                    )));
                }
                m
            }
        };
        let radices = coefficients.iter().map(|&a| &modulus / a).collect();
        Ok(EquationSpec {
            coefficients,
            modulus,
            radices,
        })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn n(&self) -> usize {
        self.coefficients.len()
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn radices(&self) -> &[BigUint] {
        &self.radices
    }

    /// Number of index tuples in the direct formula, `d_1 d_2 ... d_n`.
    /// Independent of the right-hand side.
    pub fn term_count(&self) -> Count {
        self.radices.iter().product()
    }

    pub fn coefficient_sum(&self) -> BigUint {
        self.coefficients.iter().map(|&a| BigUint::from(a)).sum()
    }

    /// Largest value of `sum a_i t_i` over the index box: `n M - sum a_i`.
    pub fn support_bound(&self) -> BigUint {
        &self.modulus * self.n() - self.coefficient_sum()
    }

    /// The same instance with a slack variable of coefficient 1 appended,
    /// keeping the modulus.
    pub fn with_slack(&self) -> EquationSpec {
        let mut coefficients = self.coefficients.clone();
        coefficients.push(1);
        let mut radices = self.radices.clone();
        radices.push(self.modulus.clone());
        EquationSpec {
            coefficients,
            modulus: self.modulus.clone(),
            radices,
        }
    }

    /// Radices as machine words, failing when any exceeds 64 bits.
    pub fn small_radices(&self) -> Result<Vec<u64>> {
        self.radices
            .iter()
            .map(|d| {
                d.to_u64()
                    .ok_or_else(|| Error::Resource(format!("radix {d} is too large to enumerate")))
            })
            .collect()
    }

    /// Odometer over the whole index box, starting at the all-zero tuple.
    pub fn cursor(&self) -> Result<MixedRadixCursor> {
        MixedRadixCursor::new(self.coefficients.clone(), self.small_radices()?)
    }
}

/// Odometer over `0 <= t_i < d_i` with `t_1` varying fastest. Tracks the
/// weighted sum `sum a_i t_i` and the linear rank of the current tuple.
#[derive(Clone, Debug)]
pub struct MixedRadixCursor {
    coefficients: Vec<u64>,
    radices: Vec<u64>,
    place: Vec<u128>,
    total: u128,
    max_sum: u128,
    digits: Vec<u64>,
    running_sum: u128,
    rank: u128,
    exhausted: bool,
}

impl MixedRadixCursor {
    pub fn new(coefficients: Vec<u64>, radices: Vec<u64>) -> Result<Self> {
        if coefficients.len() != radices.len() {
            return Err(Error::InvalidInput(format!(
                "{} coefficients but {} radices",
                coefficients.len(),
                radices.len()
            )));
        }
        if radices.contains(&0) {
            return Err(Error::InvalidInput("radices must be positive".into()));
        }
        let overflow = || Error::Resource("index box is too large to enumerate".into());
        let mut place = Vec::with_capacity(radices.len());
        let mut total: u128 = 1;
        let mut max_sum: u128 = 0;
        for (&a, &d) in coefficients.iter().zip(&radices) {
            place.push(total);
            total = total.checked_mul(d as u128).ok_or_else(overflow)?;
            let top = (a as u128)
                .checked_mul(d as u128 - 1)
                .ok_or_else(overflow)?;
            max_sum = max_sum.checked_add(top).ok_or_else(overflow)?;
        }
        let n = radices.len();
        Ok(MixedRadixCursor {
            coefficients,
            radices,
            place,
            total,
            max_sum,
            digits: vec![0; n],
            running_sum: 0,
            rank: 0,
            exhausted: false,
        })
    }

    /// Cursor positioned on an arbitrary starting tuple.
    pub fn starting_at(coefficients: Vec<u64>, radices: Vec<u64>, digits: &[u64]) -> Result<Self> {
        let mut cursor = Self::new(coefficients, radices)?;
        if digits.len() != cursor.digits.len() {
            return Err(Error::InvalidInput(
                "digit tuple has the wrong length".into(),
            ));
        }
        for (i, &t) in digits.iter().enumerate() {
            if t >= cursor.radices[i] {
                return Err(Error::InvalidInput(format!(
                    "digit t{} = {t} is outside [0, {})",
                    i + 1,
                    cursor.radices[i]
                )));
            }
            cursor.digits[i] = t;
            cursor.running_sum += cursor.coefficients[i] as u128 * t as u128;
            cursor.rank += cursor.place[i] * t as u128;
        }
        Ok(cursor)
    }

    /// Cursor positioned on the tuple with the given linear rank. A rank equal
    /// to `total()` gives an exhausted cursor.
    pub fn at_rank(coefficients: Vec<u64>, radices: Vec<u64>, rank: u128) -> Result<Self> {
        let mut cursor = Self::new(coefficients, radices)?;
        if rank > cursor.total {
            return Err(Error::InvalidInput(format!(
                "rank {rank} is beyond the {} tuples of the box",
                cursor.total
            )));
        }
        if rank == cursor.total {
            cursor.rank = rank;
            cursor.exhausted = true;
            return Ok(cursor);
        }
        let mut rest = rank;
        for i in 0..cursor.digits.len() {
            let d = cursor.radices[i] as u128;
            let t = (rest % d) as u64;
            rest /= d;
            cursor.digits[i] = t;
            cursor.running_sum += cursor.coefficients[i] as u128 * t as u128;
        }
        cursor.rank = rank;
        Ok(cursor)
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    pub fn running_sum(&self) -> u128 {
        self.running_sum
    }

    pub fn rank(&self) -> u128 {
        self.rank
    }

    /// Number of tuples in the box.
    pub fn total(&self) -> u128 {
        self.total
    }

    /// Largest weighted sum over the box, `sum a_i (d_i - 1)`.
    pub fn max_sum(&self) -> u128 {
        self.max_sum
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Moves to the next tuple, or to the exhausted state after the last one.
    pub fn advance(&mut self) -> Result<()> {
        self.ensure_live()?;
        self.increment_at(0);
        Ok(())
    }

    /// Skips every remaining tuple that agrees with the current one on the
    /// digits above `pos`: digits `0..=pos` are reset and digit `pos + 1`
    /// is incremented with carry.
    pub fn carry_from(&mut self, pos: usize) -> Result<()> {
        self.ensure_live()?;
        if pos >= self.digits.len() {
            return Err(Error::Logic(format!(
                "carry position {pos} outside a {}-digit cursor",
                self.digits.len()
            )));
        }
        for i in 0..=pos {
            self.clear_digit(i);
        }
        self.increment_at(pos + 1);
        Ok(())
    }

    /// Position of the lowest nonzero digit, if any.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.digits.iter().position(|&t| t != 0)
    }

    fn ensure_live(&self) -> Result<()> {
        if self.exhausted {
            Err(Error::Logic("cursor advanced past its last tuple".into()))
        } else {
            Ok(())
        }
    }

    fn clear_digit(&mut self, i: usize) {
        let t = self.digits[i] as u128;
        self.running_sum -= self.coefficients[i] as u128 * t;
        self.rank -= self.place[i] * t;
        self.digits[i] = 0;
    }

    fn increment_at(&mut self, mut i: usize) {
        while i < self.digits.len() {
            if self.digits[i] + 1 < self.radices[i] {
                self.digits[i] += 1;
                self.running_sum += self.coefficients[i] as u128;
                self.rank += self.place[i];
                return;
            }
            self.clear_digit(i);
            i += 1;
        }
        self.exhausted = true;
        self.rank = self.total;
    }
}
