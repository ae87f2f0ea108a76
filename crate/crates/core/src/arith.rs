//! Exact integer primitives: gcd/lcm of coefficient lists, the rising-factorial
//! coefficient `C(k, l)` and the stars-and-bars count.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A solution count. Unsigned and unbounded.
pub type Count = BigUint;

/// Returns the gcd and the (exact) lcm of a non-empty list of positive integers.
pub fn gcd_lcm_all(coefficients: &[u64]) -> Result<(u64, BigUint)> {
    let (&first, rest) = coefficients
        .split_first()
        .ok_or_else(|| Error::InvalidInput("coefficient list is empty".into()))?;
    if let Some(pos) = coefficients.iter().position(|&a| a == 0) {
        return Err(Error::InvalidInput(format!(
            "coefficient a{} is zero; all coefficients must be positive",
            pos + 1
        )));
    }
    let mut gcd = first;
    let mut lcm = BigUint::from(first);
    for &a in rest {
        gcd = gcd.gcd(&a);
        lcm = lcm.lcm(&BigUint::from(a));
    }
    Ok((gcd, lcm))
}

/// `C(k, l) = k (k+1) ... (k+l-1) / l!` when `k >= 1`, and zero otherwise.
///
/// For `k >= 1` this is `binomial(k + l - 1, l)`; `C(k, 0)` is the empty product 1.
pub fn c_poly(k: &BigInt, l: u64) -> Count {
    if !k.is_positive() {
        return Count::zero();
    }
    let k = k.magnitude();
    let mut acc = BigUint::one();
    for i in 0..l {
        // acc holds a product of i+1 consecutive integers over i!, so the
        // division by i+1 is exact.
        acc *= k + i;
        acc /= i + 1;
    }
    acc
}

/// Convenience wrapper for small arguments.
pub fn c_poly_i64(k: i64, l: u64) -> Count {
    c_poly(&BigInt::from(k), l)
}

/// Number of non-negative integer solutions of `x_1 + ... + x_n = m`.
pub fn stars_and_bars(m: &BigInt, n: u64) -> Result<Count> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "stars and bars needs at least one variable".into(),
        ));
    }
    if m.is_negative() {
        return Ok(Count::zero());
    }
    Ok(c_poly(&(m + 1u32), n - 1))
}

/// Lossless conversion used where a count must drive a loop bound.
pub(crate) fn to_u128(value: &BigUint, what: &str) -> Result<u128> {
    value
        .to_u128()
        .ok_or_else(|| Error::Resource(format!("{what} ({value}) does not fit in 128 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(rows: usize) -> Vec<Vec<BigUint>> {
        let mut tri: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for r in 1..rows {
            let prev = &tri[r - 1];
            let mut row = vec![BigUint::one(); r + 1];
            for j in 1..r {
                row[j] = &prev[j - 1] + &prev[j];
            }
            tri.push(row);
        }
        tri
    }

    fn brute_compositions(m: usize, n: usize) -> u64 {
        // counts tuples of n non-negative integers summing to m
        fn go(m: usize, n: usize) -> u64 {
            if n == 1 {
                return 1;
            }
            (0..=m).map(|x| go(m - x, n - 1)).sum()
        }
        go(m, n)
    }

    #[test]
    fn gcd_lcm_examples() {
        assert_eq!(
            gcd_lcm_all(&[6, 10, 15]).unwrap(),
            (1, BigUint::from(30u32))
        );
        assert_eq!(gcd_lcm_all(&[4]).unwrap(), (4, BigUint::from(4u32)));
        assert_eq!(gcd_lcm_all(&[2, 2, 2]).unwrap(), (2, BigUint::from(2u32)));
        assert!(matches!(gcd_lcm_all(&[]), Err(Error::InvalidInput(_))));
        assert!(matches!(gcd_lcm_all(&[3, 0]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn lcm_exceeds_machine_words() {
        let primes = [
            1_000_000_007u64,
            1_000_000_009,
            998_244_353,
            2_147_483_647,
            4_294_967_291,
        ];
        let (g, l) = gcd_lcm_all(&primes).unwrap();
        assert_eq!(g, 1);
        let product = primes.iter().fold(BigUint::one(), |acc, &p| acc * p);
        assert_eq!(l, product);
        assert!(l.to_u128().is_none());
    }

    #[test]
    fn c_poly_examples() {
        assert_eq!(c_poly_i64(1, 2), BigUint::from(1u32));
        assert_eq!(c_poly_i64(0, 3), BigUint::zero());
        assert_eq!(c_poly_i64(5, 2), BigUint::from(15u32));
        assert_eq!(c_poly_i64(-3, 4), BigUint::zero());
        assert_eq!(c_poly_i64(7, 0), BigUint::one());
        assert_eq!(c_poly_i64(0, 0), BigUint::zero());
    }

    #[test]
    fn c_poly_matches_pascal() {
        let tri = pascal(60);
        for k in 1..30i64 {
            for l in 0..30u64 {
                let n = (k as usize) + (l as usize) - 1;
                assert_eq!(c_poly_i64(k, l), tri[n][l as usize], "C({k},{l})");
            }
        }
    }

    #[test]
    fn rising_factorial_divisible_by_factorial() {
        for k in 1..40u64 {
            for l in 0..12u64 {
                let rising: BigUint = (0..l).map(|i| BigUint::from(k + i)).product();
                let fact: BigUint = (1..=l).map(BigUint::from).product();
                assert!((&rising % &fact).is_zero());
                assert_eq!(c_poly_i64(k as i64, l), rising / fact);
            }
        }
    }

    #[test]
    fn c_poly_huge_argument() {
        // C(10^30, 2) = 10^30 (10^30 + 1) / 2
        let k: BigInt = BigInt::from(10u32).pow(30);
        let expected = (k.magnitude() * (k.magnitude() + 1u32)) / 2u32;
        assert_eq!(c_poly(&k, 2), expected);
    }

    #[test]
    fn stars_and_bars_examples() {
        let sb = |m: i64, n: u64| stars_and_bars(&BigInt::from(m), n).unwrap();
        assert_eq!(sb(0, 3), BigUint::from(1u32));
        assert_eq!(sb(4, 3), BigUint::from(15u32));
        assert_eq!(sb(2, 2), BigUint::from(3u32));
        assert_eq!(sb(-1, 2), BigUint::zero());
        assert_eq!(sb(9, 1), BigUint::one());
        assert!(stars_and_bars(&BigInt::from(3), 0).is_err());
    }

    #[test]
    fn stars_and_bars_matches_enumeration() {
        for n in 1..=5u64 {
            for m in 0..=30i64 {
                let expected = brute_compositions(m as usize, n as usize);
                let got = stars_and_bars(&BigInt::from(m), n).unwrap();
                assert_eq!(got, BigUint::from(expected), "m={m} n={n}");
                assert_eq!(got, c_poly_i64(m + 1, n - 1));
            }
        }
    }
}
