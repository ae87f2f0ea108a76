//! Strict parsers for user-supplied numbers: decimal counts and
//! comma-separated coefficient lists.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Parses a non-negative decimal integer of any size. Only ASCII digits are
/// accepted: no sign, no separators, no surrounding whitespace.
pub fn parse_decimal(text: &str, context: &str) -> Result<BigUint> {
    if text.is_empty() {
        return Err(parse_error(context, "empty number"));
    }
    if let Some(rest) = text.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|c| c.is_ascii_digit()) {
            return Err(Error::InvalidInput(format!(
                "{context}: negative value {text} not allowed"
            )));
        }
    }
    if !text.bytes().all(|c| c.is_ascii_digit()) {
        return Err(parse_error(
            context,
            &format!("{text:?} is not a decimal integer"),
        ));
    }
    BigUint::parse_bytes(text.as_bytes(), 10)
        .ok_or_else(|| parse_error(context, &format!("{text:?} is not a decimal integer")))
}

/// Parses a positive integer that must fit in 64 bits.
pub fn parse_positive_u64(text: &str, context: &str) -> Result<u64> {
    let value = parse_decimal(text, context)?;
    if value.is_zero() {
        return Err(Error::InvalidInput(format!("{context}: must be positive")));
    }
    u64::try_from(&value)
        .map_err(|_| Error::InvalidInput(format!("{context}: {value} exceeds 64 bits")))
}

/// Parses `3,5,7` into a coefficient list. Every entry must be a positive
/// 64-bit integer; the list must be non-empty.
pub fn parse_coefficients(text: &str) -> Result<Vec<u64>> {
    if text.trim().is_empty() {
        return Err(Error::InvalidInput("coefficient list is empty".into()));
    }
    text.split(',')
        .enumerate()
        .map(|(i, item)| parse_positive_u64(item.trim(), &format!("coefficient a{}", i + 1)))
        .collect()
}

fn parse_error(context: &str, message: &str) -> Error {
    Error::Parse {
        context: context.to_string(),
        message: message.to_string(),
    }
}

/// Canonical decimal rendering: digits only, no leading zeros except `0`.
pub fn format_count(value: &BigUint) -> String {
    value.to_str_radix(10)
}
