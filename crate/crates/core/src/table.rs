//! Bounded-solution profiles and residue tables.
//!
//! For an index box `0 <= t_j < d_j` the profile records, for every value `c`,
//! how many tuples have `sum a_j t_j = c`. Reading the profile at
//! `r, r + M, ..., r + (n-1) M` gives the row `l_1..l_n` for residue `r`, and
//!
//! ```text
//! P(b) = sum_{i=1}^{n} l_i(r) C(q + 2 - i, n - 1),   q = b div M, r = b mod M
//! ```
//!
//! so one table answers every right-hand side with `n` big-integer terms.
//!
//! Storage: `rows[r][i - 1]` holds `l_i(r)`.

use std::io::{Read, Write};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{c_poly, Count};
use crate::equation::EquationSpec;
use crate::error::{Error, Result};
use crate::input::{format_count, parse_decimal};

/// Largest modulus a table is built for by default.
pub const DEFAULT_MAX_MODULUS: u64 = 10_000_000;

pub const FORMAT_VERSION: &str = "1";

/// `c -> P'(c)`: tuple counts of the bounded system, stored densely on
/// `0..=n M - sum a_j`. Zero everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedProfile {
    spec: EquationSpec,
    counts: Vec<Count>,
}

impl BoundedProfile {
    pub fn spec(&self) -> &EquationSpec {
        &self.spec
    }

    /// `P'(c)`; zero outside the stored support.
    pub fn get(&self, c: u64) -> Count {
        usize::try_from(c)
            .ok()
            .and_then(|i| self.counts.get(i))
            .cloned()
            .unwrap_or_default()
    }

    /// Largest `c` stored, `n M - sum a_j`.
    pub fn support_bound(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    pub fn counts(&self) -> &[Count] {
        &self.counts
    }

    /// Sum of all profile values; equals the number of tuples in the box.
    pub fn total(&self) -> Count {
        self.counts.iter().sum()
    }
}

pub fn bounded_profile(spec: &EquationSpec) -> Result<BoundedProfile> {
    bounded_profile_capped(spec, DEFAULT_MAX_MODULUS)
}

/// Bounded-coin dynamic program, one pass per variable. Each pass is a
/// sliding-window sum: `new[c] = new[c - a] + old[c] - old[c - d a]`.
pub fn bounded_profile_capped(spec: &EquationSpec, max_modulus: u64) -> Result<BoundedProfile> {
    let modulus = checked_modulus(spec, max_modulus)?;
    let len = spec
        .support_bound()
        .to_usize()
        .and_then(|s| s.checked_add(1))
        .ok_or_else(|| Error::Resource("profile does not fit in memory".into()))?;
    let radices = spec.small_radices()?;

    let mut counts = vec![Count::zero(); len];
    counts[0] = Count::from(1u32);
    // highest index reachable by the variables processed so far
    let mut reach = 0usize;
    for (&a, &d) in spec.coefficients().iter().zip(&radices) {
        let a = a as usize;
        let d = d as usize;
        debug_assert_eq!(a as u64 * d as u64, modulus);
        let window = a * d;
        reach += a * (d - 1);
        let mut next = vec![Count::zero(); len];
        for c in 0..=reach {
            let mut value = counts[c].clone();
            if c >= a {
                value += &next[c - a];
            }
            if c >= window {
                value -= &counts[c - window];
            }
            next[c] = value;
        }
        counts = next;
    }
    Ok(BoundedProfile {
        spec: spec.clone(),
        counts,
    })
}

fn checked_modulus(spec: &EquationSpec, max_modulus: u64) -> Result<u64> {
    match spec.modulus().to_u64() {
        Some(m) if m <= max_modulus => Ok(m),
        _ => Err(Error::Resource(format!(
            "modulus {} exceeds the table limit {max_modulus}; use the direct route instead",
            spec.modulus()
        ))),
    }
}

/// Per-residue rows `l_i(r) = P'(r + (i-1) M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueTable {
    coefficients: Vec<u64>,
    modulus: u64,
    rows: Vec<Vec<Count>>,
}

impl ResidueTable {
    /// Assembles a table, checking every structural invariant.
    pub fn from_parts(coefficients: Vec<u64>, modulus: u64, rows: Vec<Vec<Count>>) -> Result<Self> {
        let spec = EquationSpec::new(coefficients, Some(BigUint::from(modulus)))
            .map_err(|e| Error::Validation(e.to_string()))?;
        if rows.len() as u64 != modulus {
            return Err(Error::Validation(format!(
                "modulus {modulus} needs {modulus} rows, found {}",
                rows.len()
            )));
        }
        let n = spec.n();
        if let Some(r) = rows.iter().position(|row| row.len() != n) {
            return Err(Error::Validation(format!(
                "row {r} has {} entries, expected {n}",
                rows[r].len()
            )));
        }
        let sum: Count = rows.iter().flatten().sum();
        if sum != spec.term_count() {
            return Err(Error::Validation(format!(
                "entries sum to {sum}, but the index box has {} tuples",
                spec.term_count()
            )));
        }
        // Cell (r, i) holds P'(r + i M). Only the zero tuple reaches 0, the
        // profile vanishes past n M - sum a, and t -> d - 1 - t mirrors it.
        let bound = spec
            .support_bound()
            .to_u64()
            .ok_or_else(|| Error::Validation("support bound out of range".into()))?;
        let cell = |c: u64| &rows[(c % modulus) as usize][(c / modulus) as usize];
        if cell(0) != &Count::from(1u32) {
            return Err(Error::Validation(format!(
                "rows[0][0] must be 1, found {}",
                cell(0)
            )));
        }
        let cells = modulus * n as u64;
        if let Some(c) = (bound + 1..cells).find(|&c| !cell(c).is_zero()) {
            return Err(Error::Validation(format!(
                "rows[{}][{}] must be 0: beyond the support bound {bound}",
                c % modulus,
                c / modulus
            )));
        }
        if let Some(c) = (0..=bound / 2).find(|&c| cell(c) != cell(bound - c)) {
            return Err(Error::Validation(format!(
                "entries for values {c} and {} differ; the profile must be symmetric",
                bound - c
            )));
        }
        Ok(ResidueTable {
            coefficients: spec.coefficients().to_vec(),
            modulus,
            rows,
        })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn n(&self) -> usize {
        self.coefficients.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> &[Vec<Count>] {
        &self.rows
    }

    pub fn row(&self, residue: u64) -> &[Count] {
        &self.rows[residue as usize]
    }

    /// Exact `P(b)` from the row of `b mod M`.
    pub fn query(&self, b: &BigUint) -> Count {
        let (quotient, residue) = b.div_rem(&BigUint::from(self.modulus));
        // residue < modulus, which fits in u64
        let row = self.row(residue.to_u64().unwrap_or_default());
        let q = BigInt::from(quotient);
        let degree = self.n() as u64 - 1;
        row.iter()
            .enumerate()
            .filter(|(_, l)| !l.is_zero())
            .map(|(i, l)| l * c_poly(&(&q + 1 - i), degree))
            .sum()
    }
}

pub fn build_table(spec: &EquationSpec) -> Result<ResidueTable> {
    build_table_capped(spec, DEFAULT_MAX_MODULUS)
}

pub fn build_table_capped(spec: &EquationSpec, max_modulus: u64) -> Result<ResidueTable> {
    let profile = bounded_profile_capped(spec, max_modulus)?;
    Ok(table_from_profile(&profile))
}

pub fn table_from_profile(profile: &BoundedProfile) -> ResidueTable {
    let spec = profile.spec();
    // the profile exists, so the modulus passed the cap check
    let modulus = spec.modulus().to_u64().unwrap_or_default();
    let n = spec.n() as u64;
    let rows = (0..modulus)
        .map(|r| (0..n).map(|i| profile.get(r + i * modulus)).collect())
        .collect();
    ResidueTable {
        coefficients: spec.coefficients().to_vec(),
        modulus,
        rows,
    }
}

pub fn query_table(table: &ResidueTable, b: &BigUint) -> Count {
    table.query(b)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    format_version: String,
    coefficients: Vec<String>,
    modulus: String,
    rows: Vec<Vec<String>>,
}

/// Renders the table document. Output is deterministic for a given table.
pub fn table_to_string(table: &ResidueTable) -> String {
    let file = TableFile {
        format_version: FORMAT_VERSION.to_string(),
        coefficients: table.coefficients.iter().map(u64::to_string).collect(),
        modulus: table.modulus.to_string(),
        rows: table
            .rows
            .iter()
            .map(|row| row.iter().map(format_count).collect())
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("table document serializes");
    text.push('\n');
    text
}

/// Parses and validates a table document.
pub fn table_from_str(text: &str) -> Result<ResidueTable> {
    let file: TableFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Validation(format!(
            "unsupported format_version {:?}",
            file.format_version
        )));
    }
    let coefficients = file
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let context = format!("coefficients[{i}]");
            let value = parse_field(s, &context)?;
            value.to_u64().filter(|&a| a > 0).ok_or_else(|| {
                Error::Validation(format!(
                    "{context}: {value} is not a positive 64-bit integer"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let modulus = parse_field(&file.modulus, "modulus")?;
    let modulus = modulus
        .to_u64()
        .filter(|&m| m > 0)
        .ok_or_else(|| Error::Validation(format!("modulus {modulus} is out of range")))?;
    // reject before materializing rows for an absurd modulus
    if file.rows.len() as u64 != modulus {
        return Err(Error::Validation(format!(
            "modulus {modulus} needs {modulus} rows, found {}",
            file.rows.len()
        )));
    }
    let rows = file
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(i, s)| parse_field(s, &format!("rows[{r}][{i}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ResidueTable::from_parts(coefficients, modulus, rows)
}

fn parse_field(text: &str, context: &str) -> Result<BigUint> {
    parse_decimal(text, context).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::Validation(msg),
        other => other,
    })
}

pub fn save_table<W: Write>(table: &ResidueTable, mut destination: W) -> Result<()> {
    destination.write_all(table_to_string(table).as_bytes())?;
    destination.flush()?;
    Ok(())
}

pub fn load_table<R: Read>(mut source: R) -> Result<ResidueTable> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    table_from_str(&text)
}
