//! Exact counts of non-negative integer solutions of `a_1 x_1 + ... + a_n x_n = b`
//! and `a_1 x_1 + ... + a_n x_n <= b` for positive coefficients.
//!
//! Three independent routes produce the same numbers:
//!
//! * [`direct`]: a finite sum over the index box `0 <= t_i < M / a_i`, whose
//!   size does not depend on `b`;
//! * [`table`]: a per-residue table built once from the bounded-solution
//!   profile, answering any `b` with `n` big-integer terms;
//! * [`oracle`]: the textbook coin-change dynamic program, for verification.

pub mod arith;
pub mod direct;
pub mod equation;
pub mod error;
pub mod input;
pub mod oracle;
pub mod table;

pub use arith::{c_poly, gcd_lcm_all, stars_and_bars, Count};
pub use direct::{count_eq_direct, count_leq_direct, DirectOptions, DEFAULT_TERM_BUDGET};
pub use equation::{EquationSpec, MixedRadixCursor};
pub use error::{Error, Result};
pub use oracle::{count_bounded_dp, count_dp, count_leq_dp, Oracle};
pub use table::{
    bounded_profile, build_table, load_table, query_table, save_table, BoundedProfile, ResidueTable,
};
