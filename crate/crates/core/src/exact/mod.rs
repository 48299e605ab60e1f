//! Exact rational verification of the coefficient identities.
//!
//! Everything here is arbitrary-precision integer or rational arithmetic;
//! no floating point is involved.

mod compositions;
mod lagrange;
mod series;

pub use compositions::{
    composition_sum, for_each_weak_composition, lemma22_terms, lemma23_first_grouping_terms,
    lemma23_second_grouping_terms, multinomial, verify_lemma22, verify_lemma23, CompositionSum,
    LemmaCheck,
};
pub use lagrange::{expected_lagrange_term, lagrange_terms, verify_lagrange, LagrangeTerm, Poly};
pub use series::{
    power_identity_mismatch, rational_series, series_power, truncated_mul, verify_power_identity,
    RationalSeries,
};

use num_bigint::BigUint;
use num_traits::One;

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}
