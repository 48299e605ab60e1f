//! Floating-point evaluation of
//!
//! ```text
//! g(m, x) = sum_{k>=0} (k m + 1)^(k-1) / (m^k k!) x^k
//! f(m, c) = e^(-c/m) g(m, c e^(-c))
//! ```
//!
//! with a certified bound on the truncated tail. The radius of convergence of
//! `g(m, .)` is `1/e`, and `c e^(-c) <= 1/e` for every `c >= 0`, so `f` is
//! always evaluated inside the closed disc where the bound below holds.
//!
//! # Tail bound
//!
//! From `(k m + 1)^(k-1) <= (k m)^(k-1) e^(1/m)` and Stirling's lower bound
//! `k! >= sqrt(2 pi k) k^k e^(-k)`,
//!
//! ```text
//! a_k e^(-k) <= C(m) k^(-3/2),    C(m) = e^(1/m) / (m sqrt(2 pi)).
//! ```
//!
//! Writing `r = e |x| <= 1`, the tail past index `K` is bounded by
//! `C r^(K+1) * min(2 / sqrt(K), (K+1)^(-3/2) / (1 - r))`: the first factor
//! is the integral comparison for `sum k^(-3/2)`, the second a geometric sum
//! and only applies for `r < 1`.

use std::f64::consts::{E, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// `1/e`, the radius of convergence of `g(m, .)`.
pub const INV_E: f64 = 1.0 / E;

/// Default ceiling on the number of summed terms.
pub const DEFAULT_TERM_BUDGET: u64 = 50_000_000;

// Slack for `|x| <= 1/e` comparisons; `c * exp(-c)` at `c = 1` can land one
// ulp above `1/E`.
const DOMAIN_SLACK: f64 = 8.0 * f64::EPSILON;

const LN_FACTORIAL_TABLE_LEN: usize = 4096;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE_LEN);
        let mut acc = 0.0f64;
        table.push(0.0);
        for i in 1..LN_FACTORIAL_TABLE_LEN {
            acc += (i as f64).ln();
            table.push(acc);
        }
        table
    })
}

/// `ln k!`, from a table for small `k` and the Stirling series beyond it.
pub fn ln_factorial(k: u64) -> f64 {
    let table = ln_factorial_table();
    if (k as usize) < table.len() {
        return table[k as usize];
    }
    let x = k as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// Parameters of one evaluation of `g(m, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesParams {
    pub m: f64,
    pub x: f64,
}

/// A partial sum of `g(m, x)` together with a certified bound on what was
/// dropped. Terms `k = 0..=truncation_index` are included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSeries {
    pub params: SeriesParams,
    pub truncation_index: u64,
    pub partial_sum: f64,
    pub tail_bound: f64,
}

fn check_fold(m: f64) -> Result<()> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidParameter(format!("m must be a positive real, got {m}")));
    }
    Ok(())
}

fn check_disc(x_abs: f64) -> Result<()> {
    if !(x_abs.is_finite() && x_abs <= INV_E * (1.0 + DOMAIN_SLACK)) {
        return Err(Error::Domain(format!("|x| = {x_abs} exceeds 1/e")));
    }
    Ok(())
}

/// Natural log of `a_k = (k m + 1)^(k-1) / (m^k k!)`.
pub fn ln_series_coefficient(m: f64, k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let kf = k as f64;
    (kf - 1.0) * (kf * m + 1.0).ln() - kf * m.ln() - ln_factorial(k)
}

/// `a_k = (k m + 1)^(k-1) / (m^k k!)`, computed in the log domain so large
/// `k` does not overflow.
pub fn series_coefficient(m: f64, k: u64) -> f64 {
    ln_series_coefficient(m, k).exp()
}

/// `C(m) = e^(1/m) / (m sqrt(2 pi))`.
fn stirling_constant(m: f64) -> f64 {
    (1.0 / m).exp() / (m * (2.0 * PI).sqrt())
}

/// Certified upper bound on `sum_{k > K} a_k x_abs^k`.
pub fn tail_bound(m: f64, x_abs: f64, truncation_index: u64) -> Result<f64> {
    check_fold(m)?;
    if x_abs < 0.0 {
        return Err(Error::Domain(format!("x_abs must be nonnegative, got {x_abs}")));
    }
    check_disc(x_abs)?;
    if truncation_index == 0 {
        return Err(Error::InvalidParameter("truncation index must be at least 1".into()));
    }
    Ok(tail_bound_unchecked(m, x_abs, truncation_index))
}

fn tail_bound_unchecked(m: f64, x_abs: f64, truncation_index: u64) -> f64 {
    if x_abs == 0.0 {
        return 0.0;
    }
    let k = truncation_index as f64;
    let ratio = (E * x_abs).min(1.0);
    let integral = 2.0 / k.sqrt();
    let shape = if ratio < 1.0 {
        integral.min((k + 1.0).powf(-1.5) / (1.0 - ratio))
    } else {
        integral
    };
    // r^(K+1) via logs; underflow to 0 is a valid (tiny) bound only when
    // the true value would be below f64 resolution anyway.
    let decay = ((k + 1.0) * ratio.ln()).exp();
    stirling_constant(m) * decay * shape
}

/// Smallest truncation index `K >= 1` whose tail bound is at most `abs_tol`.
pub fn required_truncation(m: f64, x_abs: f64, abs_tol: f64) -> Result<u64> {
    check_fold(m)?;
    check_disc(x_abs)?;
    if !(abs_tol.is_finite() && abs_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {abs_tol}")));
    }
    let ok = |k: u64| tail_bound_unchecked(m, x_abs, k) <= abs_tol;
    if ok(1) {
        return Ok(1);
    }
    let mut hi = 2u64;
    while !ok(hi) {
        if hi >= u64::MAX / 4 {
            return Ok(u64::MAX);
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Evaluates `g(m, x)` for `|x| <= 1/e` to absolute accuracy `abs_tol` in
/// the truncation, with the default term budget.
pub fn eval_g(m: f64, x: f64, abs_tol: f64) -> Result<TruncatedSeries> {
    eval_g_with_budget(m, x, abs_tol, DEFAULT_TERM_BUDGET)
}

pub fn eval_g_with_budget(m: f64, x: f64, abs_tol: f64, term_budget: u64) -> Result<TruncatedSeries> {
    check_fold(m)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let x_abs = x.abs();
    check_disc(x_abs)?;
    let truncation_index = required_truncation(m, x_abs, abs_tol)?;
    if truncation_index > term_budget {
        return Err(Error::TermBudget { required: truncation_index, budget: term_budget });
    }

    let partial_sum = if x == 0.0 {
        1.0
    } else {
        let ln_x = x_abs.ln();
        let negative = x < 0.0;
        // Neumaier summation.
        let mut sum = 1.0f64;
        let mut comp = 0.0f64;
        for k in 1..=truncation_index {
            let mut term = (ln_series_coefficient(m, k) + k as f64 * ln_x).exp();
            if negative && k % 2 == 1 {
                term = -term;
            }
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        sum + comp
    };

    Ok(TruncatedSeries {
        params: SeriesParams { m, x },
        truncation_index,
        partial_sum,
        tail_bound: tail_bound_unchecked(m, x_abs, truncation_index),
    })
}

/// Evaluates `f(m, c) = e^(-c/m) g(m, c e^(-c))` to absolute accuracy
/// `abs_tol`. Half of the budget goes to the series truncation; the
/// prefactor is at most 1, so it cannot amplify the truncation error.
pub fn eval_f(m: f64, c: f64, abs_tol: f64) -> Result<f64> {
    eval_f_with_budget(m, c, abs_tol, DEFAULT_TERM_BUDGET)
}

pub fn eval_f_with_budget(m: f64, c: f64, abs_tol: f64, term_budget: u64) -> Result<f64> {
    check_fold(m)?;
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::Domain(format!("c must be a nonnegative real, got {c}")));
    }
    let x = (c * (-c).exp()).min(INV_E);
    let g = eval_g_with_budget(m, x, abs_tol / 2.0, term_budget)?;
    Ok((-c / m).exp() * g.partial_sum)
}
