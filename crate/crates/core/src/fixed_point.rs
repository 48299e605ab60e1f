//! Roots of the extinction equations
//!
//! ```text
//! z = exp(-c (1 - z))           (Poisson offspring)
//! y = exp(-c (1 - y^m) / m)     (m-fold Poisson offspring)
//! ```
//!
//! For `c <= 1` the only root in `(0, 1]` is `1`. For `c > 1` there is a
//! unique root in `(0, 1)`, the least fixed point of the map, which the
//! iteration from `0` approaches monotonically from below.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::eval_f;

pub const MAX_ITERATIONS: u64 = 1_000_000;
const NEWTON_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `c <= 1`, extinction is certain.
    Trivial,
    Nontrivial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointResult {
    pub value: f64,
    /// `|value - map(value)|` for the map being solved.
    pub residual: f64,
    pub iterations: u64,
    pub branch: Branch,
}

fn check_args(c: f64, tol: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("c must be a positive real, got {c}")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// `z -> exp(-c (1 - z))`.
pub fn poisson_map(c: f64, z: f64) -> f64 {
    (-c * (1.0 - z)).exp()
}

/// `y -> exp(-c (1 - y^m) / m)`.
pub fn m_fold_map(m: f64, c: f64, y: f64) -> f64 {
    (-c * (1.0 - y.powf(m)) / m).exp()
}

/// Fixed-point iteration from 0 followed by a Newton polish.
///
/// `log_eq` is `h(u) = ln u + (stuff)` whose zero is the fixed point, with
/// derivative `log_eq_prime`; `h` is concave and increasing left of the root,
/// so Newton from below never overshoots.
fn solve_least_fixed_point(
    map: impl Fn(f64) -> f64,
    slope: impl Fn(f64) -> f64,
    log_eq: impl Fn(f64) -> f64,
    log_eq_prime: impl Fn(f64) -> f64,
    tol: f64,
) -> Result<(f64, u64)> {
    let mut u = 0.0f64;
    let mut iterations = 0u64;
    while iterations < MAX_ITERATIONS {
        let next = map(u);
        iterations += 1;
        let step = (next - u).abs();
        u = next;
        // Distance to the fixed point is about step / (1 - slope).
        let contraction = (1.0 - slope(u)).max(0.0);
        if step <= tol * contraction || step == 0.0 {
            break;
        }
    }

    let mut best = u;
    let mut best_h = log_eq(u).abs();
    let mut v = u;
    for _ in 0..NEWTON_STEPS {
        let d = log_eq_prime(v);
        if !(d.is_finite() && d > 0.0) {
            break;
        }
        let next = v - log_eq(v) / d;
        if !(next > 0.0 && next < 1.0) {
            break;
        }
        let h = log_eq(next).abs();
        if h < best_h {
            best = next;
            best_h = h;
        }
        if (next - v).abs() <= f64::EPSILON * next {
            break;
        }
        v = next;
    }

    let residual = (best - map(best)).abs();
    if residual > tol {
        return Err(Error::NoConvergence { iterations, residual });
    }
    Ok((best, iterations))
}

/// Extinction probability of a Poisson(c) Galton-Watson process.
pub fn solve_eq1(c: f64, tol: f64) -> Result<FixedPointResult> {
    check_args(c, tol)?;
    if c <= 1.0 {
        return Ok(FixedPointResult { value: 1.0, residual: 0.0, iterations: 0, branch: Branch::Trivial });
    }
    let (value, iterations) = solve_least_fixed_point(
        |z| poisson_map(c, z),
        |z| c * poisson_map(c, z),
        |z| z.ln() + c * (1.0 - z),
        |z| 1.0 / z - c,
        tol,
    )?;
    Ok(FixedPointResult {
        value,
        residual: (value - poisson_map(c, value)).abs(),
        iterations,
        branch: Branch::Nontrivial,
    })
}

/// Direct iteration on `y = exp(-c (1 - y^m) / m)`, without going through
/// the Poisson root.
pub fn solve_eq2_direct(m: f64, c: f64, tol: f64) -> Result<FixedPointResult> {
    check_args(c, tol)?;
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidParameter(format!("m must be a positive real, got {m}")));
    }
    if c <= 1.0 {
        return Ok(FixedPointResult { value: 1.0, residual: 0.0, iterations: 0, branch: Branch::Trivial });
    }
    let (value, iterations) = solve_least_fixed_point(
        |y| m_fold_map(m, c, y),
        |y| c * y.powf(m - 1.0) * m_fold_map(m, c, y),
        |y| y.ln() + c * (1.0 - y.powf(m)) / m,
        |y| 1.0 / y - c * y.powf(m - 1.0),
        tol,
    )?;
    Ok(FixedPointResult {
        value,
        residual: (value - m_fold_map(m, c, value)).abs(),
        iterations,
        branch: Branch::Nontrivial,
    })
}

/// Extinction probability of the m-fold Poisson process: solved as
/// `z^(1/m)` with `z` the Poisson root, and cross-checked against direct
/// iteration.
pub fn solve_eq2(m: f64, c: f64, tol: f64) -> Result<FixedPointResult> {
    check_args(c, tol)?;
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidParameter(format!("m must be a positive real, got {m}")));
    }
    if c <= 1.0 {
        return Ok(FixedPointResult { value: 1.0, residual: 0.0, iterations: 0, branch: Branch::Trivial });
    }
    let z = solve_eq1(c, tol)?;
    let power_route = z.value.powf(1.0 / m);
    let direct = solve_eq2_direct(m, c, tol)?;

    // Both roots carry error about residual / (1 - c z); allow a few of those.
    let contraction = (1.0 - c * z.value).max(f64::EPSILON);
    let agreement = 4.0 * tol / contraction + 16.0 * f64::EPSILON;
    if (power_route - direct.value).abs() > agreement {
        return Err(Error::RouteMismatch { power_route, direct_route: direct.value });
    }

    let power_residual = (power_route - m_fold_map(m, c, power_route)).abs();
    let (value, residual) = if power_residual <= direct.residual {
        (power_route, power_residual)
    } else {
        (direct.value, direct.residual)
    };
    Ok(FixedPointResult { value, residual, iterations: z.iterations + direct.iterations, branch: Branch::Nontrivial })
}

/// `|f(m,c)^m - f(1,c)|` with each side evaluated to `tol / 4`.
pub fn check_identity(m: f64, c: f64, tol: f64) -> Result<f64> {
    let rhs = eval_f(1.0, c, tol / 4.0)?;
    if m == 1.0 {
        return Ok(0.0);
    }
    let lhs = eval_f(m, c, tol / 4.0)?.powf(m);
    Ok((lhs - rhs).abs())
}
