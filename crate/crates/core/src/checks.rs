//! Individual verifications as report records, and the full battery.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

use crate::branching::{self, OffspringDist, DEFAULT_PROGENY_CAP};
use crate::error::Result;
use crate::exact;
use crate::fixed_point::{self, solve_eq1, solve_eq2};
use crate::forest::{self, ForestSpec};
use crate::graph::{self, HypergraphConfig};
use crate::report::{fmt_decimal, ReportRecord, Status};
use crate::series::eval_f;

/// Extinction probability of Poisson(2) offspring, from plain iteration.
pub const EXTINCTION_AT_TWO: f64 = 0.203188;
/// Its square root, the m = 2 extinction probability at c = 2.
pub const TWO_FOLD_EXTINCTION_AT_TWO: f64 = 0.450764;

pub const STAT_SIGMAS: f64 = 5.0;
pub const CENSORING_ALLOWANCE: f64 = 1e-3;
pub const GIANT_TOLERANCE: f64 = 0.01;
pub const SUBCRITICAL_GIANT_LIMIT: f64 = 0.001;

fn timed(f: impl FnOnce() -> Result<ReportRecord>) -> Result<ReportRecord> {
    let start = Instant::now();
    let mut rec = f()?;
    rec.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(rec)
}

fn timed_many(f: impl FnOnce() -> Result<Vec<ReportRecord>>) -> Result<Vec<ReportRecord>> {
    let start = Instant::now();
    let mut recs = f()?;
    let ms = start.elapsed().as_millis() as u64;
    for r in &mut recs {
        r.runtime_ms = ms;
    }
    Ok(recs)
}

pub fn identity(m: f64, c: f64, tol: f64) -> Result<ReportRecord> {
    timed(|| {
        let residual = fixed_point::check_identity(m, c, tol)?;
        Ok(ReportRecord::new("identity", Status::exact(residual <= tol))
            .param("m", m)
            .param("c", c)
            .param("tol", tol)
            .expected(format!("<= {}", fmt_decimal(tol)))
            .observed(fmt_decimal(residual)))
    })
}

/// Solves both extinction equations and compares the m-fold root with the
/// series value of `f(m, c)` and with `z^(1/m)`.
pub fn solve(m: f64, c: f64, tol: f64) -> Result<ReportRecord> {
    timed(|| {
        let z = solve_eq1(c, tol)?;
        let y = solve_eq2(m, c, tol)?;
        let f = eval_f(m, c, tol)?;
        let series_gap = (y.value - f).abs();
        let power_gap = (y.value.powf(m) - z.value).abs();
        let ok = y.residual <= tol && series_gap <= tol && power_gap <= tol;
        Ok(ReportRecord::new("solve", Status::exact(ok))
            .param("m", m)
            .param("c", c)
            .param("tol", tol)
            .expected(format!("f(m,c)={} z={}", fmt_decimal(f), fmt_decimal(z.value)))
            .observed(format!(
                "y={} residual={} |y-f|={} |y^m-z|={}",
                fmt_decimal(y.value),
                fmt_decimal(y.residual),
                fmt_decimal(series_gap),
                fmt_decimal(power_gap)
            )))
    })
}

pub fn coeffs(p: u64, q: u64, degree: usize) -> Result<ReportRecord> {
    timed(|| {
        let mismatch = exact::power_identity_mismatch(p, q, degree);
        Ok(ReportRecord::new("coeffs", Status::exact(mismatch.is_none()))
            .param("p", p)
            .param("q", q)
            .param("degree", degree)
            .expected(format!("g(p/q,x)^p = g(1,x)^q through x^{degree}"))
            .observed(match mismatch {
                None => "equal".to_string(),
                Some(d) => format!("differs at x^{d}"),
            }))
    })
}

pub fn lemma22(m: u64, n: usize) -> Result<ReportRecord> {
    timed(|| {
        let c = exact::verify_lemma22(m, n);
        Ok(ReportRecord::new("lemma22", Status::exact(c.equal))
            .param("m", m)
            .param("n", n)
            .expected(c.rhs.to_string())
            .observed(c.lhs.to_string()))
    })
}

pub fn lemma23(p: u64, q: u64, n: usize) -> Result<ReportRecord> {
    timed(|| {
        let c = exact::verify_lemma23(p, q, n);
        Ok(ReportRecord::new("lemma23", Status::exact(c.equal))
            .param("p", p)
            .param("q", q)
            .param("n", n)
            .expected(c.rhs.to_string())
            .observed(c.lhs.to_string()))
    })
}

pub fn lagrange(m: u64, max_k: usize) -> Result<ReportRecord> {
    timed(|| {
        let bad = exact::verify_lagrange(m, max_k);
        let nonzero = exact::lagrange_terms(m, max_k).iter().filter(|t| t.j.is_some()).count();
        Ok(ReportRecord::new("lagrange", Status::exact(bad.is_empty()))
            .param("m", m)
            .param("k_max", max_k)
            .expected(format!("{nonzero} nonzero terms equal to f(m,c) terms, rest 0"))
            .observed(if bad.is_empty() { "all terms match".to_string() } else { format!("mismatch at k={bad:?}") }))
    })
}

/// Per-k symbolic terms, for display.
pub fn lagrange_table(m: u64, max_k: usize) -> Result<Vec<ReportRecord>> {
    timed_many(|| {
        Ok(exact::lagrange_terms(m, max_k)
            .into_iter()
            .map(|t| {
                let expected = match t.j {
                    Some(j) => exact::Poly::monomial(exact::expected_lagrange_term(m, j), j).to_string(),
                    None => "0".to_string(),
                };
                let observed = t.term.to_string();
                ReportRecord::new("lagrange_term", Status::exact(expected == observed))
                    .param("m", m)
                    .param("k", format!("{:02}", t.k))
                    .expected(expected)
                    .observed(observed)
            })
            .collect())
    })
}

pub fn labeled_trees(n: usize) -> Result<ReportRecord> {
    timed(|| {
        let c = forest::count_labeled_trees(n)?;
        Ok(ReportRecord::new("forests_trees", Status::exact(c.matches()))
            .param("n", n)
            .expected(c.closed_form.to_string())
            .observed(c.observed.to_string()))
    })
}

pub fn rooted_forests(n: usize, edge_colors: u32, root_colors: u32) -> Result<ReportRecord> {
    timed(|| {
        let c = forest::count_rooted_forests(ForestSpec::new(n, edge_colors, root_colors)?)?;
        Ok(ReportRecord::new("forests_rooted", Status::exact(c.matches()))
            .param("n", n)
            .param("edge_colors", edge_colors)
            .param("root_colors", root_colors)
            .expected(c.closed_form.to_string())
            .observed(c.observed.to_string()))
    })
}

/// Count of edge-colored trees on `{0..n}`, and the cut-at-0 tally against
/// the per-composition terms of the m-forest sum.
pub fn colored_trees(n: usize, m: u32) -> Result<ReportRecord> {
    timed(|| {
        let t = forest::count_colored_trees_rooted_at_zero(n, m)?;
        let terms = exact::lemma22_terms(m as u64, n);
        let tally_ok = terms.len() == t.by_block_sizes.len()
            && terms.iter().all(|(k, v)| t.by_block_sizes.get(k).map(|&x| num_bigint::BigUint::from(x)) == Some(v.clone()));
        let lemma = exact::verify_lemma22(m as u64, n);
        let ok = t.count.matches() && tally_ok && lemma.lhs == num_bigint::BigUint::from(t.count.observed);
        Ok(ReportRecord::new("forests_colored_trees", Status::exact(ok))
            .param("n", n)
            .param("m", m)
            .expected(t.count.closed_form.to_string())
            .observed(format!("{} (cut-at-0 tally {})", t.count.observed, if tally_ok { "matches" } else { "differs" })))
    })
}

pub fn root_color_grouping(n: usize, p: u32, q: u32) -> Result<ReportRecord> {
    timed(|| {
        let t = forest::group_by_root_color(n, p, q)?;
        let to_big = |m: &std::collections::BTreeMap<Vec<usize>, u64>| {
            m.iter().map(|(k, &v)| (k.clone(), num_bigint::BigUint::from(v))).collect::<std::collections::BTreeMap<_, _>>()
        };
        let first_ok = to_big(&t.by_first_color) == exact::lemma23_first_grouping_terms(p as u64, q as u64, n);
        let second_ok = to_big(&t.by_second_color) == exact::lemma23_second_grouping_terms(p as u64, q as u64, n);
        let lemma = exact::verify_lemma23(p as u64, q as u64, n);
        let ok = first_ok && second_ok && lemma.lhs == num_bigint::BigUint::from(t.total);
        Ok(ReportRecord::new("forests_root_grouping", Status::exact(ok))
            .param("n", n)
            .param("p", p)
            .param("q", q)
            .expected(lemma.lhs.to_string())
            .observed(t.total.to_string()))
    })
}

/// Extinction estimate against `target`; passes when
/// `|p_hat - target| <= 5 stderr + allowance`.
pub fn gw(d: OffspringDist, trials: u64, cap: u64, seed: u64, target: f64, allowance: f64) -> Result<ReportRecord> {
    timed(|| {
        let est = branching::estimate_extinction(&d, trials, cap, seed)?;
        let ok = (est.p_hat - target).abs() <= STAT_SIGMAS * est.stderr + allowance;
        Ok(ReportRecord::new("gw", Status::statistical(ok))
            .param("kind", match d.kind {
                branching::OffspringKind::Poisson => "poisson",
                branching::OffspringKind::MFold => "m_fold",
            })
            .param("m", d.m)
            .param("c", d.c)
            .param("trials", trials)
            .param("cap", cap)
            .param("seed", seed)
            .expected(fmt_decimal(target))
            .observed(format!(
                "{} stderr={} censored={}",
                fmt_decimal(est.p_hat),
                fmt_decimal(est.stderr),
                est.censored_count
            )))
    })
}

/// Extinction target from the series: `f(m, c)`.
pub fn gw_against_series(d: OffspringDist, trials: u64, cap: u64, seed: u64, allowance: f64) -> Result<ReportRecord> {
    let target = if d.c <= 1.0 { 1.0 } else { eval_f(d.m as f64, d.c, 1e-12)? };
    gw(d, trials, cap, seed, target, allowance)
}

pub fn borel(c: f64, k_max: u64, trials: u64, seed: u64) -> Result<Vec<ReportRecord>> {
    timed_many(|| {
        Ok(branching::total_progeny_pmf_check(c, k_max, trials, seed)?
            .into_iter()
            .map(|cell| {
                ReportRecord::new("borel", Status::statistical(cell.z_score().abs() <= STAT_SIGMAS))
                    .param("c", c)
                    .param("k", format!("{:02}", cell.k))
                    .param("trials", trials)
                    .param("seed", seed)
                    .expected(fmt_decimal(cell.expected))
                    .observed(format!("{} stderr={}", fmt_decimal(cell.observed), fmt_decimal(cell.stderr)))
            })
            .collect())
    })
}

/// Giant-component experiment. For `c > 1` the mean fraction must be within
/// `tolerance` of `1 - f(r-1, c)`; for `c <= 1` every trial must stay below
/// `tolerance`.
pub fn giant(n: usize, r: usize, c: f64, trials: usize, seed: u64, tolerance: f64) -> Result<ReportRecord> {
    timed(|| {
        let cfg = HypergraphConfig::from_degree(n, r, c, seed)?;
        let cmp = graph::giant_vs_theory(&cfg, trials)?;
        let (ok, expected) = if c > 1.0 {
            (cmp.deviation <= tolerance, format!("{} +- {tolerance}", fmt_decimal(cmp.theory)))
        } else {
            (cmp.fractions.iter().all(|&g| g < tolerance), format!("< {tolerance}"))
        };
        Ok(ReportRecord::new("graph", Status::statistical(ok))
            .param("n", n)
            .param("r", r)
            .param("c", c)
            .param("edges", cfg.f_edges)
            .param("trials", trials)
            .param("seed", seed)
            .expected(expected)
            .observed(fmt_decimal(cmp.mean_fraction)))
    })
}

pub const NUMERIC_GRID_M: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 3.0, PI];
pub const NUMERIC_GRID_C: [f64; 6] = [0.25, 0.9, 1.5, 2.0, 4.0, 8.0];
pub const POWER_IDENTITY_PAIRS: [(u64, u64); 6] = [(2, 1), (3, 1), (4, 1), (3, 2), (4, 3), (5, 2)];

type Job = Box<dyn Fn() -> Result<Vec<ReportRecord>> + Send + Sync>;

fn one(f: impl Fn() -> Result<ReportRecord> + Send + Sync + 'static) -> Job {
    Box::new(move || f().map(|r| vec![r]))
}

/// The full acceptance battery. Records come back sorted by
/// `(check_name, param_string)` whatever order the jobs finish in.
pub fn suite(seed: u64) -> Result<Vec<ReportRecord>> {
    let mut jobs: Vec<Job> = Vec::new();

    for m in 1..=5u64 {
        for n in 1..=8usize {
            jobs.push(one(move || lemma22(m, n)));
        }
    }
    for p in 1..=4u64 {
        for q in 1..=4u64 {
            for n in 1..=6usize {
                jobs.push(one(move || lemma23(p, q, n)));
            }
        }
    }
    for (p, q) in POWER_IDENTITY_PAIRS {
        jobs.push(one(move || coeffs(p, q, 16)));
    }
    for n in 1..=7usize {
        jobs.push(one(move || labeled_trees(n)));
    }
    for n in 1..=4usize {
        for e in 1..=3u32 {
            for r in 1..=3u32 {
                jobs.push(one(move || rooted_forests(n, e, r)));
            }
        }
    }
    jobs.push(one(|| rooted_forests(5, 1, 1)));
    for n in 1..=4usize {
        for m in 1..=3u32 {
            jobs.push(one(move || colored_trees(n, m)));
        }
    }
    for m in 1..=3u64 {
        jobs.push(one(move || lagrange(m, 13)));
    }
    for m in NUMERIC_GRID_M {
        for c in NUMERIC_GRID_C {
            jobs.push(one(move || identity(m, c, 1e-9)));
            if c > 1.0 {
                jobs.push(one(move || solve(m, c, 1e-9)));
            }
        }
    }
    jobs.push(one(move || {
        gw(OffspringDist::poisson(2.0)?, 1_000_000, DEFAULT_PROGENY_CAP, seed, EXTINCTION_AT_TWO, 0.0)
    }));
    jobs.push(one(move || {
        gw(OffspringDist::m_fold(2, 2.0)?, 1_000_000, DEFAULT_PROGENY_CAP, seed, TWO_FOLD_EXTINCTION_AT_TWO, 0.0)
    }));
    jobs.push(one(move || gw(OffspringDist::poisson(0.8)?, 1_000_000, DEFAULT_PROGENY_CAP, seed, 1.0, CENSORING_ALLOWANCE)));
    jobs.push(Box::new(move || borel(2.0, 10, 1_000_000, seed)));
    jobs.push(one(move || giant(100_000, 2, 2.0, 5, seed, GIANT_TOLERANCE)));
    jobs.push(one(move || giant(100_000, 3, 2.0, 5, seed, GIANT_TOLERANCE)));
    jobs.push(one(move || giant(100_000, 2, 0.5, 5, seed, SUBCRITICAL_GIANT_LIMIT)));

    let mut records: Vec<ReportRecord> =
        jobs.par_iter().map(|job| job()).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    sort_records(&mut records);
    Ok(records)
}

pub fn sort_records(records: &mut [ReportRecord]) {
    records.sort_by_key(ReportRecord::sort_key);
}
