//! Galton-Watson processes `Y_t = Y_{t-1} - 1 + Z_t`, `Y_0 = 1`, with
//! Poisson or m-fold Poisson offspring.
//!
//! The m-fold law is `Z = m J` with `J ~ Poisson(c/m)`:
//! `P(Z = m j) = e^{-c/m} (c/m)^j / j!`. Its normalizing constant is
//! `e^{-c/m}`; with `e^{-c}` the probabilities would sum to `e^{c/m - c}`.
//! Its generating function at `y` is `exp(-c (1 - y^m) / m)`, the map whose
//! least fixed point is the extinction probability.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::trial_rng;
use crate::series::ln_factorial;

pub const DEFAULT_PROGENY_CAP: u64 = 100_000;

/// Extinct trials with total progeny up to this value are histogrammed.
pub const PROGENY_HISTOGRAM_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OffspringKind {
    Poisson,
    MFold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffspringDist {
    pub kind: OffspringKind,
    /// Group size; 1 for plain Poisson.
    pub m: u32,
    /// Mean number of offspring.
    pub c: f64,
}

impl OffspringDist {
    pub fn poisson(c: f64) -> Result<Self> {
        Self::check_mean(c)?;
        Ok(OffspringDist { kind: OffspringKind::Poisson, m: 1, c })
    }

    pub fn m_fold(m: u32, c: f64) -> Result<Self> {
        Self::check_mean(c)?;
        if m == 0 {
            return Err(Error::InvalidParameter("m-fold offspring needs m >= 1".into()));
        }
        Ok(OffspringDist { kind: OffspringKind::MFold, m, c })
    }

    fn check_mean(c: f64) -> Result<()> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!("offspring mean must be positive, got {c}")));
        }
        Ok(())
    }

    fn group(&self) -> u64 {
        match self.kind {
            OffspringKind::Poisson => 1,
            OffspringKind::MFold => self.m as u64,
        }
    }

    /// Mean of the underlying Poisson count of groups.
    fn group_rate(&self) -> f64 {
        self.c / self.group() as f64
    }
}

fn poisson_ln_pmf(rate: f64, j: u64) -> f64 {
    j as f64 * rate.ln() - rate - ln_factorial(j)
}

pub fn offspring_pmf(d: &OffspringDist, k: u64) -> f64 {
    let g = d.group();
    if !k.is_multiple_of(g) {
        return 0.0;
    }
    poisson_ln_pmf(d.group_rate(), k / g).exp()
}

fn sample_groups(rate: f64, rng: &mut impl Rng) -> u64 {
    if rate <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(rate).expect("rate is positive and finite");
    dist.sample(rng) as u64
}

pub fn sample_offspring(d: &OffspringDist, rng: &mut impl Rng) -> u64 {
    d.group() * sample_groups(d.group_rate(), rng)
}

/// Total offspring of `parents` independent individuals: a sum of Poisson
/// counts is Poisson with the summed rate.
pub fn sample_offspring_of(d: &OffspringDist, parents: u64, rng: &mut impl Rng) -> u64 {
    d.group() * sample_groups(d.group_rate() * parents as f64, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GWStatus {
    Extinct,
    Censored,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GWOutcome {
    pub status: GWStatus,
    /// Individuals ever born, root included; set only when extinct.
    pub total_progeny: Option<u64>,
    /// Recursion steps taken. Exact when extinct (equal to the total
    /// progeny); for censored trials, the individuals processed so far.
    pub steps: u64,
}

/// Runs the recursion, processing the whole current queue as one block: the
/// `Y` individuals waiting at the start of a block are handled by `Y`
/// consecutive steps whose combined offspring is one draw. `Y` cannot reach 0
/// before the block's last step, so the outcome is that of the one-at-a-time
/// recursion. A trial is censored once more than `progeny_cap` individuals
/// have been born.
pub fn simulate_gw(d: &OffspringDist, progeny_cap: u64, rng: &mut impl Rng) -> GWOutcome {
    let mut born = 1u64;
    let mut queue = 1u64;
    let mut steps = 0u64;
    loop {
        let children = sample_offspring_of(d, queue, rng);
        steps += queue;
        born = born.saturating_add(children);
        queue = children;
        if born > progeny_cap {
            return GWOutcome { status: GWStatus::Censored, total_progeny: None, steps };
        }
        if queue == 0 {
            return GWOutcome { status: GWStatus::Extinct, total_progeny: Some(born), steps };
        }
    }
}

/// One individual per step, literally.
pub fn simulate_gw_stepwise(d: &OffspringDist, progeny_cap: u64, rng: &mut impl Rng) -> GWOutcome {
    let mut y = 1u64;
    let mut born = 1u64;
    let mut t = 0u64;
    loop {
        t += 1;
        let z = sample_offspring(d, rng);
        born += z;
        y = y - 1 + z;
        if born > progeny_cap {
            return GWOutcome { status: GWStatus::Censored, total_progeny: None, steps: t };
        }
        if y == 0 {
            return GWOutcome { status: GWStatus::Extinct, total_progeny: Some(t), steps: t };
        }
    }
}

/// Aggregate over independent trials; merging is a commutative count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialSummary {
    pub trials: u64,
    pub extinct: u64,
    pub censored: u64,
    /// `histogram[t]` = number of extinct trials with total progeny `t`.
    pub histogram: Vec<u64>,
}

impl Default for TrialSummary {
    fn default() -> Self {
        TrialSummary { trials: 0, extinct: 0, censored: 0, histogram: vec![0; PROGENY_HISTOGRAM_LEN] }
    }
}

impl TrialSummary {
    fn record(mut self, outcome: GWOutcome) -> Self {
        self.trials += 1;
        match outcome.status {
            GWStatus::Extinct => {
                self.extinct += 1;
                let t = outcome.total_progeny.unwrap_or(0) as usize;
                if t < self.histogram.len() {
                    self.histogram[t] += 1;
                }
            }
            GWStatus::Censored => self.censored += 1,
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.extinct += other.extinct;
        self.censored += other.censored;
        for (a, b) in self.histogram.iter_mut().zip(other.histogram) {
            *a += b;
        }
        self
    }
}

/// Trial `t` draws from stream `t` of `seed`, so the summary does not depend
/// on the thread count.
pub fn run_trials(d: &OffspringDist, trials: u64, progeny_cap: u64, seed: u64) -> TrialSummary {
    (0..trials)
        .into_par_iter()
        .fold(TrialSummary::default, |acc, t| acc.record(simulate_gw(d, progeny_cap, &mut trial_rng(seed, t))))
        .reduce(TrialSummary::default, TrialSummary::merge)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtinctionEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub trials: u64,
    pub censored_count: u64,
    pub seed: u64,
}

impl ExtinctionEstimate {
    fn from_summary(s: &TrialSummary, seed: u64) -> Self {
        let p_hat = s.extinct as f64 / s.trials as f64;
        let stderr = (p_hat * (1.0 - p_hat) / s.trials as f64).sqrt();
        ExtinctionEstimate { p_hat, stderr, trials: s.trials, censored_count: s.censored, seed }
    }
}

/// Fraction of trials that died out; censored trials count as survivors.
pub fn estimate_extinction(d: &OffspringDist, trials: u64, progeny_cap: u64, seed: u64) -> Result<ExtinctionEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    Ok(ExtinctionEstimate::from_summary(&run_trials(d, trials, progeny_cap, seed), seed))
}

/// `(k+1)^(k-1) c^k e^{-(k+1)c} / k!`: probability that a Poisson(c) process
/// has total progeny `k + 1`.
pub fn borel_term(c: f64, k: u64) -> f64 {
    let kf = k as f64;
    ((kf - 1.0) * (kf + 1.0).ln() + kf * c.ln() - (kf + 1.0) * c - ln_factorial(k)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BorelCell {
    pub k: u64,
    pub expected: f64,
    pub observed: f64,
    pub count: u64,
    /// Binomial standard error `sqrt(expected (1 - expected) / trials)`.
    pub stderr: f64,
}

impl BorelCell {
    pub fn z_score(&self) -> f64 {
        if self.stderr == 0.0 {
            return if self.observed == self.expected { 0.0 } else { f64::INFINITY };
        }
        (self.observed - self.expected) / self.stderr
    }
}

pub fn total_progeny_pmf_check(c: f64, k_max: u64, trials: u64, seed: u64) -> Result<Vec<BorelCell>> {
    if k_max > 20 {
        return Err(Error::InvalidParameter(format!("k_max is limited to 20, got {k_max}")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let d = OffspringDist::poisson(c)?;
    let s = run_trials(&d, trials, DEFAULT_PROGENY_CAP, seed);
    Ok((0..=k_max)
        .map(|k| {
            let expected = borel_term(c, k);
            let count = s.histogram[(k + 1) as usize];
            BorelCell {
                k,
                expected,
                observed: count as f64 / trials as f64,
                count,
                stderr: (expected * (1.0 - expected) / trials as f64).sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<OffspringDist> {
        let mut out = Vec::new();
        for &c in &[0.5, 1.0, 2.0, 4.0] {
            out.push(OffspringDist::poisson(c).unwrap());
            for &m in &[1, 2, 3, 5] {
                out.push(OffspringDist::m_fold(m, c).unwrap());
            }
        }
        out
    }

    #[test]
    fn pmf_normalized_with_mean_c() {
        for d in grid() {
            let (mass, mean) = (0..2000u64).fold((0.0, 0.0), |(s, mu), k| {
                let p = offspring_pmf(&d, k);
                (s + p, mu + k as f64 * p)
            });
            assert!((mass - 1.0).abs() < 1e-12, "{d:?}: mass {mass}");
            assert!((mean - d.c).abs() < 1e-10, "{d:?}: mean {mean}");
        }
    }

    #[test]
    fn pmf_examples() {
        let p = OffspringDist::poisson(2.0).unwrap();
        assert!((offspring_pmf(&p, 0) - (-2.0f64).exp()).abs() < 1e-15);
        let d = OffspringDist::m_fold(2, 2.0).unwrap();
        assert_eq!(offspring_pmf(&d, 3), 0.0);
        assert!((offspring_pmf(&d, 4) - (-1.0f64).exp() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn m_fold_samples_are_multiples() {
        let d = OffspringDist::m_fold(3, 2.5).unwrap();
        let mut rng = trial_rng(1, 0);
        for _ in 0..10_000 {
            assert_eq!(sample_offspring(&d, &mut rng) % 3, 0);
        }
    }

    #[test]
    fn sample_means() {
        for d in [OffspringDist::poisson(2.0).unwrap(), OffspringDist::m_fold(2, 2.0).unwrap()] {
            let mut rng = trial_rng(42, 0);
            let n = 1_000_000u64;
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let z = sample_offspring(&d, &mut rng) as f64;
                s += z;
                s2 += z * z;
            }
            let mean = s / n as f64;
            let var = s2 / n as f64 - mean * mean;
            // Var(Z) = m c for the m-fold law.
            assert!((var - d.m as f64 * d.c).abs() < 0.05 * d.m as f64 * d.c);
            assert!((mean - 2.0).abs() <= 4.0 * (var / n as f64).sqrt(), "{d:?}: mean {mean}");
        }
    }

    #[test]
    fn childless_root_is_extinct_at_one() {
        // With c tiny the first draw is almost surely 0.
        let d = OffspringDist::poisson(1e-12).unwrap();
        let o = simulate_gw(&d, 10, &mut trial_rng(0, 0));
        assert_eq!(o, GWOutcome { status: GWStatus::Extinct, total_progeny: Some(1), steps: 1 });
        let o = simulate_gw_stepwise(&d, 10, &mut trial_rng(0, 0));
        assert_eq!(o, GWOutcome { status: GWStatus::Extinct, total_progeny: Some(1), steps: 1 });
    }

    #[test]
    fn subcritical_never_censored() {
        let d = OffspringDist::poisson(0.5).unwrap();
        let s = run_trials(&d, 10_000, DEFAULT_PROGENY_CAP, 3);
        assert_eq!(s.censored, 0);
        assert_eq!(s.extinct, 10_000);
    }

    #[test]
    fn m_fold_progeny_is_one_mod_m() {
        for m in 2..5u32 {
            let d = OffspringDist::m_fold(m, 0.9).unwrap();
            let s = run_trials(&d, 5_000, 10_000, 11);
            for (t, &n) in s.histogram.iter().enumerate() {
                if n > 0 {
                    assert_eq!(t as u64 % m as u64, 1, "m = {m}, progeny {t}");
                }
            }
            let mut rng = trial_rng(5, 0);
            for _ in 0..2_000 {
                if let Some(t) = simulate_gw_stepwise(&d, 10_000, &mut rng).total_progeny {
                    assert_eq!(t % m as u64, 1);
                }
            }
        }
    }

    #[test]
    fn block_and_stepwise_simulations_agree_in_law() {
        // Same extinction probability and same small-progeny frequencies.
        let d = OffspringDist::poisson(1.5).unwrap();
        let n = 200_000u64;
        let block = run_trials(&d, n, 2_000, 17);
        let mut step = TrialSummary::default();
        for t in 0..n {
            step = step.record(simulate_gw_stepwise(&d, 2_000, &mut trial_rng(99, t)));
        }
        let pb = block.extinct as f64 / n as f64;
        let ps = step.extinct as f64 / n as f64;
        let se = (pb * (1.0 - pb) * 2.0 / n as f64).sqrt();
        assert!((pb - ps).abs() < 5.0 * se, "{pb} vs {ps}");
        for t in 1..6 {
            let a = block.histogram[t] as f64 / n as f64;
            let b = step.histogram[t] as f64 / n as f64;
            let se = (a * (1.0 - a) * 2.0 / n as f64).sqrt();
            assert!((a - b).abs() < 5.0 * se + 1e-9, "progeny {t}: {a} vs {b}");
        }
    }

    #[test]
    fn determinism() {
        let d = OffspringDist::m_fold(2, 2.0).unwrap();
        let a = estimate_extinction(&d, 20_000, DEFAULT_PROGENY_CAP, 42).unwrap();
        let b = estimate_extinction(&d, 20_000, DEFAULT_PROGENY_CAP, 42).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| estimate_extinction(&d, 20_000, DEFAULT_PROGENY_CAP, 42).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn borel_examples() {
        assert!((borel_term(2.0, 0) - (-2.0f64).exp()).abs() < 1e-15);
        assert!((borel_term(2.0, 1) - 2.0 * (-4.0f64).exp()).abs() < 1e-15);
        let total: f64 = (0..400).map(|k| borel_term(0.5, k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn borel_small_run_within_bounds() {
        let cells = total_progeny_pmf_check(2.0, 5, 100_000, 42).unwrap();
        for cell in cells {
            assert!(cell.z_score().abs() < 5.0, "{cell:?}");
        }
        assert!(total_progeny_pmf_check(2.0, 21, 10, 0).is_err());
    }
}
