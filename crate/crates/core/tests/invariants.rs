use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use foldpower::branching::{estimate_extinction, OffspringDist, DEFAULT_PROGENY_CAP};
use foldpower::exact;
use foldpower::forest;
use foldpower::graph::{giant_vs_theory, HypergraphConfig};
use foldpower::series::{eval_f, eval_g, series_coefficient, tail_bound};

fn to_big(m: &BTreeMap<Vec<usize>, u64>) -> BTreeMap<Vec<usize>, BigUint> {
    m.iter().map(|(k, &v)| (k.clone(), BigUint::from(v))).collect()
}

#[test]
fn exact_and_float_partial_sums_agree() {
    let x: f64 = 0.3;
    for (p, q) in [(1u64, 1u64), (2, 1), (3, 2)] {
        let m = p as f64 / q as f64;
        let exact = exact::rational_series(p, q, 50);
        let mut exact_sum = 0.0;
        let mut float_sum = 0.0;
        for (k, coeff) in exact.coeffs.iter().enumerate() {
            let c = coeff.to_f64().unwrap();
            let f = series_coefficient(m, k as u64);
            assert!((c - f).abs() <= 1e-12 * c.abs(), "m={m} k={k}: {c} vs {f}");
            exact_sum += c * x.powi(k as i32);
            float_sum += f * x.powi(k as i32);
        }
        assert!((exact_sum - float_sum).abs() <= 1e-12 * exact_sum);
        let full = eval_g(m, x, 1e-14).unwrap().partial_sum;
        let tail = tail_bound(m, x, 50).unwrap();
        assert!(full - exact_sum >= -1e-12 && full - exact_sum <= tail + 1e-12);
    }
}

#[test]
fn lagrange_partial_sums_approach_series() {
    let c: f64 = 0.2;
    let x = c * (-c).exp();
    for m in 1..=3u64 {
        let mf = m as f64;
        let terms = exact::lagrange_terms(m, 13);
        let partial: f64 = terms.iter().map(|t| t.term.eval_f64(c) * (-c * t.k as f64 / mf).exp()).sum();
        let j_max = terms.iter().filter_map(|t| t.j).max().unwrap() as u64;
        let bound = (-c / mf).exp() * tail_bound(mf, x, j_max).unwrap();
        let full = eval_f(mf, c, 1e-14).unwrap();
        assert!((full - partial).abs() <= bound + 1e-12, "m={m}: {full} vs {partial}, bound {bound}");
    }
}

#[test]
fn colored_tree_counts_match_composition_sums() {
    for n in 1..=4 {
        for m in 1..=3u32 {
            let t = forest::count_colored_trees_rooted_at_zero(n, m).unwrap();
            let lemma = exact::verify_lemma22(m as u64, n);
            assert_eq!(BigUint::from(t.count.observed), lemma.lhs, "n={n} m={m}");
            assert_eq!(to_big(&t.by_block_sizes), exact::lemma22_terms(m as u64, n));
        }
    }
}

#[test]
fn root_color_tallies_match_grouping_terms() {
    for (n, p, q) in [(1, 1, 1), (2, 2, 2), (3, 2, 1), (2, 1, 3), (3, 1, 2)] {
        let t = forest::group_by_root_color(n, p, q).unwrap();
        assert_eq!(to_big(&t.by_first_color), exact::lemma23_first_grouping_terms(p as u64, q as u64, n));
        assert_eq!(to_big(&t.by_second_color), exact::lemma23_second_grouping_terms(p as u64, q as u64, n));
        assert_eq!(BigUint::from(t.total), exact::verify_lemma23(p as u64, q as u64, n).lhs);
    }
}

#[test]
fn simulated_extinction_tracks_series() {
    for m in 1..=3u32 {
        for c in [0.5, 1.5, 2.0, 4.0] {
            let d = if m == 1 { OffspringDist::poisson(c).unwrap() } else { OffspringDist::m_fold(m, c).unwrap() };
            let e = estimate_extinction(&d, 100_000, DEFAULT_PROGENY_CAP, 7).unwrap();
            let target = eval_f(m as f64, c, 1e-12).unwrap();
            let allowance = if c <= 1.0 { 1e-3 } else { 0.0 };
            assert!(
                (e.p_hat - target).abs() <= 5.0 * e.stderr + allowance,
                "m={m} c={c}: {} vs {target}",
                e.p_hat
            );
        }
    }
}

#[test]
fn giant_fraction_separates_phases() {
    for r in [2, 3] {
        let sub = giant_vs_theory(&HypergraphConfig::from_degree(20_000, r, 0.5, 3).unwrap(), 2).unwrap();
        let sup = giant_vs_theory(&HypergraphConfig::from_degree(20_000, r, 2.0, 3).unwrap(), 2).unwrap();
        assert!(sub.mean_fraction < 0.01, "r={r}: {}", sub.mean_fraction);
        assert!(sup.mean_fraction > 0.5, "r={r}: {}", sup.mean_fraction);
        assert!((sup.mean_fraction - sup.theory).abs() < 0.03);
    }
}
