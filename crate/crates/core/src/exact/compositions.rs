use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::factorial;

/// Calls `visit` on every weak composition of `n` into `parts` parts
/// (ordered tuples of nonnegative integers summing to `n`), in
/// lexicographically decreasing order of the first part.
pub fn for_each_weak_composition(n: usize, parts: usize, mut visit: impl FnMut(&[usize])) {
    assert!(parts >= 1, "need at least one part");
    let mut buf = vec![0usize; parts];
    fn rec(buf: &mut [usize], at: usize, remaining: usize, visit: &mut dyn FnMut(&[usize])) {
        if at + 1 == buf.len() {
            buf[at] = remaining;
            visit(buf);
            return;
        }
        for first in (0..=remaining).rev() {
            buf[at] = first;
            rec(buf, at + 1, remaining - first, visit);
        }
    }
    rec(&mut buf, 0, n, &mut visit);
}

/// `n! / (k_1! ... k_r!)` where `n = sum k_i`.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let n: usize = parts.iter().sum();
    parts.iter().fold(factorial(n), |acc, &k| acc / factorial(k))
}

/// A sum over all weak compositions of `n` into `parts` parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionSum {
    pub parts: usize,
    pub n: usize,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub value: BigUint,
}

pub fn composition_sum(n: usize, parts: usize, term: impl Fn(&[usize]) -> BigUint) -> CompositionSum {
    let mut value = BigUint::zero();
    for_each_weak_composition(n, parts, |k| value += term(k));
    CompositionSum { parts, n, value }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCheck {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub equal: bool,
}

impl LemmaCheck {
    fn new(lhs: BigUint, rhs: BigUint) -> Self {
        let equal = lhs == rhs;
        LemmaCheck { lhs, rhs, equal }
    }
}

// (k s + t)^(k-1) * t for k >= 1, and 1 at k = 0 (t * t^-1).
fn rooted_forest_factor(k: usize, s: u64, t: u64) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    BigUint::from(k as u64 * s + t).pow(k as u32 - 1) * t
}

fn grouping_terms(n: usize, parts: usize, term: impl Fn(&[usize]) -> BigUint) -> BTreeMap<Vec<usize>, BigUint> {
    let mut out = BTreeMap::new();
    for_each_weak_composition(n, parts, |k| {
        out.insert(k.to_vec(), term(k));
    });
    out
}

fn lemma22_term(m: u64, k: &[usize]) -> BigUint {
    k.iter().fold(multinomial(k), |acc, &ki| acc * rooted_forest_factor(ki, m, 1))
}

/// Per-composition terms `multinomial(n; k) * prod (k_i m + 1)^(k_i - 1)`.
pub fn lemma22_terms(m: u64, n: usize) -> BTreeMap<Vec<usize>, BigUint> {
    grouping_terms(n, m as usize, |k| lemma22_term(m, k))
}

/// `sum_{k_1+..+k_m = n} multinomial(n; k) prod (k_i m + 1)^(k_i - 1)`
/// against `(n+1)^(n-1) m^n`.
pub fn verify_lemma22(m: u64, n: usize) -> LemmaCheck {
    assert!(m >= 1 && n >= 1);
    let lhs = composition_sum(n, m as usize, |k| lemma22_term(m, k)).value;
    let rhs = BigUint::from(n as u64 + 1).pow(n as u32 - 1) * BigUint::from(m).pow(n as u32);
    LemmaCheck::new(lhs, rhs)
}

fn lemma23_first_term(p: u64, q: u64, j: &[usize]) -> BigUint {
    j.iter().fold(multinomial(j), |acc, &jt| acc * rooted_forest_factor(jt, p, q))
}

fn lemma23_second_term(p: u64, i: &[usize]) -> BigUint {
    let n: usize = i.iter().sum();
    i.iter()
        .fold(multinomial(i) * BigUint::from(p).pow(n as u32), |acc, &it| acc * rooted_forest_factor(it, 1, 1))
}

/// Terms of the grouping by the `p`-valued root color: compositions of `n`
/// into `p` parts, each `multinomial * prod q (j_t p + q)^(j_t - 1)`.
pub fn lemma23_first_grouping_terms(p: u64, q: u64, n: usize) -> BTreeMap<Vec<usize>, BigUint> {
    grouping_terms(n, p as usize, |j| lemma23_first_term(p, q, j))
}

/// Terms of the grouping by the `q`-valued root color: compositions of `n`
/// into `q` parts, each `multinomial * p^n * prod (i_t + 1)^(i_t - 1)`.
pub fn lemma23_second_grouping_terms(p: u64, q: u64, n: usize) -> BTreeMap<Vec<usize>, BigUint> {
    grouping_terms(n, q as usize, |i| lemma23_second_term(p, i))
}

pub fn verify_lemma23(p: u64, q: u64, n: usize) -> LemmaCheck {
    assert!(p >= 1 && q >= 1 && n >= 1);
    let lhs = composition_sum(n, p as usize, |j| lemma23_first_term(p, q, j)).value;
    let rhs = composition_sum(n, q as usize, |i| lemma23_second_term(p, i)).value;
    LemmaCheck::new(lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn composition_enumeration_counts() {
        for n in 0..7 {
            for parts in 1..5 {
                let mut seen = std::collections::HashSet::new();
                for_each_weak_composition(n, parts, |k| {
                    assert_eq!(k.iter().sum::<usize>(), n);
                    assert!(seen.insert(k.to_vec()));
                });
                assert_eq!(seen.len(), binomial(n + parts - 1, parts - 1));
            }
        }
    }

    #[test]
    fn multinomial_small() {
        assert_eq!(multinomial(&[2, 1]), BigUint::from(3u32));
        assert_eq!(multinomial(&[1, 1, 1]), BigUint::from(6u32));
        assert_eq!(multinomial(&[0, 4]), BigUint::from(1u32));
    }

    #[test]
    fn lemma22_examples() {
        let c = verify_lemma22(1, 5);
        assert_eq!(c.lhs, BigUint::from(1296u32));
        assert!(c.equal);
        let c = verify_lemma22(2, 1);
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (BigUint::from(2u32), BigUint::from(2u32)));
        let c = verify_lemma22(2, 2);
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (BigUint::from(12u32), BigUint::from(12u32)));
        let terms = lemma22_terms(2, 2);
        assert_eq!(terms[&vec![2, 0]], BigUint::from(5u32));
        assert_eq!(terms[&vec![0, 2]], BigUint::from(5u32));
        assert_eq!(terms[&vec![1, 1]], BigUint::from(2u32));
    }

    #[test]
    fn lemma23_examples() {
        let c = verify_lemma23(2, 1, 1);
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (BigUint::from(2u32), BigUint::from(2u32)));
        // Hand-computed p = 3, q = 2, n = 2:
        // first grouping: (2,0,0)x3 gives 2*8 = 16 each, (1,1,0)x3 gives 2*4 = 8 each -> 72;
        // second grouping: p^n = 9; (2,0),(0,2) give 3 each, (1,1) gives 2 -> 9*8 = 72.
        let c = verify_lemma23(3, 2, 2);
        assert_eq!(c.lhs, BigUint::from(72u32));
        assert_eq!(c.rhs, BigUint::from(72u32));
        for p in 1..=4 {
            let first = lemma23_first_grouping_terms(p, p, 3);
            let second = lemma23_second_grouping_terms(p, p, 3);
            assert_eq!(first, second, "symmetric case p = q = {p}");
        }
    }

    #[test]
    fn lemma23_matches_rooted_forest_count() {
        // q = 1 leaves the first grouping a single-block sum at p = 1.
        for n in 1..6usize {
            for q in 1..4u64 {
                let c = verify_lemma23(1, q, n);
                assert_eq!(c.lhs, BigUint::from(q + n as u64).pow(n as u32 - 1) * q);
            }
        }
    }

    proptest! {
        #[test]
        fn lemma22_holds(m in 1u64..=5, n in 1usize..=8) {
            prop_assert!(verify_lemma22(m, n).equal);
        }

        #[test]
        fn lemma23_holds(p in 1u64..=4, q in 1u64..=4, n in 1usize..=6) {
            prop_assert!(verify_lemma23(p, q, n).equal);
        }
    }
}
