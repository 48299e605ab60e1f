use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factorial;

/// Exact coefficients of `g(p/q, x)` up to degree `degree`:
/// `coeffs[k] = (k p + q)^(k-1) q / (p^k k!)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub p: u64,
    pub q: u64,
    pub coeffs: Vec<BigRational>,
}

impl RationalSeries {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

pub fn rational_series(p: u64, q: u64, degree: usize) -> RationalSeries {
    assert!(p >= 1 && q >= 1, "p and q must be positive");
    let coeffs = (0..=degree)
        .map(|k| {
            if k == 0 {
                return BigRational::one();
            }
            let ku = k as u64;
            let num = BigUint::from(ku * p + q).pow(ku as u32 - 1) * q;
            let den = BigUint::from(p).pow(ku as u32) * factorial(k);
            BigRational::new(BigInt::from(num), BigInt::from(den))
        })
        .collect();
    RationalSeries { p, q, coeffs }
}

/// Cauchy product of two coefficient lists, truncated at `degree`.
pub fn truncated_mul<T>(a: &[T], b: &[T], degree: usize) -> Vec<T>
where
    T: Clone + Zero + Add<Output = T>,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    (0..=degree)
        .map(|n| {
            let mut acc = T::zero();
            for i in 0..=n {
                if let (Some(x), Some(y)) = (a.get(i), b.get(n - i)) {
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    acc = acc + x * y;
                }
            }
            acc
        })
        .collect()
}

/// `s(x)^e` to degree `degree` by `e - 1` successive convolutions.
pub fn series_power(s: &[BigRational], e: u32, degree: usize) -> Vec<BigRational> {
    assert!(e >= 1, "exponent must be at least 1");
    let base: Vec<BigRational> = (0..=degree).map(|k| s.get(k).cloned().unwrap_or_else(BigRational::zero)).collect();
    let mut acc = base.clone();
    for _ in 1..e {
        acc = truncated_mul(&acc, &base, degree);
    }
    acc
}

/// First degree at which `g(p/q, x)^p` and `g(1, x)^q` differ, if any.
pub fn power_identity_mismatch(p: u64, q: u64, degree: usize) -> Option<usize> {
    let lhs = series_power(&rational_series(p, q, degree).coeffs, p as u32, degree);
    let rhs = series_power(&rational_series(1, 1, degree).coeffs, q as u32, degree);
    lhs.iter().zip(&rhs).position(|(a, b)| a != b)
}

/// Whether `g(p/q, x)^p = g(1, x)^q` holds coefficient by coefficient up to
/// `degree`. A `false` is a finding, not an error.
pub fn verify_power_identity(p: u64, q: u64, degree: usize) -> bool {
    power_identity_mismatch(p, q, degree).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn series_examples() {
        assert_eq!(rational_series(1, 1, 3).coeffs, vec![r(1, 1), r(1, 1), r(3, 2), r(8, 3)]);
        assert_eq!(rational_series(2, 1, 2).coeffs, vec![r(1, 1), r(1, 2), r(5, 8)]);
        assert_eq!(rational_series(2, 2, 2).coeffs, rational_series(1, 1, 2).coeffs);
    }

    #[test]
    fn common_factor_invariance() {
        for &(p, q) in &[(1, 1), (2, 1), (3, 2), (5, 3)] {
            for a in 1..4 {
                assert_eq!(rational_series(a * p, a * q, 10).coeffs, rational_series(p, q, 10).coeffs);
            }
        }
    }

    #[test]
    fn denominators_divide_bound() {
        for &(p, q) in &[(1, 1), (2, 1), (3, 2), (4, 3), (5, 2)] {
            let s = rational_series(p, q, 14);
            for (k, c) in s.coeffs.iter().enumerate() {
                assert!(c > &BigRational::zero());
                let bound = BigInt::from(BigUint::from(p).pow(k as u32) * factorial(k));
                assert!(bound.is_multiple_of(c.denom()), "p={p} q={q} k={k}");
            }
        }
    }

    #[test]
    fn power_examples() {
        assert_eq!(series_power(&[r(1, 1), r(1, 1)], 2, 1), vec![r(1, 1), r(2, 1)]);
        assert_eq!(series_power(&[r(1, 1), r(1, 1), r(1, 2)], 3, 2), vec![r(1, 1), r(3, 1), r(9, 2)]);
        let g = rational_series(1, 1, 8).coeffs;
        assert_eq!(series_power(&g, 1, 8), g);
    }

    #[test]
    fn identity_examples() {
        assert!(verify_power_identity(1, 1, 20));
        assert!(verify_power_identity(2, 1, 16));
        assert!(verify_power_identity(3, 2, 12));
    }

    #[test]
    fn identity_detects_a_wrong_exponent() {
        // g(2, x)^1 != g(1, x): the check must be able to fail.
        let lhs = series_power(&rational_series(2, 1, 4).coeffs, 1, 4);
        let rhs = rational_series(1, 1, 4).coeffs;
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn normalized_coefficient_form() {
        // [x^n] g(m,x)^m * n! m^n = (n+1)^(n-1) m^n.
        for m in 1..=4u64 {
            let g = series_power(&rational_series(m, 1, 10).coeffs, m as u32, 10);
            for (n, c) in g.iter().enumerate() {
                let scaled = c * BigRational::from_integer(BigInt::from(factorial(n) * BigUint::from(m).pow(n as u32)));
                let expected = if n == 0 {
                    BigUint::one()
                } else {
                    BigUint::from(n as u64 + 1).pow(n as u32 - 1) * BigUint::from(m).pow(n as u32)
                };
                assert_eq!(scaled, BigRational::from_integer(BigInt::from(expected)), "m={m} n={n}");
            }
        }
    }
}
