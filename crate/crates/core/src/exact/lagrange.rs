//! Lagrange inversion of `z = y phi(z)` with `phi(z) = exp(c z^m / m)` and
//! `y = exp(-c/m)`, carried out symbolically in `c`.
//!
//! The `k`-th term is `y^k / k! * D^(k-1) phi^k (0)`. `phi^k` is built here by
//! multiplying the series of `phi` by itself, so the extracted derivative is
//! an independent computation of the closed form `(k-1)! (k c / m)^j / j!`
//! (for `k = m j + 1`, zero otherwise).

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{factorial, truncated_mul};

/// Polynomial in `c` with exact rational coefficients, lowest degree first
/// and no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn monomial(coeff: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = coeff;
        Poly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|a| a * s).collect())
    }

    /// Evaluation at a float, for comparison against numeric code only.
    pub fn eval_f64(&self, c: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.0.iter().rev().fold(0.0, |acc, a| acc * c + a.to_f64().unwrap_or(f64::NAN))
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly(Vec::new())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let (mut long, short) = if self.0.len() >= rhs.0.len() { (self.0, rhs.0) } else { (rhs.0, self.0) };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        Poly::from_coeffs(long)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*c")?,
                _ => write!(f, "{a}*c^{d}")?,
            }
        }
        Ok(())
    }
}

/// One term of the inversion series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangeTerm {
    pub k: usize,
    /// `j` with `k = m j + 1`, when `k - 1` is a multiple of `m`.
    pub j: Option<usize>,
    /// `D^(k-1) phi^k (0)`.
    pub derivative: Poly,
    /// `derivative / k!`, the coefficient of `exp(-c k / m)`.
    pub term: Poly,
}

fn rational(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// Series of exp(c z^m / m) in z up to `degree`, coefficients in Q[c].
fn phi_series(m: usize, degree: usize) -> Vec<Poly> {
    (0..=degree)
        .map(|d| {
            if d % m != 0 {
                return Poly::zero();
            }
            let j = d / m;
            let coeff = rational(BigUint::one(), BigUint::from(m as u64).pow(j as u32) * factorial(j));
            Poly::monomial(coeff, j)
        })
        .collect()
}

/// `(m j + 1)^(j-1) / (m^j j!)`, the coefficient of `c^j e^{-c(mj+1)/m}` in `f(m, c)`.
pub fn expected_lagrange_term(m: u64, j: usize) -> BigRational {
    if j == 0 {
        return BigRational::one();
    }
    rational(
        BigUint::from(m * j as u64 + 1).pow(j as u32 - 1),
        BigUint::from(m).pow(j as u32) * factorial(j),
    )
}

/// Terms `k = 1..=max_k` of the inversion series.
pub fn lagrange_terms(m: u64, max_k: usize) -> Vec<LagrangeTerm> {
    assert!(m >= 1 && max_k >= 1);
    let mu = m as usize;
    let degree = max_k - 1;
    let phi = phi_series(mu, degree);
    let mut power = phi.clone();
    let mut out = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        if k > 1 {
            power = truncated_mul(&power, &phi, degree);
        }
        let coeff = power[k - 1].clone();
        let derivative = coeff.scale(&BigRational::from_integer(BigInt::from(factorial(k - 1))));
        let term = coeff.scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
        let j = ((k - 1) % mu == 0).then_some((k - 1) / mu);
        out.push(LagrangeTerm { k, j, derivative, term });
    }
    out
}

/// Checks every term against both the closed-form derivative and the
/// coefficient of `f(m, c)`; returns the list of failing `k`.
pub fn verify_lagrange(m: u64, max_k: usize) -> Vec<usize> {
    lagrange_terms(m, max_k)
        .into_iter()
        .filter(|t| !term_is_correct(m, t))
        .map(|t| t.k)
        .collect()
}

fn term_is_correct(m: u64, t: &LagrangeTerm) -> bool {
    match t.j {
        None => t.derivative.is_zero() && t.term.is_zero(),
        Some(j) => {
            let closed = rational(
                factorial(t.k - 1) * BigUint::from(t.k as u64).pow(j as u32),
                BigUint::from(m).pow(j as u32) * factorial(j),
            );
            t.derivative == Poly::monomial(closed, j) && t.term == Poly::monomial(expected_lagrange_term(m, j), j)
        }
    }
}
