//! Arbitrary-precision rationals.
//!
//! `Rat` is `num_rational::BigRational`: always in lowest terms with a positive
//! denominator. This module adds the handful of helpers the rest of the crate
//! needs on top of it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"`; the result is reduced.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

/// Canonical `p/q` form, `p` alone for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

/// Pascal's triangle up to a fixed row, built once and then read-only.
#[derive(Debug, Clone)]
pub struct Binomials {
    rows: Vec<Vec<Rat>>,
}

impl Binomials {
    pub fn up_to(n: usize) -> Self {
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut row = vec![Rat::one(); i + 1];
            for k in 1..i {
                row[k] = &rows[i - 1][k - 1] + &rows[i - 1][k];
            }
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn get(&self, n: usize, k: usize) -> &Rat {
        &self.rows[n][k]
    }
}
