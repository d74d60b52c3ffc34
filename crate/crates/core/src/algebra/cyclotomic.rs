use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{is_prime, parse_rational, rat_text, Rational};
use crate::error::{input, Error, Result};

/// Element of Q(zeta_p) in the power basis `1, zeta, ..., zeta^(p-2)`.
///
/// `zeta^(p-1)` is eliminated through `1 + zeta + ... + zeta^(p-1) = 0`, so two
/// values are equal exactly when their coefficient vectors are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    p: u64,
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    p: u64,
    coeffs: Vec<String>,
}

impl CyclotomicNumber {
    pub fn new(p: u64, coeffs: Vec<Rational>) -> Result<Self> {
        check_prime(p)?;
        if coeffs.len() != (p - 1) as usize {
            return input(format!(
                "cyclotomic number over p={p} needs {} coefficients, got {}",
                p - 1,
                coeffs.len()
            ));
        }
        Ok(CyclotomicNumber { p, coeffs })
    }

    /// `sum_j counts[j] * zeta^j` for exponents `j` in `0..p`, reduced.
    pub fn from_exponent_weights(p: u64, weights: &[Rational]) -> Self {
        debug_assert_eq!(weights.len(), p as usize);
        let top = weights[p as usize - 1].clone();
        let coeffs = weights[..p as usize - 1].iter().map(|c| c - &top).collect();
        CyclotomicNumber { p, coeffs }
    }

    pub fn from_exponent_counts(p: u64, counts: &[i64]) -> Self {
        let w: Vec<Rational> = counts.iter().map(|&c| Rational::from_integer(c.into())).collect();
        Self::from_exponent_weights(p, &w)
    }

    pub fn rational(p: u64, x: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); (p - 1) as usize];
        coeffs[0] = x;
        CyclotomicNumber { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        Self::rational(p, Rational::zero())
    }

    pub fn one(p: u64) -> Self {
        Self::rational(p, Rational::from_integer(1.into()))
    }

    /// `zeta_p^k` for any integer `k`.
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        let mut w = vec![Rational::zero(); p as usize];
        w[k.rem_euclid(p as i64) as usize] = Rational::from_integer(1.into());
        Self::from_exponent_weights(p, &w)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Lies in Z[zeta_p].
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn weights(&self) -> Vec<Rational> {
        let mut w = self.coeffs.clone();
        w.push(Rational::zero());
        w
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Input(format!(
                "mismatched cyclotomic fields: p={} vs p={}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self * other)
    }

    /// Image under the Galois automorphism `zeta -> zeta^a`.
    pub fn conjugate(&self, a: i64) -> Result<Self> {
        let p = self.p as i64;
        if a.rem_euclid(p) == 0 {
            return input(format!("sigma_{a} is not an automorphism of Q(zeta_{p})"));
        }
        let w = self.weights();
        let mut out = vec![Rational::zero(); self.p as usize];
        for (j, c) in w.into_iter().enumerate() {
            out[(a * j as i64).rem_euclid(p) as usize] += c;
        }
        Ok(Self::from_exponent_weights(self.p, &out))
    }

    /// Complex values under `zeta -> exp(2 pi i a / p)` for `a = 1..p-1`.
    pub fn embeddings(&self) -> Vec<Complex64> {
        let p = self.p;
        let coeffs: Vec<f64> = self
            .coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        (1..p)
            .map(|a| {
                coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0.0)
                    .map(|(j, c)| {
                        let angle = 2.0 * PI * ((a * j as u64) % p) as f64 / p as f64;
                        Complex64::from_polar(*c, angle)
                    })
                    .sum()
            })
            .collect()
    }

    /// Field norm down to Q, as the product of all conjugates.
    pub fn norm(&self) -> Rational {
        let mut acc = Self::one(self.p);
        for a in 1..self.p as i64 {
            acc = &acc * &self.conjugate(a).expect("a is a unit");
        }
        acc.as_rational()
            .expect("product over the full Galois group is rational")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CyclotomicJson {
            p: self.p,
            coeffs: self.coeffs.iter().map(rat_text).collect(),
        })
        .expect("plain struct")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CyclotomicJson = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("cyclotomic JSON: {e}")))?;
        if raw.p > 100_000 {
            return input("cyclotomic prime too large");
        }
        check_prime(raw.p)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw.p, coeffs)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return input(format!("{p} is not prime"));
    }
    Ok(())
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.p, rhs.p, "mismatched cyclotomic fields");
        CyclotomicNumber {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.p, rhs.p, "mismatched cyclotomic fields");
        let p = self.p as usize;
        let mut w = vec![Rational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                w[(i + j) % p] += a * b;
            }
        }
        CyclotomicNumber::from_exponent_weights(self.p, &w)
    }
}
