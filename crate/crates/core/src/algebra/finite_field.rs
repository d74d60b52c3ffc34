use std::fmt;

use super::rational::{is_prime, prime_power};
use crate::error::{input, Result};

/// Largest field order accepted; every algorithm here is brute force.
const MAX_ORDER: u64 = 1 << 24;

/// F_q with q = p^k, realised as F_p[x]/(modulus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    k: usize,
    /// Monic, constant term first, length k + 1.
    modulus: Vec<u64>,
}

/// Element of a [`FiniteField`]: coefficients of 1, x, ..., x^(k-1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(Vec<u64>);

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FiniteField {
    /// F_q using the first monic irreducible of degree k in lexicographic
    /// order of its coefficient vector.
    pub fn new(q: u64) -> Result<Self> {
        let Some((p, k)) = prime_power(q) else {
            return input(format!("{q} is not a prime power"));
        };
        if q > MAX_ORDER {
            return input(format!("field order {q} exceeds {MAX_ORDER}"));
        }
        let k = k as usize;
        if k == 1 {
            return Ok(FiniteField { p, k, modulus: vec![0, 1] });
        }
        let count = p.pow(k as u32);
        for idx in 0..count {
            let mut m = digits(idx, p, k);
            m.push(1);
            if irreducible(p, &m) {
                return Ok(FiniteField { p, k, modulus: m });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return input(format!("{p} is not prime"));
        }
        let k = modulus.len().saturating_sub(1);
        if k == 0 || modulus[k] != 1 || modulus.iter().any(|&c| c >= p) {
            return input("modulus must be monic with coefficients reduced mod p");
        }
        if (p as f64).powi(k as i32) > MAX_ORDER as f64 {
            return input("field order too large");
        }
        if !irreducible(p, &modulus) {
            return input(format!("modulus {modulus:?} is reducible mod {p}"));
        }
        Ok(FiniteField { p, k, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.k])
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElem {
        let mut v = vec![0; self.k];
        v[0] = n.rem_euclid(self.p as i64) as u64;
        FqElem(v)
    }

    /// Element whose base-p digits (constant coefficient first) are `idx`.
    pub fn from_index(&self, idx: u64) -> Result<FqElem> {
        if idx >= self.order() {
            return input(format!("index {idx} outside F_{}", self.order()));
        }
        Ok(FqElem(digits(idx, self.p, self.k)))
    }

    pub fn index(&self, x: &FqElem) -> u64 {
        x.0.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(|i| FqElem(digits(i, self.p, self.k)))
    }

    pub fn units(&self) -> impl Iterator<Item = FqElem> + '_ {
        self.elements().skip(1)
    }

    pub fn is_zero(&self, x: &FqElem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let (p, k) = (self.p, self.k);
        if k == 1 {
            return FqElem(vec![a.0[0] * b.0[0] % p]);
        }
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let t = top - k + j;
                prod[t] = (prod[t] + (p - c) * m) % p;
            }
        }
        prod.truncate(k);
        FqElem(prod)
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &FqElem) -> Option<FqElem> {
        (!self.is_zero(a)).then(|| self.pow(a, self.order() - 2))
    }

    /// Absolute trace to F_p: `x + x^p + ... + x^(p^(k-1))`.
    pub fn trace(&self, x: &FqElem) -> u64 {
        let mut acc = self.zero();
        let mut y = x.clone();
        for _ in 0..self.k {
            acc = self.add(&acc, &y);
            y = self.pow(&y, self.p);
        }
        debug_assert!(acc.0[1..].iter().all(|&c| c == 0));
        acc.0[0]
    }
}

fn digits(mut idx: u64, p: u64, k: usize) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = idx % p;
            idx /= p;
            d
        })
        .collect()
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let c = r.pop().unwrap_or(0);
        if c != 0 {
            let base = r.len() - dm;
            for (j, &mj) in m[..dm].iter().enumerate() {
                r[base + j] = (r[base + j] + (p - c) * mj) % p;
            }
        }
    }
    r
}

/// Brute-force irreducibility: no monic factor of degree `1..=deg/2`.
fn irreducible(p: u64, m: &[u64]) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut f = digits(idx, p, d);
            f.push(1);
            if poly_rem(p, m, &f).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}
