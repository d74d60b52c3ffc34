use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::finite_field::{FiniteField, FqElem};
use super::matrix::RatMatrix;
use super::rational::{is_prime, vp_int, vp_rat, Rational};
use crate::error::{input, Error, Result};

/// Exact element of Q(lambda) with `lambda^(p-1) = -p`, in the basis
/// `1, lambda, ..., lambda^(p-2)`.
///
/// The ODE recursion for the Frobenius structure is run in this field so that
/// divisions by `k` (including `p | k`) cost no precision; results are reduced
/// into [`EisensteinLocal`] afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaNumber {
    p: u64,
    coeffs: Vec<Rational>,
}

impl LambdaNumber {
    pub fn zero(p: u64) -> Self {
        LambdaNumber { p, coeffs: vec![Rational::zero(); (p - 1) as usize] }
    }

    pub fn from_rational(p: u64, x: Rational) -> Self {
        let mut out = Self::zero(p);
        out.coeffs[0] = x;
        out
    }

    pub fn from_int(p: u64, n: i64) -> Self {
        Self::from_rational(p, Rational::from_integer(n.into()))
    }

    /// `lambda^e` for `e >= 0`.
    pub fn lambda_pow(p: u64, e: usize) -> Self {
        let n = (p - 1) as usize;
        let mut out = Self::zero(p);
        let scale = num_traits::pow(Rational::from_integer(-BigInt::from(p)), e / n);
        out.coeffs[e % n] = scale;
        out
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

    pub fn scale(&self, c: &Rational) -> Self {
        LambdaNumber { p: self.p, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Valuation normalised so that `v(p) = 1`; `None` for zero.
    pub fn valuation(&self) -> Option<Rational> {
        let n = (self.p - 1) as i64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Rational::new((n * vp_rat(c, self.p) + i as i64).into(), n.into()))
            .min()
    }

    fn mul_matrix(&self) -> RatMatrix {
        let n = (self.p - 1) as usize;
        let mut m = RatMatrix::zeros(n, n);
        for j in 0..n {
            let col = self * &Self::lambda_pow(self.p, j);
            for i in 0..n {
                m.set(i, j, col.coeffs[i].clone());
            }
        }
        m
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero in Q(lambda)".into()));
        }
        let n = (self.p - 1) as usize;
        // Solve (multiplication by self) * y = e_0.
        let m = self.mul_matrix();
        let mut aug = RatMatrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, m.get(i, j).clone());
            }
        }
        aug.set(0, n, -Rational::one());
        let ker = aug.kernel();
        let v = ker
            .into_iter()
            .find(|v| v[n].is_one())
            .ok_or_else(|| Error::Internal("Q(lambda) is a field".into()))?;
        Ok(LambdaNumber { p: self.p, coeffs: v[..n].to_vec() })
    }

    /// Image in `Z_p[lambda] / lambda^precision`; fails unless p-integral.
    pub fn reduce(&self, precision: usize) -> Result<EisensteinLocal> {
        let p = self.p;
        let mut out = EisensteinLocal::zero(p, precision);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = out.exponent(i);
            if e == 0 {
                continue;
            }
            if vp_int(c.denom(), p) > 0 {
                return Err(Error::Precision(format!(
                    "coefficient {c} of lambda^{i} is not p-integral (p = {p})"
                )));
            }
            let m = BigInt::from(p).pow(e);
            let inv = mod_inverse(c.denom(), &m)
                .ok_or_else(|| Error::Internal("denominator prime to p".into()))?;
            out.coeffs[i][0] = (c.numer() * inv).mod_floor(&m);
        }
        Ok(out)
    }
}

impl Add for &LambdaNumber {
    type Output = LambdaNumber;
    fn add(self, rhs: &LambdaNumber) -> LambdaNumber {
        LambdaNumber { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &LambdaNumber {
    type Output = LambdaNumber;
    fn sub(self, rhs: &LambdaNumber) -> LambdaNumber {
        LambdaNumber { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &LambdaNumber {
    type Output = LambdaNumber;
    fn neg(self) -> LambdaNumber {
        LambdaNumber { p: self.p, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &LambdaNumber {
    type Output = LambdaNumber;
    fn mul(self, rhs: &LambdaNumber) -> LambdaNumber {
        let n = (self.p - 1) as usize;
        let mut full = vec![Rational::zero(); 2 * n];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                full[i + j] += a * b;
            }
        }
        let minus_p = Rational::from_integer(-BigInt::from(self.p));
        for i in (n..2 * n).rev() {
            let c = std::mem::take(&mut full[i]);
            full[i - n] += c * &minus_p;
        }
        full.truncate(n);
        LambdaNumber { p: self.p, coeffs: full }
    }
}

/// Element of `W[lambda] / (lambda^K)` where `lambda^(p-1) = -p` and `W` is
/// the unramified extension of Z_p of degree `d` presented by a monic lift of
/// an irreducible polynomial over F_p (`d = 1` gives plain Z_p).
///
/// Stored as coefficients `c_i` of `lambda^i` for `i < p - 1`, each a vector of
/// `d` integers reduced modulo `p^ceil((K - i)/(p - 1))`, which is exactly the
/// information visible modulo `lambda^K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinLocal {
    p: u64,
    precision: usize,
    /// Monic modulus of W over Z_p, constant term first; `[0, 1]` for Z_p.
    modulus: Vec<u64>,
    coeffs: Vec<Vec<BigInt>>,
}

impl EisensteinLocal {
    pub fn zero(p: u64, precision: usize) -> Self {
        Self::zero_over(p, precision, vec![0, 1])
    }

    fn zero_over(p: u64, precision: usize, modulus: Vec<u64>) -> Self {
        let d = modulus.len() - 1;
        EisensteinLocal {
            p,
            precision,
            coeffs: vec![vec![BigInt::zero(); d]; (p - 1) as usize],
            modulus,
        }
    }

    pub fn new(p: u64, precision: usize) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return input(format!("lambda^(p-1) = -p needs an odd prime, got {p}"));
        }
        if precision == 0 || precision > 10_000 {
            return input("lambda-precision must lie in 1..=10000");
        }
        Ok(Self::zero(p, precision))
    }

    pub fn one(p: u64, precision: usize) -> Self {
        Self::from_int(p, precision, 1)
    }

    pub fn from_int(p: u64, precision: usize, n: i64) -> Self {
        let mut out = Self::zero(p, precision);
        out.coeffs[0][0] = BigInt::from(n);
        out.normalize();
        out
    }

    pub fn lambda(p: u64, precision: usize) -> Self {
        LambdaNumber::lambda_pow(p, 1).reduce(precision).expect("integral")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Monic modulus presenting the unramified coefficient ring.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Degree of the unramified coefficient ring.
    pub fn unramified_degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn ramification(&self) -> usize {
        (self.p - 1) as usize
    }

    /// p-adic exponent carried by the coefficient of `lambda^i`.
    fn exponent(&self, i: usize) -> u32 {
        let n = self.ramification();
        if i >= self.precision {
            0
        } else {
            (self.precision - i).div_ceil(n) as u32
        }
    }

    fn normalize(&mut self) {
        for i in 0..self.coeffs.len() {
            let m = BigInt::from(self.p).pow(self.exponent(i));
            for c in self.coeffs[i].iter_mut() {
                *c = c.mod_floor(&m);
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.precision != other.precision || self.modulus != other.modulus {
            return Err(Error::Input(format!(
                "incompatible p-adic rings: (p={}, K={}) vs (p={}, K={})",
                self.p, self.precision, other.p, other.precision
            )));
        }
        Ok(())
    }

    /// Same value viewed over the unramified ring with the given modulus.
    pub fn over_unramified(&self, modulus: &[u64]) -> Self {
        let mut out = Self::zero_over(self.p, self.precision, modulus.to_vec());
        for (i, c) in self.coeffs.iter().enumerate() {
            for (j, x) in c.iter().enumerate().take(out.coeffs[i].len()) {
                out.coeffs[i][j] = x.clone();
            }
        }
        out
    }

    /// Reduction to a lower precision.
    pub fn truncate(&self, precision: usize) -> Self {
        let mut out = self.clone();
        out.precision = precision.min(self.precision);
        out.normalize();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(Zero::is_zero)
    }

    /// Valuation in lambda-units (`v(lambda) = 1`, `v(p) = p - 1`); `None`
    /// when the value is zero to the working precision.
    pub fn valuation(&self) -> Option<usize> {
        let n = self.ramification();
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, c)| {
                c.iter()
                    .filter(|x| !x.is_zero())
                    .map(move |x| n * vp_int(x, self.p) as usize + i)
            })
            .min()
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0].iter().any(|x| !(x % self.p).is_zero())
    }

    fn w_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d = self.unramified_degree();
        if d == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for top in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[top]);
            for (j, &m) in self.modulus[..d].iter().enumerate() {
                prod[top - d + j] -= &c * m;
            }
        }
        prod.truncate(d);
        prod
    }

    /// Inverse of a unit of W modulo `p^e`.
    fn w_inv(&self, a: &[BigInt], e: u32) -> Result<Vec<BigInt>> {
        let p = self.p;
        let d = self.unramified_degree();
        let field = FiniteField::with_modulus(p, self.modulus.clone())?;
        let residue = FqElem_from(&field, a);
        let inv0 = field
            .inv(&residue)
            .ok_or_else(|| Error::Domain("inverse of a non-unit".into()))?;
        let mut y: Vec<BigInt> = inv0.coeffs().iter().map(|&c| BigInt::from(c)).collect();
        y.resize(d, BigInt::zero());
        let m = BigInt::from(p).pow(e.max(1));
        let two = {
            let mut t = vec![BigInt::zero(); d];
            t[0] = BigInt::from(2);
            t
        };
        let mut prec = 1u32;
        while prec < e {
            let ay = self.w_mul(a, &y);
            let corr: Vec<BigInt> = two.iter().zip(&ay).map(|(t, x)| t - x).collect();
            y = self.w_mul(&y, &corr).iter().map(|c| c.mod_floor(&m)).collect();
            prec *= 2;
        }
        Ok(y)
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Domain("inversion of a non-unit (positive valuation)".into()));
        }
        let mut c0 = self.zero_like();
        c0.coeffs[0] = self.w_inv(&self.coeffs[0], self.exponent(0))?;
        c0.normalize();
        // self = a0 (1 + r) with v(r) >= 1; invert the geometric series.
        let r = &(&c0 * self) - &self.one_like();
        let mut acc = self.one_like();
        let mut term = self.one_like();
        for _ in 0..self.precision {
            term = &term * &(-&r);
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(&acc * &c0)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn zero_like(&self) -> Self {
        Self::zero_over(self.p, self.precision, self.modulus.clone())
    }

    pub fn one_like(&self) -> Self {
        let mut out = self.zero_like();
        out.coeffs[0][0] = BigInt::one();
        out.normalize();
        out
    }

    pub fn from_int_like(&self, n: i64) -> Self {
        let mut out = self.zero_like();
        out.coeffs[0][0] = BigInt::from(n);
        out.normalize();
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self * other)
    }

    /// Canonical expansion `sum a_i lambda^i`, `i < K`, digits in `[0, p)`
    /// (vectors of `d` such digits over an unramified ring).
    pub fn digits(&self) -> Vec<Vec<u64>> {
        let n = self.ramification();
        let p = BigInt::from(self.p);
        let mut x = self.clone();
        let mut out = Vec::with_capacity(self.precision);
        for k in 0..self.precision {
            let digit: Vec<BigInt> = x.coeffs[0].iter().map(|c| c.mod_floor(&p)).collect();
            out.push(digit.iter().map(|c| c.try_into().unwrap_or(0)).collect());
            // x <- (x - digit) / lambda, one step of precision lost.
            let mut next = x.zero_like();
            next.precision = self.precision - k - 1;
            for i in 1..n {
                next.coeffs[i - 1] = x.coeffs[i].clone();
            }
            // (c_0 - digit)/lambda = -((c_0 - digit)/p) * lambda^(p-2)
            next.coeffs[n - 1] = x.coeffs[0]
                .iter()
                .zip(&digit)
                .map(|(c, a)| -((c - a) / &p))
                .collect();
            next.normalize();
            x = next;
        }
        out
    }

    pub fn from_digits(p: u64, precision: usize, digits: &[i64]) -> Self {
        let lambda = Self::lambda(p, precision);
        digits
            .iter()
            .rev()
            .fold(Self::zero(p, precision), |acc, &a| &(&acc * &lambda) + &Self::from_int(p, precision, a))
    }

    /// `{"p":3,"K":8,"coeffs":[...]}` with the canonical lambda-adic digits.
    pub fn to_json(&self) -> serde_json::Value {
        let digits = self.digits();
        if self.unramified_degree() == 1 {
            json!({"p": self.p, "K": self.precision, "coeffs": digits.iter().map(|d| d[0]).collect::<Vec<_>>()})
        } else {
            json!({"p": self.p, "K": self.precision, "modulus": self.modulus, "coeffs": digits})
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Raw {
            p: u64,
            #[serde(rename = "K")]
            k: usize,
            coeffs: Vec<i64>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("p-adic JSON: {e}")))?;
        if raw.p > 1000 {
            return input("prime too large for lambda-adic encoding");
        }
        Self::new(raw.p, raw.k)?;
        if raw.coeffs.len() > raw.k {
            return input("more digits than the precision allows");
        }
        Ok(Self::from_digits(raw.p, raw.k, &raw.coeffs))
    }
}

#[allow(non_snake_case)]
fn FqElem_from(field: &FiniteField, a: &[BigInt]) -> FqElem {
    let p = BigInt::from(field.p());
    let idx = a.iter().rev().fold(0u64, |acc, c| {
        acc * field.p() + u64::try_from(c.mod_floor(&p)).unwrap_or(0)
    });
    field.from_index(idx).expect("index in range")
}

impl Add for &EisensteinLocal {
    type Output = EisensteinLocal;
    fn add(self, rhs: &EisensteinLocal) -> EisensteinLocal {
        debug_assert!(self.compatible(rhs).is_ok());
        let mut out = self.clone();
        for (c, d) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            for (x, y) in c.iter_mut().zip(d) {
                *x += y;
            }
        }
        out.normalize();
        out
    }
}

impl Neg for &EisensteinLocal {
    type Output = EisensteinLocal;
    fn neg(self) -> EisensteinLocal {
        let mut out = self.clone();
        for x in out.coeffs.iter_mut().flatten() {
            *x = -&*x;
        }
        out.normalize();
        out
    }
}

impl Sub for &EisensteinLocal {
    type Output = EisensteinLocal;
    fn sub(self, rhs: &EisensteinLocal) -> EisensteinLocal {
        self + &(-rhs)
    }
}

impl Mul for &EisensteinLocal {
    type Output = EisensteinLocal;
    fn mul(self, rhs: &EisensteinLocal) -> EisensteinLocal {
        debug_assert!(self.compatible(rhs).is_ok());
        let n = self.ramification();
        let d = self.unramified_degree();
        let mut full = vec![vec![BigInt::zero(); d]; 2 * n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.iter().all(Zero::is_zero) {
                    continue;
                }
                for (slot, x) in full[i + j].iter_mut().zip(self.w_mul(a, b)) {
                    *slot += x;
                }
            }
        }
        let p = BigInt::from(self.p);
        for i in (n..2 * n).rev() {
            let c = std::mem::take(&mut full[i]);
            for (slot, x) in full[i - n].iter_mut().zip(c) {
                *slot -= x * &p;
            }
        }
        full.truncate(n);
        let mut out = self.zero_like();
        out.coeffs = full;
        out.normalize();
        out
    }
}

/// Teichmüller representative of a nonzero `t` in `F_{p^d}`, as an element of
/// `W[lambda]/lambda^K` over the unramified ring presented by the field's own
/// modulus. Iterates `x -> x^(p^d)`, gaining one p-adic digit per step.
pub fn teichmueller(field: &FiniteField, t: &FqElem, precision: usize) -> Result<EisensteinLocal> {
    if field.is_zero(t) {
        return input("the Teichmüller lift of 0 is not a root of unity");
    }
    let p = field.p();
    if p == 2 {
        return input("lambda-adic rings need an odd prime");
    }
    let mut x = EisensteinLocal::zero_over(p, precision, field.modulus().to_vec());
    for (j, &c) in t.coeffs().iter().enumerate() {
        x.coeffs[0][j] = BigInt::from(c);
    }
    x.normalize();
    let q = field.order();
    let steps = x.exponent(0) + 1;
    for _ in 0..steps {
        x = x.pow(q);
    }
    Ok(x)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

impl EisensteinLocal {
    /// Signed representative of the rational part when it is an integer of
    /// small size; used in reports only.
    pub fn small_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().flatten().any(|x| !x.is_zero())
            || self.coeffs[0][1..].iter().any(|x| !x.is_zero())
        {
            return None;
        }
        let m = BigInt::from(self.p).pow(self.exponent(0));
        let c = self.coeffs[0][0].clone();
        let half = &m / 2;
        Some(if c > half { c - m } else { c }).filter(|v| v.abs() < BigInt::from(1u64 << 40))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn lambda_power_relation() {
        for p in [3u64, 5, 7] {
            let k = 12;
            let lam = EisensteinLocal::lambda(p, k);
            assert_eq!(lam.pow(p - 1), EisensteinLocal::from_int(p, k, -(p as i64)));
            assert_eq!(EisensteinLocal::from_int(p, k, p as i64).valuation(), Some((p - 1) as usize));
        }
    }

    #[test]
    fn geometric_series_inverse() {
        let (p, k) = (5, 10);
        let lam = EisensteinLocal::lambda(p, k);
        let one = EisensteinLocal::one(p, k);
        let a = &one + &lam;
        let mut alt = EisensteinLocal::zero(p, k);
        let mut term = one.clone();
        for _ in 0..k {
            alt = &alt + &term;
            term = &term * &(-&lam);
        }
        assert_eq!(&a * &alt, one);
        assert_eq!(a.inv().unwrap(), alt);
        assert!(lam.inv().is_err());
    }

    #[test]
    fn digits_roundtrip() {
        let (p, k) = (3, 8);
        let x = &EisensteinLocal::from_int(p, k, 7) + &EisensteinLocal::lambda(p, k);
        let digits: Vec<i64> = x.digits().iter().map(|d| d[0] as i64).collect();
        assert!(digits.iter().all(|&d| (0..3).contains(&d)));
        assert_eq!(EisensteinLocal::from_digits(p, k, &digits), x);
    }

    #[test]
    fn lambda_number_inverse_and_valuation() {
        let p = 5;
        let x = &LambdaNumber::from_int(p, 3) + &LambdaNumber::lambda_pow(p, 2);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, LambdaNumber::from_int(p, 1));
        assert_eq!(LambdaNumber::lambda_pow(p, 6).valuation(), Some(rat(3, 2)));
        assert!(LambdaNumber::from_rational(p, rat(1, 5)).reduce(4).is_err());
    }

    #[test]
    fn teichmueller_roots_of_unity() {
        let f5 = FiniteField::new(5).unwrap();
        let x = teichmueller(&f5, &f5.from_int(2), 16).unwrap();
        assert_eq!(x.pow(4), EisensteinLocal::one(5, 16));
        assert_eq!(x.digits()[0], vec![2]);
        let minus = teichmueller(&f5, &f5.from_int(-1), 16).unwrap();
        assert_eq!(minus, EisensteinLocal::from_int(5, 16, -1));
        let f9 = FiniteField::new(9).unwrap();
        for t in f9.units() {
            let x = teichmueller(&f9, &t, 12).unwrap();
            assert_eq!(x.pow(8), x.one_like());
        }
    }
}
