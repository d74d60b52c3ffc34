//! Weil zeta functions of curves, the modified polynomial `zeta_{S,T}`, its
//! values at negative integers, and the main terms of the automorphic counts
//! over function fields and over Q.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{is_prime, rat_text, IntPoly, Rational};
use crate::cartan::{check_prime_power, CartanData};
use crate::error::{input, Error, Result};

/// `Z(T) = P(T) / ((1 - T)(1 - qT))` for a curve of genus `g` over F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveZeta {
    pub q: u64,
    pub genus: u64,
    pub p: IntPoly,
    /// Coefficients outside the range allowed by the Riemann hypothesis.
    pub warnings: Vec<String>,
}

/// Checks shape, `P(0) = 1`, the functional equation and `P(1) > 0`. The
/// Riemann hypothesis is not enforced; a coefficient bound that it implies is
/// reported in `warnings` instead.
pub fn validate_curve(q: u64, genus: u64, coeffs: &[BigInt]) -> Result<CurveZeta> {
    check_prime_power(q)?;
    let g = genus as usize;
    if genus > 64 {
        return input(format!("genus {genus} is too large"));
    }
    if coeffs.len() != 2 * g + 1 {
        return Err(Error::Validation(format!(
            "P must have {} coefficients for genus {genus}, got {}",
            2 * g + 1,
            coeffs.len()
        )));
    }
    if !coeffs[0].is_one() {
        return Err(Error::Validation("P(0) must be 1".into()));
    }
    let qb = BigInt::from(q);
    for i in 0..=g {
        // a_{2g-i} = q^{g-i} a_i
        if coeffs[2 * g - i] != qb.pow((g - i) as u32) * &coeffs[i] {
            return Err(Error::Validation(format!(
                "functional equation fails: a_{} != q^{} a_{i}",
                2 * g - i,
                g - i
            )));
        }
    }
    let p = IntPoly::new(coeffs.to_vec());
    if !p.eval(&BigInt::one()).is_positive() {
        return Err(Error::Validation("P(1) must be positive".into()));
    }
    let mut warnings = Vec::new();
    let sq = (q as f64).sqrt();
    for (i, a) in coeffs.iter().enumerate().take(g + 1).skip(1) {
        let bound = binomial(2 * g as u64, i as u64) as f64 * sq.powi(i as i32);
        if a.abs().to_f64().unwrap_or(f64::INFINITY) > bound * (1.0 + 1e-12) {
            warnings.push(format!("|a_{i}| = {} exceeds the Weil bound {bound:.3}", a.abs()));
        }
    }
    Ok(CurveZeta { q, genus, p, warnings })
}

fn check_places(name: &str, degrees: &[u64]) -> Result<()> {
    if degrees.is_empty() {
        return input(format!("{name} must contain at least one place"));
    }
    if degrees.contains(&0) {
        return input(format!("place degrees in {name} must be positive"));
    }
    if degrees.iter().sum::<u64>() > 4096 {
        return input(format!("total degree of {name} is too large"));
    }
    Ok(())
}

/// `1 - c^d Z^d`.
fn one_minus(c: &BigInt, d: u64) -> IntPoly {
    let mut v = vec![BigInt::zero(); d as usize + 1];
    v[0] = BigInt::one();
    v[d as usize] = -c.pow(d as u32);
    IntPoly::new(v)
}

/// `P(Z) prod_S (1 - Z^deg) prod_T (1 - (qZ)^deg) / ((1 - Z)(1 - qZ))`.
pub fn zeta_st(curve: &CurveZeta, s: &[u64], t: &[u64]) -> Result<IntPoly> {
    check_places("S", s)?;
    check_places("T", t)?;
    let one = BigInt::one();
    let q = BigInt::from(curve.q);
    let mut num = curve.p.clone();
    for &d in s {
        num = &num * &one_minus(&one, d);
    }
    for &d in t {
        num = &num * &one_minus(&q, d);
    }
    let den = &one_minus(&one, 1) * &one_minus(&q, 1);
    num.div_exact(&den)
        .ok_or_else(|| Error::Internal("zeta_{S,T} is not a polynomial; curve data is inconsistent".into()))
}

/// `D = 2g - 2 + deg S + deg T`.
pub fn expected_degree(curve: &CurveZeta, s: &[u64], t: &[u64]) -> i64 {
    2 * curve.genus as i64 - 2 + s.iter().sum::<u64>() as i64 + t.iter().sum::<u64>() as i64
}

/// `|c| = q^{g - 1 + deg T}`.
pub fn expected_leading_abs(curve: &CurveZeta, t: &[u64]) -> BigInt {
    BigInt::from(curve.q).pow((curve.genus + t.iter().sum::<u64>() - 1) as u32)
}

/// `zeta_{S,T}(1 - d)`, i.e. the polynomial at `Z = q^{d-1}`.
pub fn special_value(poly: &IntPoly, d: u64, q: u64) -> Result<BigInt> {
    if d < 2 {
        return input("special values are taken at 1 - d with d >= 2");
    }
    Ok(poly.eval(&BigInt::from(q).pow((d - 1) as u32)))
}

/// Bounds for `|zeta_{S,T}(1-d)| / (|c| X^D)` with `X = q^{d-1}`, valid when
/// the roots of `P` satisfy the Riemann hypothesis: each root `r` of the
/// polynomial contributes a factor in `[1 - |r|/X, 1 + |r|/X]`.
pub fn weil_band(curve: &CurveZeta, s: &[u64], t: &[u64], d: u64) -> (f64, f64) {
    let q = curve.q as f64;
    let x = q.powi(d as i32 - 1);
    let mut moduli = vec![1.0 / q.sqrt(); 2 * curve.genus as usize];
    let s_roots = s.iter().sum::<u64>() as usize - 1;
    moduli.extend(std::iter::repeat(1.0).take(s_roots));
    let t_roots = t.iter().sum::<u64>() as usize - 1;
    moduli.extend(std::iter::repeat(1.0 / q).take(t_roots));
    moduli.iter().fold((1.0, 1.0), |(lo, hi), r| (lo * (1.0 - r / x).max(0.0), hi * (1.0 + r / x)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountFactor {
    pub degree: u64,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionFieldCount {
    pub poly: IntPoly,
    pub count: BigInt,
    pub factors: Vec<CountFactor>,
    /// Corrections from the center are never included.
    pub center_caveat: bool,
    pub weil_warnings: Vec<String>,
}

/// Main term `prod_i zeta_{S,T}(1 - d_i)`.
pub fn count_ff(data: &CartanData, curve: &CurveZeta, s: &[u64], t: &[u64]) -> Result<FunctionFieldCount> {
    let poly = zeta_st(curve, s, t)?;
    let factors = data
        .degrees
        .iter()
        .map(|&d| Ok(CountFactor { degree: d, value: special_value(&poly, d, curve.q)? }))
        .collect::<Result<Vec<_>>>()?;
    let count = factors.iter().map(|f| f.value.clone()).product();
    Ok(FunctionFieldCount {
        poly,
        count,
        factors,
        center_caveat: data.center_structure.iter().any(|&c| c > 1),
        weil_warnings: curve.warnings.clone(),
    })
}

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = +1/2`) by the Akiyama-Tanigawa
/// transform.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    out
}

/// `zeta(-n)` for `n >= 1`: `-B_{n+1}/(n+1)`, zero for even `n`.
pub fn riemann_zeta_negative(n: u64) -> Result<Rational> {
    if n == 0 {
        return input("n must be positive");
    }
    if n > 2000 {
        return input(format!("n = {n} is beyond the supported range"));
    }
    if n % 2 == 0 {
        return Ok(Rational::zero());
    }
    let b = bernoulli_numbers(n as usize + 1).pop().expect("nonempty");
    Ok(-b / Rational::from_integer(BigInt::from(n + 1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumberFieldFactor {
    pub degree: u64,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub zeta: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub s_factor: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub t_factor: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberFieldCount {
    pub value: Rational,
    /// The count is only claimed when S is nonempty and T holds two distinct primes.
    pub exact: bool,
    pub factors: Vec<NumberFieldFactor>,
}

/// `2^{-l} prod_i zeta(1 - d_i) prod_S (1 - p^{d_i - 1}) prod_T (1 - p^{d_i}) dim V`.
pub fn count_nf(data: &CartanData, s: &[u64], t: &[u64], dim_v: u64) -> Result<NumberFieldCount> {
    for &p in s.iter().chain(t) {
        if !is_prime(p) {
            return input(format!("{p} is not prime"));
        }
    }
    if dim_v == 0 {
        return input("dim V must be positive");
    }
    if let Some(d) = data.degrees.iter().find(|&&d| d % 2 == 1) {
        return Err(Error::Domain(format!(
            "degree {d} is odd, so zeta(1 - {d}) is a trivial zero and the main term vanishes"
        )));
    }
    let mut value = Rational::new(BigInt::from(dim_v), BigInt::from(2).pow(data.rank as u32));
    let mut factors = Vec::new();
    for &d in &data.degrees {
        let zeta = riemann_zeta_negative(d - 1)?;
        let s_factor: Rational = s
            .iter()
            .map(|&p| Rational::from_integer(BigInt::one() - BigInt::from(p).pow(d as u32 - 1)))
            .product();
        let t_factor: Rational = t
            .iter()
            .map(|&p| Rational::from_integer(BigInt::one() - BigInt::from(p).pow(d as u32)))
            .product();
        value *= &zeta * &s_factor * &t_factor;
        factors.push(NumberFieldFactor { degree: d, zeta, s_factor, t_factor });
    }
    let mut distinct = t.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(NumberFieldCount { value, exact: !s.is_empty() && distinct.len() >= 2, factors })
}

impl NumberFieldCount {
    pub fn value_text(&self) -> String {
        rat_text(&self.value)
    }
}
