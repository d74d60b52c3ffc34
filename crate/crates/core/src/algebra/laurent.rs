use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::matrix::RatMatrix;
use super::rational::{rat_pow, rat_text, Rational};

/// Finite Laurent polynomial over Q in a named variable. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    var: String,
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero(var: &str) -> Self {
        LaurentPoly { var: var.to_string(), terms: BTreeMap::new() }
    }

    pub fn monomial(var: &str, c: Rational, e: i64) -> Self {
        let mut out = Self::zero(var);
        out.add_term(e, c);
        out
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.terms
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Lowest exponent present.
    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.var);
        for (&e, x) in &self.terms {
            out.add_term(e, x * c);
        }
        out
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly {
            var: self.var.clone(),
            terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(&self.var);
        for (&e, c) in &self.terms {
            out.add_term(e - 1, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Rewrites every exponent through `e -> scale*e + offset`, multiplying by
    /// `factor`, into the variable `var`. Covers `t = 1/s` and `s = u^b`.
    pub fn reindex(&self, var: &str, scale: i64, offset: i64, factor: &Rational) -> Self {
        let mut out = Self::zero(var);
        for (&e, c) in &self.terms {
            out.add_term(scale * e + offset, c * factor);
        }
        out
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.terms.iter().map(|(&e, c)| c * rat_pow(x, e)).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| (e.to_string(), rat_text(c).into()))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            var: self.var.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(&self.var);
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

/// Square matrix of Laurent polynomials in one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    var: String,
    entries: Vec<Vec<LaurentPoly>>,
}

impl LaurentMatrix {
    pub fn zero(var: &str, n: usize) -> Self {
        LaurentMatrix {
            var: var.to_string(),
            entries: vec![vec![LaurentPoly::zero(var); n]; n],
        }
    }

    /// `m * var^e`.
    pub fn from_constant(var: &str, m: &RatMatrix, e: i64) -> Self {
        let n = m.rows();
        let mut out = Self::zero(var, n);
        for i in 0..n {
            for j in 0..n {
                out.entries[i][j].add_term(e, m.get(i, j).clone());
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly {
        &mut self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(LaurentPoly::is_zero)
    }

    pub fn map(&self, var: &str, f: impl Fn(usize, usize, &LaurentPoly) -> LaurentPoly) -> Self {
        LaurentMatrix {
            var: var.to_string(),
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(i, row)| row.iter().enumerate().map(|(j, x)| f(i, j, x)).collect())
                .collect(),
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.entries.iter().flatten().filter_map(LaurentPoly::min_exponent).min()
    }

    /// Order of the pole at the origin (0 when there is none).
    pub fn pole_order(&self) -> i64 {
        self.min_exponent().map_or(0, |e| (-e).max(0))
    }

    /// Constant matrix of coefficients of `var^e`.
    pub fn coefficient(&self, e: i64) -> RatMatrix {
        let n = self.size();
        RatMatrix::from_fn(n, n, |i, j| self.entries[i][j].coeff(e))
    }

    /// All exponents with a nonzero coefficient somewhere.
    pub fn exponents(&self) -> Vec<i64> {
        let mut es: Vec<i64> = self.entries.iter().flatten().flat_map(|x| x.terms().keys().copied()).collect();
        es.sort_unstable();
        es.dedup();
        es
    }

    /// `{"var": .., "terms": {exponent: [[entry, ..], ..]}}` with rational text entries.
    pub fn to_json(&self) -> serde_json::Value {
        let mut terms = serde_json::Map::new();
        for e in self.exponents() {
            let m = self.coefficient(e);
            let rows: Vec<serde_json::Value> = (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| rat_text(m.get(i, j))).collect::<Vec<_>>().into())
                .collect();
            terms.insert(e.to_string(), rows.into());
        }
        serde_json::json!({ "var": self.var, "terms": terms })
    }
}

impl Add for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.map(&self.var, |i, j, x| x + rhs.entry(i, j))
    }
}

impl Sub for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.map(&self.var, |i, j, x| x - rhs.entry(i, j))
    }
}

impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        let n = self.size();
        let mut out = LaurentMatrix::zero(&self.var, n);
        for i in 0..n {
            for k in 0..n {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = &self.entries[i][k] * &rhs.entries[k][j];
                    out.entries[i][j] = &out.entries[i][j] + &prod;
                }
            }
        }
        out
    }
}
