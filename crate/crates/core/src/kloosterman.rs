//! Kloosterman sums `Kl_n(t) = sum_{x_1...x_n = t} psi(Tr(x_1 + ... + x_n))`
//! over F_q, valued in Z[mu_p], and the identities they satisfy.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{CyclotomicNumber, FiniteField, FqElem};
use crate::error::{input, Error, Result};

/// Largest number of terms `q^{n-1}` a single sum may enumerate.
pub const MAX_TERMS: u64 = 10_000_000;

/// The Satake trace is `(-1)^{n-1} Kl_n`; this is the only place the sign lives.
pub fn satake_sign(n: u32) -> i64 {
    if n % 2 == 1 {
        1
    } else {
        -1
    }
}

/// F_q with discrete-log tables, so that a term of the sum costs two lookups.
#[derive(Clone, Debug)]
pub struct KlField {
    field: FiniteField,
    /// `log[index(x)] = e` with `x = g^e`; unused at index 0.
    log: Vec<u64>,
    /// `Tr(g^e)`.
    trace_of_log: Vec<u64>,
}

impl KlField {
    pub fn new(q: u64) -> Result<Self> {
        let field = FiniteField::new(q)?;
        let g = primitive_element(&field);
        let mut log = vec![0u64; q as usize];
        let mut trace_of_log = Vec::with_capacity(q as usize - 1);
        let mut x = field.one();
        for e in 0..q - 1 {
            log[field.index(&x) as usize] = e;
            trace_of_log.push(field.trace(&x));
            x = field.mul(&x, &g);
        }
        Ok(KlField { field, log, trace_of_log })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    fn order(&self) -> u64 {
        self.field.order()
    }

    fn check(&self, n: u32, t: &FqElem, a: u64) -> Result<()> {
        let p = self.field.p();
        if n == 0 {
            return input("n must be at least 1");
        }
        if self.field.is_zero(t) {
            return input("t must be nonzero");
        }
        if a % p == 0 {
            return input("psi must be nontrivial");
        }
        let terms = (self.order() as f64).powi(n as i32 - 1);
        if terms > MAX_TERMS as f64 {
            return Err(Error::Resource(format!(
                "Kl_{n} over F_{} needs {terms:.0} terms, above the limit {MAX_TERMS}",
                self.order()
            )));
        }
        Ok(())
    }

    /// `Kl_n(t)` with `psi(x) = zeta_p^{a x}`.
    pub fn sum(&self, n: u32, t: &FqElem, a: u64) -> Result<CyclotomicNumber> {
        self.check(n, t, a)?;
        let p = self.field.p();
        let m = self.order() - 1;
        let log_t = self.log[self.field.index(t) as usize];
        let free = n as usize - 1;
        let counts = if free == 0 {
            let mut c = vec![0i64; p as usize];
            c[self.trace_of_log[log_t as usize] as usize] += 1;
            c
        } else {
            (0..m)
                .into_par_iter()
                .fold(
                    || vec![0i64; p as usize],
                    |mut acc, e0| {
                        self.accumulate(&mut acc, e0, free, log_t);
                        acc
                    },
                )
                .reduce(|| vec![0i64; p as usize], |x, y| x.iter().zip(&y).map(|(u, v)| u + v).collect())
        };
        // Rescale exponents by a.
        let mut scaled = vec![0i64; p as usize];
        for (k, c) in counts.iter().enumerate() {
            scaled[(k as u64 * (a % p) % p) as usize] += c;
        }
        Ok(CyclotomicNumber::from_exponent_counts(p, &scaled))
    }

    /// Enumerates the remaining free logs after fixing the first one to `e0`.
    fn accumulate(&self, acc: &mut [i64], e0: u64, free: usize, log_t: u64) {
        let p = self.field.p();
        let m = self.order() - 1;
        let mut logs = vec![0u64; free];
        logs[0] = e0;
        loop {
            let sum_logs: u64 = logs.iter().fold(0, |s, &e| (s + e) % m);
            let last = (log_t + m - sum_logs) % m;
            let tr = logs.iter().fold(self.trace_of_log[last as usize], |s, &e| (s + self.trace_of_log[e as usize]) % p);
            acc[tr as usize] += 1;
            // Odometer over logs[1..].
            let mut i = 1;
            loop {
                if i == free {
                    return;
                }
                logs[i] += 1;
                if logs[i] < m {
                    break;
                }
                logs[i] = 0;
                i += 1;
            }
        }
    }

    pub fn satake_trace(&self, n: u32, t: &FqElem, a: u64) -> Result<CyclotomicNumber> {
        let kl = self.sum(n, t, a)?;
        Ok(if satake_sign(n) == 1 { kl } else { -&kl })
    }

    /// Every `Kl_n(t)` for `t` in F_q^*, in index order.
    pub fn sweep(&self, n: u32, a: u64) -> Result<Vec<(FqElem, CyclotomicNumber)>> {
        self.check(n, &self.field.one(), a)?;
        let ts: Vec<FqElem> = self.field.units().collect();
        ts.into_par_iter()
            .map(|t| self.sum(n, &t, a).map(|v| (t, v)))
            .collect()
    }
}

fn primitive_element(field: &FiniteField) -> FqElem {
    let m = field.order() - 1;
    let mut primes = Vec::new();
    let mut r = m;
    let mut d = 2;
    while d * d <= r {
        if r % d == 0 {
            primes.push(d);
            while r % d == 0 {
                r /= d;
            }
        }
        d += 1;
    }
    if r > 1 {
        primes.push(r);
    }
    field
        .units()
        .find(|g| primes.iter().all(|&l| field.pow(g, m / l) != field.one()))
        .expect("the unit group is cyclic")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KloostermanQuery {
    pub n: u32,
    pub q: u64,
    /// Index of `t` in F_q (base-p digits, constant coefficient first).
    pub t: u64,
    pub psi_residue: u64,
}

pub fn kloosterman_sum(query: &KloostermanQuery) -> Result<CyclotomicNumber> {
    let k = KlField::new(query.q)?;
    let t = k.field.from_index(query.t)?;
    k.sum(query.n, &t, query.psi_residue)
}

pub fn satake_trace(query: &KloostermanQuery) -> Result<CyclotomicNumber> {
    let k = KlField::new(query.q)?;
    let t = k.field.from_index(query.t)?;
    k.satake_trace(query.n, &t, query.psi_residue)
}

/// Deligne's bound `n q^{(n-1)/2}`.
pub fn weil_bound(n: u32, q: u64) -> f64 {
    n as f64 * (q as f64).powf((n as f64 - 1.0) / 2.0)
}

/// `|sigma(value)| <= n q^{(n-1)/2}` at every complex embedding, with `1e-9` slack.
pub fn weil_bound_check(value: &CyclotomicNumber, n: u32, q: u64) -> bool {
    let bound = weil_bound(n, q);
    value.embeddings().iter().all(|z| z.norm() <= bound + 1e-9)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub t: u64,
    pub value: serde_json::Value,
    pub integral: bool,
    pub embedding_abs: Vec<f64>,
    pub bound: f64,
    pub weil_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalityReport {
    pub n: u32,
    pub q: u64,
    pub psi_residue: u64,
    pub rows: Vec<SweepRow>,
    pub all_integral: bool,
    /// `sigma_b Kl_n(t) = Kl_n(b^n t)` for all `b` in F_p^* and all `t`.
    pub galois_ok: bool,
    /// `sigma_{-1} Kl_n(t) = Kl_n((-1)^n t)`.
    pub conjugation_ok: bool,
    /// `sum_t Kl_n(t) = (-1)^n`.
    pub sum_ok: bool,
    pub weil_ok: bool,
}

impl RationalityReport {
    pub fn passed(&self) -> bool {
        self.all_integral && self.galois_ok && self.conjugation_ok && self.sum_ok && self.weil_ok
    }
}

pub fn rationality_report(q: u64, n: u32, psi_residue: u64) -> Result<RationalityReport> {
    let k = KlField::new(q)?;
    let f = &k.field;
    let p = f.p();
    let values = k.sweep(n, psi_residue)?;
    let lookup = |t: &FqElem| &values[f.index(t) as usize - 1].1;
    let bound = weil_bound(n, q);

    let mut galois_ok = true;
    let mut conjugation_ok = true;
    for (t, v) in &values {
        for b in 1..p {
            let bn = f.pow(&f.from_int(b as i64), n as u64);
            if v.conjugate(b as i64)? != *lookup(&f.mul(&bn, t)) {
                galois_ok = false;
            }
        }
        let sign_t = if n % 2 == 0 { t.clone() } else { f.neg(t) };
        if v.conjugate(-1)? != *lookup(&sign_t) {
            conjugation_ok = false;
        }
    }
    let total = values.iter().fold(CyclotomicNumber::zero(p), |acc, (_, v)| &acc + v);
    let expected = CyclotomicNumber::rational(p, crate::algebra::rat(if n % 2 == 0 { 1 } else { -1 }, 1));
    let rows: Vec<SweepRow> = values
        .iter()
        .map(|(t, v)| {
            let embedding_abs: Vec<f64> = v.embeddings().iter().map(|z| z.norm()).collect();
            SweepRow {
                t: f.index(t),
                value: v.to_json(),
                integral: v.is_integral(),
                weil_ok: embedding_abs.iter().all(|&x| x <= bound + 1e-9),
                embedding_abs,
                bound,
            }
        })
        .collect();
    Ok(RationalityReport {
        n,
        q,
        psi_residue,
        all_integral: rows.iter().all(|r| r.integral),
        weil_ok: rows.iter().all(|r| r.weil_ok),
        rows,
        galois_ok,
        conjugation_ok,
        sum_ok: total == expected,
    })
}
