//! Frobenius structure on the rank-two Kloosterman connection over
//! `Q_p(lambda)`, `lambda^(p-1) = -p`.
//!
//! The matrix series `phi(x) = sum phi_k x^k` solves
//!
//! ```text
//! x phi' + phi (N + lambda^2 x E) = p (N + lambda^2 x^p E) phi
//! ```
//!
//! order by order. The `x^0` layer only forces `phi_0 = d [[p, beta], [0, 1]]`;
//! every higher layer is then determined. Solving exactly in `Q(lambda)` for
//! `phi_0 = diag(p, 1)` and for `phi_0 = N` gives two solutions, and `beta` is
//! fixed by asking the combination to be small at the truncation order, which
//! is how overconvergence singles out the Frobenius structure at finite depth.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{is_prime, teichmueller, CyclotomicNumber, EisensteinLocal, FiniteField, FqElem, LambdaNumber, Rational};
use crate::error::{input, Error, Result};
use crate::kloosterman::{satake_sign, KlField};

type Mat2<T> = [[T; 2]; 2];

/// Truncation and precision for one solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrystalConfig {
    pub p: u64,
    /// Highest power of `x` kept.
    pub m: usize,
    /// Working precision: results are exact modulo `lambda^k`.
    pub k: usize,
}

impl CrystalConfig {
    pub fn new(p: u64, m: usize, k: usize) -> Result<Self> {
        if p == 2 || !is_prime(p) || p > 23 {
            return input(format!("p must be an odd prime up to 23, got {p}"));
        }
        if m < p as usize || m > 12 * p as usize {
            return input(format!("series length M must lie in {p}..={}", 12 * p));
        }
        if k < 2 * (p as usize - 1) || k > 40 * (p as usize - 1) {
            return input(format!("lambda-precision K must lie in {}..={}", 2 * (p - 1), 40 * (p - 1)));
        }
        Ok(CrystalConfig { p, m, k })
    }

    /// `M = 2p`, `K = 3(p - 1)`.
    pub fn standard(p: u64) -> Result<Self> {
        Self::new(p, 2 * p as usize, 3 * (p as usize - 1))
    }
}

fn zero2(p: u64) -> Mat2<LambdaNumber> {
    std::array::from_fn(|_| std::array::from_fn(|_| LambdaNumber::zero(p)))
}

fn mat_mul(a: &Mat2<LambdaNumber>, b: &Mat2<LambdaNumber>) -> Mat2<LambdaNumber> {
    std::array::from_fn(|i| std::array::from_fn(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j])))
}

fn mat_add(a: &Mat2<LambdaNumber>, b: &Mat2<LambdaNumber>) -> Mat2<LambdaNumber> {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] + &b[i][j]))
}

fn mat_scale(c: &LambdaNumber, a: &Mat2<LambdaNumber>) -> Mat2<LambdaNumber> {
    std::array::from_fn(|i| std::array::from_fn(|j| c * &a[i][j]))
}

fn unit_matrix(p: u64, i: usize, j: usize) -> Mat2<LambdaNumber> {
    let mut m = zero2(p);
    m[i][j] = LambdaNumber::from_int(p, 1);
    m
}

/// Layers `1..=m` of the recursion from a given `phi_0`:
/// `k X + X N - p N X = p lambda^2 E phi_{k-p} - lambda^2 phi_{k-1} E`.
fn solve_from(p: u64, m: usize, phi0: Mat2<LambdaNumber>) -> Vec<Mat2<LambdaNumber>> {
    let lam2 = LambdaNumber::lambda_pow(p, 2);
    let e = unit_matrix(p, 1, 0);
    let pl2 = lam2.scale(&Rational::from_integer(p.into()));
    let minus_l2 = lam2.scale(&-Rational::one());
    let pr = Rational::from_integer(p.into());
    let mut phi = vec![phi0];
    for k in 1..=m {
        let mut r = mat_scale(&minus_l2, &mat_mul(&phi[k - 1], &e));
        if k >= p as usize {
            r = mat_add(&r, &mat_scale(&pl2, &mat_mul(&e, &phi[k - p as usize])));
        }
        let inv_k = Rational::new(1.into(), (k as i64).into());
        let c = r[1][0].scale(&inv_k);
        let d = (&r[1][1] - &c).scale(&inv_k);
        let a = (&r[0][0] + &c.scale(&pr)).scale(&inv_k);
        let b = (&(&r[0][1] - &a) + &d.scale(&pr)).scale(&inv_k);
        phi.push([[a, b], [c, d]]);
    }
    phi
}

/// Exact truncated solution and its reduction modulo `lambda^K`.
#[derive(Clone, Debug)]
pub struct FrobeniusSolution {
    pub config: CrystalConfig,
    /// `phi_0 = [[p, beta], [0, 1]]`.
    pub beta: LambdaNumber,
    pub exact: Vec<Mat2<LambdaNumber>>,
    pub local: Vec<Mat2<EisensteinLocal>>,
}

pub fn solve_frobenius_ode(cfg: &CrystalConfig) -> Result<FrobeniusSolution> {
    let p = cfg.p;
    let mut diag = zero2(p);
    diag[0][0] = LambdaNumber::from_int(p, p as i64);
    diag[1][1] = LambdaNumber::from_int(p, 1);
    let (a, b) = rayon::join(|| solve_from(p, cfg.m, diag), || solve_from(p, cfg.m, unit_matrix(p, 0, 1)));
    let top = &b[cfg.m];
    let (i, j) = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .filter(|&(i, j)| !top[i][j].is_zero())
        .min_by_key(|&(i, j)| top[i][j].valuation())
        .ok_or_else(|| Error::Precision("the nilpotent solution vanishes at the truncation order".into()))?;
    let beta = -&(&a[cfg.m][i][j] * &top[i][j].inv()?);
    let exact: Vec<Mat2<LambdaNumber>> = a.iter().zip(&b).map(|(x, y)| mat_add(x, &mat_scale(&beta, y))).collect();
    let local = exact
        .iter()
        .map(|m| -> Result<Mat2<EisensteinLocal>> {
            let r = |i: usize, j: usize| m[i][j].reduce(cfg.k);
            Ok([[r(0, 0)?, r(0, 1)?], [r(1, 0)?, r(1, 1)?]])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrobeniusSolution { config: *cfg, beta, exact, local })
}

impl FrobeniusSolution {
    /// Coefficients of `x^k`, `k = 0..=M`, of
    /// `x phi' + phi (N + lambda^2 x E) - p (N + lambda^2 x^p E) phi`
    /// for the truncated series, reduced modulo `lambda^K`.
    pub fn residual(&self) -> Result<Vec<Mat2<EisensteinLocal>>> {
        let p = self.config.p;
        let lam2 = LambdaNumber::lambda_pow(p, 2);
        let n = unit_matrix(p, 0, 1);
        let e = unit_matrix(p, 1, 0);
        let pn = mat_scale(&LambdaNumber::from_int(p, p as i64), &n);
        let ple = mat_scale(&lam2.scale(&Rational::from_integer(p.into())), &e);
        let le = mat_scale(&lam2, &e);
        let minus = LambdaNumber::from_int(p, -1);
        (0..=self.config.m)
            .map(|k| {
                let phi = &self.exact;
                let mut r = mat_scale(&LambdaNumber::from_int(p, k as i64), &phi[k]);
                r = mat_add(&r, &mat_mul(&phi[k], &n));
                r = mat_add(&r, &mat_scale(&minus, &mat_mul(&pn, &phi[k])));
                if k >= 1 {
                    r = mat_add(&r, &mat_mul(&phi[k - 1], &le));
                }
                if k >= p as usize {
                    r = mat_add(&r, &mat_scale(&minus, &mat_mul(&ple, &phi[k - p as usize])));
                }
                let red = |i: usize, j: usize| r[i][j].reduce(self.config.k);
                Ok([[red(0, 0)?, red(0, 1)?], [red(1, 0)?, red(1, 1)?]])
            })
            .collect()
    }

    /// Coefficients of `det phi(x)` up to `x^M`, modulo `lambda^K`.
    pub fn determinant(&self) -> Result<Vec<EisensteinLocal>> {
        let m = self.config.m;
        (0..=m)
            .map(|k| {
                let mut acc = LambdaNumber::zero(self.config.p);
                for i in 0..=k {
                    let (x, y) = (&self.exact[i], &self.exact[k - i]);
                    acc = &acc + &(&(&x[0][0] * &y[1][1]) - &(&x[0][1] * &y[1][0]));
                }
                acc.reduce(self.config.k)
            })
            .collect()
    }

    /// `phi_0 N = p N phi_0`, i.e. `Ad(phi_0) N = p N`.
    pub fn constant_term_conjugates_n(&self) -> bool {
        let p = self.config.p;
        let n = unit_matrix(p, 0, 1);
        let lhs = mat_mul(&self.exact[0], &n);
        let rhs = mat_scale(&LambdaNumber::from_int(p, p as i64), &mat_mul(&n, &self.exact[0]));
        lhs == rhs
    }

    /// Least lambda-valuation among the entries of `phi_M`; the omitted tail is
    /// expected to be at least this small.
    pub fn tail_valuation(&self) -> Option<usize> {
        self.local[self.config.m].iter().flatten().filter_map(EisensteinLocal::valuation).min()
    }

    /// Precision at which reported traces are trusted: `K - 2`, lowered if the
    /// truncation tail is larger than that.
    pub fn trusted_precision(&self) -> usize {
        let k = self.config.k.saturating_sub(2);
        self.tail_valuation().map_or(k, |v| k.min(v))
    }

    /// `phi(y)` for `y` in a (possibly unramified) extension ring.
    fn evaluate(&self, y: &EisensteinLocal) -> Mat2<EisensteinLocal> {
        let lift = |x: &EisensteinLocal| x.over_unramified(y.modulus());
        let mut acc: Mat2<EisensteinLocal> = std::array::from_fn(|_| std::array::from_fn(|_| y.zero_like()));
        let mut power = y.one_like();
        for coeff in &self.local {
            for i in 0..2 {
                for j in 0..2 {
                    acc[i][j] = &acc[i][j] + &(&lift(&coeff[i][j]) * &power);
                }
            }
            power = &power * y;
        }
        acc
    }
}

/// Teichmüller representative of `t`.
pub fn teichmueller_lift(field: &FiniteField, t: &FqElem, precision: usize) -> Result<EisensteinLocal> {
    if field.degree() > 2 {
        return input("Teichmüller lifts are supported over F_p and F_{p^2}");
    }
    teichmueller(field, t, precision)
}

/// Trace of `prod_{i < d} phi(X^{p^i})` at the Teichmüller lift `X` of `t`
/// in `F_{p^d}`.
pub fn frobenius_trace(sol: &FrobeniusSolution, field: &FiniteField, t: &FqElem) -> Result<EisensteinLocal> {
    if field.p() != sol.config.p {
        return input("field characteristic differs from the solution's prime");
    }
    let x = teichmueller_lift(field, t, sol.config.k)?;
    let mut prod: Option<Mat2<EisensteinLocal>> = None;
    let mut y = x;
    for _ in 0..field.degree() {
        let f = sol.evaluate(&y);
        prod = Some(match prod {
            None => f,
            Some(acc) => std::array::from_fn(|i| {
                std::array::from_fn(|j| &(&acc[i][0] * &f[0][j]) + &(&acc[i][1] * &f[1][j]))
            }),
        });
        y = y.pow(field.p());
    }
    let m = prod.expect("degree >= 1");
    Ok(&m[0][0] + &m[1][1])
}

/// Image of `zeta_p` in `Z_p[lambda]` with `zeta = 1 + lambda + O(lambda^2)`,
/// as Dwork's `theta(1)` for `theta(x) = exp(lambda (x - x^p))`.
pub fn zeta_embedding(p: u64, precision: usize) -> Result<EisensteinLocal> {
    // Coefficients of theta have p-adic valuation >= m (p-1)/p^2.
    let n = (p - 1) as usize;
    let terms = ((precision + 1) * (p * p) as usize).div_ceil(n * n) + 1;
    let lam = LambdaNumber::lambda_pow(p, 1);
    let mut theta = vec![LambdaNumber::from_int(p, 1)];
    for m in 1..=terms {
        let mut v = theta[m - 1].clone();
        if m >= p as usize {
            v = &v - &theta[m - p as usize].scale(&Rational::from_integer(p.into()));
        }
        theta.push((&lam * &v).scale(&Rational::new(1.into(), (m as i64).into())));
    }
    let sum = theta.iter().fold(LambdaNumber::zero(p), |acc, x| &acc + x);
    sum.reduce(precision)
}

/// `sum c_j zeta^j` for integral cyclotomic `c`.
pub fn embed_cyclotomic(c: &CyclotomicNumber, zeta: &EisensteinLocal) -> Result<EisensteinLocal> {
    if c.p() != zeta.p() {
        return input("cyclotomic and p-adic primes differ");
    }
    if !c.is_integral() {
        return input("only integral cyclotomic numbers embed into Z_p[lambda]");
    }
    let mut acc = zeta.zero_like();
    let mut power = zeta.one_like();
    for coeff in c.coeffs() {
        let n: i64 = coeff
            .to_integer()
            .try_into()
            .map_err(|_| Error::Input("cyclotomic coefficient too large".into()))?;
        acc = &acc + &(&power.from_int_like(n) * &power);
        power = &power * zeta;
    }
    Ok(acc)
}

/// lambda-adic valuation in units where `v(p) = 1`; `None` below precision.
pub fn ordinarity_valuation(tr: &EisensteinLocal) -> Option<Rational> {
    tr.valuation().map(|v| Rational::new((v as i64).into(), ((tr.p() - 1) as i64).into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub t: u64,
    pub trace: serde_json::Value,
    pub kloosterman: serde_json::Value,
    pub ratio: serde_json::Value,
    #[serde(serialize_with = "crate::io::ser_opt_rational")]
    pub valuation: Option<Rational>,
    pub matches_calibration: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    pub p: u64,
    pub degree: usize,
    pub m: usize,
    pub k: usize,
    pub compared_precision: usize,
    pub tail_valuation: Option<usize>,
    /// `trace(1) / Kl_2(1)`.
    pub calibration: serde_json::Value,
    pub rows: Vec<TraceRow>,
    pub t_independent: bool,
    pub all_ordinary: bool,
}

/// Traces over every `t` in `F_{p^d}^*` compared with the embedded
/// Kloosterman sums `Kl_2(t)`. The ratio at `t = 1` is the calibration; the
/// check is that it does not depend on `t` modulo `lambda^{K-2}`.
pub fn calibration_report(sol: &FrobeniusSolution, degree: usize) -> Result<CalibrationReport> {
    let p = sol.config.p;
    if !(1..=2).contains(&degree) {
        return input("degree must be 1 or 2");
    }
    let q = p.pow(degree as u32);
    let kl = KlField::new(q)?;
    let field = kl.field().clone();
    let k = sol.config.k;
    let compared = k.saturating_sub(2);
    let zeta = zeta_embedding(p, k)?.over_unramified(field.modulus());
    let rows: Vec<(u64, EisensteinLocal, CyclotomicNumber, EisensteinLocal)> = field
        .units()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| -> Result<_> {
            let tr = frobenius_trace(sol, &field, &t)?;
            let sum = kl.sum(2, &t, 1)?;
            let emb = embed_cyclotomic(&sum, &zeta)?;
            let ratio = &tr * &emb.inv()?;
            Ok((field.index(&t), tr, sum, ratio))
        })
        .collect::<Result<Vec<_>>>()?;
    let calibration = rows[0].3.truncate(compared);
    let rows: Vec<TraceRow> = rows
        .into_iter()
        .map(|(t, tr, sum, ratio)| TraceRow {
            t,
            valuation: ordinarity_valuation(&tr),
            matches_calibration: ratio.truncate(compared) == calibration,
            trace: tr.to_json(),
            kloosterman: sum.to_json(),
            ratio: ratio.truncate(compared).to_json(),
        })
        .collect();
    Ok(CalibrationReport {
        p,
        degree,
        m: sol.config.m,
        k,
        compared_precision: compared,
        tail_valuation: sol.tail_valuation(),
        calibration: calibration.to_json(),
        t_independent: rows.iter().all(|r| r.matches_calibration),
        all_ordinary: rows.iter().all(|r| r.valuation == Some(Rational::zero())),
        rows,
    })
}

/// Calibration ratio `trace(1)/Kl_2(1)` over `F_{p^d}`.
pub fn calibration_ratio(sol: &FrobeniusSolution, degree: usize) -> Result<EisensteinLocal> {
    let p = sol.config.p;
    let kl = KlField::new(p.pow(degree as u32))?;
    let field = kl.field().clone();
    let one = field.one();
    let zeta = zeta_embedding(p, sol.config.k)?.over_unramified(field.modulus());
    let tr = frobenius_trace(sol, &field, &one)?;
    let emb = embed_cyclotomic(&kl.sum(2, &one, 1)?, &zeta)?;
    Ok(&tr * &emb.inv()?)
}

/// If the trace over `F_{p^d}` is `c^d` times the Satake trace `s Kl` with
/// `s = -1`, then `ratio_1 = s c` and `ratio_2 = s c^2 = s ratio_1^2`.
pub fn predicted_degree_two_ratio(ratio_1: &EisensteinLocal) -> EisensteinLocal {
    &(ratio_1 * ratio_1) * &ratio_1.from_int_like(satake_sign(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(CrystalConfig::new(3, 6, 6).is_ok());
        assert!(CrystalConfig::new(2, 6, 6).is_err());
        assert!(CrystalConfig::new(9, 18, 24).is_err());
        assert!(CrystalConfig::new(3, 2, 6).is_err());
        assert!(CrystalConfig::new(3, 6, 3).is_err());
    }

    #[test]
    fn zeta_is_a_primitive_root() {
        for p in [3u64, 5, 7] {
            let k = 4 * (p as usize - 1);
            let z = zeta_embedding(p, k).unwrap();
            assert_eq!(z.pow(p), z.one_like());
            assert_ne!(z, z.one_like());
            // zeta = 1 + lambda mod lambda^2
            let lam = EisensteinLocal::lambda(p, k);
            assert!((&(&z - &z.one_like()) - &lam).valuation().map_or(true, |v| v >= 2));
        }
    }

    #[test]
    fn solution_satisfies_the_equation() {
        for p in [3u64, 5] {
            let cfg = CrystalConfig::standard(p).unwrap();
            let sol = solve_frobenius_ode(&cfg).unwrap();
            assert!(sol.residual().unwrap().iter().flatten().flatten().all(EisensteinLocal::is_zero));
            assert!(sol.constant_term_conjugates_n());
            let det = sol.determinant().unwrap();
            assert_eq!(det[0], EisensteinLocal::from_int(p, cfg.k, p as i64));
            assert!(det[1..].iter().all(EisensteinLocal::is_zero));
        }
    }

    #[test]
    fn teichmueller_examples() {
        let f = FiniteField::new(5).unwrap();
        assert_eq!(teichmueller_lift(&f, &f.one(), 8).unwrap(), EisensteinLocal::one(5, 8));
        assert_eq!(teichmueller_lift(&f, &f.from_int(-1), 8).unwrap(), EisensteinLocal::from_int(5, 8, -1));
        let x = teichmueller_lift(&f, &f.from_int(2), 8).unwrap();
        assert_eq!(x.pow(4), x.one_like());
        assert!(teichmueller_lift(&f, &f.zero(), 8).is_err());
    }

    #[test]
    fn ordinarity_units() {
        assert_eq!(ordinarity_valuation(&EisensteinLocal::from_int(3, 8, -1)), Some(Rational::zero()));
        assert_eq!(ordinarity_valuation(&EisensteinLocal::from_int(3, 8, 2)), Some(Rational::zero()));
        assert_eq!(ordinarity_valuation(&EisensteinLocal::from_int(3, 8, 3)), Some(Rational::one()));
        assert_eq!(ordinarity_valuation(&EisensteinLocal::zero(3, 8)), None);
    }

    #[test]
    fn calibration_p3() {
        let sol = solve_frobenius_ode(&CrystalConfig::standard(3).unwrap()).unwrap();
        let r = calibration_report(&sol, 1).unwrap();
        assert!(r.t_independent, "{r:?}");
        assert!(r.all_ordinary);
    }

    #[test]
    fn calibration_is_the_satake_sign_and_squares_over_f9() {
        let sol = solve_frobenius_ode(&CrystalConfig::standard(3).unwrap()).unwrap();
        let k = sol.trusted_precision();
        let c1 = calibration_ratio(&sol, 1).unwrap();
        assert_eq!(c1.truncate(k), c1.from_int_like(-1).truncate(k));
        let c2 = calibration_ratio(&sol, 2).unwrap();
        let pred = predicted_degree_two_ratio(&c1).over_unramified(c2.modulus());
        assert_eq!(pred.truncate(k), c2.truncate(k));
        assert!(calibration_report(&sol, 2).unwrap().t_independent);
    }
}
