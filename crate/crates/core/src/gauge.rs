//! The connection `d + N dt/t + E dt` in a matrix representation: change of
//! chart to infinity, tame covers, diagonal gauge transformations, the slope at
//! infinity, and the regular semisimple element `N + E`.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{rat, IntPoly, LaurentMatrix, RatMatrix, Rational};
use crate::error::{input, Error, Result};

/// Matrices `N`, `E` and the diagonal weights of `rho` in a faithful
/// representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixLieData {
    pub n: usize,
    pub nilpotent: RatMatrix,
    pub lowest: RatMatrix,
    pub rho: Vec<Rational>,
    pub rank: usize,
    pub coxeter_number: u64,
}

/// Largest matrix size accepted; kernels are computed on `n^2`-dimensional spaces.
pub const MAX_SIZE: usize = 12;

impl MatrixLieData {
    /// Standard representation of `sl_n`: `N` on the superdiagonal, `E` in the
    /// bottom-left corner, `rho = ((n-1)/2, ..., -(n-1)/2)`.
    pub fn sl(n: usize) -> Result<Self> {
        if !(2..=MAX_SIZE).contains(&n) {
            return input(format!("sl_n needs 2 <= n <= {MAX_SIZE}, got {n}"));
        }
        let nilpotent = RatMatrix::from_fn(n, n, |i, j| if j == i + 1 { Rational::one() } else { Rational::zero() });
        let lowest = RatMatrix::from_fn(n, n, |i, j| if i == n - 1 && j == 0 { Rational::one() } else { Rational::zero() });
        let rho = (0..n).map(|i| rat(n as i64 - 1 - 2 * i as i64, 2)).collect();
        Ok(MatrixLieData { n, nilpotent, lowest, rho, rank: n - 1, coxeter_number: n as u64 })
    }

    /// User-supplied data; checks `[rho, N] = N`, `[rho, E] = (1 - h) E`,
    /// nilpotency of `N`, and integrality of the weight differences.
    pub fn from_matrices(nilpotent: RatMatrix, lowest: RatMatrix, rho: Vec<Rational>, rank: usize, h: u64) -> Result<Self> {
        let n = nilpotent.rows();
        if n == 0 || n > MAX_SIZE {
            return input(format!("matrix size must be between 1 and {MAX_SIZE}"));
        }
        if nilpotent.cols() != n || lowest.rows() != n || lowest.cols() != n || rho.len() != n {
            return input("N, E and rho must have matching square sizes");
        }
        if h < 2 || rank == 0 {
            return input("need h >= 2 and a positive rank");
        }
        if rho.iter().any(|r| !(r - &rho[0]).is_integer()) {
            return input("differences of rho weights must be integers");
        }
        let rho_m = RatMatrix::diagonal(&rho);
        if rho_m.commutator(&nilpotent) != nilpotent {
            return input("[rho, N] != N");
        }
        let shifted = lowest.scale(&Rational::from_integer((1 - h as i64).into()));
        if rho_m.commutator(&lowest) != shifted {
            return input("[rho, E] != (1 - h) E");
        }
        if lowest.is_zero() || !nilpotent.is_nilpotent() {
            return input("N must be nilpotent and E nonzero");
        }
        Ok(MatrixLieData { n, nilpotent, lowest, rho, rank, coxeter_number: h })
    }

    pub fn sum(&self) -> RatMatrix {
        &self.nilpotent + &self.lowest
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// Coordinate `t` near the regular singular point.
    Zero,
    /// Coordinate `s = 1/t`.
    Infinity,
    /// Coordinate `u` with `u^b = s`.
    Cover(u64),
}

/// `nabla = d + A(x) dx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentConnection {
    pub chart: Chart,
    pub a: LaurentMatrix,
}

impl LaurentConnection {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "chart": self.chart, "A": self.a.to_json() })
    }
}

/// `A(t) = N/t + E`.
pub fn build_connection(data: &MatrixLieData) -> LaurentConnection {
    let a = &LaurentMatrix::from_constant("t", &data.nilpotent, -1) + &LaurentMatrix::from_constant("t", &data.lowest, 0);
    LaurentConnection { chart: Chart::Zero, a }
}

/// Pullback along `t = 1/s` (and back): `x^k dx -> -y^{-k-2} dy`.
pub fn change_to_infinity(conn: &LaurentConnection) -> Result<LaurentConnection> {
    let (chart, var) = match conn.chart {
        Chart::Zero => (Chart::Infinity, "s"),
        Chart::Infinity => (Chart::Zero, "t"),
        Chart::Cover(_) => return input("chart change applies to the t or s coordinate only"),
    };
    let minus = -Rational::one();
    Ok(LaurentConnection { chart, a: conn.a.map(var, |_, _, x| x.reindex(var, -1, -2, &minus)) })
}

/// Pullback along `s = u^b`: `s^e ds -> b u^{be + b - 1} du`.
pub fn pullback_cover(conn: &LaurentConnection, b: u64) -> Result<LaurentConnection> {
    if conn.chart != Chart::Infinity {
        return input("covers are taken of the chart at infinity");
    }
    if b == 0 || b > 1 << 16 {
        return input(format!("cover degree {b} out of range"));
    }
    let bi = b as i64;
    let factor = Rational::from_integer(bi.into());
    Ok(LaurentConnection { chart: Chart::Cover(b), a: conn.a.map("u", |_, _, x| x.reindex("u", bi, bi - 1, &factor)) })
}

/// Change of frame by `g = diag(x^{w_i})`: `A -> g^{-1} A g + g^{-1} dg`, i.e.
/// entry `(i, j)` gains `x^{w_j - w_i}` and the diagonal gains `w_i / x`.
pub fn gauge_transform(conn: &LaurentConnection, weights: &[Rational]) -> Result<LaurentConnection> {
    let n = conn.a.size();
    if weights.len() != n {
        return input("one weight per basis vector is required");
    }
    if weights.iter().any(|w| !(w - &weights[0]).is_integer()) {
        return input("weight differences must be integers for a Laurent gauge");
    }
    let var = conn.a.var().to_string();
    let mut a = conn.a.map(&var, |i, j, x| {
        let shift = (&weights[j] - &weights[i]).to_integer();
        x.shift(i64::try_from(shift).unwrap_or(0))
    });
    for (i, w) in weights.iter().enumerate() {
        a.entry_mut(i, i).add_term(-1, w.clone());
    }
    Ok(LaurentConnection { chart: conn.chart, a })
}

/// `-h(N + E)/u^2 + rho/u` on the degree-h cover.
pub fn closed_form(data: &MatrixLieData) -> LaurentConnection {
    let h = Rational::from_integer((data.coxeter_number as i64).into());
    let lead = LaurentMatrix::from_constant("u", &data.sum().scale(&-h), -2);
    let tail = LaurentMatrix::from_constant("u", &RatMatrix::diagonal(&data.rho), -1);
    LaurentConnection { chart: Chart::Cover(data.coxeter_number), a: &lead + &tail }
}

#[derive(Clone, Debug)]
pub struct PipelineStages {
    pub t_chart: LaurentConnection,
    pub s_chart: LaurentConnection,
    pub cover: LaurentConnection,
    pub gauged: LaurentConnection,
}

/// Build, move to infinity, pull back along the degree-h cover, gauge by `u^rho`.
pub fn pipeline(data: &MatrixLieData) -> Result<PipelineStages> {
    let t_chart = build_connection(data);
    let s_chart = change_to_infinity(&t_chart)?;
    let cover = pullback_cover(&s_chart, data.coxeter_number)?;
    let gauged = gauge_transform(&cover, &data.rho)?;
    Ok(PipelineStages { t_chart, s_chart, cover, gauged })
}

/// Minimum mean weight of a cycle in the digraph with an edge `i -> j` of
/// weight `v[i][j]` wherever it is finite (Karp). `None` if acyclic.
fn min_cycle_mean(v: &[Vec<Option<i64>>]) -> Option<Rational> {
    let n = v.len();
    // d[k][j]: least weight of a walk with k edges ending at j.
    let mut d = vec![vec![Some(0i64); n]];
    for k in 1..=n {
        let row = (0..n)
            .map(|j| (0..n).filter_map(|i| Some(d[k - 1][i]? + v[i][j]?)).min())
            .collect();
        d.push(row);
    }
    (0..n)
        .filter_map(|j| {
            let dn = d[n][j]?;
            (0..n)
                .filter_map(|k| Some(Rational::new((dn - d[k][j]?).into(), ((n - k) as i64).into())))
                .max()
        })
        .min()
}

/// Integer `w` with `v_ij + w_j - w_i >= mu` on every edge (Bellman-Ford on
/// the difference constraints `w_i - w_j <= v_ij - mu`).
fn shear_weights(v: &[Vec<Option<i64>>], mu: i64) -> Vec<i64> {
    let n = v.len();
    let mut w = vec![0i64; n];
    for _ in 0..=n {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if let Some(vij) = v[i][j] {
                    let bound = w[j] + vij - mu;
                    if w[i] > bound {
                        w[i] = bound;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    w
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlopeWitness {
    pub cover_degree: u64,
    pub pole_order: i64,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub slope: Rational,
}

/// Slope at `s = 0` of a connection in the chart at infinity.
///
/// For each cover `u^b = s`, `b <= max_cover`, the diagonal shear minimising the
/// pole order is found from the entrywise valuations. A pole of order at most
/// one means the connection is regular singular (slope 0); a non-nilpotent
/// leading coefficient at pole order `m >= 2` certifies slope `(m - 1)/b`.
pub fn slope_at_infinity_with(conn: &LaurentConnection, max_cover: u64) -> Result<(Rational, Option<SlopeWitness>)> {
    if conn.chart != Chart::Infinity {
        return input("slope_at_infinity expects the chart at infinity");
    }
    if conn.a.is_zero() {
        return Ok((Rational::zero(), None));
    }
    let n = conn.a.size();
    let mut best: Option<SlopeWitness> = None;
    for b in 1..=max_cover {
        let pulled = pullback_cover(conn, b)?;
        let v: Vec<Vec<Option<i64>>> =
            (0..n).map(|i| (0..n).map(|j| pulled.a.entry(i, j).min_exponent()).collect()).collect();
        let mu = match min_cycle_mean(&v) {
            None => return Ok((Rational::zero(), None)),
            Some(mu) => mu,
        };
        if mu >= -Rational::one() {
            return Ok((Rational::zero(), None));
        }
        if !mu.is_integer() {
            continue;
        }
        let m = mu.to_integer();
        let mi = i64::try_from(&m).map_err(|_| Error::Internal("pole order overflow".into()))?;
        let w = shear_weights(&v, mi);
        let sheared = gauge_transform(&pulled, &w.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>())?;
        debug_assert_eq!(sheared.a.min_exponent(), Some(mi));
        if sheared.a.coefficient(mi).is_nilpotent() {
            continue;
        }
        let pole = -mi;
        let slope = Rational::new((pole - 1).into(), (b as i64).into());
        if best.as_ref().map_or(true, |w| slope < w.slope) {
            best = Some(SlopeWitness { cover_degree: b, pole_order: pole, slope });
        }
    }
    match best {
        Some(w) => Ok((w.slope.clone(), Some(w))),
        None => Err(Error::Domain(format!(
            "no cover of degree <= {max_cover} exhibits a non-nilpotent polar part"
        ))),
    }
}

/// [`slope_at_infinity_with`] over covers up to the matrix size, which bounds
/// the denominators of slopes.
pub fn slope_at_infinity(conn: &LaurentConnection) -> Result<Rational> {
    Ok(slope_at_infinity_with(conn, conn.a.size() as u64)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KostantReport {
    pub charpoly: IntPoly,
    pub squarefree: bool,
    pub centralizer_dim: usize,
    pub regular_semisimple: bool,
}

/// Basis of the trace-zero matrices: off-diagonal units, then `E_ii - E_{i+1,i+1}`.
fn sl_basis(n: usize) -> Vec<RatMatrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(RatMatrix::from_fn(n, n, |a, b| if (a, b) == (i, j) { Rational::one() } else { Rational::zero() }));
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        out.push(RatMatrix::from_fn(n, n, |a, b| {
            if a != b {
                Rational::zero()
            } else if a == i {
                Rational::one()
            } else if a == i + 1 {
                -Rational::one()
            } else {
                Rational::zero()
            }
        }));
    }
    out
}

/// Dimension of `{Y in span(basis) : [X, Y] = 0}`.
fn centralizer_dim(x: &RatMatrix, basis: &[RatMatrix]) -> usize {
    let n = x.rows();
    let images: Vec<RatMatrix> = basis.iter().map(|y| x.commutator(y)).collect();
    let m = RatMatrix::from_fn(n * n, basis.len(), |r, c| images[c].get(r / n, r % n).clone());
    m.kernel().len()
}

/// Squarefree characteristic polynomial and centralizer of dimension `rank` in
/// the trace-zero matrices.
pub fn kostant_check_matrix(x: &RatMatrix, rank: usize) -> Result<KostantReport> {
    let cp = x.charpoly();
    let charpoly = cp.to_int().ok_or_else(|| Error::Domain("characteristic polynomial is not integral".into()))?;
    let squarefree = cp.is_squarefree();
    let centralizer_dim = centralizer_dim(x, &sl_basis(x.rows()));
    Ok(KostantReport { charpoly, squarefree, centralizer_dim, regular_semisimple: squarefree && centralizer_dim == rank })
}

pub fn kostant_check(data: &MatrixLieData) -> Result<KostantReport> {
    kostant_check_matrix(&data.sum(), data.rank)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterReport {
    /// `k` with multiplicity, for eigenvalue `zeta_h^k` of `Ad(zeta_h^rho)` on the centralizer.
    pub exponents: Vec<u64>,
    /// `gcd(k, h) = 1` for every reported exponent.
    pub all_primitive: bool,
}

/// Eigenvalues of conjugation by `zeta_h^rho` on the centralizer of `N + E` in
/// the trace-zero matrices. `Ad(N + E)` raises the `rho`-grading by one mod h,
/// so the eigenspaces are the kernels on each graded piece.
pub fn coxeter_eigenvalues(data: &MatrixLieData) -> Result<CoxeterReport> {
    let h = data.coxeter_number as i64;
    let n = data.n;
    let grade = |y: &RatMatrix| -> Option<i64> {
        let mut g = None;
        for i in 0..n {
            for j in 0..n {
                if !y.get(i, j).is_zero() {
                    let d = (&data.rho[i] - &data.rho[j]).to_integer();
                    let d = i64::try_from(d).ok()?.mod_floor(&h);
                    if g.is_some_and(|x| x != d) {
                        return None;
                    }
                    g = Some(d);
                }
            }
        }
        g
    };
    let basis = sl_basis(n);
    let x = data.sum();
    let mut exponents = Vec::new();
    for k in 0..h {
        let piece: Vec<RatMatrix> = basis.iter().filter(|y| grade(y) == Some(k)).cloned().collect();
        if piece.is_empty() {
            continue;
        }
        let dim = centralizer_dim(&x, &piece);
        exponents.extend(std::iter::repeat(k as u64).take(dim));
    }
    let all_primitive = exponents.iter().all(|&k| k.gcd(&(h as u64)) == 1);
    Ok(CoxeterReport { exponents, all_primitive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LaurentPoly;

    #[test]
    fn sl2_connection() {
        let d = MatrixLieData::sl(2).unwrap();
        let c = build_connection(&d);
        assert_eq!(c.a.entry(0, 1), &LaurentPoly::monomial("t", rat(1, 1), -1));
        assert_eq!(c.a.entry(1, 0), &LaurentPoly::monomial("t", rat(1, 1), 0));
        assert_eq!(c.a.coefficient(-1), d.nilpotent);
        let s = change_to_infinity(&c).unwrap();
        assert_eq!(s.a.entry(0, 1), &LaurentPoly::monomial("s", rat(-1, 1), -1));
        assert_eq!(s.a.entry(1, 0), &LaurentPoly::monomial("s", rat(-1, 1), -2));
        assert_eq!(s.a.pole_order(), 2);
        assert_eq!(change_to_infinity(&s).unwrap(), c);
        let u = pullback_cover(&s, 2).unwrap();
        assert_eq!(u.a.coefficient(-1), d.nilpotent.scale(&rat(-2, 1)));
        assert_eq!(u.a.coefficient(-3), d.lowest.scale(&rat(-2, 1)));
        assert_eq!(pullback_cover(&s, 1).unwrap().a.coefficient(-2), s.a.coefficient(-2));
    }

    #[test]
    fn closed_forms() {
        for n in 2..=6 {
            let d = MatrixLieData::sl(n).unwrap();
            let p = pipeline(&d).unwrap();
            assert_eq!(p.gauged, closed_form(&d), "sl_{n}");
        }
        let d = MatrixLieData::sl(3).unwrap();
        let c = pullback_cover(&change_to_infinity(&build_connection(&d)).unwrap(), 3).unwrap();
        assert_eq!(gauge_transform(&c, &vec![rat(0, 1); 3]).unwrap(), c);
    }

    #[test]
    fn slopes() {
        for n in 2..=6 {
            let d = MatrixLieData::sl(n).unwrap();
            let s = change_to_infinity(&build_connection(&d)).unwrap();
            assert_eq!(slope_at_infinity(&s).unwrap(), rat(1, n as i64));
        }
        let d = MatrixLieData::sl(2).unwrap();
        let tame = LaurentConnection { chart: Chart::Infinity, a: LaurentMatrix::from_constant("s", &d.nilpotent, -1) };
        assert_eq!(slope_at_infinity(&tame).unwrap(), rat(0, 1));
        assert!(slope_at_infinity(&build_connection(&d)).is_err());
    }

    #[test]
    fn kostant() {
        let r = kostant_check(&MatrixLieData::sl(2).unwrap()).unwrap();
        assert_eq!(r.charpoly, IntPoly::from_i64(&[-1, 0, 1]));
        assert!(r.regular_semisimple);
        assert_eq!(r.centralizer_dim, 1);
        let r = kostant_check(&MatrixLieData::sl(3).unwrap()).unwrap();
        assert_eq!(r.charpoly, IntPoly::from_i64(&[-1, 0, 0, 1]));
        assert_eq!(r.centralizer_dim, 2);
        let d = MatrixLieData::sl(3).unwrap();
        assert!(!kostant_check_matrix(&d.nilpotent, 2).unwrap().regular_semisimple);
    }

    #[test]
    fn coxeter() {
        let r = coxeter_eigenvalues(&MatrixLieData::sl(2).unwrap()).unwrap();
        assert_eq!(r.exponents, vec![1]);
        assert!(r.all_primitive);
        let r = coxeter_eigenvalues(&MatrixLieData::sl(3).unwrap()).unwrap();
        assert_eq!(r.exponents, vec![1, 2]);
        let r = coxeter_eigenvalues(&MatrixLieData::sl(4).unwrap()).unwrap();
        assert_eq!(r.exponents, vec![1, 2, 3]);
        assert!(!r.all_primitive);
    }

    #[test]
    fn user_matrices() {
        let d = MatrixLieData::sl(3).unwrap();
        let ok = MatrixLieData::from_matrices(d.nilpotent.clone(), d.lowest.clone(), d.rho.clone(), 2, 3).unwrap();
        assert_eq!(ok, d);
        assert!(MatrixLieData::from_matrices(d.nilpotent.clone(), d.lowest.clone(), d.rho.clone(), 2, 4).is_err());
        assert!(MatrixLieData::from_matrices(d.lowest.clone(), d.nilpotent.clone(), d.rho.clone(), 2, 3).is_err());
        let bad_rho = vec![rat(1, 3), rat(0, 1), rat(-1, 3)];
        assert!(MatrixLieData::from_matrices(d.nilpotent.clone(), d.lowest, bad_rho, 2, 3).is_err());
    }

    #[test]
    fn cycle_mean() {
        let v = vec![vec![None, Some(-1)], vec![Some(-3), None]];
        assert_eq!(min_cycle_mean(&v), Some(rat(-2, 1)));
        let w = shear_weights(&v, -2);
        assert_eq!(w[0] - w[1], 1);
        assert_eq!(min_cycle_mean(&[vec![None, Some(0)], vec![None, None]]), None);
    }
}
