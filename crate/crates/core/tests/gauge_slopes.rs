//! Slopes against the Newton polygon of the characteristic polynomial of the
//! connection matrix, computed with a separate Leibniz expansion over Z[T, s].

use std::collections::HashMap;

use langlands_desk::algebra::{rat, LaurentMatrix, RatMatrix};
use langlands_desk::cartan::cartan_data;
use langlands_desk::gauge::{
    build_connection, change_to_infinity, closed_form, coxeter_eigenvalues, gauge_transform, kostant_check,
    kostant_check_matrix, pipeline, pullback_cover, slope_at_infinity, Chart, LaurentConnection, MatrixLieData,
};
use langlands_desk::{Rational, SimpleType};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

type Bivariate = HashMap<(usize, usize), i128>;

fn mul(a: &Bivariate, b: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for (&(t1, s1), &x) in a {
        for (&(t2, s2), &y) in b {
            *out.entry((t1 + t2, s1 + s2)).or_default() += x * y;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i128)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, sign) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting at pos moves n-1 past (len - pos) entries
            let s = if (p.len() - pos) % 2 == 0 { sign } else { -sign };
            out.push((q, s));
        }
    }
    out
}

/// Slope read off the Newton polygon of det(T - A(s)) at s = 0.
fn newton_slope(conn: &LaurentConnection) -> Rational {
    let n = conn.a.size();
    let pole = conn.a.pole_order().max(0) as usize;
    // B(s) = s^pole A(s), integral entries assumed.
    let entry = |i: usize, j: usize| -> Bivariate {
        let mut m = Bivariate::new();
        for (&e, c) in conn.a.entry(i, j).terms() {
            assert!(c.is_integer());
            let v = -c.to_integer().to_i128().unwrap();
            m.insert((0, (e + pole as i64) as usize), v);
        }
        if i == j {
            m.insert((1, 0), 1);
        }
        m.retain(|_, v| *v != 0);
        m
    };
    let entries: Vec<Vec<Bivariate>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    let mut det = Bivariate::new();
    for (perm, sign) in permutations(n) {
        let mut term: Bivariate = [((0, 0), sign)].into_iter().collect();
        for (i, &j) in perm.iter().enumerate() {
            term = mul(&term, &entries[i][j]);
            if term.is_empty() {
                break;
            }
        }
        for (k, v) in term {
            *det.entry(k).or_default() += v;
        }
    }
    det.retain(|_, v| *v != 0);
    let mut best = Rational::zero();
    for k in 1..=n {
        // coefficient of T^{n-k}
        let Some(vb) = det.iter().filter(|(&(t, _), _)| t == n - k).map(|(&(_, s), _)| s).min() else { continue };
        let va = vb as i64 - (pole * k) as i64;
        let slope = rat(-va, k as i64) - rat(1, 1);
        if slope > best {
            best = slope;
        }
    }
    best
}

fn at_infinity(m2: &RatMatrix, m1: &RatMatrix) -> LaurentConnection {
    let a = &LaurentMatrix::from_constant("s", m2, -2) + &LaurentMatrix::from_constant("s", m1, -1);
    LaurentConnection { chart: Chart::Infinity, a }
}

fn int_matrix(n: usize, v: &[i64]) -> RatMatrix {
    RatMatrix::from_fn(n, n, |i, j| rat(v[n * i + j], 1))
}

#[test]
fn kloosterman_connections() {
    for n in 2..=6 {
        let d = MatrixLieData::sl(n).unwrap();
        let s = change_to_infinity(&build_connection(&d)).unwrap();
        let slope = slope_at_infinity(&s).unwrap();
        assert_eq!(slope, rat(1, n as i64), "sl_{n}");
        assert_eq!(newton_slope(&s), slope, "sl_{n}");
        let stages = pipeline(&d).unwrap();
        assert_eq!(stages.gauged, closed_form(&d));
        assert_eq!(stages.cover, pullback_cover(&s, n as u64).unwrap());

        let k = kostant_check(&d).unwrap();
        assert!(k.squarefree && k.regular_semisimple, "sl_{n}");
        assert_eq!(k.centralizer_dim, n - 1);
        let cox = coxeter_eigenvalues(&d).unwrap();
        let ty: SimpleType = format!("A{}", n - 1).parse().unwrap();
        let expected: Vec<u64> = cartan_data(ty).degrees.iter().map(|d| d - 1).collect();
        assert_eq!(cox.exponents, expected, "sl_{n}");
        assert_eq!(cox.all_primitive, langlands_desk::algebra::is_prime(n as u64));
    }
}

#[test]
fn sl3_sum_is_a_cyclic_permutation() {
    let d = MatrixLieData::sl(3).unwrap();
    let k = kostant_check(&d).unwrap();
    assert_eq!(k.charpoly.display_in("x"), "x^3 - 1");
    assert_eq!(k.centralizer_dim, 2);
    // A nilpotent element is far from regular semisimple.
    let n = kostant_check_matrix(&d.nilpotent, 2).unwrap();
    assert!(!n.squarefree && !n.regular_semisimple);
}

#[test]
fn permuted_bases_give_the_same_answers() {
    // Reverse the basis: N -> J N J, rho -> reversed.
    for n in 2..=5 {
        let d = MatrixLieData::sl(n).unwrap();
        let j = RatMatrix::from_fn(n, n, |a, b| if a + b == n - 1 { rat(1, 1) } else { rat(0, 1) });
        let conj = |m: &RatMatrix| &(&j * m) * &j;
        let rho: Vec<Rational> = d.rho.iter().rev().cloned().collect();
        let e = MatrixLieData::from_matrices(conj(&d.nilpotent), conj(&d.lowest), rho, n - 1, n as u64).unwrap();
        assert_eq!(pipeline(&e).unwrap().gauged, closed_form(&e));
        assert_eq!(slope_at_infinity(&change_to_infinity(&build_connection(&e)).unwrap()).unwrap(), rat(1, n as i64));
        assert!(kostant_check(&e).unwrap().regular_semisimple);
        assert_eq!(coxeter_eigenvalues(&e).unwrap().exponents, coxeter_eigenvalues(&d).unwrap().exponents);
    }
}

#[test]
fn regular_singular_and_bad_charts() {
    let z = RatMatrix::zeros(2, 2);
    let res = int_matrix(2, &[1, 2, 0, 3]);
    assert_eq!(slope_at_infinity(&at_infinity(&z, &res)).unwrap(), rat(0, 1));
    // Nilpotent double pole: exp(N/s) is meromorphic.
    let nil = int_matrix(2, &[0, 1, 0, 0]);
    assert_eq!(slope_at_infinity(&at_infinity(&nil, &z)).unwrap(), rat(0, 1));
    let d = MatrixLieData::sl(2).unwrap();
    assert!(slope_at_infinity(&build_connection(&d)).is_err());
    assert!(pullback_cover(&build_connection(&d), 2).is_err());
    let c = change_to_infinity(&build_connection(&d)).unwrap();
    assert!(gauge_transform(&c, &[rat(1, 2), rat(0, 1)]).is_err());
    assert!(gauge_transform(&c, &[rat(1, 1)]).is_err());
    assert!(MatrixLieData::from_matrices(nil.clone(), nil.clone(), vec![rat(0, 1); 2], 1, 2).is_err());
}

proptest! {
    /// Random double poles: the shear-and-cover slope matches the Newton polygon.
    #[test]
    fn slope_matches_newton_polygon(n in 2usize..5, v2 in prop::collection::vec(-2i64..3, 16), v1 in prop::collection::vec(-2i64..3, 16)) {
        let c = at_infinity(&int_matrix(n, &v2), &int_matrix(n, &v1));
        let lead = c.a.coefficient(-2);
        prop_assume!(!lead.is_nilpotent());
        prop_assert_eq!(slope_at_infinity(&c).unwrap(), rat(1, 1));
        prop_assert_eq!(newton_slope(&c), rat(1, 1));
    }

    /// Diagonal monomial gauge changes do not move the slope.
    #[test]
    fn slope_is_gauge_invariant(n in 2usize..6, w in prop::collection::vec(-3i64..4, 6), scale in 1i64..4) {
        let d = MatrixLieData::sl(n).unwrap();
        let s = change_to_infinity(&build_connection(&d)).unwrap();
        let weights: Vec<Rational> = w[..n].iter().map(|&x| rat(x, 1)).collect();
        let g = gauge_transform(&s, &weights).unwrap();
        prop_assert_eq!(slope_at_infinity(&g).unwrap(), rat(1, n as i64));
        // Constant conjugation by a diagonal matrix.
        let dg: Vec<Rational> = (0..n).map(|i| rat(scale.pow(i as u32), 1)).collect();
        let dm = RatMatrix::diagonal(&dg);
        let dinv = RatMatrix::diagonal(&dg.iter().map(|x| rat(1, 1) / x).collect::<Vec<_>>());
        let conj = at_infinity(
            &(&(&dinv * &s.a.coefficient(-2)) * &dm),
            &(&(&dinv * &s.a.coefficient(-1)) * &dm),
        );
        prop_assert_eq!(slope_at_infinity(&conj).unwrap(), rat(1, n as i64));
    }

    /// Gauge transforms compose additively in the weights and invert.
    #[test]
    fn gauge_composition(w1 in prop::collection::vec(-3i64..4, 3), w2 in prop::collection::vec(-3i64..4, 3)) {
        let d = MatrixLieData::sl(3).unwrap();
        let c = pullback_cover(&change_to_infinity(&build_connection(&d)).unwrap(), 3).unwrap();
        let r = |v: &[i64]| v.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>();
        let sum: Vec<i64> = w1.iter().zip(&w2).map(|(a, b)| a + b).collect();
        let neg: Vec<i64> = w1.iter().map(|a| -a).collect();
        let twice = gauge_transform(&gauge_transform(&c, &r(&w1)).unwrap(), &r(&w2)).unwrap();
        prop_assert_eq!(twice, gauge_transform(&c, &r(&sum)).unwrap());
        let back = gauge_transform(&gauge_transform(&c, &r(&w1)).unwrap(), &r(&neg)).unwrap();
        prop_assert_eq!(back, c);
    }
}
