use langlands_desk::algebra::{rat, IntPoly};
use langlands_desk::cartan::cartan_data;
use langlands_desk::zeta_count::{
    bernoulli_numbers, count_ff, count_nf, expected_degree, expected_leading_abs, riemann_zeta_negative, special_value,
    validate_curve, weil_band, zeta_st, CurveZeta,
};
use langlands_desk::{Error, Rational, SimpleType};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

/// B_0..=B_n from `sum_{k<=m} C(m+1, k) B_k = 0` (so `B_1 = -1/2`).
fn bernoulli_oracle(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn symmetric(q: u64, head: &[i64]) -> Vec<BigInt> {
    let g = head.len();
    let mut c = vec![BigInt::one()];
    c.extend(head.iter().map(|&a| BigInt::from(a)));
    for i in (0..g).rev() {
        c.push(BigInt::from(q).pow((g - i) as u32) * &c[i]);
    }
    c
}

fn q_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13])
}

fn places() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..5, 1..4)
}

/// The rational function evaluated directly, without polynomial division.
fn special_value_oracle(curve: &CurveZeta, s: &[u64], t: &[u64], d: u64) -> Rational {
    let q = BigInt::from(curve.q);
    let x = q.pow((d - 1) as u32);
    let mut num = Rational::from_integer(curve.p.eval(&x));
    for &e in s {
        num *= Rational::from_integer(BigInt::one() - x.pow(e as u32));
    }
    for &e in t {
        num *= Rational::from_integer(BigInt::one() - (&q * &x).pow(e as u32));
    }
    num / Rational::from_integer((BigInt::one() - &x) * (BigInt::one() - &q * &x))
}

proptest! {
    #[test]
    fn zeta_st_structure(q in q_strategy(), head in prop::collection::vec(-6i64..7, 0..4), s in places(), t in places()) {
        let coeffs = symmetric(q, &head);
        let p1: BigInt = IntPoly::new(coeffs.clone()).eval(&BigInt::one());
        prop_assume!(p1.is_positive());
        let curve = validate_curve(q, head.len() as u64, &coeffs).unwrap();
        let z = zeta_st(&curve, &s, &t).unwrap();
        prop_assert_eq!(z.degree().map(|d| d as i64), Some(expected_degree(&curve, &s, &t)));
        prop_assert_eq!(z.leading().abs(), expected_leading_abs(&curve, &t));
        prop_assert_eq!(z.coeff(0), BigInt::one());
        for d in [2u64, 3, 4] {
            let v = special_value(&z, d, q).unwrap();
            prop_assert_eq!(Rational::from_integer(v), special_value_oracle(&curve, &s, &t, d));
        }
    }

    /// Products of genus-one factors satisfy the Riemann hypothesis, so the
    /// special values sit in the band predicted from the root moduli.
    #[test]
    fn special_values_in_the_weil_band(
        q in q_strategy(),
        traces in prop::collection::vec(-6i64..7, 0..3),
        s in places(),
        t in places(),
        d in 2u64..5,
    ) {
        let bound = 2.0 * (q as f64).sqrt();
        prop_assume!(traces.iter().all(|&a| (a as f64).abs() <= bound));
        let p = traces.iter().fold(IntPoly::one(), |acc, &a| {
            &acc * &IntPoly::new(vec![BigInt::one(), BigInt::from(-a), BigInt::from(q)])
        });
        let curve = validate_curve(q, traces.len() as u64, p.coeffs()).unwrap();
        prop_assert!(curve.warnings.is_empty());
        let z = zeta_st(&curve, &s, &t).unwrap();
        let x = (q as f64).powi(d as i32 - 1);
        let main = z.leading().abs().to_f64().unwrap() * x.powi(expected_degree(&curve, &s, &t) as i32);
        let v = special_value(&z, d, q).unwrap().abs().to_f64().unwrap();
        let (lo, hi) = weil_band(&curve, &s, &t, d);
        prop_assert!(v >= main * lo * (1.0 - 1e-9) && v <= main * hi * (1.0 + 1e-9), "{} not in [{}, {}]", v / main, lo, hi);
    }
}

#[test]
fn curve_validation() {
    let v = |q: u64, g: u64, c: &[i64]| validate_curve(q, g, &c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    assert!(v(2, 1, &[1, 0, 2]).is_ok());
    assert!(matches!(v(2, 1, &[1, 0, 3]), Err(Error::Validation(_))));
    assert!(matches!(v(2, 1, &[2, 0, 4]), Err(Error::Validation(_))));
    assert!(matches!(v(2, 1, &[1, 0]), Err(Error::Validation(_))));
    assert!(matches!(v(6, 0, &[1]), Err(Error::Input(_))));
    // P(1) = 1 - 5 + 4 = 0
    assert!(matches!(v(4, 1, &[1, -5, 4]), Err(Error::Validation(_))));
    // Out of the Weil range but still accepted, with a warning.
    let w = v(2, 1, &[1, 3, 2]).unwrap();
    assert_eq!(w.warnings.len(), 1);
    let p1 = v(3, 0, &[1]).unwrap();
    assert!(matches!(zeta_st(&p1, &[], &[1]), Err(Error::Input(_))));
    assert!(matches!(zeta_st(&p1, &[1], &[0]), Err(Error::Input(_))));
}

#[test]
fn bernoulli_against_recurrence() {
    let ours = bernoulli_numbers(40);
    let oracle = bernoulli_oracle(40);
    assert_eq!(ours[1], rat(1, 2));
    assert_eq!(oracle[1], rat(-1, 2));
    for k in (0..=40).filter(|&k| k != 1) {
        assert_eq!(ours[k], oracle[k], "B_{k}");
    }
    for m in 1..=15u64 {
        let z = riemann_zeta_negative(2 * m - 1).unwrap();
        assert_eq!(z * Rational::from_integer(BigInt::from(2 * m)), -oracle[2 * m as usize].clone());
    }
    assert_eq!(riemann_zeta_negative(1).unwrap(), rat(-1, 12));
    assert_eq!(riemann_zeta_negative(3).unwrap(), rat(1, 120));
    assert_eq!(riemann_zeta_negative(5).unwrap(), rat(-1, 252));
}

#[test]
fn number_field_counts() {
    let oracle = bernoulli_oracle(32);
    let zeta = |d: u64| -oracle[d as usize].clone() / Rational::from_integer(BigInt::from(d));
    for t in SimpleType::samples() {
        let data = cartan_data(t);
        let res = count_nf(&data, &[], &[], 1);
        if !t.has_only_even_degrees() {
            assert!(matches!(res, Err(Error::Domain(_))), "{t}");
            continue;
        }
        let expected = data.degrees.iter().fold(
            Rational::new(BigInt::one(), BigInt::from(2).pow(data.rank as u32)),
            |acc, &d| acc * zeta(d),
        );
        let c = res.unwrap();
        assert_eq!(c.value, expected, "{t}");
        assert!(!c.exact);
    }
    let g2 = cartan_data("G2".parse().unwrap());
    assert_eq!(count_nf(&g2, &[], &[], 1).unwrap().value, rat(1, 12096));
    let c = count_nf(&g2, &[2], &[3, 5], 2).unwrap();
    let local = |d: u32| -> Rational {
        Rational::from_integer((1 - BigInt::from(2).pow(d - 1)) * (1 - BigInt::from(3).pow(d)) * (1 - BigInt::from(5).pow(d)))
    };
    assert_eq!(c.value, rat(2, 12096) * local(2) * local(6));
    assert!(c.exact);
    assert!(!count_nf(&g2, &[2], &[3, 3], 1).unwrap().exact);
    assert!(matches!(count_nf(&g2, &[4], &[], 1), Err(Error::Input(_))));
}

#[test]
fn function_field_uniqueness_and_products() {
    let p1 = validate_curve(7, 0, &[BigInt::one()]).unwrap();
    for t in SimpleType::samples() {
        let c = count_ff(&cartan_data(t), &p1, &[1], &[1]).unwrap();
        assert_eq!(c.count, BigInt::one(), "{t}");
        assert!(c.factors.iter().all(|f| f.value == BigInt::one()));
    }
    let e = validate_curve(3, 1, &[BigInt::one(), BigInt::from(-2), BigInt::from(3)]).unwrap();
    let data = cartan_data("B3".parse().unwrap());
    let c = count_ff(&data, &e, &[1, 2], &[1]).unwrap();
    let z = zeta_st(&e, &[1, 2], &[1]).unwrap();
    let product: BigInt = data.degrees.iter().map(|&d| special_value(&z, d, 3).unwrap()).product();
    assert_eq!(c.count, product);
    assert!(c.center_caveat);
}
