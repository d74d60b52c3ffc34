//! Kloosterman sums against a floating-point re-implementation that has its
//! own field arithmetic and trace, sharing only the choice of modulus.

use std::f64::consts::PI;

use langlands_desk::algebra::{prime_power, FiniteField};
use langlands_desk::kloosterman::{
    kloosterman_sum, rationality_report, satake_sign, satake_trace, weil_bound, KlField, KloostermanQuery,
};
use langlands_desk::Error;
use num_complex::Complex64;

/// F_p or F_p[x]/(x^2 + a x + b), elements as (c0, c1).
struct Oracle {
    p: u64,
    k: usize,
    a: u64,
    b: u64,
}

impl Oracle {
    fn new(q: u64) -> Oracle {
        let (p, k) = prime_power(q).unwrap();
        let f = FiniteField::new(q).unwrap();
        let m = f.modulus();
        let (a, b) = if k == 2 { (m[1], m[0]) } else { (0, 0) };
        assert!(k <= 2);
        Oracle { p, k: k as usize, a, b }
    }

    fn q(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    /// Same digit order as the library's element indices.
    fn elem(&self, idx: u64) -> (u64, u64) {
        (idx % self.p, idx / self.p % self.p)
    }

    fn add(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let p = self.p;
        if self.k == 1 {
            return (x.0 * y.0 % p, 0);
        }
        // alpha^2 = -a alpha - b
        let c0 = x.0 * y.0 % p;
        let c1 = (x.0 * y.1 + x.1 * y.0) % p;
        let c2 = x.1 * y.1 % p;
        ((c0 + c2 * (p - self.b)) % p, (c1 + c2 * (p - self.a)) % p)
    }

    fn inv(&self, x: (u64, u64)) -> (u64, u64) {
        (1..self.q()).map(|i| self.elem(i)).find(|&y| self.mul(x, y) == (1, 0)).unwrap()
    }

    /// Tr(c0 + c1 alpha) = k c0 + c1 Tr(alpha), Tr(alpha) = -a.
    fn trace(&self, x: (u64, u64)) -> u64 {
        if self.k == 1 {
            x.0
        } else {
            (2 * x.0 + x.1 * (self.p - self.a)) % self.p
        }
    }

    fn kl(&self, n: u32, t: u64, psi: u64) -> Complex64 {
        let q = self.q();
        let t = self.elem(t);
        let mut total = Complex64::new(0.0, 0.0);
        let mut stack = vec![1u64; n as usize - 1];
        loop {
            let xs: Vec<_> = stack.iter().map(|&i| self.elem(i)).collect();
            let prod = xs.iter().fold((1, 0), |acc, &x| self.mul(acc, x));
            let last = self.mul(t, self.inv(prod));
            let s = xs.iter().fold(last, |acc, &x| self.add(acc, x));
            let e = psi * self.trace(s) % self.p;
            total += Complex64::from_polar(1.0, 2.0 * PI * e as f64 / self.p as f64);
            // odometer over (F_q^*)^{n-1}
            let mut i = 0;
            loop {
                if i == stack.len() {
                    return total;
                }
                stack[i] += 1;
                if stack[i] < q {
                    break;
                }
                stack[i] = 1;
                i += 1;
            }
        }
    }
}

#[test]
fn sums_agree_with_the_complex_oracle() {
    for (q, n) in [(3u64, 2u32), (5, 2), (7, 3), (9, 2), (9, 3), (25, 2), (49, 2)] {
        let o = Oracle::new(q);
        for t in 1..q {
            let v = kloosterman_sum(&KloostermanQuery { n, q, t, psi_residue: 1 }).unwrap();
            assert!(v.is_integral());
            for (b, z) in v.embeddings().iter().enumerate() {
                let expect = o.kl(n, t, b as u64 + 1);
                assert!((z - expect).norm() < 1e-6, "q={q} n={n} t={t} embedding {b}: {z} vs {expect}");
            }
        }
    }
}

#[test]
fn kl2_is_real() {
    // Kl_2 over F_q is real: sigma_{-1} fixes it.
    let k = KlField::new(25).unwrap();
    for t in k.field().units() {
        let v = k.sum(2, &t, 1).unwrap();
        assert_eq!(v.conjugate(-1).unwrap(), v);
    }
}

#[test]
fn satake_trace_is_signed() {
    assert_eq!(satake_sign(1), 1);
    assert_eq!(satake_sign(2), -1);
    assert_eq!(satake_sign(3), 1);
    let q = KloostermanQuery { n: 2, q: 7, t: 3, psi_residue: 1 };
    assert_eq!(satake_trace(&q).unwrap(), -&kloosterman_sum(&q).unwrap());
}

#[test]
fn sweeps_pass_every_check() {
    for q in (2..=49u64).filter(|&q| prime_power(q).is_some()) {
        for n in [2u32, 3] {
            let r = rationality_report(q, n, 1).unwrap();
            assert!(r.passed(), "q={q} n={n}: {r:?}");
            assert_eq!(r.rows.len() as u64, q - 1);
            assert!(r.rows.iter().all(|row| row.bound == weil_bound(n, q)));
        }
    }
    // Another additive character gives the Galois-conjugate sweep.
    assert!(rationality_report(7, 2, 3).unwrap().passed());
}

#[test]
fn guards_and_bad_input() {
    assert!(matches!(KlField::new(12), Err(Error::Input(_))));
    let big = KlField::new(10007).unwrap();
    let t = big.field().one();
    assert!(matches!(big.sum(3, &t, 1), Err(Error::Resource(_))));
    assert!(kloosterman_sum(&KloostermanQuery { n: 2, q: 7, t: 0, psi_residue: 1 }).is_err());
    assert!(kloosterman_sum(&KloostermanQuery { n: 2, q: 7, t: 9, psi_residue: 1 }).is_err());
    assert!(kloosterman_sum(&KloostermanQuery { n: 2, q: 7, t: 1, psi_residue: 7 }).is_err());
}
