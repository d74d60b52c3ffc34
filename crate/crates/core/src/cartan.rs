//! Root-system invariants for the split simply-connected simple types.
//!
//! The embedded tables (degrees, highest-root coefficients, center) are checked
//! on every construction against a root system generated from the Cartan
//! matrix, so a transcription error cannot go unnoticed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::algebra::{prime_power, IntPoly, RatMatrix, Rational};
use crate::error::{input, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.letter().to_string())
    }
}

/// A valid (series, rank) pair. `D3` is normalised to `A3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleType {
    series: Series,
    rank: usize,
}

/// Upper bound on the rank of classical types; the root-system check is
/// quadratic in the number of roots.
pub const MAX_CLASSICAL_RANK: usize = 32;

impl SimpleType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if !ok {
            return input(format!("{}{rank} is not a simple type", series.letter()));
        }
        if rank > MAX_CLASSICAL_RANK {
            return input(format!("rank {rank} exceeds the supported maximum {MAX_CLASSICAL_RANK}"));
        }
        if series == Series::D && rank == 3 {
            return Ok(SimpleType { series: Series::A, rank: 3 });
        }
        Ok(SimpleType { series, rank })
    }

    pub fn series(self) -> Series {
        self.series
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    /// One representative of every exceptional type plus small classical ones.
    pub fn samples() -> Vec<SimpleType> {
        use Series::*;
        [(A, 1), (A, 2), (A, 3), (B, 2), (B, 3), (C, 3), (D, 4), (D, 5), (E, 6), (E, 7), (E, 8), (F, 4), (G, 2)]
            .into_iter()
            .map(|(s, r)| SimpleType::new(s, r).expect("valid sample"))
            .collect()
    }

    /// Types whose degrees are all even, i.e. whose motive has no trivial zero
    /// at the relevant negative integers.
    pub fn has_only_even_degrees(self) -> bool {
        cartan_data(self).degrees.iter().all(|d| d % 2 == 0)
    }

    pub fn dual(self) -> SimpleType {
        match self.series {
            Series::B => SimpleType { series: Series::C, rank: self.rank },
            Series::C => SimpleType { series: Series::B, rank: self.rank },
            _ => self,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = chars
            .next()
            .and_then(Series::from_letter)
            .ok_or_else(|| Error::Input(format!("unknown type {s:?}")))?;
        let rank: usize = chars
            .as_str()
            .trim_start_matches(['_', '-'])
            .parse()
            .map_err(|_| Error::Input(format!("unknown type {s:?}")))?;
        SimpleType::new(series, rank)
    }
}

impl Serialize for SimpleType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Invariants of a simple type. Simple roots follow Bourbaki numbering, except
/// that for G2 the first simple root is the long one (highest root 2a1 + 3a2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub simple_type: SimpleType,
    pub rank: usize,
    pub coxeter_number: u64,
    pub degrees: Vec<u64>,
    pub num_pos_roots: u64,
    pub dim_g: u64,
    pub highest_root_mults: Vec<u64>,
    pub weyl_order: BigInt,
    /// Orders of the cyclic factors of the center of the simply-connected group.
    pub center_structure: Vec<u64>,
    pub dual_type: SimpleType,
}

impl CartanData {
    /// Affine weights `m_0 = 1, m_1, ..., m_l`; they sum to `h`.
    pub fn affine_mults(&self) -> Vec<u64> {
        std::iter::once(1).chain(self.highest_root_mults.iter().copied()).collect()
    }

    /// Order of the fundamental group (determinant of the Cartan matrix).
    pub fn fundamental_group_order(&self) -> u64 {
        self.center_structure.iter().product()
    }

    /// Cartan matrix with entry `(i, j) = <alpha_j, alpha_i^vee>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        cartan_matrix(self.simple_type)
    }

    /// `{"series":"G","rank":2,"h":6,"degrees":[2,6],"N":6,"dim":14,"m":[2,3],"center":[1]}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "series": self.simple_type.series().letter().to_string(),
            "rank": self.rank,
            "h": self.coxeter_number,
            "degrees": self.degrees,
            "N": self.num_pos_roots,
            "dim": self.dim_g,
            "m": self.highest_root_mults,
            "center": self.center_structure,
        })
    }

    fn check_invariants(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Internal(format!("{}: {what}", self.simple_type)));
        let n: u64 = self.degrees.iter().map(|d| d - 1).sum();
        if self.degrees.len() != self.rank || self.highest_root_mults.len() != self.rank {
            return fail("table lengths differ from the rank");
        }
        if n != self.num_pos_roots {
            return fail("N != sum (d_i - 1)");
        }
        if self.dim_g != self.rank as u64 + 2 * n {
            return fail("dim != l + 2N");
        }
        if self.degrees.first() != Some(&2) || self.degrees.last() != Some(&self.coxeter_number) {
            return fail("degrees must start at 2 and end at h");
        }
        if !self.degrees.windows(2).all(|w| w[0] <= w[1]) {
            return fail("degrees not sorted");
        }
        if 1 + self.highest_root_mults.iter().sum::<u64>() != self.coxeter_number {
            return fail("1 + sum m_i != h");
        }
        let prod: BigInt = self.degrees.iter().map(|&d| BigInt::from(d)).product();
        if prod != self.weyl_order {
            return fail("|W| != prod d_i");
        }
        let roots = positive_roots(&self.cartan_matrix());
        if roots.len() as u64 != self.num_pos_roots {
            return fail("generated root system has the wrong size");
        }
        let highest = roots.iter().max_by_key(|r| r.iter().sum::<i64>()).expect("nonempty");
        if highest.iter().map(|&c| c as u64).collect::<Vec<_>>() != self.highest_root_mults {
            return fail("highest-root coefficients disagree with the root system");
        }
        if exponents_from_heights(&roots, self.rank) != self.degrees.iter().map(|d| d - 1).collect::<Vec<_>>() {
            return fail("degrees disagree with the height partition of the roots");
        }
        let cm = self.cartan_matrix();
        let det = RatMatrix::from_fn(self.rank, self.rank, |i, j| Rational::from_integer(cm[i][j].into())).det();
        if det != Rational::from_integer(self.fundamental_group_order().into()) {
            return fail("center order != det of the Cartan matrix");
        }
        Ok(())
    }
}

fn cartan_matrix(t: SimpleType) -> Vec<Vec<i64>> {
    let l = t.rank;
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t.series {
        Series::A | Series::B | Series::C => (0..l - 1).for_each(|i| link(i, i + 1)),
        Series::D => {
            (0..l - 2).for_each(|i| link(i, i + 1));
            link(l - 3, l - 1);
        }
        Series::E => {
            // Bourbaki: 1-3-4-5-6(-7-8), with 2 attached to 4.
            link(0, 2);
            link(1, 3);
            (2..l - 1).for_each(|i| link(i, i + 1));
        }
        Series::F | Series::G => (0..l - 1).for_each(|i| link(i, i + 1)),
    }
    match t.series {
        // alpha_l short
        Series::B => a[l - 1][l - 2] = -2,
        // alpha_l long
        Series::C => a[l - 2][l - 1] = -2,
        // alpha_1, alpha_2 long; alpha_3, alpha_4 short
        Series::F => a[2][1] = -2,
        // alpha_1 long, alpha_2 short
        Series::G => a[1][0] = -3,
        _ => {}
    }
    a
}

/// Positive roots as coefficient vectors in the simple roots, by root strings.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let l = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..l)
        .map(|i| (0..l).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut frontier = roots.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for i in 0..l {
                // <beta, alpha_i^vee>
                let pairing: i64 = (0..l).map(|j| beta[j] * cartan[i][j]).sum();
                let mut down = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if roots.contains(&probe) {
                        down += 1;
                    } else {
                        break;
                    }
                }
                if down - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !roots.contains(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        frontier = next;
    }
    roots
}

/// Exponents as the partition dual to the number of positive roots per height.
fn exponents_from_heights(roots: &[Vec<i64>], rank: usize) -> Vec<u64> {
    let max_h = roots.iter().map(|r| r.iter().sum::<i64>()).max().unwrap_or(0) as usize;
    let mut count = vec![0usize; max_h + 2];
    for r in roots {
        count[r.iter().sum::<i64>() as usize] += 1;
    }
    debug_assert_eq!(count[1], rank);
    let mut exps = Vec::new();
    for k in 1..=max_h {
        exps.extend(std::iter::repeat(k as u64).take(count[k] - count[k + 1]));
    }
    exps
}

fn table(t: SimpleType) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let l = t.rank;
    let lu = l as u64;
    match t.series {
        Series::A => ((2..=lu + 1).collect(), vec![1; l], vec![lu + 1]),
        Series::B => {
            let mut m = vec![2; l];
            m[0] = 1;
            ((1..=lu).map(|i| 2 * i).collect(), m, vec![2])
        }
        Series::C => {
            let mut m = vec![2; l];
            m[l - 1] = 1;
            ((1..=lu).map(|i| 2 * i).collect(), m, vec![2])
        }
        Series::D => {
            let mut deg: Vec<u64> = (1..lu).map(|i| 2 * i).collect();
            deg.push(lu);
            deg.sort_unstable();
            let mut m = vec![2; l];
            m[0] = 1;
            m[l - 2] = 1;
            m[l - 1] = 1;
            let center = if l % 2 == 0 { vec![2, 2] } else { vec![4] };
            (deg, m, center)
        }
        Series::E => match l {
            6 => (vec![2, 5, 6, 8, 9, 12], vec![1, 2, 2, 3, 2, 1], vec![3]),
            7 => (vec![2, 6, 8, 10, 12, 14, 18], vec![2, 2, 3, 4, 3, 2, 1], vec![2]),
            _ => (vec![2, 8, 12, 14, 18, 20, 24, 30], vec![2, 3, 4, 6, 5, 4, 3, 2], vec![1]),
        },
        Series::F => (vec![2, 6, 8, 12], vec![2, 3, 4, 2], vec![1]),
        Series::G => (vec![2, 6], vec![2, 3], vec![1]),
    }
}

/// Fully populated invariants of a simple type, validated against the
/// generated root system.
pub fn cartan_data(t: SimpleType) -> CartanData {
    let (degrees, m, center) = table(t);
    let n: u64 = degrees.iter().map(|d| d - 1).sum();
    let data = CartanData {
        simple_type: t,
        rank: t.rank,
        coxeter_number: *degrees.last().expect("rank >= 1"),
        weyl_order: degrees.iter().map(|&d| BigInt::from(d)).product(),
        num_pos_roots: n,
        dim_g: t.rank as u64 + 2 * n,
        degrees,
        highest_root_mults: m,
        center_structure: center,
        dual_type: t.dual(),
    };
    if let Err(e) = data.check_invariants() {
        panic!("embedded table is inconsistent: {e}");
    }
    data
}

/// `#G(F_q) = q^N prod (q^{d_i} - 1)` as a polynomial in q.
pub fn group_order_poly(data: &CartanData) -> IntPoly {
    data.degrees.iter().fold(
        IntPoly::monomial(BigInt::from(1), data.num_pos_roots as usize),
        |acc, &d| {
            let factor = IntPoly::new({
                let mut v = vec![BigInt::from(0); d as usize + 1];
                v[0] = BigInt::from(-1);
                v[d as usize] = BigInt::from(1);
                v
            });
            &acc * &factor
        },
    )
}

pub(crate) fn check_prime_power(q: u64) -> Result<(u64, u32)> {
    prime_power(q).ok_or_else(|| Error::Input(format!("{q} is not a prime power")))
}

/// Order of the center of the simply-connected group over F_q: each cyclic
/// factor mu_n contributes gcd(n, q - 1).
pub fn center_order(data: &CartanData, q: u64) -> Result<u64> {
    check_prime_power(q)?;
    Ok(data
        .center_structure
        .iter()
        .map(|&n| num_integer::gcd(n, q - 1))
        .product())
}
