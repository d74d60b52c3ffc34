//! The quotient `V = P/P+` of the pro-p Iwahori by its Frattini subgroup, its
//! torus weights, and the characters it carries.
//!
//! Coordinates are ordered with the affine root `alpha_0` first, followed by the
//! simple roots in the order used by [`CartanData`].

use crate::algebra::{CyclotomicNumber, FiniteField, FqElem};
use crate::cartan::CartanData;
use crate::error::{input, Result};

#[derive(Clone, Debug)]
pub struct FrattiniQuotient {
    pub data: CartanData,
    pub field: FiniteField,
    /// `m_0 = 1, m_1, ..., m_l`.
    pub weights: Vec<u64>,
}

impl FrattiniQuotient {
    pub fn new(data: &CartanData, q: u64) -> Result<Self> {
        Ok(FrattiniQuotient { field: FiniteField::new(q)?, weights: data.affine_mults(), data: data.clone() })
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// Builds a vector from element indices (base-p digits, see [`FiniteField::from_index`]).
    pub fn vector(&self, indices: &[u64]) -> Result<Vec<FqElem>> {
        self.check_len(indices.len())?;
        indices.iter().map(|&i| self.field.from_index(i)).collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dimension() {
            return input(format!("expected {} coordinates, got {len}", self.dimension()));
        }
        Ok(())
    }
}

/// A functional on `V` together with `psi(x) = zeta_p^{a x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineCharacter {
    pub f: Vec<FqElem>,
    pub psi_residue: u64,
}

/// Value of the generating invariant `prod f_i^{m_i}`.
pub fn invariant_monomial_value(f: &[FqElem], fq: &FrattiniQuotient) -> Result<FqElem> {
    fq.check_len(f.len())?;
    let field = &fq.field;
    Ok(f.iter()
        .zip(&fq.weights)
        .fold(field.one(), |acc, (x, &m)| field.mul(&acc, &field.pow(x, m))))
}

/// Nontrivial on every affine root line.
pub fn is_affine_generic(f: &[FqElem], fq: &FrattiniQuotient) -> Result<bool> {
    fq.check_len(f.len())?;
    Ok(f.iter().all(|x| !fq.field.is_zero(x)))
}

/// Stability of the torus orbit of `f`, via the invariant-monomial criterion.
pub fn torus_orbit_is_stable(f: &[FqElem], fq: &FrattiniQuotient) -> Result<bool> {
    Ok(!fq.field.is_zero(&invariant_monomial_value(f, fq)?))
}

/// `psi(Tr(sum f_i v_i))` as an element of Q(mu_p).
pub fn character_value(chi: &AffineCharacter, v: &[FqElem], fq: &FrattiniQuotient) -> Result<CyclotomicNumber> {
    fq.check_len(chi.f.len())?;
    fq.check_len(v.len())?;
    let field = &fq.field;
    let p = field.p();
    if chi.psi_residue % p == 0 {
        return input("psi must be nontrivial");
    }
    let pairing = chi.f.iter().zip(v).fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)));
    let e = (chi.psi_residue % p) * field.trace(&pairing) % p;
    Ok(CyclotomicNumber::zeta_pow(p, e as i64))
}

/// Number of affine generic functionals, by enumeration.
pub fn count_generic(fq: &FrattiniQuotient) -> Result<u64> {
    let q = fq.field.order();
    let total = q
        .checked_pow(fq.dimension() as u32)
        .filter(|&t| t <= 1 << 22)
        .ok_or_else(|| crate::Error::Resource("too many functionals to enumerate".into()))?;
    let mut count = 0;
    for idx in 0..total {
        let mut rest = idx;
        let f: Vec<FqElem> = (0..fq.dimension())
            .map(|_| {
                let x = fq.field.from_index(rest % q).expect("in range");
                rest /= q;
                x
            })
            .collect();
        if is_affine_generic(&f, fq)? {
            count += 1;
        }
    }
    Ok(count)
}
