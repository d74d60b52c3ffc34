//! Haar normalisation, formal degrees of compactly induced representations and
//! the adjoint gamma-factor prediction for them.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{rat_pow, Rational};
use crate::cartan::{center_order, check_prime_power, group_order_poly, CartanData, Series};
use crate::error::{input, Error, Result};

/// Local data of the adjoint representation of a discrete parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointLocalData {
    /// Dimension of the dual Lie algebra.
    pub dim_g: u64,
    /// Eigenvalues of geometric Frobenius on the inertia invariants.
    pub inv_frobenius_eigenvalues: Vec<Rational>,
    pub swan: u64,
}

impl AdjointLocalData {
    pub fn new(dim_g: u64, inv_frobenius_eigenvalues: Vec<Rational>, swan: u64) -> Result<Self> {
        if inv_frobenius_eigenvalues.len() as u64 > dim_g {
            return input(format!(
                "{} invariant eigenvalues exceed dim {dim_g}",
                inv_frobenius_eigenvalues.len()
            ));
        }
        Ok(AdjointLocalData { dim_g, inv_frobenius_eigenvalues, swan })
    }

    /// Tame SL2 parameter: a one-dimensional invariant line on which Frobenius
    /// acts by -1, no wild ramification.
    pub fn depth_zero_sl2() -> Self {
        AdjointLocalData { dim_g: 3, inv_frobenius_eigenvalues: vec![-Rational::one()], swan: 0 }
    }

    /// Simple wild parameter for a type: no inertia invariants, Swan conductor
    /// equal to the rank.
    pub fn simple_wild(data: &CartanData) -> Self {
        AdjointLocalData { dim_g: data.dim_g, inv_frobenius_eigenvalues: Vec::new(), swan: data.rank as u64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiiInput {
    pub adjoint: AdjointLocalData,
    pub dim_rho: u64,
    pub c_phi_order: u64,
    pub q: u64,
}

/// `#G(F_q) / q^dim`.
pub fn haar_volume(data: &CartanData, q: u64) -> Result<Rational> {
    check_prime_power(q)?;
    let order = group_order_poly(data).eval(&BigInt::from(q));
    Ok(Rational::new(order, BigInt::from(q).pow(data.dim_g as u32)))
}

/// `dim W / vol(K)` for a representation compactly induced from K.
pub fn induced_formal_degree(dim_w: u64, vol: &Rational) -> Result<Rational> {
    if !vol.is_positive() {
        return input("volume must be positive");
    }
    Ok(Rational::from_integer(dim_w.into()) / vol)
}

/// `det(1 - Fr q^{-s} | invariants)^{-1}`.
pub fn adjoint_l_value(adj: &AdjointLocalData, q: u64, s: i64) -> Result<Rational> {
    check_prime_power(q)?;
    let qs = rat_pow(&Rational::from_integer(q.into()), -s);
    let mut acc = Rational::one();
    for mu in &adj.inv_frobenius_eigenvalues {
        let factor = Rational::one() - mu * &qs;
        if factor.is_zero() {
            return Err(Error::Domain(format!("adjoint L-function has a pole at s = {s}")));
        }
        acc /= factor;
    }
    Ok(acc)
}

/// Codimension of the inertia invariants plus the Swan conductor.
pub fn artin_conductor(adj: &AdjointLocalData) -> u64 {
    adj.dim_g - adj.inv_frobenius_eigenvalues.len() as u64 + adj.swan
}

/// `(dim rho / #C) L(1) eps(0) / L(0)` with `eps(0) = q^{art/2}` (sign +).
pub fn hii_degree(inp: &HiiInput) -> Result<Rational> {
    if inp.dim_rho == 0 || inp.c_phi_order == 0 {
        return input("dim_rho and c_phi_order must be positive");
    }
    if inp.dim_rho > inp.c_phi_order {
        return input("dim_rho cannot exceed the order of the component group");
    }
    let art = artin_conductor(&inp.adjoint);
    if art % 2 == 1 {
        return Err(Error::Domain(format!("odd Artin conductor {art} would need a square root of q")));
    }
    let l1 = adjoint_l_value(&inp.adjoint, inp.q, 1)?;
    let l0 = adjoint_l_value(&inp.adjoint, inp.q, 0)?;
    let eps = Rational::from_integer(BigInt::from(inp.q).pow((art / 2) as u32));
    Ok(Rational::new(inp.dim_rho.into(), inp.c_phi_order.into()) * l1 * eps / l0)
}

/// Formal degree `q^{l+N} / #Z(q)` of a simple supercuspidal.
pub fn simple_sc_degree(data: &CartanData, q: u64) -> Result<Rational> {
    let (p, _) = check_prime_power(q)?;
    if p == 2 && data.simple_type.series() == Series::A && data.rank == 1 {
        return Err(Error::Domain("simple supercuspidals of SL2 need odd residue characteristic".into()));
    }
    let z = center_order(data, q)?;
    let num = BigInt::from(q).pow((data.rank as u64 + data.num_pos_roots) as u32);
    Ok(Rational::new(num, z.into()))
}

/// The prediction for the simple supercuspidal of a type: wild adjoint data and
/// `dim rho / #C = 1 / #Z(q)`.
pub fn simple_sc_hii(data: &CartanData, q: u64) -> Result<Rational> {
    let z = center_order(data, q)?;
    hii_degree(&HiiInput { adjoint: AdjointLocalData::simple_wild(data), dim_rho: 1, c_phi_order: z, q })
}

/// Depth-zero SL2 supercuspidal: induced from a cuspidal of dimension
/// `(p-1)/2` of SL2(F_p).
pub fn depth_zero_degree(p: u64) -> Result<Rational> {
    if p % 2 == 0 || !crate::algebra::is_prime(p) {
        return input(format!("{p} is not an odd prime"));
    }
    let vol = Rational::one() - rat_pow(&Rational::from_integer(p.into()), -2);
    induced_formal_degree((p - 1) / 2, &vol)
}

/// Prediction for the depth-zero SL2 case: component group of order 4.
pub fn depth_zero_hii(p: u64) -> Result<Rational> {
    hii_degree(&HiiInput { adjoint: AdjointLocalData::depth_zero_sl2(), dim_rho: 1, c_phi_order: 4, q: p })
}
