//! JSON request parsing and report assembly shared by the command line and the
//! fuzz targets. Every parser here accepts arbitrary text and fails with
//! [`Error::Input`] or [`Error::Validation`] rather than panicking.

use num_bigint::BigInt;
use serde::{Deserialize, Serializer};
use serde_json::{json, Value};

use crate::algebra::{parse_rational, rat_text, RatMatrix, Rational};
use crate::cartan::{cartan_data, group_order_poly, SimpleType};
use crate::error::{input, Error, Result};
use crate::formal_degree::{
    artin_conductor, depth_zero_degree, haar_volume, hii_degree, simple_sc_degree, simple_sc_hii, AdjointLocalData,
    HiiInput,
};
use crate::gauge::MatrixLieData;
use crate::zeta_count::{validate_curve, CurveZeta};

/// Longest JSON document accepted.
pub const MAX_INPUT: usize = 1 << 16;

pub(crate) fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_text(x))
}

pub(crate) fn ser_opt_rational<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&rat_text(x)),
        None => s.serialize_str("below precision"),
    }
}

pub(crate) fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn parse_json(text: &str) -> Result<Value> {
    if text.len() > MAX_INPUT {
        return input("input too long");
    }
    serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))
}

/// A number given either as a JSON integer or as rational text.
#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn rational(&self) -> Result<Rational> {
        match self {
            Num::Int(n) => Ok(Rational::from_integer((*n).into())),
            Num::Text(s) => parse_rational(s),
        }
    }

    fn integer(&self) -> Result<BigInt> {
        let r = self.rational()?;
        if !r.is_integer() {
            return input(format!("{} is not an integer", rat_text(&r)));
        }
        Ok(r.to_integer())
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Input(format!("{what}: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveJson {
    q: u64,
    g: u64,
    #[serde(rename = "P")]
    p: Vec<Num>,
}

/// `{"q":2,"g":1,"P":[1,0,2]}`; coefficients may be integers or text.
pub fn parse_curve_json(text: &str) -> Result<CurveZeta> {
    let raw: CurveJson = from_value(parse_json(text)?, "curve")?;
    if raw.p.len() > 257 {
        return input("too many coefficients");
    }
    let coeffs = raw.p.iter().map(Num::integer).collect::<Result<Vec<_>>>()?;
    validate_curve(raw.q, raw.g, &coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    DepthZero,
    SimpleSupercuspidal,
    Custom,
}

impl std::str::FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depth0" => Ok(Scenario::DepthZero),
            "simple-sc" => Ok(Scenario::SimpleSupercuspidal),
            "custom" => Ok(Scenario::Custom),
            other => input(format!("unknown scenario {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalDegreeRequest {
    pub simple_type: SimpleType,
    pub q: u64,
    pub scenario: Scenario,
    /// Only for the custom scenario.
    pub hii: Option<HiiInput>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AdjointJson {
    dim_g: u64,
    #[serde(default)]
    eigenvalues: Vec<Num>,
    #[serde(default)]
    swan: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormalDegreeJson {
    #[serde(rename = "type")]
    ty: String,
    q: u64,
    scenario: String,
    adjoint: Option<AdjointJson>,
    dim_rho: Option<u64>,
    c_phi_order: Option<u64>,
}

/// `{"type":"A1","q":3,"scenario":"depth0"}`; the custom scenario also takes
/// `"adjoint":{"dim_g":3,"eigenvalues":["-1"],"swan":0}`, `"dim_rho"` and
/// `"c_phi_order"`.
pub fn parse_formal_degree_request(text: &str) -> Result<FormalDegreeRequest> {
    let raw: FormalDegreeJson = from_value(parse_json(text)?, "formal-degree request")?;
    let simple_type: SimpleType = raw.ty.parse()?;
    let scenario: Scenario = raw.scenario.parse()?;
    let hii = match (scenario, raw.adjoint) {
        (Scenario::Custom, Some(adj)) => {
            if adj.eigenvalues.len() > 4096 {
                return input("too many eigenvalues");
            }
            let eigs = adj.eigenvalues.iter().map(Num::rational).collect::<Result<Vec<_>>>()?;
            Some(HiiInput {
                adjoint: AdjointLocalData::new(adj.dim_g, eigs, adj.swan)?,
                dim_rho: raw.dim_rho.unwrap_or(1),
                c_phi_order: raw.c_phi_order.unwrap_or(1),
                q: raw.q,
            })
        }
        (Scenario::Custom, None) => return input("the custom scenario needs adjoint data"),
        (_, Some(_)) => return input("adjoint data is only read in the custom scenario"),
        _ => None,
    };
    Ok(FormalDegreeRequest { simple_type, q: raw.q, scenario, hii })
}

/// Report for the `formal-degree` command.
pub fn formal_degree_report(req: &FormalDegreeRequest) -> Result<Value> {
    let data = cartan_data(req.simple_type);
    let q = req.q;
    match req.scenario {
        Scenario::DepthZero => {
            if req.simple_type.to_string() != "A1" {
                return input("the depth-zero scenario is defined for A1 only");
            }
            let degree = depth_zero_degree(q)?;
            let hii = crate::formal_degree::depth_zero_hii(q)?;
            let vol = haar_volume(&data, q)?;
            let scaled = &vol * Rational::from_integer(BigInt::from(q).pow(data.dim_g as u32));
            let order = group_order_poly(&data).eval(&BigInt::from(q));
            Ok(json!({
                "degree": rat_text(&degree),
                "hii": rat_text(&hii),
                "match": degree == hii,
                "identity_checks": {
                    "haar_volume": rat_text(&vol),
                    "volume_times_q_dim_is_group_order": scaled == Rational::from_integer(order),
                    "artin_conductor": artin_conductor(&AdjointLocalData::depth_zero_sl2()),
                },
            }))
        }
        Scenario::SimpleSupercuspidal => {
            let degree = simple_sc_degree(&data, q)?;
            let hii = simple_sc_hii(&data, q)?;
            Ok(json!({
                "degree": rat_text(&degree),
                "hii": rat_text(&hii),
                "match": degree == hii,
                "identity_checks": {
                    "artin_conductor": artin_conductor(&AdjointLocalData::simple_wild(&data)),
                    "half_conductor_equals_rank_plus_N": (data.dim_g + data.rank as u64) / 2 == data.rank as u64 + data.num_pos_roots,
                    "center_order": crate::cartan::center_order(&data, q)?,
                },
            }))
        }
        Scenario::Custom => {
            let inp = req.hii.as_ref().ok_or_else(|| Error::Input("missing adjoint data".into()))?;
            let hii = hii_degree(inp)?;
            Ok(json!({
                "hii": rat_text(&hii),
                "identity_checks": { "artin_conductor": artin_conductor(&inp.adjoint) },
            }))
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatricesJson {
    #[serde(rename = "N")]
    n: Vec<Vec<Num>>,
    #[serde(rename = "E")]
    e: Vec<Vec<Num>>,
    rho: Vec<Num>,
    rank: usize,
    h: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SlopeJson {
    #[serde(rename = "type")]
    ty: Option<String>,
    rank: Option<usize>,
    matrices: Option<MatricesJson>,
}

fn matrix(rows: &[Vec<Num>]) -> Result<RatMatrix> {
    let n = rows.len();
    if n == 0 || n > crate::gauge::MAX_SIZE || rows.iter().any(|r| r.len() != n) {
        return input("matrices must be square and of supported size");
    }
    let vals = rows.iter().map(|r| r.iter().map(Num::rational).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(RatMatrix::from_fn(n, n, |i, j| vals[i][j].clone()))
}

/// `{"type":"A","rank":3}` (standard representation of `sl_{rank+1}`) or
/// `{"matrices":{"N":[[..]],"E":[[..]],"rho":[..],"rank":l,"h":h}}`.
pub fn parse_slope_request(text: &str) -> Result<MatrixLieData> {
    let raw: SlopeJson = from_value(parse_json(text)?, "slope request")?;
    match (raw.ty, raw.rank, raw.matrices) {
        (Some(ty), Some(rank), None) => {
            let t: SimpleType = format!("{ty}{rank}").parse()?;
            if t.series() != crate::cartan::Series::A {
                return input(format!("{t} has no built-in representation; supply matrices"));
            }
            MatrixLieData::sl(t.rank() + 1)
        }
        (None, None, Some(m)) => {
            let rho = m.rho.iter().map(Num::rational).collect::<Result<Vec<_>>>()?;
            MatrixLieData::from_matrices(matrix(&m.n)?, matrix(&m.e)?, rho, m.rank, m.h)
        }
        _ => input("give either type and rank, or matrices"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves() {
        let c = parse_curve_json(r#"{"q":2,"g":1,"P":[1,0,2]}"#).unwrap();
        assert_eq!(c.genus, 1);
        assert!(parse_curve_json(r#"{"q":2,"g":1,"P":[1,"0","2/1"]}"#).is_ok());
        assert!(parse_curve_json(r#"{"q":2,"g":1,"P":[1,"1/2",2]}"#).is_err());
        assert!(parse_curve_json(r#"{"q":2,"g":1}"#).is_err());
        assert!(parse_curve_json("[").is_err());
    }

    #[test]
    fn formal_degree_requests() {
        let r = parse_formal_degree_request(r#"{"type":"A1","q":3,"scenario":"depth0"}"#).unwrap();
        let out = formal_degree_report(&r).unwrap();
        assert_eq!(out["degree"], "9/8");
        assert_eq!(out["hii"], "9/8");
        assert_eq!(out["match"], true);
        let r = parse_formal_degree_request(r#"{"type":"G2","q":7,"scenario":"simple-sc"}"#).unwrap();
        assert_eq!(formal_degree_report(&r).unwrap()["match"], true);
        let r = parse_formal_degree_request(
            r#"{"type":"A1","q":3,"scenario":"custom","adjoint":{"dim_g":3,"swan":1},"dim_rho":1,"c_phi_order":2}"#,
        )
        .unwrap();
        assert_eq!(formal_degree_report(&r).unwrap()["hii"], "9/2");
        assert!(parse_formal_degree_request(r#"{"type":"A1","q":3,"scenario":"custom"}"#).is_err());
        assert!(parse_formal_degree_request(r#"{"type":"Q1","q":3,"scenario":"depth0"}"#).is_err());
    }

    #[test]
    fn slope_requests() {
        assert_eq!(parse_slope_request(r#"{"type":"A","rank":3}"#).unwrap().n, 4);
        assert!(parse_slope_request(r#"{"type":"G","rank":2}"#).is_err());
        let m = r#"{"matrices":{"N":[[0,1],[0,0]],"E":[[0,0],[1,0]],"rho":["1/2","-1/2"],"rank":1,"h":2}}"#;
        assert_eq!(parse_slope_request(m).unwrap(), MatrixLieData::sl(2).unwrap());
        assert!(parse_slope_request(r#"{"type":"A"}"#).is_err());
    }
}
