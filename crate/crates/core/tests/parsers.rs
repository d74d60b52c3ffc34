//! Parser entry points: seed inputs, round trips, and arbitrary text that must
//! be rejected cleanly rather than panic.

use langlands_desk::algebra::{parse_rational, rat_text};
use langlands_desk::gauge::{build_connection, change_to_infinity, pipeline, slope_at_infinity};
use langlands_desk::io::{formal_degree_report, parse_curve_json, parse_formal_degree_request, parse_slope_request};
use langlands_desk::zeta_count::zeta_st;
use langlands_desk::{CyclotomicNumber, EisensteinLocal, Error};
use proptest::prelude::*;

fn exercise(text: &str) {
    if let Ok(x) = parse_rational(text) {
        assert_eq!(parse_rational(&rat_text(&x)).unwrap(), x);
    }
    if let Ok(x) = CyclotomicNumber::from_json(text) {
        assert_eq!(CyclotomicNumber::from_json(&x.to_json().to_string()).unwrap(), x);
    }
    if let Ok(x) = EisensteinLocal::from_json(text) {
        assert_eq!(EisensteinLocal::from_json(&x.to_json().to_string()).unwrap(), x);
        if x.is_unit() {
            assert_eq!(&x * &x.inv().unwrap(), x.one_like());
        }
    }
    if let Ok(c) = parse_curve_json(text) {
        zeta_st(&c, &[1], &[1]).unwrap();
    }
    if let Ok(r) = parse_formal_degree_request(text) {
        if r.q <= 1 << 20 {
            let _ = formal_degree_report(&r);
        }
    }
    if let Ok(d) = parse_slope_request(text) {
        let _ = pipeline(&d);
        if let Ok(s) = change_to_infinity(&build_connection(&d)) {
            let _ = slope_at_infinity(&s);
        }
    }
}

const SEEDS: &[&str] = &[
    "-3/4",
    "12",
    "6/-8",
    "1/0",
    r#"{"p":5,"coeffs":["2/1","0/1","1/1","1/1"]}"#,
    r#"{"p":3,"coeffs":["-1/2","3"]}"#,
    r#"{"p":3,"K":6,"coeffs":[2,0,1,0,0,0]}"#,
    r#"{"p":5,"K":8,"coeffs":[0,1,4,0,3]}"#,
    r#"{"q":2,"g":1,"P":[1,0,2]}"#,
    r#"{"q":5,"g":0,"P":[1]}"#,
    r#"{"q":3,"g":2,"P":[1,"-2",3,-6,9]}"#,
    r#"{"type":"A1","q":3,"scenario":"depth0"}"#,
    r#"{"type":"G2","q":7,"scenario":"simple-sc"}"#,
    r#"{"type":"A1","q":3,"scenario":"custom","adjoint":{"dim_g":3,"eigenvalues":["-1"],"swan":0},"dim_rho":1,"c_phi_order":4}"#,
    r#"{"type":"A","rank":3}"#,
    r#"{"matrices":{"N":[[0,1],[0,0]],"E":[[0,0],[1,0]],"rho":["1/2","-1/2"],"rank":1,"h":2}}"#,
];

#[test]
fn seeds() {
    for s in SEEDS {
        exercise(s);
    }
    assert_eq!(parse_rational("6/-8").unwrap(), langlands_desk::algebra::rat(-3, 4));
    assert!(parse_rational("1/0").is_err());
    assert!(CyclotomicNumber::from_json(SEEDS[4]).is_ok());
    assert!(EisensteinLocal::from_json(SEEDS[7]).is_ok());
    assert_eq!(parse_curve_json(SEEDS[10]).unwrap().genus, 2);
    assert!(parse_slope_request(SEEDS[15]).is_ok());
}

#[test]
fn malformed_inputs_are_input_errors() {
    for bad in ["", "{", "[]", "null", r#"{"q":2}"#, r#"{"q":-2,"g":0,"P":[1]}"#, r#"{"q":2,"g":0,"P":[1],"x":1}"#] {
        assert!(matches!(parse_curve_json(bad), Err(Error::Input(_))), "{bad}");
    }
    assert!(matches!(parse_slope_request(r#"{"type":"B","rank":3}"#), Err(Error::Input(_))));
    assert!(matches!(parse_slope_request(r#"{"rank":3}"#), Err(Error::Input(_))));
    assert!(EisensteinLocal::from_json(r#"{"p":3,"K":2,"coeffs":[1,2,0]}"#).is_err());
    let huge = format!("{{\"q\":2,\"g\":0,\"P\":[1],\"pad\":\"{}\"}}", "x".repeat(70_000));
    assert!(matches!(parse_curve_json(&huge), Err(Error::Input(_))));
    assert!(matches!(parse_rational("99999999999999999999999999999999/"), Err(Error::Input(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn arbitrary_text_never_panics(s in "\\PC{0,64}") {
        exercise(&s);
    }

    #[test]
    fn json_shaped_text_never_panics(
        key in prop::sample::select(vec!["p", "K", "q", "g", "P", "type", "rank", "coeffs", "modulus", "scenario"]),
        val in prop::sample::select(vec!["0", "1", "2", "-7", "3", "25", "\"A1\"", "\"3/2\"", "[1,0,2]", "[[1]]", "[]", "1e9", "18446744073709551616"]),
        base in prop::sample::select(SEEDS.to_vec()),
    ) {
        // Overwrite or add one field of a seed.
        if let Ok(serde_json::Value::Object(mut m)) = serde_json::from_str::<serde_json::Value>(base) {
            m.insert(key.to_string(), serde_json::from_str(val).unwrap());
            exercise(&serde_json::Value::Object(m).to_string());
        }
    }

    #[test]
    fn rationals_round_trip(n in any::<i64>(), d in 1i64..i64::MAX) {
        let text = format!("{n}/{d}");
        let x = parse_rational(&text).unwrap();
        prop_assert_eq!(parse_rational(&rat_text(&x)).unwrap(), x);
    }
}
