#![no_main]

use langlands_desk::io::parse_curve_json;
use langlands_desk::zeta_count::{expected_degree, zeta_st};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = parse_curve_json(text) {
        let z = zeta_st(&curve, &[1], &[1]).expect("validated curves divide exactly");
        assert_eq!(z.degree().map(|d| d as i64), Some(expected_degree(&curve, &[1], &[1])));
    }
});
