#![no_main]

use langlands_desk::gauge::{build_connection, change_to_infinity, pipeline, slope_at_infinity};
use langlands_desk::io::parse_slope_request;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_slope_request(text) {
        let _ = pipeline(&d);
        if let Ok(s) = change_to_infinity(&build_connection(&d)) {
            let _ = slope_at_infinity(&s);
        }
    }
});
