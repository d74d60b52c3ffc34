#![no_main]

use langlands_desk::io::{formal_degree_report, parse_formal_degree_request};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(req) = parse_formal_degree_request(text) {
        if req.q <= 1 << 20 {
            let _ = formal_degree_report(&req);
        }
    }
});
