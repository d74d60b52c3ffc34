#![no_main]

use langlands_desk::algebra::{parse_rational, rat_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_rational(text) {
        assert_eq!(parse_rational(&rat_text(&x)).unwrap(), x);
    }
});
