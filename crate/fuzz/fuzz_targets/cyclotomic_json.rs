#![no_main]

use langlands_desk::CyclotomicNumber;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = CyclotomicNumber::from_json(text) {
        let again = CyclotomicNumber::from_json(&x.to_json().to_string()).unwrap();
        assert_eq!(again, x);
        let _ = x.conjugate(-1);
    }
});
