#![no_main]

use langlands_desk::EisensteinLocal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = EisensteinLocal::from_json(text) {
        let again = EisensteinLocal::from_json(&x.to_json().to_string()).unwrap();
        assert_eq!(again, x);
        if x.is_unit() {
            let inv = x.inv().unwrap();
            assert_eq!(&x * &inv, x.one_like());
        }
    }
});
