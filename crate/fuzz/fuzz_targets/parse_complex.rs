#![no_main]

use fpcube::cube::{parse_complex, to_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(x) = parse_complex(s) {
            let again = parse_complex(&to_text(&x)).unwrap();
            assert_eq!(to_text(&again), to_text(&x));
        }
    }
});
