#![no_main]

use fpcube::wallspace::parse_wallspace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(w) = parse_wallspace(s) {
            assert_eq!(parse_wallspace(&w.to_text()).unwrap(), w);
        }
    }
});
