#![no_main]

use fpcube::presentation::Presentation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = Presentation::parse(s) {
            // whatever parses must survive a round trip
            assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
        }
    }
});
