#![no_main]

use gandy::fincat::{parse_presentation, validate_category};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(p) = parse_presentation(text) else {
        return;
    };
    let _ = validate_category(&p);
    let again = parse_presentation(&p.to_text()).expect("rendered text parses");
    assert_eq!(again, p);
});
