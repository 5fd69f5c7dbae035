#![no_main]

use gandy::tape::{parse_tape, Alphabet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let alphabet = Alphabet::binary();
    if let Ok(x) = parse_tape(&alphabet, text) {
        assert_eq!(parse_tape(&alphabet, &x.to_string()).as_ref(), Ok(&x));
    }
});
