#![no_main]

use gandy::colimit::{glue, parse_diagram};
use gandy::tape::Alphabet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(d) = parse_diagram(&Alphabet::binary(), text) else {
        return;
    };
    if let Ok(r) = glue(&d) {
        for (id, s) in d.nodes() {
            let leg = &r.legs[id];
            assert_eq!(leg.source(), s);
            assert_eq!(leg.target(), &r.value);
        }
        for e in d
            .edges()
            .iter()
            .filter(|e| !d.node(&e.from).unwrap().is_empty())
        {
            assert_eq!(r.legs[&e.from].offset(), r.legs[&e.to].offset() + e.offset);
        }
    }
});
