#![no_main]

use gandy::machine::{parse_config, render_config, Machine};
use gandy::tape::all_strings;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = parse_config(text) else { return };
    // rendering must be re-readable as the same spec
    assert_eq!(parse_config(&render_config(&spec)).as_ref(), Ok(&spec));
    let Ok(machine) = Machine::new(spec) else {
        return;
    };
    for x in all_strings(machine.alphabet(), 4) {
        let ux = machine.apply(&x).unwrap();
        assert!(ux.len() <= x.len());
    }
});
