#![no_main]

use kstab_core::exact::rational::{parse_rat, rat_str};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(r) = parse_rat(text) {
            // canonical text form must round-trip exactly
            let again = parse_rat(&rat_str(&r)).expect("canonical form reparses");
            assert_eq!(r, again);
        }
    }
});
