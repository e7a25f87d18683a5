#![no_main]

use kstab_core::exact::decimal::Decimal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(text) = std::str::from_utf8(data) {
        if let Some(d) = Decimal::parse(text) {
            let again = Decimal::parse(&d.to_plain_string()).expect("plain form reparses");
            assert_eq!(d, again);
            let _ = d.to_sig_string(17);
        }
    }
});
