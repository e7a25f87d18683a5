#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // keep exhaustive vertex enumeration off astronomically large inputs
    if data.len() > 1 << 16 {
        return;
    }
    if let Ok(text) = std::str::from_utf8(data) {
        // must never panic; errors are fine
        let _ = kstab_core::scenario::load_str(text);
    }
});
