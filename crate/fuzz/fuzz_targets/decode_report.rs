#![no_main]

use libfuzzer_sys::fuzz_target;
use wignerlift::harness::VerificationReport;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = VerificationReport::from_json(text) {
        let _ = r.to_text();
        let json = r.to_json();
        assert_eq!(
            VerificationReport::from_json(&json)
                .expect("re-decode")
                .to_json(),
            json
        );
    }
});
