#![no_main]

use libfuzzer_sys::fuzz_target;
use wignerlift::codec::{decode_isomorphism, encode_isomorphism};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = decode_isomorphism(text) {
        let back = decode_isomorphism(&encode_isomorphism(&r)).expect("re-decode");
        assert_eq!(back.iso, r.iso);
        assert_eq!(
            back.unitarity_residual.to_bits(),
            r.unitarity_residual.to_bits()
        );
        assert_eq!(
            back.factorization_residual.to_bits(),
            r.factorization_residual.to_bits()
        );
    }
});
