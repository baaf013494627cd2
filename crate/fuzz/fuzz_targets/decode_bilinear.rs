#![no_main]

use libfuzzer_sys::fuzz_target;
use wignerlift::codec::{decode_bilinear, encode_bilinear};
use wignerlift::tensor::{construct_isomorphism_with, CompositionOracle};
use wignerlift::ToleranceConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(m) = decode_bilinear(text) else {
        return;
    };
    assert_eq!(decode_bilinear(&encode_bilinear(&m)).expect("re-decode"), m);
    let (a, b, c) = m.dims();
    if a * b <= 16 && c <= 16 {
        let _ = construct_isomorphism_with(&m, 4, 0, &ToleranceConfig::default());
    }
});
