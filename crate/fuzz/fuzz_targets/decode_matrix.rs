#![no_main]

use libfuzzer_sys::fuzz_target;
use wignerlift::codec::{decode_matrix, decode_vector, encode_matrix, encode_vector};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = decode_matrix(text) {
        let encoded = encode_matrix(&m);
        assert_eq!(decode_matrix(&encoded).expect("re-decode"), m);
    }
    if let Ok(v) = decode_vector(text) {
        assert_eq!(decode_vector(&encode_vector(&v)).expect("re-decode"), v);
    }
});
