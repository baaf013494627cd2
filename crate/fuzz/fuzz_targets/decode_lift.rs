#![no_main]

use libfuzzer_sys::fuzz_target;
use wignerlift::codec::{decode_lift, encode_lift};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(l) = decode_lift(text) {
        assert_eq!(decode_lift(&encode_lift(&l)).expect("re-decode"), l);
    }
});
