#![no_main]

use libfuzzer_sys::fuzz_target;
use wignerlift::codec::{decode_oracle, encode_oracle};
use wignerlift::lift::lift;
use wignerlift::projective::{ray_equal, RayMap, RayMapOracle};
use wignerlift::ToleranceConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let tol = ToleranceConfig::default();
    let Ok(oracle) = decode_oracle(text, &tol) else {
        return;
    };
    let again =
        decode_oracle(&encode_oracle(&oracle).expect("encodable"), &tol).expect("re-decode");
    assert_eq!(oracle.domain_dim(), again.domain_dim());
    assert_eq!(oracle.codomain_dim(), again.codomain_dim());
    if let (RayMapOracle::Tabulated { pairs: a, .. }, RayMapOracle::Tabulated { pairs: b, .. }) =
        (&oracle, &again)
    {
        assert_eq!(a.len(), b.len());
        for ((ai, ao), (bi, bo)) in a.iter().zip(b) {
            assert!(ray_equal(ai, bi, &tol).unwrap() && ray_equal(ao, bo, &tol).unwrap());
        }
    }
    // Lifting must return, never panic.
    if oracle.domain_dim() <= 8 && oracle.codomain_dim() <= 8 {
        let _ = lift(&oracle, oracle.domain_dim(), oracle.codomain_dim(), &tol);
    }
});
