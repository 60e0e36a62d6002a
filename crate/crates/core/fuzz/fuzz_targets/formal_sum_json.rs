#![no_main]

use libfuzzer_sys::fuzz_target;
use unisym::{FormalSum, Scalar, SkewPlusMatrix};

fuzz_target!(|data: &[u8]| {
    if let Ok(x) = serde_json::from_slice::<FormalSum<SkewPlusMatrix, i64>>(data) {
        let back: FormalSum<SkewPlusMatrix, i64> =
            serde_json::from_str(&serde_json::to_string(&x).unwrap()).expect("round trip");
        assert_eq!(back, x);
    }
    if let Ok(x) = serde_json::from_slice::<FormalSum<SkewPlusMatrix, Scalar>>(data) {
        let back: FormalSum<SkewPlusMatrix, Scalar> =
            serde_json::from_str(&serde_json::to_string(&x).unwrap()).expect("round trip");
        assert_eq!(back, x);
    }
});
