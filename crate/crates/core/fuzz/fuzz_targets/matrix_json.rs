#![no_main]

use libfuzzer_sys::fuzz_target;
use unisym::{Matrix, SkewMatrix, SkewPlusMatrix};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = Matrix::from_json(s) {
        assert_eq!(Matrix::from_json(&m.to_json()).expect("round trip"), m);
    }
    if let Ok(a) = SkewMatrix::from_json(s) {
        assert_eq!(SkewMatrix::from_json(&a.to_json()).expect("round trip"), a);
    }
    if let Ok(a) = SkewPlusMatrix::from_json(s) {
        assert_eq!(SkewPlusMatrix::from_json(&a.to_json()).expect("round trip"), a);
    }
});
