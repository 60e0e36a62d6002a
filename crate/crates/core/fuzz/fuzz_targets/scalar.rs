#![no_main]

use libfuzzer_sys::fuzz_target;
use unisym::{Field, Scalar};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = s.parse::<Scalar>() {
        let back: Scalar = x.to_string().parse().expect("display output parses");
        assert_eq!(back, x);
    }
    for field in [Field::Rationals, Field::Prime(7), Field::FunctionField(3)] {
        if let Ok(x) = field.parse_scalar(s) {
            assert_eq!(field.parse_scalar(&x.to_string()).expect("display output parses"), x);
        }
    }
});
