//! Replays the fuzz corpus seeds through the round-trip checks of the fuzz
//! targets, so the seeds stay meaningful on a stable toolchain.

use std::fs;
use std::path::PathBuf;

use unisym::{Field, FormalSum, Matrix, Scalar, SkewMatrix, SkewPlusMatrix};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with("seed-"))
        .map(|p| (p.display().to_string(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn scalar_seeds_round_trip() {
    let mut parsed = 0;
    for (name, data) in seeds("scalar") {
        let s = String::from_utf8(data).unwrap();
        if let Ok(x) = s.parse::<Scalar>() {
            parsed += 1;
            assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x, "{name}");
        }
        for field in [Field::Rationals, Field::Prime(7), Field::FunctionField(3)] {
            if let Ok(x) = field.parse_scalar(&s) {
                assert_eq!(field.parse_scalar(&x.to_string()).unwrap(), x, "{name}");
            }
        }
    }
    assert!(parsed >= 5);
}

#[test]
fn matrix_seeds_round_trip() {
    let mut parsed = 0;
    for (name, data) in seeds("matrix_json") {
        let s = String::from_utf8(data).unwrap();
        if let Ok(m) = Matrix::from_json(&s) {
            parsed += 1;
            assert_eq!(Matrix::from_json(&m.to_json()).unwrap(), m, "{name}");
        }
        if let Ok(a) = SkewMatrix::from_json(&s) {
            assert_eq!(SkewMatrix::from_json(&a.to_json()).unwrap(), a, "{name}");
        }
        if let Ok(a) = SkewPlusMatrix::from_json(&s) {
            assert_eq!(SkewPlusMatrix::from_json(&a.to_json()).unwrap(), a, "{name}");
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn formal_sum_seeds_round_trip() {
    let mut parsed = 0;
    for (name, data) in seeds("formal_sum_json") {
        if let Ok(x) = serde_json::from_slice::<FormalSum<SkewPlusMatrix, i64>>(&data) {
            parsed += 1;
            let back: FormalSum<SkewPlusMatrix, i64> = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
            assert_eq!(back, x, "{name}");
        }
        if let Ok(x) = serde_json::from_slice::<FormalSum<SkewPlusMatrix, Scalar>>(&data) {
            let back: FormalSum<SkewPlusMatrix, Scalar> =
                serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
            assert_eq!(back, x, "{name}");
        }
    }
    assert!(parsed >= 1);
}
