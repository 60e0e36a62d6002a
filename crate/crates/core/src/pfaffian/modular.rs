//! Rational Pfaffians by elimination modulo word-size primes.
//!
//! Rows and columns are scaled by `D = diag(d_1, ..., d_q)` with `d_i` the
//! lcm of the denominators in row `i`, so `M = D A D` is integral and
//! `Pf(A) = Pf(M) / det D`. `Pf(M)` is recovered from its residues by
//! Chinese remaindering once the product of the primes exceeds twice the
//! Hadamard bound `|Pf(M)|² = |det M| <= Π ||row_i||`.

use std::sync::Mutex;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Primes just below `2^62`, found lazily and kept for later calls.
static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());
const PRIME_TOP: u64 = 1 << 62;
/// Each prime contributes at least this many bits to the modulus.
const BITS_PER_PRIME: u64 = 61;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all `u64`.
fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn primes(count: usize) -> Vec<u64> {
    let mut cache = PRIMES.lock().unwrap_or_else(|e| e.into_inner());
    let mut next = cache.last().map_or(PRIME_TOP - 1, |&p| p - 2);
    while cache.len() < count {
        if is_prime_u64(next) {
            cache.push(next);
        }
        next -= 2;
    }
    cache[..count].to_vec()
}

fn residue(x: &BigInt, p: u64) -> u64 {
    let r = (x.magnitude() % p).to_u64().expect("below p");
    if x.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

/// Pfaffian of a skew matrix over `F_p`, given as a dense row-major
/// `q × q` array of residues. Same pivoting as the field elimination.
fn pf_mod_p(mut a: Vec<u64>, q: usize, p: u64) -> u64 {
    let neg = |x: u64| if x == 0 { 0 } else { p - x };
    let mut result = 1;
    for k in (0..q).step_by(2) {
        let Some(piv) = (k + 1..q).rev().find(|&j| a[k * q + j] != 0) else {
            return 0;
        };
        if piv != k + 1 {
            for j in 0..q {
                a.swap(piv * q + j, (k + 1) * q + j);
            }
            for i in 0..q {
                a.swap(i * q + piv, i * q + k + 1);
            }
            result = neg(result);
        }
        let pivot = a[k * q + k + 1];
        result = mul_mod(result, pivot, p);
        let pinv = pow_mod(pivot, p - 2, p);
        for i in k + 2..q {
            // a_ik and a_i,k+1 scaled by the inverse pivot
            let x = mul_mod(neg(a[k * q + i]), pinv, p);
            let y = mul_mod(neg(a[(k + 1) * q + i]), pinv, p);
            if x == 0 && y == 0 {
                continue;
            }
            for j in i + 1..q {
                let t = (mul_mod(x, a[(k + 1) * q + j], p) + p - mul_mod(y, a[k * q + j], p)) % p;
                let v = (a[i * q + j] + t) % p;
                a[i * q + j] = v;
                a[j * q + i] = neg(v);
            }
        }
    }
    result
}

/// `Pf` of the `q × q` skew matrix with (0-based, `i < j`) entries `upper(i, j)`.
pub(super) fn pf_rational(q: usize, upper: impl Fn(usize, usize) -> BigRational) -> BigRational {
    if q == 0 {
        return BigRational::one();
    }
    let entries: Vec<Vec<BigRational>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => upper(i, j),
                    std::cmp::Ordering::Equal => BigRational::zero(),
                    std::cmp::Ordering::Greater => -upper(j, i),
                })
                .collect()
        })
        .collect();
    let d: Vec<BigInt> = entries
        .iter()
        .map(|row| row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom())))
        .collect();
    let m: Vec<Vec<BigInt>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| entries[i][j].numer() * (&d[i] / entries[i][j].denom()) * &d[j])
                .collect()
        })
        .collect();

    // log2 ||row_i|| <= max bits in the row + log2(q) / 2; the bit length
    // of q over-covers the second term
    let log_q = (u64::BITS - (q as u64).leading_zeros()) as u64;
    let row_bits: u64 = m
        .iter()
        .map(|row| row.iter().map(|x| x.bits()).max().unwrap_or(0) + log_q)
        .sum();
    let bound_bits = row_bits / 2 + 2;
    let count = (bound_bits / BITS_PER_PRIME + 1) as usize;

    let mut x = BigInt::zero();
    let mut modulus = BigUint::one();
    for p in primes(count) {
        let a: Vec<u64> = m.iter().flat_map(|row| row.iter().map(|e| residue(e, p))).collect();
        let r = pf_mod_p(a, q, p);
        // Garner step: x += modulus * ((r - x) / modulus mod p)
        let xr = residue(&x, p);
        let mr = (&modulus % p).to_u64().expect("below p");
        let t = mul_mod((r + p - xr) % p, pow_mod(mr, p - 2, p), p);
        x += BigInt::from(&modulus * t);
        modulus *= p;
    }
    let modulus = BigInt::from(modulus);
    if &x * 2 > modulus {
        x -= &modulus;
    }
    let det_d = d.iter().fold(BigInt::one(), |acc, di| acc * di);
    BigRational::new(x, det_d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin() {
        for p in [2, 3, 37, 41, 1_000_000_007, (1 << 61) - 1] {
            assert!(is_prime_u64(p), "{p}");
        }
        // 3215031751 fools bases 2, 3, 5 and 7
        for c in [0, 1, 561, 3_215_031_751, (1 << 62) - 1, 1_000_000_007 * 998_244_353] {
            assert!(!is_prime_u64(c), "{c}");
        }
    }

    #[test]
    fn primes_are_cached_and_distinct() {
        let a = primes(5);
        let b = primes(3);
        assert_eq!(&a[..3], &b[..]);
        assert!(a.windows(2).all(|w| w[0] > w[1]));
        assert!(a.iter().all(|&p| p > 1 << 61 && is_prime_u64(p)));
    }

    #[test]
    fn residues_of_negatives() {
        assert_eq!(residue(&BigInt::from(-3), 7), 4);
        assert_eq!(residue(&BigInt::from(-14), 7), 0);
        assert_eq!(residue(&BigInt::from(10), 7), 3);
    }

    #[test]
    fn small_cases() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(pf_rational(2, |_, _| r(-3, 4)), r(-3, 4));
        // Pf = a12 a34 - a13 a24 + a14 a23
        let vals = [r(1, 2), r(2, 3), r(-5, 7), r(3, 1), r(0, 1), r(9, 11)];
        let at = |i: usize, j: usize| {
            let idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].iter().position(|&x| x == (i, j)).unwrap();
            vals[idx].clone()
        };
        let expect = &vals[0] * &vals[5] - &vals[1] * &vals[4] + &vals[2] * &vals[3];
        assert_eq!(pf_rational(4, at), expect);
        assert!(pf_rational(4, |i, _| if i == 0 { r(0, 1) } else { r(1, 1) }).is_zero());
    }
}
