//! Exact scalars over the three supported coefficient fields.
//!
//! * `Q`, backed by arbitrary-precision fractions,
//! * `F_p`, residues modulo a prime,
//! * `F_p(t)`, reduced ratios of polynomials over `F_p` with monic denominator.
//!
//! `Q` and `F_p(t)` are the infinite fields; anything that samples generic
//! points (good position, Skew+ extensions, unit searches) needs one of them to
//! be guaranteed to terminate.
//!
//! Literal syntax, shared by every file format and CLI argument:
//!
//! ```text
//! 3   -7/2            rationals
//! 4 mod 7             F_7
//! (1+t^2)/(2+t) over F_3[t]
//! ```

pub(crate) mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
pub use poly::is_prime;

/// Largest polynomial degree accepted by the literal parser.
pub const MAX_PARSED_DEGREE: usize = 4096;

/// One of the supported exact fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
    FunctionField(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn function_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::FunctionField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Rationals => 0,
            Field::Prime(p) | Field::FunctionField(p) => p,
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, Field::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => Scalar::Prime {
                p,
                value: reduce_bigint(n, p),
            },
            Field::FunctionField(p) => Scalar::Function(RatFn::constant(reduce_bigint(n, p), p)),
        }
    }

    /// n/d mapped into the field; fails if d vanishes there.
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<Scalar> {
        self.from_i64(n).checked_div(&self.from_i64(d))
    }

    /// The transcendental `t` of `F_p(t)`.
    pub fn variable(&self) -> Option<Scalar> {
        match *self {
            Field::FunctionField(p) => Some(Scalar::Function(RatFn {
                p,
                num: poly::trim(vec![0, 1 % p]),
                den: vec![1],
            })),
            _ => None,
        }
    }

    /// Parse a literal and coerce it into this field. Integer and fraction
    /// literals are accepted for every field; explicit `mod p` / `over F_p[t]`
    /// literals must name this field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let raw: Scalar = s.parse()?;
        self.coerce(raw)
    }

    pub fn coerce(&self, x: Scalar) -> Result<Scalar> {
        match (&x, self) {
            (Scalar::Rational(r), _) if *self != Field::Rationals => {
                self.from_bigint(r.numer()).checked_div(&self.from_bigint(r.denom()))
            }
            _ if x.field() == *self => Ok(x),
            _ => Err(Error::FieldMismatch(x.field(), *self)),
        }
    }

    /// Deterministic draw from a pool that grows with `size_bound`.
    ///
    /// Rationals: numerator in `[-b, b]`, denominator in `[1, b]`.
    /// `F_p`: uniform residue. `F_p(t)`: numerator of degree at most
    /// `bitlen(b)` and monic denominator of degree at most `bitlen(b) / 2`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, size_bound: u64) -> Scalar {
        let b = size_bound.max(1);
        match *self {
            Field::Rationals => {
                let b = b.min(i64::MAX as u64) as i64;
                let num = rng.gen_range(-b..=b);
                let den = rng.gen_range(1..=b);
                Scalar::Rational(BigRational::new(num.into(), den.into()))
            }
            Field::Prime(p) => Scalar::Prime {
                p,
                value: rng.gen_range(0..p),
            },
            Field::FunctionField(p) => {
                let deg = (64 - b.leading_zeros()) as usize;
                let num: Vec<u64> = (0..=rng.gen_range(0..=deg))
                    .map(|_| rng.gen_range(0..p))
                    .collect();
                let den_deg = rng.gen_range(0..=deg / 2);
                let mut den: Vec<u64> = (0..den_deg).map(|_| rng.gen_range(0..p)).collect();
                den.push(1);
                Scalar::Function(RatFn::new(p, num, den).expect("monic denominator"))
            }
        }
    }

    /// Like [`Field::sample`] but from the base ring: integers over `Q`,
    /// polynomials over `F_p(t)`. Products of these stay much shorter.
    pub fn sample_integral<R: Rng + ?Sized>(&self, rng: &mut R, size_bound: u64) -> Scalar {
        let b = size_bound.max(1);
        match *self {
            Field::Rationals => {
                let b = b.min(i64::MAX as u64) as i64;
                Scalar::Rational(BigRational::from_integer(rng.gen_range(-b..=b).into()))
            }
            Field::Prime(_) => self.sample(rng, size_bound),
            Field::FunctionField(p) => {
                let deg = (64 - b.leading_zeros()) as usize;
                let num: Vec<u64> = (0..=rng.gen_range(0..=deg)).map(|_| rng.gen_range(0..p)).collect();
                Scalar::Function(RatFn::new(p, num, vec![1]).expect("monic denominator"))
            }
        }
    }

    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, size_bound: u64) -> Scalar {
        loop {
            let x = self.sample(rng, size_bound);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

/// Free-function form of [`Field::sample`].
pub fn sample_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R, size_bound: u64) -> Scalar {
    field.sample(rng, size_bound)
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
            Field::FunctionField(p) => write!(f, "fpt:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_p = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad characteristic {t:?}: {e}")))
        };
        if s == "q" || s == "Q" {
            Ok(Field::Rationals)
        } else if let Some(rest) = s.strip_prefix("fpt:") {
            Field::function_field(parse_p(rest)?)
        } else if let Some(rest) = s.strip_prefix("fp:") {
            Field::prime(parse_p(rest)?)
        } else {
            Err(Error::Parse(format!("unknown field {s:?} (expected q, fp:P or fpt:P)")))
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reduced element of `F_p(t)`: `gcd(num, den) = 1`, `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    p: u64,
    num: Vec<u64>,
    den: Vec<u64>,
}

impl RatFn {
    pub fn new(p: u64, num: Vec<u64>, den: Vec<u64>) -> Result<Self> {
        let num = poly::trim(num.into_iter().map(|c| c % p).collect());
        let den = poly::trim(den.into_iter().map(|c| c % p).collect());
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(p, num, den))
    }

    fn constant(c: u64, p: u64) -> Self {
        RatFn {
            p,
            num: poly::trim(vec![c % p]),
            den: vec![1],
        }
    }

    fn reduced(p: u64, num: Vec<u64>, den: Vec<u64>) -> Self {
        if num.is_empty() {
            return RatFn {
                p,
                num,
                den: vec![1],
            };
        }
        let g = poly::gcd(&num, &den, p);
        let (mut num, _) = poly::divrem(&num, &g, p);
        let (mut den, _) = poly::divrem(&den, &g, p);
        let lead = *den.last().expect("nonzero denominator");
        if lead != 1 {
            let li = poly::inv_mod(lead, p);
            num = poly::scale(&num, li, p);
            den = poly::scale(&den, li, p);
        }
        RatFn { p, num, den }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn numerator(&self) -> &[u64] {
        &self.num
    }

    pub fn denominator(&self) -> &[u64] {
        &self.den
    }
}

/// An exact field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Prime { p: u64, value: u64 },
    Function(RatFn),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// Checked arithmetic entry point; binary operations need `y`.
pub fn arith(op: ArithOp, x: &Scalar, y: Option<&Scalar>) -> Result<Scalar> {
    let rhs = || y.ok_or_else(|| Error::ShapeMismatch(format!("{op:?} needs two operands")));
    match op {
        ArithOp::Add => x.try_add(rhs()?),
        ArithOp::Sub => x.try_sub(rhs()?),
        ArithOp::Mul => x.try_mul(rhs()?),
        ArithOp::Div => x.checked_div(rhs()?),
        ArithOp::Neg => Ok(-x),
        ArithOp::Inv => x.inv(),
    }
}

impl Scalar {
    /// Integer in `Q`.
    pub fn int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(n.into()))
    }

    /// Fraction in `Q`; panics on a zero denominator.
    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Prime { p, .. } => Field::Prime(*p),
            Scalar::Function(f) => Field::FunctionField(f.p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
            Scalar::Function(f) => f.num.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
            Scalar::Function(f) => f.num == [1] && f.den == [1],
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    fn check_same(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { p, value } => Scalar::Prime {
                p: *p,
                value: poly::inv_mod(*value, *p),
            },
            Scalar::Function(f) => Scalar::Function(RatFn::reduced(f.p, f.den.clone(), f.num.clone())),
        })
    }

    /// Integer power; negative exponents invert (and fail on zero).
    pub fn pow(&self, e: i32) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field().one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul_unchecked(&base);
        }
        Ok(acc)
    }

    /// Multiply by an integer.
    pub fn scale_int(&self, n: i64) -> Scalar {
        self.mul_unchecked(&self.field().from_i64(n))
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Prime { p, value } => Scalar::Prime {
                p: *p,
                value: poly::sub_mod(0, *value, *p),
            },
            Scalar::Function(f) => Scalar::Function(RatFn {
                p: f.p,
                num: poly::neg(&f.num, f.p),
                den: f.den.clone(),
            }),
        }
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { p, value: a }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                p: *p,
                value: poly::add_mod(*a, *b, *p),
            },
            (Scalar::Function(a), Scalar::Function(b)) => {
                let p = a.p;
                if a.den == b.den {
                    return Scalar::Function(RatFn::reduced(p, poly::add(&a.num, &b.num, p), a.den.clone()));
                }
                let num = poly::add(&poly::mul(&a.num, &b.den, p), &poly::mul(&b.num, &a.den, p), p);
                let den = poly::mul(&a.den, &b.den, p);
                Scalar::Function(RatFn::reduced(p, num, den))
            }
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { p, value: a }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                p: *p,
                value: poly::mul_mod(*a, *b, *p),
            },
            (Scalar::Function(a), Scalar::Function(b)) => {
                let p = a.p;
                let num = poly::mul(&a.num, &b.num, p);
                let den = poly::mul(&a.den, &b.den, p);
                Scalar::Function(RatFn::reduced(p, num, den))
            }
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    /// Evaluate an `F_p(t)` element at `t = t0`, landing in `F_p`.
    /// Returns `None` when the denominator vanishes at `t0`, or when the
    /// scalar is not a function-field element.
    pub fn specialize(&self, t0: u64) -> Option<Scalar> {
        match self {
            Scalar::Function(f) => {
                let d = poly::eval(&f.den, t0 % f.p, f.p);
                if d == 0 {
                    return None;
                }
                let n = poly::eval(&f.num, t0 % f.p, f.p);
                Some(Scalar::Prime {
                    p: f.p,
                    value: poly::mul_mod(n, poly::inv_mod(d, f.p), f.p),
                })
            }
            _ => None,
        }
    }

    /// Re-canonicalize from the stored parts. A no-op on any value built by
    /// this module.
    pub fn canonicalized(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(BigRational::new(r.numer().clone(), r.denom().clone())),
            Scalar::Prime { p, value } => Scalar::Prime {
                p: *p,
                value: value % p,
            },
            Scalar::Function(f) => Scalar::Function(RatFn::reduced(f.p, f.num.clone(), f.den.clone())),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_unchecked(b));
forward_binop!(Sub, sub, |a, b| a.add_unchecked(&b.neg_ref()));
forward_binop!(Mul, mul, |a, b| a.mul_unchecked(b));
forward_binop!(Div, div, |a, b| a
    .checked_div(b)
    .unwrap_or_else(|e| panic!("{e}")));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn fmt_poly(c: &[u64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, &coef) in c.iter().enumerate() {
        if coef == 0 {
            continue;
        }
        if !first {
            write!(f, "+")?;
        }
        first = false;
        match (k, coef) {
            (0, _) => write!(f, "{coef}")?,
            (1, 1) => write!(f, "t")?,
            (1, _) => write!(f, "{coef}*t")?,
            (_, 1) => write!(f, "t^{k}")?,
            _ => write!(f, "{coef}*t^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { p, value } => write!(f, "{value} mod {p}"),
            Scalar::Function(rf) => {
                write!(f, "(")?;
                fmt_poly(&rf.num, f)?;
                write!(f, ")/(")?;
                fmt_poly(&rf.den, f)?;
                write!(f, ") over F_{}[t]", rf.p)
            }
        }
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad integer {s:?}")));
    }
    t.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

fn parse_poly(s: &str, p: u64) -> Result<Vec<u64>> {
    let s = s.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(s);
    if s.trim().is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<u64> = Vec::new();
    for term in s.split('+') {
        let term = term.trim();
        let (coef, deg) = if let Some(pos) = term.find('t') {
            let (c, rest) = term.split_at(pos);
            let c = c.trim().trim_end_matches('*').trim();
            let coef = if c.is_empty() { BigInt::one() } else { parse_bigint(c)? };
            let rest = rest[1..].trim();
            let deg = if rest.is_empty() {
                1
            } else {
                let e = rest
                    .strip_prefix('^')
                    .ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?;
                e.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
            };
            (coef, deg)
        } else {
            (parse_bigint(term)?, 0)
        };
        if deg > MAX_PARSED_DEGREE {
            return Err(Error::Parse(format!("degree {deg} exceeds {MAX_PARSED_DEGREE}")));
        }
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0);
        }
        coeffs[deg] = poly::add_mod(coeffs[deg], reduce_bigint(&coef, p), p);
    }
    Ok(poly::trim(coeffs))
}

fn split_fraction(s: &str) -> Result<(&str, Option<&str>)> {
    // top-level '/' outside parentheses
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Ok((&s[..i], Some(&s[i + 1..]))),
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
        }
    }
    Ok((s, None))
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((lhs, rhs)) = s.split_once(" over ") {
            let rhs = rhs.trim();
            let p = rhs
                .strip_prefix("F_")
                .and_then(|r| r.strip_suffix("[t]"))
                .ok_or_else(|| Error::Parse(format!("expected F_p[t], got {rhs:?}")))?;
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad characteristic {p:?}")))?;
            let field = Field::function_field(p)?;
            let (num, den) = split_fraction(lhs.trim())?;
            let num = parse_poly(num, p)?;
            let den = match den {
                Some(d) => parse_poly(d, p)?,
                None => vec![1],
            };
            debug_assert_eq!(field, Field::FunctionField(p));
            return Ok(Scalar::Function(RatFn::new(p, num, den)?));
        }
        if let Some((k, p)) = s.split_once(" mod ") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus {p:?}")))?;
            let field = Field::prime(p)?;
            return Ok(field.from_bigint(&parse_bigint(k)?));
        }
        let (num, den) = split_fraction(s)?;
        let num = parse_bigint(num)?;
        let den = match den {
            Some(d) => parse_bigint(d)?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts a literal string, or a bare JSON integer (read as a rational).
impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Int(i64),
            Str(String),
        }
        match Lit::deserialize(d)? {
            Lit::Int(n) => Ok(Scalar::int(n)),
            Lit::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl PartialEq<i64> for Scalar {
    fn eq(&self, other: &i64) -> bool {
        *self == self.field().from_i64(*other)
    }
}

/// Sign of a rational; `None` for the other fields.
pub fn rational_sign(x: &Scalar) -> Option<Ordering> {
    x.as_rational().map(|r| {
        if r.is_negative() {
            Ordering::Less
        } else if r.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fraction_add() {
        assert_eq!(Scalar::ratio(1, 2) + Scalar::ratio(1, 3), Scalar::ratio(5, 6));
        assert_eq!(Scalar::ratio(4, -6).to_string(), "-2/3");
    }

    #[test]
    fn function_field_inverse() {
        let f = Field::function_field(2).unwrap();
        let t = f.variable().unwrap();
        let tp1 = &t + &f.one();
        let inv = tp1.inv().unwrap();
        assert_eq!(inv.to_string(), "(1)/(1+t) over F_2[t]");
        assert!((&tp1 * &inv).is_one());
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        assert!(matches!(Scalar::int(0).inv(), Err(Error::DivisionByZero)));
        let f5 = Field::prime(5).unwrap();
        assert!(matches!(
            Scalar::int(1).try_add(&f5.one()),
            Err(Error::FieldMismatch(..))
        ));
        assert!(matches!(Field::prime(6), Err(Error::NotPrime(6))));
        assert!(arith(ArithOp::Add, &Scalar::int(1), None).is_err());
        assert_eq!(arith(ArithOp::Inv, &Scalar::int(4), None).unwrap(), Scalar::ratio(1, 4));
    }

    #[test]
    fn literals_parse() {
        assert_eq!("7".parse::<Scalar>().unwrap(), Scalar::int(7));
        assert_eq!("-3/9".parse::<Scalar>().unwrap(), Scalar::ratio(-1, 3));
        let x: Scalar = "9 mod 7".parse().unwrap();
        assert_eq!(x, Scalar::Prime { p: 7, value: 2 });
        let y: Scalar = "(1+t^2)/(2+2*t) over F_3[t]".parse().unwrap();
        // (1+t^2)/(2(1+t)) = (2+2t^2)/(1+t)   (2^-1 = 2 mod 3)
        assert_eq!(y.to_string(), "(2+2*t^2)/(1+t) over F_3[t]");
        assert_eq!(y.to_string().parse::<Scalar>().unwrap(), y);
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("3 mod 8".parse::<Scalar>().is_err());
        assert!("(1)/(0) over F_2[t]".parse::<Scalar>().is_err());
        assert!("t^99999999 over F_2[t]".parse::<Scalar>().is_err());
    }

    #[test]
    fn coercion() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.parse_scalar("1/2").unwrap(), f7.from_i64(4));
        assert!(f7.parse_scalar("1/7").is_err());
        assert!(f7.parse_scalar("1 mod 5").is_err());
        let ft = Field::function_field(3).unwrap();
        assert_eq!(ft.parse_scalar("2").unwrap(), ft.from_i64(-1));
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let mut r1 = ChaCha8Rng::seed_from_u64(1);
        let mut r2 = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = sample_scalar(Field::Rationals, &mut r1, 10);
            let b = sample_scalar(Field::Rationals, &mut r2, 10);
            assert_eq!(a, b);
            let r = a.as_rational().unwrap();
            // reduction only shrinks numerator and denominator
            assert!(r.numer().abs() <= BigInt::from(10));
            assert!(r.denom() <= &BigInt::from(10));
        }
        let f5 = Field::prime(5).unwrap();
        for _ in 0..50 {
            match f5.sample(&mut r1, 1000) {
                Scalar::Prime { p: 5, value } => assert!(value < 5),
                other => panic!("unexpected {other}"),
            }
        }
    }

    #[test]
    fn specialization() {
        let f = Field::function_field(5).unwrap();
        let x: Scalar = "(1+t)/(2+t) over F_5[t]".parse().unwrap();
        assert_eq!(x.specialize(3), None);
        assert_eq!(x.specialize(1).unwrap(), Scalar::Prime { p: 5, value: 4 }); // 2/3 = 4
        assert!(f.variable().unwrap().specialize(0).unwrap().is_zero());
    }
}
