//! Formal sums, the face differential, and the integral group ring of units.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};
use crate::pfaffian::SkewPlusMatrix;

/// Coefficient ring of a formal sum.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `None` where `add` would panic (overflow, mixed fields).
    fn try_add(&self, other: &Self) -> Option<Self>;
}

impl Coeff for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn add(&self, other: &Self) -> Self {
        self.checked_add(*other).expect("integer coefficient overflow")
    }

    fn neg(&self) -> Self {
        self.checked_neg().expect("integer coefficient overflow")
    }

    fn mul(&self, other: &Self) -> Self {
        self.checked_mul(*other).expect("integer coefficient overflow")
    }

    fn try_add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
}

impl Coeff for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn try_add(&self, other: &Self) -> Option<Self> {
        Scalar::try_add(self, other).ok()
    }
}

/// Generators of a semi-simplicial set: a degree and faces `1..=degree`.
pub trait Simplicial: Clone + Ord {
    fn degree(&self) -> usize;
    /// The `i`-th face, `1 <= i <= degree`.
    fn face(&self, i: usize) -> Self;
}

impl Simplicial for SkewPlusMatrix {
    fn degree(&self) -> usize {
        self.size()
    }

    fn face(&self, i: usize) -> Self {
        self.remove_indices(&[i]).expect("face index in range")
    }
}

/// Finite linear combination of generators; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSum<G: Ord, C> {
    terms: BTreeMap<G, C>,
}

impl<G: Ord + Clone, C: Coeff> Default for FormalSum<G, C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<G: Ord + Clone, C: Coeff> FormalSum<G, C> {
    pub fn new() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }

    pub fn single(g: G, c: C) -> Self {
        let mut s = Self::new();
        s.add_term(g, c);
        s
    }

    pub fn add_term(&mut self, g: G, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&g);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(g, c);
            }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (G, C)>) -> Self {
        let mut s = Self::new();
        for (g, c) in terms {
            s.add_term(g, c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&G, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &G) -> Option<&C> {
        self.terms.get(g)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (g, c) in &other.terms {
            s.add_term(g.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        FormalSum {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, c)| (g.clone(), c.mul(k))))
    }

    /// Apply a map on generators and re-collect.
    pub fn map_generators<H: Ord + Clone>(&self, mut f: impl FnMut(&G) -> H) -> FormalSum<H, C> {
        FormalSum::from_terms(self.terms.iter().map(|(g, c)| (f(g), c.clone())))
    }
}

impl<G: Simplicial, C: Coeff> FormalSum<G, C> {
    /// `d[g] = Σ_{i=1}^{q} (-1)^{i+1} [face_i(g)]`; degree-0 generators map to 0.
    pub fn boundary(&self) -> Self {
        let mut out = Self::new();
        for (g, c) in &self.terms {
            for i in 1..=g.degree() {
                let coeff = if i % 2 == 1 { c.clone() } else { c.neg() };
                out.add_term(g.face(i), coeff);
            }
        }
        out
    }
}

/// Differential of `Z[Skew+_*]` (or with field coefficients).
pub fn diff_skew<C: Coeff>(xi: &FormalSum<SkewPlusMatrix, C>) -> FormalSum<SkewPlusMatrix, C> {
    xi.boundary()
}

#[derive(Serialize, Deserialize)]
struct TermRepr<G, C> {
    coefficient: C,
    generator: G,
}

impl<G, C> Serialize for FormalSum<G, C>
where
    G: Ord + Clone + Serialize,
    C: Coeff + Serialize,
{
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (g, c) in &self.terms {
            seq.serialize_element(&TermRepr {
                coefficient: c,
                generator: g,
            })?;
        }
        seq.end()
    }
}

impl<'de, G, C> Deserialize<'de> for FormalSum<G, C>
where
    G: Ord + Clone + DeserializeOwned,
    C: Coeff + DeserializeOwned,
{
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms: Vec<TermRepr<G, C>> = Vec::deserialize(d)?;
        let mut out = Self::new();
        for t in terms {
            if t.coefficient.is_zero() {
                continue;
            }
            match out.terms.get(&t.generator) {
                Some(existing) => {
                    let sum = existing
                        .try_add(&t.coefficient)
                        .ok_or_else(|| serde::de::Error::custom("coefficients of a repeated generator cannot be added"))?;
                    if sum.is_zero() {
                        out.terms.remove(&t.generator);
                    } else {
                        out.terms.insert(t.generator, sum);
                    }
                }
                None => {
                    out.terms.insert(t.generator, t.coefficient);
                }
            }
        }
        Ok(out)
    }
}

impl<G: Ord + fmt::Display, C: fmt::Display> fmt::Display for FormalSum<G, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (g, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{g}")?;
        }
        Ok(())
    }
}

/// Element of the integral group ring `Z[F*]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupRingElt {
    terms: BTreeMap<Scalar, i64>,
}

impl GroupRingElt {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `⟨a⟩` for a unit `a`.
    pub fn unit(a: &Scalar) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroUnit);
        }
        let mut terms = BTreeMap::new();
        terms.insert(a.clone(), 1);
        Ok(GroupRingElt { terms })
    }

    pub fn one(field: Field) -> Self {
        Self::unit(&field.one()).expect("1 is a unit")
    }

    /// `⟨⟨a⟩⟩ = 1 - ⟨a⟩`.
    pub fn double_bracket(a: &Scalar) -> Result<Self> {
        Ok(Self::one(a.field()).sub(&Self::unit(a)?))
    }

    pub fn add_term(&mut self, a: Scalar, n: i64) {
        assert!(!a.is_zero(), "group ring keys are units");
        if n == 0 {
            return;
        }
        let e = self.terms.entry(a).or_insert(0);
        *e = e.checked_add(n).expect("group ring coefficient overflow");
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (a, n) in &other.terms {
            s.add_term(a.clone(), *n);
        }
        s
    }

    pub fn neg(&self) -> Self {
        GroupRingElt {
            terms: self.terms.iter().map(|(a, n)| (a.clone(), -n)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Convolution: `⟨a⟩·⟨b⟩ = ⟨ab⟩`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut s = Self::zero();
        for (a, n) in &self.terms {
            for (b, m) in &other.terms {
                s.add_term(a * b, n.checked_mul(*m).expect("group ring coefficient overflow"));
            }
        }
        s
    }

    /// The ring map `⟨a⟩ ↦ 1`.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn coefficient(&self, a: &Scalar) -> i64 {
        self.terms.get(a).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, &i64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, n)) in self.terms.iter().enumerate() {
            let sign = if *n < 0 { "-" } else { "+" };
            if k > 0 {
                write!(f, " {sign} ")?;
            } else if *n < 0 {
                write!(f, "-")?;
            }
            if n.abs() != 1 {
                write!(f, "{}", n.abs())?;
            }
            write!(f, "<{a}>")?;
        }
        Ok(())
    }
}

/// Largest `m` accepted by [`build_sm`].
pub const MAX_SM: usize = 24;

/// Partial sums `a_I` for all nonempty `I`, indexed by bitmask.
pub fn partial_sums(a: &[Scalar]) -> Vec<Scalar> {
    let m = a.len();
    let field = a.first().map_or(Field::Rationals, Scalar::field);
    let mut sums = vec![field.zero(); 1 << m];
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + &a[low];
    }
    sums
}

/// Units `a_1..a_m` with every partial sum `a_I` a unit, and
/// `s_m = -Σ_{∅≠I} (-1)^{|I|} ⟨a_I⟩`.
///
/// Tries `a_i = 10^{i-1}` over `Q` and `a_i = t^{i-1}` over `F_p(t)`, whose
/// partial sums are visibly nonzero, and falls back to random search.
pub fn build_sm<R: Rng + ?Sized>(m: usize, field: Field, rng: &mut R, max_attempts: usize) -> Result<(Vec<Scalar>, GroupRingElt)> {
    if m == 0 || m > MAX_SM {
        return Err(Error::BadRange(format!("m = {m} outside 1..={MAX_SM}")));
    }
    let good = |a: &[Scalar]| partial_sums(a)[1..].iter().all(|x| !x.is_zero());
    let candidate: Option<Vec<Scalar>> = match field {
        Field::Rationals => {
            let ten = field.from_i64(10);
            Some((0..m).map(|i| ten.pow(i as i32).expect("nonnegative power")).collect())
        }
        Field::FunctionField(_) => {
            let t = field.variable().expect("function field");
            Some((0..m).map(|i| t.pow(i as i32).expect("nonnegative power")).collect())
        }
        Field::Prime(_) => None,
    };
    let a = match candidate.filter(|a| good(a)) {
        Some(a) => a,
        None => {
            let mut found = None;
            for _ in 0..max_attempts {
                let a: Vec<Scalar> = (0..m).map(|_| field.sample_nonzero(rng, 1000)).collect();
                if good(&a) {
                    found = Some(a);
                    break;
                }
            }
            found.ok_or(Error::SamplerExhausted { attempts: max_attempts })?
        }
    };
    let sums = partial_sums(&a);
    let mut s = GroupRingElt::zero();
    for (mask, x) in sums.iter().enumerate().skip(1) {
        // -(-1)^{|I|}
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        s.add_term(x.clone(), sign);
    }
    Ok((a, s))
}
