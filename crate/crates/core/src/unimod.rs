//! Non-degenerate unimodular sequences, good-position sampling, the `A * v`
//! extension of Skew+ matrices, and contracting homotopies for both
//! complexes.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chains::{Coeff, FormalSum, Simplicial};
use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};
use crate::matrix::Vector;
use crate::pfaffian::{SkewMatrix, SkewPlusMatrix};
use crate::symplectic::{SymplecticSpace, VectorSeq};

/// Longest sequence accepted by [`NonDegSeq::new`].
pub const MAX_SEQ_LEN: usize = 16;
/// Initial coordinate bound of the samplers.
pub const POOL_START: u64 = 8;
/// Attempts between doublings of the coordinate bound.
pub const POOL_BATCH: usize = 16;

/// Brute-force membership in `U_q(F^{2n})`: every subsequence of length at
/// most `min(q, 2n)` is independent and every even one has invertible Gram
/// matrix.
pub fn is_nondeg_unimodular(v: &VectorSeq, space: &SymplecticSpace) -> bool {
    if v.field() != space.field() || v.dim() != space.dim() {
        return false;
    }
    let q = v.len();
    let r = q.min(space.dim());
    let Ok(g) = space.gram(v) else {
        return false;
    };
    if !g.even_minors_invertible(r) {
        return false;
    }
    if q <= space.dim() {
        v.is_independent()
    } else {
        (1..=q).combinations(r).all(|idx| v.select(&idx).is_independent())
    }
}

/// A certified element of `U_q(F^{2n})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonDegSeq {
    space: SymplecticSpace,
    vectors: VectorSeq,
}

impl NonDegSeq {
    pub fn new(space: SymplecticSpace, vectors: VectorSeq) -> Result<Self> {
        if vectors.len() > MAX_SEQ_LEN {
            return Err(Error::TooLarge {
                size: vectors.len(),
                max: MAX_SEQ_LEN,
            });
        }
        if vectors.field() != space.field() {
            return Err(Error::FieldMismatch(vectors.field(), space.field()));
        }
        if vectors.dim() != space.dim() {
            return Err(Error::ShapeMismatch(format!(
                "vectors of length {} in a space of dimension {}",
                vectors.dim(),
                space.dim()
            )));
        }
        if !is_nondeg_unimodular(&vectors, &space) {
            return Err(Error::NotNonDegenerate(vectors.to_string()));
        }
        Ok(NonDegSeq { space, vectors })
    }

    pub(crate) fn new_unchecked(space: SymplecticSpace, vectors: VectorSeq) -> Self {
        NonDegSeq { space, vectors }
    }

    pub fn empty(space: SymplecticSpace) -> Self {
        NonDegSeq {
            space,
            vectors: VectorSeq::empty(space.field(), space.dim()),
        }
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn vectors(&self) -> &VectorSeq {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn gram(&self) -> SkewMatrix {
        self.space.gram(&self.vectors).expect("vectors live in the space")
    }

    /// The Gram matrix as an element of Skew+; needs `q <= 2n`.
    pub fn gram_plus(&self) -> Result<SkewPlusMatrix> {
        if self.len() > self.space.dim() {
            return Err(Error::BadRange(format!(
                "length {} exceeds the dimension {}",
                self.len(),
                self.space.dim()
            )));
        }
        Ok(SkewPlusMatrix::new_unchecked(self.gram()))
    }

    /// `(x, v_1, ..., v_q)`, checked.
    pub fn prepend(&self, x: Vector) -> Result<Self> {
        Self::new(self.space, self.vectors.prepend(x)?)
    }
}

impl Simplicial for NonDegSeq {
    fn degree(&self) -> usize {
        self.len()
    }

    fn face(&self, i: usize) -> Self {
        NonDegSeq::new_unchecked(self.space, self.vectors.face(i))
    }
}

impl fmt::Display for NonDegSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vectors)
    }
}

#[derive(Serialize, Deserialize)]
struct NonDegSeqRepr {
    field: Field,
    dim: usize,
    vectors: Vec<Vec<Scalar>>,
}

impl Serialize for NonDegSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NonDegSeqRepr {
            field: self.space.field(),
            dim: self.space.dim(),
            vectors: self.vectors.vectors().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NonDegSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = NonDegSeqRepr::deserialize(d)?;
        if r.vectors.len() > MAX_SEQ_LEN || r.dim > 2 * MAX_SEQ_LEN {
            return Err(D::Error::custom("sequence too large"));
        }
        let space = SymplecticSpace::of_dim(r.field, r.dim).map_err(D::Error::custom)?;
        let vectors = r
            .vectors
            .into_iter()
            .map(|v| v.into_iter().map(|x| r.field.coerce(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let seq = VectorSeq::new(r.field, r.dim, vectors).map_err(D::Error::custom)?;
        NonDegSeq::new(space, seq).map_err(D::Error::custom)
    }
}

/// Differential of `Z[U_*(F^{2n})]`.
pub fn diff_seq<C: Coeff>(xi: &FormalSum<NonDegSeq, C>) -> FormalSum<NonDegSeq, C> {
    xi.boundary()
}

/// Draw candidates from a pool whose coordinate bound starts at
/// [`POOL_START`] and doubles every [`POOL_BATCH`] attempts.
pub(crate) fn pooled_search<R: Rng + ?Sized, T>(
    rng: &mut R,
    max_attempts: usize,
    mut draw: impl FnMut(&mut R, u64) -> Option<T>,
) -> Result<T> {
    let mut bound = POOL_START;
    for attempt in 0..max_attempts {
        if attempt > 0 && attempt % POOL_BATCH == 0 {
            bound = bound.saturating_mul(2);
        }
        if let Some(t) = draw(rng, bound) {
            return Ok(t);
        }
    }
    Err(Error::SamplerExhausted {
        attempts: max_attempts,
    })
}

/// Whether `(x, v)` lies in `U_{q+1}`. Membership does not depend on the
/// position of `x`.
pub fn is_good_position(v: &NonDegSeq, x: &[Scalar]) -> bool {
    match v.vectors.prepend(x.to_vec()) {
        Ok(seq) => is_nondeg_unimodular(&seq, &v.space),
        Err(_) => false,
    }
}

fn random_vector<R: Rng + ?Sized>(field: Field, dim: usize, rng: &mut R, bound: u64) -> Vector {
    (0..dim).map(|_| field.sample(rng, bound)).collect()
}

/// Random `x` with `(v, x)` in `U_{q+1}`.
pub fn good_position_sample<R: Rng + ?Sized>(v: &NonDegSeq, rng: &mut R, max_attempts: usize) -> Result<Vector> {
    let (field, dim) = (v.space.field(), v.space.dim());
    pooled_search(rng, max_attempts, |rng, bound| {
        let x = random_vector(field, dim, rng, bound);
        is_good_position(v, &x).then_some(x)
    })
}

/// For odd `|I|`, the vector `u = Σ_i (-1)^{i+1} Pf(Γ(v_{I-i})) v_i`, so that
/// `Pf(Γ(v_I, x)) = ⟨u, x⟩` for every `x`.
pub fn good_position_linear_form(v: &VectorSeq, space: &SymplecticSpace) -> Result<Vector> {
    if v.len().is_multiple_of(2) {
        return Err(Error::EvenSize(v.len()));
    }
    if v.dim() != space.dim() || v.field() != space.field() {
        return Err(Error::ShapeMismatch("sequence does not live in the space".into()));
    }
    let g = space.gram(v)?;
    let mut u = space.zero_vector();
    for i in 1..=v.len() {
        let mut c = g.remove_indices(&[i])?.pf()?;
        if i % 2 == 0 {
            c = -c;
        }
        for (uk, vk) in u.iter_mut().zip(v.get(i)) {
            *uk = &*uk + &(&c * vk);
        }
    }
    Ok(u)
}

/// A vector `v` with `A * v` in Skew+_{q+1}.
pub fn skew_plus_extend<R: Rng + ?Sized>(a: &SkewPlusMatrix, rng: &mut R, max_attempts: usize) -> Result<Vector> {
    if a.size() == 0 {
        return Ok(Vec::new());
    }
    let field = a.field();
    pooled_search(rng, max_attempts, |rng, bound| {
        let v: Vector = (0..a.size()).map(|_| field.sample_nonzero(rng, bound)).collect();
        a.star_extend(&v).ok()?.is_skew_plus().then_some(v)
    })
}

/// For a cycle `ξ`, an `η` with `dη = ξ`: prepend one common vector in
/// good position to every generator.
pub fn contract_cycle_seq<C: Coeff, R: Rng + ?Sized>(
    xi: &FormalSum<NonDegSeq, C>,
    rng: &mut R,
    max_attempts: usize,
) -> Result<FormalSum<NonDegSeq, C>> {
    if !diff_seq(xi).is_zero() {
        return Err(Error::NotACycle);
    }
    let Some((first, _)) = xi.iter().next() else {
        return Ok(FormalSum::new());
    };
    let space = first.space;
    if xi.iter().any(|(g, _)| g.space != space) {
        return Err(Error::ShapeMismatch("generators live in different spaces".into()));
    }
    let x = pooled_search(rng, max_attempts, |rng, bound| {
        let x = random_vector(space.field(), space.dim(), rng, bound);
        xi.iter().all(|(g, _)| is_good_position(g, &x)).then_some(x)
    })?;
    let eta = xi.map_generators(|g| {
        NonDegSeq::new_unchecked(space, g.vectors.prepend(x.clone()).expect("same dimension"))
    });
    if diff_seq(&eta) != *xi {
        return Err(Error::InternalInvariant("d(x, ξ) differs from ξ".into()));
    }
    Ok(eta)
}

/// Position in `v` of the `p`-th entry of `v` with its `i`-th entry removed.
fn skip_pos(p: usize, i: usize) -> usize {
    if p < i {
        p
    } else {
        p + 1
    }
}

/// For a cycle `ξ = Σ n_j [A_j]`, an `η` with `dη = ξ`.
///
/// Each generator gets its own extension vector `v_j`, and
/// `η = Σ n_j (-1)^{q_j} [A_j * v_j]`. Then
/// `dη = ξ + Σ_j n_j (-1)^{q_j} Σ_i (-1)^{i+1} [A_j^_i * (v_j)^_i]`, and the
/// second sum cancels because equal faces `A_j^_i = A_k^_l` are forced to
/// carry equal vectors `(v_j)^_i = (v_k)^_l`. One vector shared by all
/// generators does not achieve that; see the tests.
pub fn contract_cycle_skew<C: Coeff, R: Rng + ?Sized>(
    xi: &FormalSum<SkewPlusMatrix, C>,
    rng: &mut R,
    max_attempts: usize,
) -> Result<FormalSum<SkewPlusMatrix, C>> {
    if !xi.boundary().is_zero() {
        return Err(Error::NotACycle);
    }
    let gens: Vec<(&SkewPlusMatrix, &C)> = xi.iter().collect();
    let Some((first, _)) = gens.first() else {
        return Ok(FormalSum::new());
    };
    let field = first.field();
    if let Some((g, _)) = gens.iter().find(|(g, _)| g.field() != field) {
        return Err(Error::FieldMismatch(g.field(), field));
    }

    let mut offsets = Vec::with_capacity(gens.len());
    let mut total = 0;
    for (g, _) in &gens {
        offsets.push(total);
        total += g.size();
    }
    let mut classes = UnionFind::<usize>::new(total);
    let mut seen: HashMap<SkewPlusMatrix, (usize, usize)> = HashMap::new();
    for (j, (g, _)) in gens.iter().enumerate() {
        let q = g.size();
        for i in 1..=q {
            match seen.get(&g.face(i)) {
                None => {
                    seen.insert(g.face(i), (j, i));
                }
                Some(&(k, l)) => {
                    for p in 1..q {
                        classes.union(offsets[j] + skip_pos(p, i) - 1, offsets[k] + skip_pos(p, l) - 1);
                    }
                }
            }
        }
    }
    let labels = classes.into_labeling();
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    for &rep in &labels {
        let next = class_of.len();
        class_of.entry(rep).or_insert(next);
    }
    let n_classes = class_of.len();

    let extended = pooled_search(rng, max_attempts, |rng, bound| {
        let values: Vec<Scalar> = (0..n_classes).map(|_| field.sample_nonzero(rng, bound)).collect();
        gens.iter()
            .enumerate()
            .map(|(j, (g, _))| {
                let v: Vector = (0..g.size())
                    .map(|p| values[class_of[&labels[offsets[j] + p]]].clone())
                    .collect();
                g.star_extend(&v).ok()?.certify().ok()
            })
            .collect::<Option<Vec<_>>>()
    })?;

    let eta = FormalSum::from_terms(gens.iter().zip(extended).map(|((g, c), ext)| {
        let c = if g.size() % 2 == 0 { (*c).clone() } else { c.neg() };
        (ext, c)
    }));
    if eta.boundary() != *xi {
        return Err(Error::InternalInvariant("d(η) differs from ξ".into()));
    }
    Ok(eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::random_skew_plus;
    use crate::seeded_rng;
    use proptest::prelude::*;
    use rand::Rng;

    const Q: Field = Field::Rationals;

    fn seq(space: &SymplecticSpace, vs: &[&[i64]]) -> VectorSeq {
        let vectors = vs.iter().map(|v| v.iter().map(|&x| Scalar::int(x)).collect()).collect();
        VectorSeq::new(space.field(), space.dim(), vectors).unwrap()
    }

    fn random_nondeg<R: Rng>(space: SymplecticSpace, q: usize, rng: &mut R) -> NonDegSeq {
        let mut v = NonDegSeq::empty(space);
        for _ in 0..q {
            let x = good_position_sample(&v, rng, 200).unwrap();
            v = v.prepend(x).unwrap();
        }
        v
    }

    #[test]
    fn membership_examples() {
        let r2 = SymplecticSpace::new(Q, 1);
        let r4 = SymplecticSpace::new(Q, 2);
        assert!(is_nondeg_unimodular(&VectorSeq::empty(Q, 2), &r2));
        assert!(is_nondeg_unimodular(&seq(&r2, &[&[1, 0]]), &r2));
        assert!(!is_nondeg_unimodular(&seq(&r2, &[&[0, 0]]), &r2));
        assert!(!is_nondeg_unimodular(&seq(&r4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]), &r4));
        // three vectors in F^2: pairs must be independent with nonzero pairing
        assert!(is_nondeg_unimodular(&seq(&r2, &[&[1, 0], &[0, 1], &[1, 1]]), &r2));
        assert!(!is_nondeg_unimodular(&seq(&r2, &[&[1, 0], &[0, 1], &[2, 0]]), &r2));
        assert!(matches!(
            NonDegSeq::new(r2, seq(&r2, &[&[0, 0]])),
            Err(Error::NotNonDegenerate(_))
        ));
    }

    #[test]
    fn good_position_examples() {
        let r2 = SymplecticSpace::new(Q, 1);
        let mut rng = seeded_rng(1);
        let x = good_position_sample(&NonDegSeq::empty(r2), &mut rng, 50).unwrap();
        assert!(x.iter().any(|c| !c.is_zero()));
        let e1 = NonDegSeq::new(r2, seq(&r2, &[&[1, 0]])).unwrap();
        assert!(is_good_position(&e1, &r2.e(2)));
        assert!(!is_good_position(&e1, &r2.e(1)));
        let r4 = SymplecticSpace::new(Q, 2);
        for _ in 0..20 {
            let v = random_nondeg(r4, 3, &mut rng);
            let x = good_position_sample(&v, &mut rng, 200).unwrap();
            assert!(is_nondeg_unimodular(&v.vectors().prepend(x).unwrap(), &r4));
        }
    }

    #[test]
    fn finite_field_sampler_gives_up() {
        // over F_2 no three vectors of F^2 are pairwise independent with
        // nonzero pairings... except e1, e2, e1 + e2; a fourth never exists
        let f2 = Field::prime(2).unwrap();
        let r2 = SymplecticSpace::new(f2, 1);
        let one = Scalar::Prime { p: 2, value: 1 };
        let zero = Scalar::Prime { p: 2, value: 0 };
        let v = VectorSeq::new(
            f2,
            2,
            vec![
                vec![one.clone(), zero.clone()],
                vec![zero, one.clone()],
                vec![one.clone(), one],
            ],
        )
        .unwrap();
        let v = NonDegSeq::new(r2, v).unwrap();
        let mut rng = seeded_rng(0);
        assert!(matches!(
            good_position_sample(&v, &mut rng, 64),
            Err(Error::SamplerExhausted { attempts: 64 })
        ));
    }

    #[test]
    fn linear_form_of_singleton() {
        let r4 = SymplecticSpace::new(Q, 2);
        let w = seq(&r4, &[&[1, 2, 3, 4]]);
        assert_eq!(good_position_linear_form(&w, &r4).unwrap(), w.get(1).clone());
        assert!(matches!(
            good_position_linear_form(&VectorSeq::empty(Q, 4), &r4),
            Err(Error::EvenSize(0))
        ));
    }

    #[test]
    fn skew_plus_extend_examples() {
        let mut rng = seeded_rng(3);
        let v = skew_plus_extend(&SkewPlusMatrix::empty(Q), &mut rng, 1).unwrap();
        assert!(v.is_empty());
        assert_eq!(SkewPlusMatrix::empty(Q).star_extend(&v).unwrap().certify().unwrap(), SkewPlusMatrix::point(Q));
        let psi = SkewMatrix::psi(Q, 1).certify().unwrap();
        let v = skew_plus_extend(&psi, &mut rng, 50).unwrap();
        assert!(psi.star_extend(&v).unwrap().is_skew_plus());
        for k in 0..100 {
            let q = 1 + k % 5;
            let a = random_skew_plus(Q, q, &mut rng, 20, 200).unwrap();
            let v = skew_plus_extend(&a, &mut rng, 50).unwrap();
            assert!(a.star_extend(&v).unwrap().is_skew_plus());
        }
    }

    #[test]
    fn prepend_identity() {
        // d(x, ξ) = ξ - (x, dξ)
        let mut rng = seeded_rng(5);
        let r4 = SymplecticSpace::new(Q, 2);
        for q in 1..=4 {
            let v = random_nondeg(r4, q, &mut rng);
            let x = good_position_sample(&v, &mut rng, 200).unwrap();
            let xi = FormalSum::<_, i64>::single(v.clone(), 3);
            let xv = xi.map_generators(|g| g.prepend(x.clone()).unwrap());
            let x_dxi = diff_seq(&xi).map_generators(|g| g.prepend(x.clone()).unwrap());
            assert_eq!(diff_seq(&xv), xi.sub(&x_dxi));
        }
    }

    #[test]
    fn contract_seq_on_boundaries() {
        let mut rng = seeded_rng(11);
        let r4 = SymplecticSpace::new(Q, 2);
        let zero: FormalSum<NonDegSeq, i64> = FormalSum::new();
        assert!(contract_cycle_seq(&zero, &mut rng, 10).unwrap().is_zero());
        for q in 0..=3 {
            let mut xi: FormalSum<NonDegSeq, i64> = FormalSum::new();
            for _ in 0..3 {
                let b = random_nondeg(r4, q + 1, &mut rng);
                let n = rng.gen_range(-4..=4);
                xi = xi.add(&diff_seq(&FormalSum::single(b, n)));
            }
            let eta = contract_cycle_seq(&xi, &mut rng, 400).unwrap();
            assert_eq!(diff_seq(&eta), xi);
        }
        let v = random_nondeg(r4, 2, &mut rng);
        assert!(matches!(
            contract_cycle_seq(&FormalSum::<_, i64>::single(v, 1), &mut rng, 10),
            Err(Error::NotACycle)
        ));
    }

    #[test]
    fn contract_skew_on_boundaries() {
        let mut rng = seeded_rng(13);
        let zero: FormalSum<SkewPlusMatrix, i64> = FormalSum::new();
        assert!(contract_cycle_skew(&zero, &mut rng, 10).unwrap().is_zero());
        for q in 0..=5 {
            let mut xi: FormalSum<SkewPlusMatrix, i64> = FormalSum::new();
            for _ in 0..3 {
                let b = random_skew_plus(Q, q + 1, &mut rng, 20, 200).unwrap();
                xi = xi.add(&FormalSum::single(b, rng.gen_range(-4..=4)).boundary());
            }
            let eta = contract_cycle_skew(&xi, &mut rng, 400).unwrap();
            assert_eq!(eta.boundary(), xi);
        }
        let b = random_skew_plus(Q, 4, &mut rng, 20, 200).unwrap();
        let xi = FormalSum::<_, i64>::single(b, 1).boundary();
        let eta = contract_cycle_skew(&xi, &mut rng, 400).unwrap();
        assert_eq!(eta.boundary(), xi);
    }

    #[test]
    fn contract_skew_low_degree_signs() {
        let mut rng = seeded_rng(17);
        // q = 0: [∅] is a cycle and d([∅] * ()) = [∅]
        let xi = FormalSum::<_, i64>::single(SkewPlusMatrix::empty(Q), 1);
        let eta = contract_cycle_skew(&xi, &mut rng, 10).unwrap();
        assert_eq!(eta, FormalSum::single(SkewPlusMatrix::point(Q), 1));
        assert_eq!(eta.boundary(), xi);
        // q = 1: [0] is not a cycle, but d(ξ * v) = -ξ + (dξ) * v still holds
        let point = FormalSum::<_, i64>::single(SkewPlusMatrix::point(Q), 1);
        assert!(matches!(contract_cycle_skew(&point, &mut rng, 10), Err(Error::NotACycle)));
        let ext = SkewPlusMatrix::point(Q).star_extend(&[Scalar::int(5)]).unwrap().certify().unwrap();
        let lhs = FormalSum::<_, i64>::single(ext, 1).boundary();
        let rhs = point.neg().add(&FormalSum::single(SkewPlusMatrix::point(Q), 1));
        assert_eq!(lhs, rhs);
        assert!(lhs.is_zero());
    }

    #[test]
    fn one_common_vector_does_not_contract() {
        let mut rng = seeded_rng(19);
        // Every generator of degree 2 is a cycle: both faces are [0].
        let a = SkewMatrix::psi(Q, 1).scale(&Scalar::int(3)).certify().unwrap();
        let xi = FormalSum::<_, i64>::single(a.clone(), 1);
        assert!(xi.boundary().is_zero());
        let v = [Scalar::int(2), Scalar::int(7)];
        let common = FormalSum::<_, i64>::single(a.star_extend(&v).unwrap().certify().unwrap(), 1);
        // d(A * v) = [[0, v2]] - [[0, v1]] + [A]
        let d = common.boundary();
        assert_ne!(d, xi);
        assert_eq!(d.len(), 3);
        let eta = contract_cycle_skew(&xi, &mut rng, 100).unwrap();
        assert_eq!(eta.boundary(), xi);

        // A boundary of degree 3, with one vector shared by all faces.
        let b = random_skew_plus(Q, 4, &mut rng, 20, 200).unwrap();
        let xi = FormalSum::<_, i64>::single(b, 1).boundary();
        let v = skew_plus_extend_all(&xi, &mut rng);
        let common = FormalSum::from_terms(
            xi.iter().map(|(g, c)| (g.star_extend(&v).unwrap().certify().unwrap(), -c)),
        );
        assert_ne!(common.boundary(), xi);
    }

    /// A single `v` extending every generator of `ξ`.
    fn skew_plus_extend_all<R: Rng>(xi: &FormalSum<SkewPlusMatrix, i64>, rng: &mut R) -> Vector {
        let q = xi.iter().next().unwrap().0.size();
        loop {
            let v: Vector = (0..q).map(|_| Q.sample_nonzero(rng, 50)).collect();
            if xi.iter().all(|(g, _)| g.star_extend(&v).unwrap().is_skew_plus()) {
                return v;
            }
        }
    }

    #[test]
    fn specialization_commutes_with_membership() {
        let ft = Field::function_field(5).unwrap();
        let space = SymplecticSpace::new(ft, 2);
        let mut rng = seeded_rng(23);
        for q in [2usize, 4] {
            let v = random_nondeg(space, q, &mut rng);
            let g = v.gram();
            for t0 in 0..5 {
                let Some(vs) = v
                    .vectors()
                    .vectors()
                    .iter()
                    .map(|x| x.iter().map(|c| c.specialize(t0)).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()
                else {
                    continue;
                };
                let fp = Field::prime(5).unwrap();
                let special = VectorSeq::new(fp, 4, vs).unwrap();
                let special_space = SymplecticSpace::new(fp, 2);
                let pfs_survive = (1..=q).combinations(2).chain((1..=q).combinations(4)).all(|idx| {
                    matches!(g.restrict(&idx).unwrap().pf().unwrap().specialize(t0), Some(x) if !x.is_zero())
                });
                assert_eq!(is_nondeg_unimodular(&special, &special_space), pfs_survive);
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let mut rng = seeded_rng(29);
        let v = random_nondeg(SymplecticSpace::new(Q, 2), 3, &mut rng);
        let json = serde_json::to_string(&v).unwrap();
        let back: NonDegSeq = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        let bad = r#"{"field":"q","dim":2,"vectors":[["0","0"]]}"#;
        assert!(serde_json::from_str::<NonDegSeq>(bad).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn linear_form_matches_pfaffian(k in 0usize..3, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let space = SymplecticSpace::new(Q, 3);
            let v = random_nondeg(space, 2 * k + 1, &mut rng);
            let u = good_position_linear_form(v.vectors(), &space).unwrap();
            prop_assert!(u.iter().any(|c| !c.is_zero()));
            let x: Vector = (0..6).map(|_| Q.sample(&mut rng, 10)).collect();
            let mut with_x = v.vectors().clone();
            with_x.push(x.clone()).unwrap();
            let pf = space.gram(&with_x).unwrap().pf_recursive().unwrap();
            prop_assert_eq!(pf, space.pairing(&u, &x));
        }

        #[test]
        fn gram_of_sequence_is_skew_plus(q in 0usize..=4, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let v = random_nondeg(SymplecticSpace::new(Q, 2), q, &mut rng);
            prop_assert!(v.gram().certify().is_ok());
            prop_assert!(v.gram_plus().is_ok());
        }

        #[test]
        fn faces_recertify_and_d_squared_vanishes(q in 1usize..=5, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let space = SymplecticSpace::new(Q, 2);
            let v = random_nondeg(space, q, &mut rng);
            for i in 1..=q {
                let f = v.face(i);
                prop_assert!(NonDegSeq::new(space, f.vectors().clone()).is_ok());
            }
            let xi = FormalSum::<_, i64>::single(v, 1);
            prop_assert!(diff_seq(&diff_seq(&xi)).is_zero());
        }

        #[test]
        fn skew_faces_recertify(q in 1usize..=7, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let a = random_skew_plus(Q, q, &mut rng, 50, 400).unwrap();
            for i in 1..=q {
                prop_assert!(a.face(i).inner().is_skew_plus());
            }
        }
    }
}
