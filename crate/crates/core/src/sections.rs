//! Canonical sections of the Gram map `Γ: U_q(F^{2n}) → Skew+_q`, and the
//! determinant-one upper triangular basis `v(A)`.

use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};
use crate::matrix::{Matrix, Vector};
use crate::pfaffian::SkewPlusMatrix;
use crate::symplectic::{solve_pairings, SymplecticSpace, VectorSeq};
use crate::unimod::NonDegSeq;

fn pad(field: Field, v: &[Scalar], dim: usize) -> Vector {
    let mut out = v.to_vec();
    out.resize(dim, field.zero());
    out
}

/// The unique `w ∈ F^{dim}` with `⟨v_i, w⟩ = rhs_i`, where the `v_i` span
/// `F^{dim}` non-degenerately.
fn adjoint_solve(space: &SymplecticSpace, vs: &[Vector], rhs: &[Scalar]) -> Vector {
    let truncated: Vec<Vector> = vs.iter().map(|v| v[..space.dim()].to_vec()).collect();
    solve_pairings(space, &truncated, rhs)
        .expect("shapes agree")
        .expect("Gram of the even part is invertible")
}

/// Vectors of `V_{q,2k}(A)` in the smallest ambient `F^{2k}`, `2k = q + q % 2`.
fn minimal_section(a: &SkewPlusMatrix) -> Vec<Vector> {
    let field = a.field();
    let q = a.size();
    let mut vs: Vec<Vector> = Vec::with_capacity(q);
    for s in 1..=q {
        let k = (s - 1) / 2;
        let inner = SymplecticSpace::new(field, k);
        let rhs: Vec<Scalar> = (1..=2 * k).map(|i| a.get(i, s)).collect();
        let w = adjoint_solve(&inner, &vs[..2 * k], &rhs);
        if s % 2 == 1 {
            // v_s = w + e_s, in the next even ambient space
            let dim = s + 1;
            for v in vs.iter_mut() {
                *v = pad(field, v, dim);
            }
            let mut v = pad(field, &w, dim);
            v[s - 1] = field.one();
            vs.push(v);
        } else {
            // v_s = w + (A_{s-1,s} - ⟨v_{s-1}, w⟩) e_s
            let outer = SymplecticSpace::new(field, k + 1);
            let w = pad(field, &w, s);
            let c = a.get(s - 1, s) - outer.pairing(&vs[s - 2], &w);
            let mut v = w;
            v[s - 1] = c;
            vs.push(v);
        }
    }
    vs
}

/// The section `V_{q,2n}(A)` of the Gram map, for `0 <= q <= 2n + 1`.
pub fn gamma_section(q: usize, two_n: usize, a: &SkewPlusMatrix) -> Result<NonDegSeq> {
    let space = SymplecticSpace::of_dim(a.field(), two_n)?;
    if a.size() != q {
        return Err(Error::ShapeMismatch(format!("matrix of size {} for q = {q}", a.size())));
    }
    if q > two_n + 1 {
        return Err(Error::BadRange(format!("q = {q} exceeds 2n + 1 = {}", two_n + 1)));
    }
    let field = a.field();
    let vectors: Vec<Vector> = if q == two_n + 1 {
        let base = a.remove_indices(&[q])?;
        let mut vs = minimal_section(&base);
        let rhs: Vec<Scalar> = (1..=two_n).map(|i| a.get(i, q)).collect();
        let w = adjoint_solve(&space, &vs, &rhs);
        vs.push(w);
        vs
    } else {
        minimal_section(a)
            .into_iter()
            .map(|v| pad(field, &v, two_n))
            .collect()
    };
    let seq = VectorSeq::new(field, two_n, vectors)?;
    Ok(NonDegSeq::new_unchecked(space, seq))
}

/// `v(A)` for `A ∈ Skew+_{2n-1}`: a basis of `F^{2n-1} ⊂ F^{2n}` with
/// Gram matrix `A`, determinant 1 and `v_i ∈ F^i`. Returned inside `F^{2n}`
/// (last coordinate zero).
pub fn section_v_det1(a: &SkewPlusMatrix) -> Result<NonDegSeq> {
    let q = a.size();
    if q.is_multiple_of(2) {
        return Err(Error::EvenSize(q));
    }
    let field = a.field();
    let two_n = q + 1;
    let prime = gamma_section(q, q - 1, a)?;
    // columns are upper triangular, so the determinant is the diagonal product
    let mut det = field.one();
    for i in 1..q {
        det = det * prime.vectors().get(i)[i - 1].clone();
    }
    let mut vectors: Vec<Vector> = prime
        .vectors()
        .vectors()
        .iter()
        .map(|v| pad(field, v, two_n))
        .collect();
    vectors[q - 1][q - 1] = det.inv()?;
    let space = SymplecticSpace::of_dim(field, two_n)?;
    Ok(NonDegSeq::new_unchecked(space, VectorSeq::new(field, two_n, vectors)?))
}

/// The square matrix of `v(A)`: columns `v_i` in `F^{2n-1}`.
pub fn det1_matrix(v: &NonDegSeq) -> Matrix {
    let q = v.len();
    v.vectors().to_matrix().select(&(0..q).collect::<Vec<_>>(), &(0..q).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::{random_skew_plus, SkewMatrix};
    use crate::seeded_rng;
    use crate::unimod::is_nondeg_unimodular;
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn small_sections() {
        let empty = gamma_section(0, 4, &SkewPlusMatrix::empty(Q)).unwrap();
        assert!(empty.is_empty());
        let one = gamma_section(1, 2, &SkewPlusMatrix::point(Q)).unwrap();
        assert_eq!(one.vectors().get(1), &vec![Scalar::int(1), Scalar::int(0)]);
        let zero = gamma_section(1, 0, &SkewPlusMatrix::point(Q)).unwrap();
        assert_eq!(zero.len(), 1);
        assert!(zero.vectors().get(1).is_empty());
        let a = SkewMatrix::psi(Q, 1).scale(&Scalar::int(5)).certify().unwrap();
        let two = gamma_section(2, 2, &a).unwrap();
        assert_eq!(two.vectors().get(1), &vec![Scalar::int(1), Scalar::int(0)]);
        assert_eq!(two.vectors().get(2), &vec![Scalar::int(0), Scalar::int(5)]);
        assert!(matches!(gamma_section(4, 2, &SkewPlusMatrix::empty(Q)), Err(Error::ShapeMismatch(_))));
        let mut rng = seeded_rng(0);
        let big = random_skew_plus(Q, 4, &mut rng, 9, 100).unwrap();
        assert!(matches!(gamma_section(4, 2, &big), Err(Error::BadRange(_))));
        assert!(matches!(gamma_section(1, 3, &SkewPlusMatrix::point(Q)), Err(Error::BadParity(_))));
    }

    #[test]
    fn det1_small() {
        let v = section_v_det1(&SkewPlusMatrix::point(Q)).unwrap();
        assert_eq!(det1_matrix(&v), Matrix::identity(Q, 1));
        assert!(matches!(section_v_det1(&SkewPlusMatrix::empty(Q)), Err(Error::EvenSize(0))));
    }

    #[test]
    fn deterministic() {
        let mut rng = seeded_rng(4);
        let a = random_skew_plus(Q, 5, &mut rng, 9, 100).unwrap();
        assert_eq!(gamma_section(5, 6, &a).unwrap(), gamma_section(5, 6, &a).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn round_trip(two_n in (0usize..=4).prop_map(|k| 2 * k), q_off in 0usize..=9, seed in any::<u64>()) {
            let q = q_off.min(two_n + 1);
            let mut rng = seeded_rng(seed);
            let a = random_skew_plus(Q, q, &mut rng, 9, 400).unwrap();
            let v = gamma_section(q, two_n, &a).unwrap();
            prop_assert_eq!(v.gram(), a.inner().clone());
            prop_assert!(is_nondeg_unimodular(v.vectors(), v.space()));
        }

        #[test]
        fn stability_and_faces(q in 1usize..=7, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let a = random_skew_plus(Q, q, &mut rng, 9, 400).unwrap();
            let small = q + q % 2;
            let v = gamma_section(q, small, &a).unwrap();
            let w = gamma_section(q, small + 2, &a).unwrap();
            prop_assert_eq!(w.vectors().truncate(small).unwrap(), v.vectors().clone());
            let face = gamma_section(q - 1, small, &a.remove_indices(&[q]).unwrap()).unwrap();
            prop_assert_eq!(v.vectors().face(q), face.vectors().clone());
        }

        #[test]
        fn det1_properties(n in 1usize..=4, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let a = random_skew_plus(Q, 2 * n - 1, &mut rng, 9, 400).unwrap();
            let v = section_v_det1(&a).unwrap();
            let m = det1_matrix(&v);
            prop_assert!(m.det().unwrap().is_one());
            for r in 0..m.rows() {
                for c in 0..r {
                    prop_assert!(m[(r, c)].is_zero());
                }
            }
            prop_assert_eq!(v.gram(), a.inner().clone());
            prop_assert!(is_nondeg_unimodular(v.vectors(), v.space()));
        }
    }
}
