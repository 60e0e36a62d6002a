//! The map `γ: Z[Skew+_{2n+2}] → F[Skew+_{2n-1}]`, given by Pfaffian ratios,
//! and an independent evaluation of each term through explicit symplectic
//! group elements.

mod appendix;
mod brackets;
mod units;

pub use appendix::{a1_collapsed, appendix_matrix, verify_appendix, AppendixRow, AppendixTable, Letters};
pub use brackets::{
    bracket_to_skew3, brackets_to_sum, check_certificate, seven_brace_certificate, seven_brace_relation, Bracket3,
    Certificate,
};
pub use units::{find_inverse_triple, find_w_units, WUnits, WVariant};

use rand::Rng;

use crate::chains::FormalSum;
use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::matrix::{Matrix, Permutation, Vector};
use crate::pfaffian::SkewPlusMatrix;
use crate::sections::section_v_det1;
use crate::symplectic::{elementary, solve_pairings, SymplecticSpace};

/// Field-coefficient combination of Skew+_{2n-1} generators.
pub type GammaOutput = FormalSum<SkewPlusMatrix, Scalar>;

/// One summand `(-1)^{i+j+k} ratio · [A^_{ijk}]` of `γ(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTerm {
    pub triple: [usize; 3],
    /// Includes the sign `(-1)^{i+j+k}`.
    pub coefficient: Scalar,
    pub generator: SkewPlusMatrix,
}

fn check_gamma_input(a: &SkewPlusMatrix) -> Result<usize> {
    let q = a.size();
    if q % 2 == 1 {
        return Err(Error::OddSize(q));
    }
    if q < 4 {
        return Err(Error::BadRange(format!("gamma needs size 2n + 2 >= 4, got {q}")));
    }
    Ok(q)
}

fn check_triple(q: usize, [i, j, k]: [usize; 3]) -> Result<()> {
    if !(1 <= i && i < j && j < k && k <= q) {
        return Err(Error::BadRange(format!("triple ({i}, {j}, {k}) is not increasing in 1..={q}")));
    }
    Ok(())
}

/// `Pf(A) / (Pf(A^_{ij}) Pf(A^_{ik}) Pf(A^_{jk}))`.
pub fn pfaffian_ratio(a: &SkewPlusMatrix, triple: [usize; 3]) -> Result<Scalar> {
    check_triple(a.size(), triple)?;
    let [i, j, k] = triple;
    let pf = |rem: &[usize]| -> Result<Scalar> { a.remove_indices(rem)?.pf() };
    let den = pf(&[i, j])? * pf(&[i, k])? * pf(&[j, k])?;
    a.pf()?.checked_div(&den)
}

/// All `C(2n+2, 3)` summands of `γ(A)`, triples in lexicographic order.
pub fn gamma_terms(a: &SkewPlusMatrix) -> Result<Vec<GammaTerm>> {
    let q = check_gamma_input(a)?;
    let mut terms = Vec::new();
    for i in 1..=q {
        for j in i + 1..=q {
            for k in j + 1..=q {
                let ratio = pfaffian_ratio(a, [i, j, k])?;
                let coefficient = if (i + j + k) % 2 == 0 { ratio } else { -ratio };
                terms.push(GammaTerm {
                    triple: [i, j, k],
                    coefficient,
                    generator: a.remove_indices(&[i, j, k])?,
                });
            }
        }
    }
    Ok(terms)
}

/// `γ(A)` with like generators collected.
pub fn gamma_map(a: &SkewPlusMatrix) -> Result<GammaOutput> {
    Ok(FormalSum::from_terms(
        gamma_terms(a)?.into_iter().map(|t| (t.generator, t.coefficient)),
    ))
}

/// Move `(i, j, k)` to `(2n, 2n+1, 2n+2)` by adjacent transpositions
/// `B_{rs} = A_{σ(r)σ(s)}`: first `k`, then `j`, then `i`.
pub fn canonicalize_triple(a: &SkewPlusMatrix, triple: [usize; 3]) -> Result<SkewPlusMatrix> {
    let q = a.size();
    check_triple(q, triple)?;
    let [i, j, k] = triple;
    let mut b = a.clone();
    for (start, target) in [(k, q), (j, q - 1), (i, q - 2)] {
        for p in start..target {
            b = b.permuted(&Permutation::adjacent_swap(q, p)?)?;
        }
    }
    Ok(b)
}

fn invariant(msg: impl Into<String>) -> Error {
    Error::InternalInvariant(msg.into())
}

/// The scalar `c = c_ik + c_kj + c_ji` with `g_ik g_kj g_ji = e_{2n-1,2n}(c)`
/// for the canonical triple of `b`, where each `g_rs` is the change of
/// basis between two sequences with equal Gram matrix.
///
/// `betas[r]` fixes the free coordinate of the later vector in `(u_r)^_r`
/// along the radical `e_{2n-1}`; the result does not depend on it.
fn oracle_canonical(b: &SkewPlusMatrix, betas: &[Scalar; 3]) -> Result<Scalar> {
    let q = b.size();
    let two_n = q - 2;
    let n = two_n / 2;
    let m = two_n - 1;
    let field = b.field();
    let space = SymplecticSpace::new(field, n);
    let idx = [two_n, two_n + 1, two_n + 2];

    let base = b.remove_indices(&idx)?;
    let v = section_v_det1(&base)?;
    let vs: Vec<Vector> = v.vectors().vectors().to_vec();
    let z = space.e(m);

    // x_s: the particular solution of ⟨v_p, x⟩ = A_{p,s} for p < 2n - 1 + 1
    let particular: Vec<Vector> = idx
        .iter()
        .map(|&s| {
            let rhs: Vec<Scalar> = (1..=m).map(|p| b.get(p, s)).collect();
            solve_pairings(&space, &vs, &rhs)?.ok_or_else(|| invariant("pairing system unsolvable"))
        })
        .collect::<Result<_>>()?;
    let pos = |s: usize| s - two_n;

    // u[r][s] for r != s in idx, stored by positions
    let mut u: [[Option<Vector>; 3]; 3] = Default::default();
    let pf = |rem: &[usize]| -> Result<Scalar> { b.remove_indices(rem)?.pf() };
    for (ri, &r) in idx.iter().enumerate() {
        let others: Vec<usize> = idx.iter().copied().filter(|&x| x != r).collect();
        let (s, t) = (others[0], others[1]);
        let xs = &particular[pos(s)];
        let xt = &particular[pos(t)];
        let beta = &betas[ri];
        let ut: Vector = xt.iter().zip(&z).map(|(x, zc)| x + &(beta * zc)).collect();
        let lead = space.pairing(&z, xt);
        if lead.is_zero() {
            return Err(invariant("radical pairs to zero with the later vector"));
        }
        let alpha = (b.get(s, t) - space.pairing(xs, xt) - beta * &space.pairing(xs, &z)) / lead;
        let us: Vector = xs.iter().zip(&z).map(|(x, zc)| x + &(&alpha * zc)).collect();

        // Gram of (u_r)^_r must be A^_r
        let mut seq = vs.clone();
        seq.push(us.clone());
        seq.push(ut.clone());
        let gram = crate::symplectic::gram_of(field, &seq);
        if &gram != b.remove_indices(&[r])?.inner() {
            return Err(invariant(format!("Gram of (u_{r})^_{r} differs from A^_{r}")));
        }
        // last coordinates are Pfaffians (determinant-one common part)
        if us[two_n - 1] != pf(&[r, t])? || ut[two_n - 1] != pf(&[r, s])? {
            return Err(invariant(format!("last coordinates of u_{r} are not the expected Pfaffians")));
        }
        // Pf(A^_{2n-1,r}) = Pf(A^_{2n-1,I}) (d_s Pf(A^_rs) - d_t Pf(A^_rt))
        let (ds, dt) = (&us[m - 1], &ut[m - 1]);
        let mut all = vec![m];
        all.extend(idx);
        let lhs = pf(&[m, r])?;
        let rhs = pf(&all)? * (ds * &pf(&[r, s])? - dt * &pf(&[r, t])?);
        if lhs != rhs {
            return Err(invariant(format!("Pfaffian expansion through u_{r} fails")));
        }
        u[ri][pos(s)] = Some(us);
        u[ri][pos(t)] = Some(ut);
    }

    // g_rs = (u_r)^_{rs} ((u_s)^_{rs})^{-1}, which must be e_{2n-1,2n}(c_rs)
    let g_c = |r: usize, s: usize| -> Result<Scalar> {
        let t = idx.iter().copied().find(|&x| x != r && x != s).expect("three indices");
        let columns = |from: usize| -> Result<Matrix> {
            let mut cols = vs.clone();
            cols.push(u[pos(from)][pos(t)].clone().expect("filled"));
            Matrix::from_columns(field, two_n, &cols)
        };
        let g = columns(r)?.mul(&columns(s)?.inverse()?)?;
        let c = g[(m - 1, two_n - 1)].clone();
        if g != elementary(m, two_n, &c, two_n)? {
            return Err(invariant(format!("g_{r}{s} is not elementary")));
        }
        Ok(c)
    };
    let [i, j, k] = idx;
    Ok(g_c(i, k)? + g_c(k, j)? + g_c(j, i)?)
}

/// The coefficient of `[A^_{ijk}]` in the class `[g_ik g_kj g_ji, u]`,
/// computed from explicit sequences and group elements (no Pfaffian ratio).
pub fn gamma_oracle_c(a: &SkewPlusMatrix, triple: [usize; 3]) -> Result<Scalar> {
    check_gamma_input(a)?;
    let b = canonicalize_triple(a, triple)?;
    let zero = a.field().zero();
    oracle_canonical(&b, &[zero.clone(), zero.clone(), zero])
}

/// As [`gamma_oracle_c`], with random choices of the free radical coordinates.
pub fn gamma_oracle_c_with<R: Rng + ?Sized>(
    a: &SkewPlusMatrix,
    triple: [usize; 3],
    rng: &mut R,
    bound: u64,
) -> Result<Scalar> {
    check_gamma_input(a)?;
    let b = canonicalize_triple(a, triple)?;
    let f = a.field();
    oracle_canonical(&b, &[f.sample(rng, bound), f.sample(rng, bound), f.sample(rng, bound)])
}

/// `Σ (-1)^{i+j+k} c_{ijk} [A^_{ijk}]` with every `c` from the oracle.
pub fn gamma_map_via_oracle(a: &SkewPlusMatrix) -> Result<GammaOutput> {
    let q = check_gamma_input(a)?;
    let mut out = FormalSum::new();
    for i in 1..=q {
        for j in i + 1..=q {
            for k in j + 1..=q {
                let c = gamma_oracle_c(a, [i, j, k])?;
                let c = if (i + j + k) % 2 == 0 { c } else { -c };
                out.add_term(a.remove_indices(&[i, j, k])?, c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Field;
    use crate::pfaffian::random_skew_plus;
    use crate::seeded_rng;
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    fn triples(q: usize) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for i in 1..=q {
            for j in i + 1..=q {
                for k in j + 1..=q {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }

    #[test]
    fn term_count_and_sizes() {
        let mut rng = seeded_rng(1);
        for n in 1..=3 {
            let a = random_skew_plus(Q, 2 * n + 2, &mut rng, 50, 400).unwrap();
            let terms = gamma_terms(&a).unwrap();
            let q = 2 * n + 2;
            assert_eq!(terms.len(), q * (q - 1) * (q - 2) / 6);
            assert!(terms.iter().all(|t| t.generator.size() == 2 * n - 1));
        }
        assert!(matches!(gamma_map(&SkewPlusMatrix::point(Q)), Err(Error::OddSize(1))));
    }

    #[test]
    fn canonical_triple_unchanged() {
        let mut rng = seeded_rng(2);
        let a = random_skew_plus(Q, 6, &mut rng, 50, 400).unwrap();
        assert_eq!(canonicalize_triple(&a, [4, 5, 6]).unwrap(), a);
        let b = canonicalize_triple(&a, [1, 2, 3]).unwrap();
        assert_eq!(b.remove_indices(&[4, 5, 6]).unwrap(), a.remove_indices(&[1, 2, 3]).unwrap());
    }

    #[test]
    fn oracle_matches_ratio_everywhere() {
        let mut rng = seeded_rng(3);
        for n in 1..=3 {
            let a = random_skew_plus(Q, 2 * n + 2, &mut rng, 50, 400).unwrap();
            for t in triples(2 * n + 2) {
                assert_eq!(gamma_oracle_c(&a, t).unwrap(), pfaffian_ratio(&a, t).unwrap(), "n = {n}, {t:?}");
            }
            assert_eq!(gamma_map_via_oracle(&a).unwrap(), gamma_map(&a).unwrap());
        }
    }

    #[test]
    fn oracle_over_function_field() {
        let f = Field::function_field(3).unwrap();
        let mut rng = seeded_rng(4);
        let a = random_skew_plus(f, 6, &mut rng, 8, 2000).unwrap();
        for t in [[1, 2, 3], [2, 4, 6], [4, 5, 6]] {
            assert_eq!(gamma_oracle_c(&a, t).unwrap(), pfaffian_ratio(&a, t).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn oracle_independent_of_choices(seed in any::<u64>(), t in 0usize..20) {
            let mut rng = seeded_rng(seed);
            let a = random_skew_plus(Q, 6, &mut rng, 50, 400).unwrap();
            let triple = triples(6)[t];
            let fixed = gamma_oracle_c(&a, triple).unwrap();
            let varied = gamma_oracle_c_with(&a, triple, &mut rng, 100).unwrap();
            prop_assert_eq!(fixed, varied);
        }

        #[test]
        fn ratio_invariant_under_reduction_swaps(seed in any::<u64>(), t in 0usize..20) {
            let mut rng = seeded_rng(seed);
            let a = random_skew_plus(Q, 6, &mut rng, 50, 400).unwrap();
            let triple = triples(6)[t];
            let b = canonicalize_triple(&a, triple).unwrap();
            prop_assert_eq!(pfaffian_ratio(&a, triple).unwrap(), pfaffian_ratio(&b, [4, 5, 6]).unwrap());
        }
    }
}
