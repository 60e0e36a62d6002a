//! Randomized property suites. Each returns a [`Report`]; a suite never
//! panics on a failed identity, it records it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chains::{build_sm, partial_sums, FormalSum};
use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};
use crate::gamma::{
    find_inverse_triple, find_w_units, gamma_map, gamma_map_via_oracle, gamma_oracle_c, gamma_oracle_c_with,
    pfaffian_ratio, seven_brace_certificate, check_certificate, verify_appendix, AppendixTable, WVariant,
};
use crate::matrix::Matrix;
use crate::pfaffian::{dress_wenzel_sides, random_skew, random_skew_plus, SkewMatrix, SkewPlusMatrix};
use crate::report::Report;
use crate::sections::{det1_matrix, gamma_section, section_v_det1};
use crate::symplectic::{is_sp_member, random_sp, witt_extend, Subspace, SymplecticSpace, VectorSeq};
use crate::unimod::{contract_cycle_seq, contract_cycle_skew, diff_seq, good_position_sample, is_nondeg_unimodular, NonDegSeq};

/// Rejection-sampling budget for one random object.
const SAMPLE_ATTEMPTS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Pfaffian,
    DressWenzel,
    Sections,
    Witt,
    Complexes,
    AppendixA1,
    AppendixA2,
    AppendixA3,
    Relation,
    GammaOracle,
    Units,
    Sm,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Pfaffian,
        Suite::DressWenzel,
        Suite::Sections,
        Suite::Witt,
        Suite::Complexes,
        Suite::AppendixA1,
        Suite::AppendixA2,
        Suite::AppendixA3,
        Suite::Relation,
        Suite::GammaOracle,
        Suite::Units,
        Suite::Sm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pfaffian => "pfaffian",
            Suite::DressWenzel => "dress-wenzel",
            Suite::Sections => "sections",
            Suite::Witt => "witt",
            Suite::Complexes => "complexes",
            Suite::AppendixA1 => "appendix-a1",
            Suite::AppendixA2 => "appendix-a2",
            Suite::AppendixA3 => "appendix-a3",
            Suite::Relation => "relation",
            Suite::GammaOracle => "gamma-oracle",
            Suite::Units => "units",
            Suite::Sm => "sm",
        }
    }

    /// Suites whose constructions rely on avoiding finitely many bad values,
    /// which small finite fields cannot guarantee.
    pub fn needs_infinite_field(self) -> bool {
        matches!(self, Suite::Complexes | Suite::Units | Suite::Sm)
    }

    pub fn check_field(self, field: Field) -> Result<()> {
        if self.needs_infinite_field() && !field.is_infinite() {
            return Err(Error::BadRange(format!(
                "suite {} needs an infinite field (the constructions avoid finitely many bad values); got {field}",
                self.name()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Run one suite. Refuses fields the suite cannot work over.
pub fn run_suite<R: Rng + ?Sized>(suite: Suite, field: Field, trials: usize, bound: u64, rng: &mut R) -> Result<Report> {
    suite.check_field(field)?;
    let start = Instant::now();
    let mut report = match suite {
        Suite::Pfaffian => pfaffian_suite(field, trials, bound, rng),
        Suite::DressWenzel => dress_wenzel_suite(field, trials, bound, rng),
        Suite::Sections => sections_suite(field, trials, bound, rng),
        Suite::Witt => witt_suite(field, trials, bound, rng),
        Suite::Complexes => complexes_suite(field, trials, bound, rng),
        Suite::AppendixA1 => verify_appendix(AppendixTable::A1, field, trials, bound, rng),
        Suite::AppendixA2 => verify_appendix(AppendixTable::A2, field, trials, bound, rng),
        Suite::AppendixA3 => verify_appendix(AppendixTable::A3, field, trials, bound, rng),
        Suite::Relation => relation_suite(field, trials, bound, rng),
        Suite::GammaOracle => gamma_oracle_suite(field, trials, bound, rng),
        Suite::Units => units_suite(field, trials, rng),
        Suite::Sm => sm_suite(field, rng),
    };
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

fn spec(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn random_matrix<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R, bound: u64) -> Matrix {
    Matrix::from_fn(field, n, n, |_, _| field.sample(rng, bound))
}

/// `Pf² = det`, congruence, scaling, `Pf(ψ) = 1` and agreement of the two
/// Pfaffian algorithms on random skew matrices of even size up to 8.
pub fn pfaffian_suite<R: Rng + ?Sized>(field: Field, trials: usize, bound: u64, rng: &mut R) -> Report {
    let mut report = Report::new(Suite::Pfaffian.name(), field, trials);
    for t in 0..trials {
        let n = rng.gen_range(0..=4);
        let q = 2 * n;
        let sp = spec(&[("trial", t.to_string()), ("q", q.to_string())]);
        let result = (|| -> Result<()> {
            let a = random_skew(field, q, rng, bound);
            let pf = a.pf_eliminate()?;
            report.check_eq(None, &sp, &pf, &a.pf_recursive()?);
            report.check_eq(None, &sp, &(&pf * &pf), &a.to_matrix().det()?);
            let u = random_matrix(field, q, rng, bound);
            report.check_eq(None, &sp, &(u.det()? * &pf), &a.congruence(&u)?.pf()?);
            let c = field.sample(rng, bound);
            report.check_eq(None, &sp, &(c.pow(n as i32)? * &pf), &a.scale(&c).pf()?);
            report.check(SkewMatrix::psi(field, n).pf()?.is_one(), "Pf(psi) = 1", &sp);
            Ok(())
        })();
        if let Err(e) = result {
            report.error(e, &sp);
        }
    }
    report
}

/// The sorted four-index Pfaffian identity on random `A ∈ Skew+_{2n+2}`,
/// `n ∈ {2, 3}`, at a random index `m` and triple.
pub fn dress_wenzel_suite<R: Rng + ?Sized>(field: Field, trials: usize, bound: u64, rng: &mut R) -> Report {
    let mut report = Report::new(Suite::DressWenzel.name(), field, trials);
    for t in 0..trials {
        let n = 2 + t % 2;
        let q = 2 * n + 2;
        let mut idx = rand::seq::index::sample(rng, q, 4).into_vec();
        idx.iter_mut().for_each(|i| *i += 1);
        let (m, mut triple) = (idx[0], [idx[1], idx[2], idx[3]]);
        triple.sort_unstable();
        let sp = spec(&[("trial", t.to_string()), ("q", q.to_string()), ("m", m.to_string())]);
        let result = (|| -> Result<()> {
            let a = random_skew_plus(field, q, rng, bound, SAMPLE_ATTEMPTS)?;
            let (lhs, rhs) = dress_wenzel_sides(&a, m, (triple[0], triple[1], triple[2]))?;
            report.check_eq(Some(triple), &sp, &rhs, &lhs);
            Ok(())
        })();
        if let Err(e) = result {
            report.error(e, &sp);
        }
    }
    report
}

/// Section round trips for every `2n <= 8` and `q <= 2n + 1`, plus spot
/// checks of stability, faces and the determinant-one basis.
pub fn sections_suite<R: Rng + ?Sized>(field: Field, trials: usize, bound: u64, rng: &mut R) -> Report {
    let mut report = Report::new(Suite::Sections.name(), field, trials);
    let spot = trials.min(50);
    for t in 0..trials {
        for two_n in (0..=8).step_by(2) {
            for q in 0..=two_n + 1 {
                let sp = spec(&[("trial", t.to_string()), ("2n", two_n.to_string()), ("q", q.to_string())]);
                let result = (|| -> Result<()> {
                    let a = random_skew_plus(field, q, rng, bound, SAMPLE_ATTEMPTS)?;
                    let v = gamma_section(q, two_n, &a)?;
                    report.check_eq(None, &sp, a.inner(), &v.gram());
                    report.check(is_nondeg_unimodular(v.vectors(), v.space()), "section is in U_q", &sp);
                    Ok(())
                })();
                if let Err(e) = result {
                    report.error(e, &sp);
                }
            }
        }
        if t >= spot {
            continue;
        }
        let q = rng.gen_range(1..=7);
        let sp = spec(&[("trial", t.to_string()), ("spot q", q.to_string())]);
        let result = (|| -> Result<()> {
            let a = random_skew_plus(field, q, rng, bound, SAMPLE_ATTEMPTS)?;
            let small = q + q % 2;
            let v = gamma_section(q, small, &a)?;
            let w = gamma_section(q, small + 2, &a)?;
            report.check_eq(None, &sp, v.vectors(), &w.vectors().truncate(small)?);
            let face = gamma_section(q - 1, small, &a.remove_indices(&[q])?)?;
            report.check_eq(None, &sp, face.vectors(), &v.vectors().face(q));

            let n = rng.gen_range(1..=4);
            let b = random_skew_plus(field, 2 * n - 1, rng, bound, SAMPLE_ATTEMPTS)?;
            let d = section_v_det1(&b)?;
            let m = det1_matrix(&d);
            report.check(m.det()?.is_one(), "det v(A) = 1", &sp);
            let upper = (0..m.rows()).all(|r| (0..r).all(|c| m[(r, c)].is_zero()));
            report.check(upper, "v(A) upper triangular", &sp);
            report.check_eq(None, &sp, b.inner(), &d.gram());
            Ok(())
        })();
        if let Err(e) = result {
            report.error(e, &sp);
        }
    }
    report
}

/// Random non-degenerate `V` of rank `r <= 2n <= 8`, `W = hV` for a random
/// symplectic `h`; the Witt extension must be symplectic and send `v` to `w`.
pub fn witt_suite<R: Rng + ?Sized>(field: Field, trials: usize, bound: u64, rng: &mut R) -> Report {
    let mut report = Report::new(Suite::Witt.name(), field, trials);
    for t in 0..trials {
        let n = rng.gen_range(1..=4);
        let rank = rng.gen_range(1..=2 * n);
        let space = SymplecticSpace::new(field, n);
        let sp = spec(&[("trial", t.to_string()), ("2n", (2 * n).to_string()), ("rank", rank.to_string())]);
        let result = (|| -> Result<()> {
            let v = (0..SAMPLE_ATTEMPTS)
                .find_map(|_| {
                    let vs = (0..rank)
                        .map(|_| (0..2 * n).map(|_| field.sample(rng, bound)).collect())
                        .collect();
                    let v = VectorSeq::new(field, 2 * n, vs).ok()?;
                    let sub = Subspace::new(space, v.clone()).ok()?;
                    sub.is_nondegenerate().then_some(v)
                })
                .ok_or(Error::SamplerExhausted {
                    attempts: SAMPLE_ATTEMPTS,
                })?;
            let h = random_sp(&space, rng, bound);
            let w = v.apply(h.matrix())?;
            let g = witt_extend(&v, &w, &space)?;
            report.check(is_sp_member(g.matrix(), 2 * n)?, "extension is symplectic", &sp);
            report.check_eq(None, &sp, &w, &v.apply(g.matrix())?);
            Ok(())
        })();
        if let Err(e) = result {
            report.error(e, &sp);
        }
    }
    report
}

fn random_nondeg<R: Rng + ?Sized>(space: SymplecticSpace, q: usize, rng: &mut R) -> Result<NonDegSeq> {
    let mut v = NonDegSeq::empty(space);
    for _ in 0..q {
        let x = good_position_sample(&v, rng, SAMPLE_ATTEMPTS)?;
        v = v.prepend(x)?;
    }
    Ok(v)
}

/// `d∘d = 0` on `2 · trials` random generators of each complex, and both
/// contracting homotopies on `trials` boundary-built cycles each.
pub fn complexes_suite<R: Rng + ?Sized>(field: Field, trials: usize, bound: u64, rng: &mut R) -> Report {
    let mut report = Report::new(Suite::Complexes.name(), field, trials);
    for t in 0..2 * trials {
        let n = rng.gen_range(1..=3);
        let q = rng.gen_range(1..=2 * n + 1);
        let sp = spec(&[("trial", t.to_string()), ("2n", (2 * n).to_string()), ("q", q.to_string())]);
        let result = (|| -> Result<()> {
            let a = random_skew_plus(field, q, rng, bound, SAMPLE_ATTEMPTS)?;
            let xi = FormalSum::<SkewPlusMatrix, i64>::single(a, 1);
            report.check(xi.boundary().boundary().is_zero(), "d d = 0 on Skew+", &sp);
            let v = random_nondeg(SymplecticSpace::new(field, n), q, rng)?;
            let xi = FormalSum::<NonDegSeq, i64>::single(v, 1);
            report.check(diff_seq(&diff_seq(&xi)).is_zero(), "d d = 0 on U", &sp);
            Ok(())
        })();
        if let Err(e) = result {
            report.error(e, &sp);
        }
    }
    for t in 0..trials {
        let n = rng.gen_range(1..=2);
        let q = rng.gen_range(0..=2 * n);
        let sp = spec(&[("trial", t.to_string()), ("2n", (2 * n).to_string()), ("q", q.to_string())]);
        let result = (|| -> Result<()> {
            let mut skew: FormalSum<SkewPlusMatrix, i64> = FormalSum::new();
            let mut seq: FormalSum<NonDegSeq, i64> = FormalSum::new();
            for _ in 0..3 {
                let k = rng.gen_range(-4..=4);
                let a = random_skew_plus(field, q + 1, rng, bound, SAMPLE_ATTEMPTS)?;
                skew = skew.add(&FormalSum::single(a, k).boundary());
                let v = random_nondeg(SymplecticSpace::new(field, n), q + 1, rng)?;
                seq = seq.add(&diff_seq(&FormalSum::single(v, k)));
            }
            let eta = contract_cycle_skew(&skew, rng, SAMPLE_ATTEMPTS)?;
            report.check_eq(None, &sp, &skew, &eta.boundary());
            let eta = contract_cycle_seq(&seq, rng, SAMPLE_ATTEMPTS)?;
            report.check_eq(None, &sp, &seq, &diff_seq(&eta));
            Ok(())
        })();
        if let Err(e) = result {
            report.error(e, &sp);
        }
    }
    report
}

/// The seven-brace relation equals `γ` of the first appendix family at
/// inverted parameters, at random nonzero `a..e`.
pub fn relation_suite<R: Rng + ?Sized>(field: Field, trials: usize, bound: u64, rng: &mut R) -> Report {
    let mut report = Report::new(Suite::Relation.name(), field, trials);
    for t in 0..trials {
        let v: Vec<Scalar> = (0..5).map(|_| field.sample_nonzero(rng, bound)).collect();
        let mut sp: BTreeMap<String, String> = "abcde".chars().zip(&v).map(|(c, x)| (c.to_string(), x.to_string())).collect();
        sp.insert("trial".into(), t.to_string());
        match seven_brace_certificate(&v[0], &v[1], &v[2], &v[3], &v[4]).and_then(|(target, cert)| check_certificate(&target, &cert)) {
            Ok(ok) => {
                report.check(ok, "relation equals gamma at inverted parameters", &sp);
            }
            Err(e) => report.error(e, &sp),
        }
    }
    report
}

/// Oracle coefficient against the Pfaffian ratio for all 20 triples of
/// random `A ∈ Skew+_6`, with and without random radical choices.
pub fn gamma_oracle_suite<R: Rng + ?Sized>(field: Field, trials: usize, bound: u64, rng: &mut R) -> Report {
    let mut report = Report::new(Suite::GammaOracle.name(), field, trials);
    for t in 0..trials {
        let sp = spec(&[("trial", t.to_string())]);
        let result = (|| -> Result<()> {
            let a = random_skew_plus(field, 6, rng, bound, SAMPLE_ATTEMPTS)?;
            for i in 1..=6 {
                for j in i + 1..=6 {
                    for k in j + 1..=6 {
                        let ratio = pfaffian_ratio(&a, [i, j, k])?;
                        report.check_eq(Some([i, j, k]), &sp, &ratio, &gamma_oracle_c(&a, [i, j, k])?);
                    }
                }
            }
            let triple = [1, 3, 5];
            let ratio = pfaffian_ratio(&a, triple)?;
            report.check_eq(Some(triple), &sp, &ratio, &gamma_oracle_c_with(&a, triple, rng, bound)?);
            report.check_eq(None, &sp, &gamma_map(&a)?, &gamma_map_via_oracle(&a)?);
            Ok(())
        })();
        if let Err(e) = result {
            report.error(e, &sp);
        }
    }
    report
}

/// Unit searches within 100 attempts; every witness is re-checked here.
pub fn units_suite<R: Rng + ?Sized>(field: Field, trials: usize, rng: &mut R) -> Report {
    const ATTEMPTS: usize = 100;
    let mut report = Report::new(Suite::Units.name(), field, trials);
    for t in 0..trials {
        let sp = spec(&[("trial", t.to_string())]);
        let result = (|| -> Result<()> {
            let [u1, u2, u3] = find_inverse_triple(field, rng, ATTEMPTS)?;
            report.check((&u1 + &u2 + &u3).is_zero(), "u1 + u2 + u3 = 0", &sp);
            let units = !(u1.is_zero() || u2.is_zero() || u3.is_zero());
            report.check(units, "u_i nonzero", &sp);
            if units {
                let w = u1.inv()? + u2.inv()? + u3.inv()?;
                report.check(!w.is_zero(), "sum of inverses nonzero", &sp);
            }
            let b = field.sample_nonzero(rng, 1000);
            for variant in [WVariant::Linear, WVariant::Square] {
                let r = find_w_units(&b, variant, rng, ATTEMPTS)?;
                let sums = partial_sums(&r.u);
                report.check(sums[1..].iter().all(|x| !x.is_zero()), "partial sums nonzero", &sp);
                let mut w = field.zero();
                let mut s = field.zero();
                for (mask, x) in sums.iter().enumerate().skip(1) {
                    let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
                    let term = match variant {
                        WVariant::Linear => x.inv()?,
                        WVariant::Square => (x * x).inv()?,
                    };
                    w = w + term.scale_int(sign);
                    s = s + (x * x).scale_int(sign);
                }
                report.check_eq(None, &sp, &w, &r.w);
                report.check(!w.is_zero(), "w nonzero", &sp);
                report.check(s.is_zero(), "alternating sum of squares is 0", &sp);
            }
            Ok(())
        })();
        if let Err(e) = result {
            report.error(e, &sp);
        }
    }
    report
}

/// `s_m` for `m = 1..=12`: partial sums nonzero and augmentation 1.
pub fn sm_suite<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Report {
    const MAX_M: usize = 12;
    let mut report = Report::new(Suite::Sm.name(), field, MAX_M);
    for m in 1..=MAX_M {
        let sp = spec(&[("m", m.to_string())]);
        match build_sm(m, field, rng, SAMPLE_ATTEMPTS) {
            Ok((a, s)) => {
                let sums = partial_sums(&a);
                report.check(sums[1..].iter().all(|x| !x.is_zero()), "partial sums nonzero", &sp);
                report.check_eq(None, &sp, &1, &s.augmentation());
            }
            Err(e) => report.error(e, &sp),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    #[test]
    fn every_suite_passes_briefly() {
        let mut rng = seeded_rng(1);
        for suite in Suite::ALL {
            let r = run_suite(suite, Field::Rationals, 3, 100, &mut rng).unwrap();
            assert!(r.passed(), "{suite}: {:?}", r.failures);
            assert!(r.assertions > 0, "{suite}");
        }
    }

    #[test]
    fn function_field_suites() {
        let f = Field::function_field(3).unwrap();
        let mut rng = seeded_rng(2);
        for suite in [Suite::Pfaffian, Suite::Units, Suite::Sm, Suite::GammaOracle] {
            let r = run_suite(suite, f, 2, 1000, &mut rng).unwrap();
            assert!(r.passed(), "{suite}: {:?}", r.failures);
        }
    }

    #[test]
    fn finite_fields_refused_where_needed() {
        let f = Field::prime(7).unwrap();
        let mut rng = seeded_rng(3);
        assert!(matches!(run_suite(Suite::Units, f, 1, 10, &mut rng), Err(Error::BadRange(_))));
        assert!(run_suite(Suite::Pfaffian, f, 2, 10, &mut rng).unwrap().passed());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }
}
