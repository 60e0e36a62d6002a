//! Shorthand for elements of `F[Skew+_3]` and certificates of relations
//! modulo the image of `γ`.

use serde::{Deserialize, Serialize};

use super::{appendix_matrix, gamma_map, AppendixTable, GammaOutput, Letters};
use crate::chains::FormalSum;
use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::pfaffian::{SkewMatrix, SkewPlusMatrix};

/// A coefficient times a 3×3 generator, in one of four notations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "form")]
pub enum Bracket3 {
    /// `[a b; c]`: the generator with upper entries `(a, b, c)`.
    Square { a: Scalar, b: Scalar, c: Scalar },
    /// `[a] = [a a; a]`.
    Unit { a: Scalar },
    /// `x {a b; c} = x / (a⁻¹ - b⁻¹ + c⁻¹)² · [a⁻¹ b⁻¹; c⁻¹]`.
    Brace { x: Scalar, a: Scalar, b: Scalar, c: Scalar },
    /// `x {a} = a² x · [a⁻¹]`.
    BraceUnit { x: Scalar, a: Scalar },
}

fn generator(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<SkewPlusMatrix> {
    for v in [a, b, c] {
        if v.is_zero() {
            return Err(Error::ZeroUnit);
        }
    }
    SkewMatrix::new(a.field(), 3, vec![a.clone(), b.clone(), c.clone()])?.certify()
}

/// The normalized `(coefficient, generator)` pair.
pub fn bracket_to_skew3(br: &Bracket3) -> Result<(Scalar, SkewPlusMatrix)> {
    match br {
        Bracket3::Square { a, b, c } => Ok((a.field().one(), generator(a, b, c)?)),
        Bracket3::Unit { a } => Ok((a.field().one(), generator(a, a, a)?)),
        Bracket3::Brace { x, a, b, c } => {
            let (ai, bi, ci) = (a.inv()?, b.inv()?, c.inv()?);
            let s = &ai - &bi + &ci;
            if s.is_zero() {
                return Err(Error::DegenerateBrace);
            }
            Ok((x.checked_div(&(&s * &s))?, generator(&ai, &bi, &ci)?))
        }
        Bracket3::BraceUnit { x, a } => {
            let ai = a.inv()?;
            Ok((a * a * x, generator(&ai, &ai, &ai)?))
        }
    }
}

/// `Σ k · bracket`, collected.
pub fn brackets_to_sum(items: &[(Scalar, Bracket3)]) -> Result<GammaOutput> {
    let mut out = FormalSum::new();
    for (k, br) in items {
        let (c, g) = bracket_to_skew3(br)?;
        out.add_term(g, k * &c);
    }
    Ok(out)
}

/// Integer combination of 6×6 (more generally `(2n+2)`-size) generators whose
/// `γ`-image is claimed to equal a target.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub terms: Vec<(i64, SkewPlusMatrix)>,
}

/// `target == Σ k · γ(A)` exactly. Sizes must agree: every `A` has size
/// `m + 3` where `m` is the size of every target generator.
pub fn check_certificate(target: &GammaOutput, cert: &Certificate) -> Result<bool> {
    let mut sizes = cert.terms.iter().map(|(_, a)| a.size());
    if let Some(first) = sizes.next() {
        if sizes.any(|s| s != first) {
            return Err(Error::ShapeMismatch("certificate terms of different sizes".into()));
        }
        if let Some((g, _)) = target.iter().find(|(g, _)| g.size() + 3 != first) {
            return Err(Error::ShapeMismatch(format!(
                "target generator of size {} against certificate size {first}",
                g.size()
            )));
        }
    }
    let mut sum = FormalSum::new();
    for (k, a) in &cert.terms {
        let f = a.field();
        sum = sum.add(&gamma_map(a)?.scale(&f.from_i64(*k)));
    }
    Ok(&sum == target)
}

/// The seven brace terms whose sum is `γ` of the first appendix family at
/// inverted parameters.
pub fn seven_brace_relation(a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar, e: &Scalar) -> Result<Vec<(Scalar, Bracket3)>> {
    for v in [a, b, c, d, e] {
        if v.is_zero() {
            return Err(Error::ZeroUnit);
        }
    }
    let one = a.field().one();
    let brace = |x: Scalar, p: &Scalar, q: &Scalar| {
        (
            one.clone(),
            Bracket3::Brace {
                x,
                a: p.clone(),
                b: p.clone(),
                c: q.clone(),
            },
        )
    };
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    Ok(vec![
        brace(a2.clone() * (&d2 - &c2) / (&b2 * e), a, b),
        brace(-(a2.clone() * &d2) / (&c2 * e), a, c),
        brace(-(a2 / c), a, e),
        brace(b2.clone() * &d2 / (&c2 * e), b, c),
        brace(b2 / c, b, e),
        brace(b.clone(), d, e),
        brace(-b.clone(), c, e),
    ])
}

/// The relation above as a target together with its one-term certificate.
pub fn seven_brace_certificate(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    d: &Scalar,
    e: &Scalar,
) -> Result<(GammaOutput, Certificate)> {
    let target = brackets_to_sum(&seven_brace_relation(a, b, c, d, e)?)?;
    let f = a.field();
    let inv = Letters::new([a.inv()?, b.inv()?, c.inv()?, d.inv()?, e.inv()?, f.one()])?;
    let m = appendix_matrix(AppendixTable::A1, &inv).certify()?;
    Ok((target, Certificate { terms: vec![(1, m)] }))
}
