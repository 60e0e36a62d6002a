//! Searches for units with prescribed nonvanishing sums, used to show that
//! certain additive maps out of `Z[F*]` are onto.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chains::partial_sums;
use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};
use crate::unimod::pooled_search;

/// `u1 + u2 + u3 = 0` with all `u_i` nonzero and `1/u1 + 1/u2 + 1/u3 != 0`.
///
/// Tries `(1, 2, -3)` first, then searches.
pub fn find_inverse_triple<R: Rng + ?Sized>(field: Field, rng: &mut R, max_attempts: usize) -> Result<[Scalar; 3]> {
    let accept = |u1: Scalar, u2: Scalar| -> Option<[Scalar; 3]> {
        let u3 = -(&u1 + &u2);
        if u1.is_zero() || u2.is_zero() || u3.is_zero() {
            return None;
        }
        let w = u1.inv().ok()? + u2.inv().ok()? + u3.inv().ok()?;
        (!w.is_zero()).then_some([u1, u2, u3])
    };
    if let Some(t) = accept(field.from_i64(1), field.from_i64(2)) {
        return Ok(t);
    }
    pooled_search(rng, max_attempts, |rng, bound| {
        accept(field.sample(rng, bound), field.sample(rng, bound))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WVariant {
    /// `w = Σ ± 1/u_I`.
    Linear,
    /// `w = Σ ± 1/u_I²`.
    Square,
}

/// Result of [`find_w_units`]; `s` is the alternating sum of squares, always 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WUnits {
    pub u: [Scalar; 3],
    pub w: Scalar,
    pub s: Scalar,
}

/// `(-1)^{|I|+1}` for the bitmask `I`.
fn sign(mask: usize) -> i64 {
    if mask.count_ones() % 2 == 1 {
        1
    } else {
        -1
    }
}

fn alternating(sums: &[Scalar], mut f: impl FnMut(&Scalar) -> Scalar) -> Scalar {
    let field = sums[1].field();
    sums.iter()
        .enumerate()
        .skip(1)
        .fold(field.zero(), |acc, (mask, x)| acc + f(x).scale_int(sign(mask)))
}

/// Units `u1, u2, u3` whose seven partial sums `u_I` are units and with
/// `w = Σ_I (-1)^{|I|+1} u_I^{-k} != 0` (`k = 1` or `2` by variant).
///
/// Also checks `s = Σ_I (-1)^{|I|+1} u_I² = 0` and, for the linear variant,
/// that `c ↦ c²/b³ + 1/c` summed with the same signs over the `u_I` gives `w`.
pub fn find_w_units<R: Rng + ?Sized>(
    b: &Scalar,
    variant: WVariant,
    rng: &mut R,
    max_attempts: usize,
) -> Result<WUnits> {
    if b.is_zero() {
        return Err(Error::ZeroUnit);
    }
    let field = b.field();
    let (u, sums, w) = pooled_search(rng, max_attempts, |rng, bound| {
        let u: [Scalar; 3] = std::array::from_fn(|_| field.sample(rng, bound));
        let sums = partial_sums(&u);
        if sums[1..].iter().any(Scalar::is_zero) {
            return None;
        }
        let w = match variant {
            WVariant::Linear => alternating(&sums, |x| x.inv().expect("unit")),
            WVariant::Square => alternating(&sums, |x| (x * x).inv().expect("unit")),
        };
        (!w.is_zero()).then_some((u, sums, w))
    })?;
    let s = alternating(&sums, |x| x * x);
    if !s.is_zero() {
        return Err(Error::InternalInvariant(format!("alternating sum of squares is {s}")));
    }
    if variant == WVariant::Linear {
        let b3 = b * b * b;
        let image = alternating(&sums, |c| (c * c) / &b3 + c.inv().expect("unit"));
        if image != w {
            return Err(Error::InternalInvariant("image of the partial sums differs from w".into()));
        }
    }
    Ok(WUnits { u, w, s })
}
