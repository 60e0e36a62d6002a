//! Skew-symmetric matrices, Pfaffians and the Skew+ certificate.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};
use crate::matrix::{Matrix, MatrixFile, Permutation};

mod modular;

/// Largest size `pf_recursive` accepts; beyond this the subset table is too big.
pub const MAX_RECURSIVE_SIZE: usize = 32;
/// Largest size for which `is_skew_plus` builds the full subset table.
pub const SUBSET_TABLE_LIMIT: usize = 16;
/// From this size on, rational Pfaffians are computed modulo primes.
pub const MODULAR_MIN_SIZE: usize = 8;
/// Largest Skew+ matrix accepted from external input.
pub const MAX_INPUT_SKEW_PLUS: usize = 16;

/// A `q x q` skew-symmetric matrix stored by its strict upper triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkewMatrix {
    field: Field,
    q: usize,
    upper: Vec<Scalar>,
}

fn upper_index(q: usize, i: usize, j: usize) -> usize {
    // 0-based, i < j
    i * q - i * (i + 1) / 2 + (j - i - 1)
}

impl SkewMatrix {
    pub fn new(field: Field, q: usize, upper: Vec<Scalar>) -> Result<Self> {
        if upper.len() != q * q.saturating_sub(1) / 2 {
            return Err(Error::ShapeMismatch(format!(
                "{} upper entries for size {q}",
                upper.len()
            )));
        }
        if let Some(x) = upper.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(x.field(), field));
        }
        Ok(SkewMatrix { field, q, upper })
    }

    /// Rows of the strict upper triangle: row `i` holds `a_{i,i+1} .. a_{i,q}`.
    pub fn from_upper_rows(field: Field, rows: &[Vec<Scalar>]) -> Result<Self> {
        let q = rows.len() + 1;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != q - 1 - i {
                return Err(Error::ShapeMismatch(format!("upper row {} has {} entries", i + 1, r.len())));
            }
        }
        Self::new(field, q, rows.iter().flatten().cloned().collect())
    }

    pub fn zero(field: Field, q: usize) -> Self {
        SkewMatrix {
            field,
            q,
            upper: vec![field.zero(); q * q.saturating_sub(1) / 2],
        }
    }

    /// The standard form `psi_{2n}`.
    pub fn psi(field: Field, n: usize) -> Self {
        Self::from_fn(field, 2 * n, |i, j| {
            if i % 2 == 1 && j == i + 1 {
                field.one()
            } else {
                field.zero()
            }
        })
    }

    /// Build from `f(i, j)` for `1 <= i < j <= q`.
    pub fn from_fn(field: Field, q: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut upper = Vec::with_capacity(q * q.saturating_sub(1) / 2);
        for i in 1..=q {
            for j in i + 1..=q {
                upper.push(f(i, j));
            }
        }
        SkewMatrix { field, q, upper }
    }

    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let q = m.rows();
        for i in 0..q {
            if !m[(i, i)].is_zero() {
                return Err(Error::NotSkew);
            }
            for j in i + 1..q {
                if m[(i, j)] != -&m[(j, i)] {
                    return Err(Error::NotSkew);
                }
            }
        }
        Ok(Self::from_fn(m.field(), q, |i, j| m[(i - 1, j - 1)].clone()))
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.field, self.q, self.q, |i, j| self.get(i + 1, j + 1))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn size(&self) -> usize {
        self.q
    }

    pub fn upper(&self) -> &[Scalar] {
        &self.upper
    }

    /// Entry `a_{ij}`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i >= 1 && j >= 1 && i <= self.q && j <= self.q, "index ({i}, {j}) out of range");
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[upper_index(self.q, i - 1, j - 1)].clone(),
            std::cmp::Ordering::Greater => -&self.upper[upper_index(self.q, j - 1, i - 1)],
            std::cmp::Ordering::Equal => self.field.zero(),
        }
    }

    fn at0(&self, i: usize, j: usize) -> &Scalar {
        &self.upper[upper_index(self.q, i, j)]
    }

    fn check_indices(&self, idx: &[usize]) -> Result<()> {
        match idx.iter().find(|&&i| i == 0 || i > self.q) {
            Some(&i) => Err(Error::IndexOutOfRange {
                index: i,
                size: self.q,
            }),
            None => Ok(()),
        }
    }

    /// Principal submatrix on the given 1-based indices, kept in ascending order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        self.check_indices(keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        Ok(Self::from_fn(self.field, keep.len(), |i, j| {
            self.at0(keep[i - 1] - 1, keep[j - 1] - 1).clone()
        }))
    }

    /// `A^_I`: delete the rows and columns listed in `removed` (1-based).
    pub fn remove_indices(&self, removed: &[usize]) -> Result<Self> {
        self.check_indices(removed)?;
        let keep: Vec<usize> = (1..=self.q).filter(|i| !removed.contains(i)).collect();
        self.restrict(&keep)
    }

    /// `B_{rs} = A_{σ(r)σ(s)}`.
    pub fn permuted(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.q {
            return Err(Error::ShapeMismatch(format!(
                "permutation of size {} for skew matrix of size {}",
                sigma.len(),
                self.q
            )));
        }
        Ok(Self::from_fn(self.field, self.q, |r, s| self.get(sigma.image(r), sigma.image(s))))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        SkewMatrix {
            field: self.field,
            q: self.q,
            upper: self.upper.iter().map(|x| x * c).collect(),
        }
    }

    /// `ᵗU A U`.
    pub fn congruence(&self, u: &Matrix) -> Result<Self> {
        let m = u.transpose().mul(&self.to_matrix())?.mul(u)?;
        Self::from_matrix(&m)
    }

    /// `A * v`: border with the column `v` and the row `-ᵗv`.
    pub fn star_extend(&self, v: &[Scalar]) -> Result<Self> {
        if v.len() != self.q {
            return Err(Error::ShapeMismatch(format!(
                "extension vector of length {} for size {}",
                v.len(),
                self.q
            )));
        }
        if let Some(x) = v.iter().find(|x| x.field() != self.field) {
            return Err(Error::FieldMismatch(x.field(), self.field));
        }
        Ok(Self::from_fn(self.field, self.q + 1, |i, j| {
            if j == self.q + 1 {
                v[i - 1].clone()
            } else {
                self.at0(i - 1, j - 1).clone()
            }
        }))
    }

    /// Pfaffian by expansion along the last column,
    /// `Pf(A) = Σ_{i<q} (-1)^{i+1} a_{iq} Pf(A^_{iq})`, with `Pf` of the
    /// empty matrix equal to 1. Subproblems are indexed by the set of
    /// surviving rows and cached, so each distinct minor is expanded once.
    pub fn pf_recursive(&self) -> Result<Scalar> {
        if self.q % 2 == 1 {
            return Err(Error::OddSize(self.q));
        }
        if self.q > MAX_RECURSIVE_SIZE {
            return Err(Error::TooLarge {
                size: self.q,
                max: MAX_RECURSIVE_SIZE,
            });
        }
        let full: u64 = if self.q == 64 { u64::MAX } else { (1u64 << self.q) - 1 };
        let mut memo = HashMap::new();
        Ok(self.pf_subset(full, &mut memo))
    }

    fn pf_subset(&self, set: u64, memo: &mut HashMap<u64, Scalar>) -> Scalar {
        if set == 0 {
            return self.field.one();
        }
        if let Some(v) = memo.get(&set) {
            return v.clone();
        }
        let last = 63 - set.leading_zeros() as usize;
        let rest = set & !(1u64 << last);
        let mut acc = self.field.zero();
        let mut bits = rest;
        let mut pos = 0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let a = self.at0(i, last);
            if !a.is_zero() {
                let sub = self.pf_subset(rest & !(1u64 << i), memo);
                let term = a * &sub;
                acc = if pos % 2 == 0 { acc + term } else { acc - term };
            }
            pos += 1;
        }
        memo.insert(set, acc.clone());
        acc
    }

    /// Pfaffian by skew-symmetric elimination. Rational matrices of size at
    /// least [`MODULAR_MIN_SIZE`] are eliminated modulo primes and lifted
    /// back; everything else uses [`SkewMatrix::pf_eliminate_field`].
    pub fn pf_eliminate(&self) -> Result<Scalar> {
        if self.q % 2 == 1 {
            return Err(Error::OddSize(self.q));
        }
        if self.field == Field::Rationals && self.q >= MODULAR_MIN_SIZE {
            return Ok(self.pf_modular());
        }
        self.pf_eliminate_field()
    }

    /// Rational Pfaffian via elimination modulo word-size primes.
    ///
    /// # Panics
    /// If the field is not `Q` or the size is odd.
    pub fn pf_modular(&self) -> Scalar {
        assert_eq!(self.field, Field::Rationals, "pf_modular needs rational entries");
        assert_eq!(self.q % 2, 0, "odd size");
        Scalar::Rational(modular::pf_rational(self.q, |i, j| match self.at0(i, j) {
            Scalar::Rational(r) => r.clone(),
            _ => unreachable!("rational matrix"),
        }))
    }

    /// Elimination with division in the field. Each step brings a nonzero
    /// entry of column `k` (the one with the largest row index) next to the
    /// diagonal by a simultaneous row/column swap, then clears rows and
    /// columns `k, k+1` by a congruence, which peels off the factor `a_{k,k+1}`.
    pub fn pf_eliminate_field(&self) -> Result<Scalar> {
        if self.q % 2 == 1 {
            return Err(Error::OddSize(self.q));
        }
        let q = self.q;
        // full dense copy, 0-based; the trailing block stays skew
        let mut a: Vec<Vec<Scalar>> = (0..q)
            .map(|i| (0..q).map(|j| self.get(i + 1, j + 1)).collect())
            .collect();
        let mut result = self.field.one();
        for k in (0..q).step_by(2) {
            let Some(piv) = (k + 1..q).rev().find(|&j| !a[k][j].is_zero()) else {
                return Ok(self.field.zero());
            };
            if piv != k + 1 {
                a.swap(piv, k + 1);
                for row in a.iter_mut() {
                    row.swap(piv, k + 1);
                }
                result = -result;
            }
            let p = a[k][k + 1].clone();
            result = result * &p;
            let pinv = p.inv().expect("nonzero pivot");
            for i in k + 2..q {
                let aik = -&a[k][i]; // a[i][k]
                let aik1 = -&a[k + 1][i]; // a[i][k+1]
                if aik.is_zero() && aik1.is_zero() {
                    continue;
                }
                for j in i + 1..q {
                    let t = &(&aik * &a[k + 1][j]) - &(&aik1 * &a[k][j]);
                    if !t.is_zero() {
                        let v = &a[i][j] + &(t * &pinv);
                        a[j][i] = -&v;
                        a[i][j] = v;
                    }
                }
            }
        }
        Ok(result)
    }

    /// Default Pfaffian algorithm.
    pub fn pf(&self) -> Result<Scalar> {
        self.pf_eliminate()
    }

    /// Whether every nonempty even principal submatrix is invertible.
    pub fn is_skew_plus(&self) -> bool {
        self.even_minors_invertible(self.q)
    }

    /// Whether every even principal submatrix of size at most `max_size`
    /// is invertible.
    pub fn even_minors_invertible(&self, max_size: usize) -> bool {
        let max_size = max_size.min(self.q);
        if max_size < 2 {
            return true;
        }
        // Size-2 minors are the entries themselves: a cheap filter that
        // rejects most failures before any subset enumeration.
        if self.upper.iter().any(Scalar::is_zero) {
            return false;
        }
        if self.q <= SUBSET_TABLE_LIMIT {
            self.skew_plus_table(max_size)
        } else {
            self.skew_plus_enumerate(max_size)
        }
    }

    /// Pfaffians of all even subsets, smallest masks first; each is a signed
    /// sum over Pfaffians of subsets two smaller, which are already known.
    fn skew_plus_table(&self, max_size: usize) -> bool {
        let q = self.q;
        let mut table: Vec<Option<Scalar>> = vec![None; 1usize << q];
        table[0] = Some(self.field.one());
        for set in 1usize..(1 << q) {
            if set.count_ones() % 2 == 1 || set.count_ones() as usize > max_size {
                continue;
            }
            let last = usize::BITS as usize - 1 - set.leading_zeros() as usize;
            let rest = set & !(1 << last);
            let mut acc = self.field.zero();
            let mut bits = rest;
            let mut pos = 0;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let a = self.at0(i, last);
                let sub = table[rest & !(1 << i)].as_ref().expect("smaller subset computed");
                if !a.is_zero() && !sub.is_zero() {
                    let term = a * sub;
                    acc = if pos % 2 == 0 { acc + term } else { acc - term };
                }
                pos += 1;
            }
            if acc.is_zero() {
                return false;
            }
            table[set] = Some(acc);
        }
        true
    }

    fn skew_plus_enumerate(&self, max_size: usize) -> bool {
        let q = self.q;
        for size in (4..=max_size).step_by(2) {
            let mut idx: Vec<usize> = (1..=size).collect();
            loop {
                let sub = self.restrict(&idx).expect("valid indices");
                if sub.pf_eliminate().expect("even size").is_zero() {
                    return false;
                }
                // next combination in lexicographic order
                let mut t = size;
                while t > 0 && idx[t - 1] == q - size + t {
                    t -= 1;
                }
                if t == 0 {
                    break;
                }
                idx[t - 1] += 1;
                for u in t..size {
                    idx[u] = idx[u - 1] + 1;
                }
            }
        }
        true
    }

    pub fn certify(self) -> Result<SkewPlusMatrix> {
        if self.is_skew_plus() {
            Ok(SkewPlusMatrix(self))
        } else {
            Err(Error::NotSkewPlus)
        }
    }

    pub fn to_file(&self) -> MatrixFile {
        let mut f = self.to_matrix().to_file();
        f.skew = Some(true);
        f
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("matrix serializes")
    }

    /// Read a square matrix file. Only the strict upper triangle is used.
    pub fn from_file(f: MatrixFile) -> Result<Self> {
        f.check_shape()?;
        if f.rows != f.cols {
            return Err(Error::NotSquare {
                rows: f.rows,
                cols: f.cols,
            });
        }
        let field = f.field;
        let q = f.rows;
        let mut upper = Vec::with_capacity(q * q.saturating_sub(1) / 2);
        for (i, row) in f.entries.into_iter().enumerate() {
            for x in row.into_iter().skip(i + 1) {
                upper.push(field.coerce(x)?);
            }
        }
        Self::new(field, q, upper)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: MatrixFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(f)
    }
}

impl fmt::Display for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 1 {
            return write!(f, "{}", if self.q == 0 { "[]" } else { "[0]" });
        }
        write!(f, "[")?;
        for i in 0..self.q - 1 {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (i + 1..self.q).map(|j| self.at0(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for SkewMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SkewMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Self::from_file(MatrixFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A skew matrix certified to lie in Skew+.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkewPlusMatrix(SkewMatrix);

impl SkewPlusMatrix {
    /// Wrap without checking. Callers must already know the matrix is Skew+.
    pub(crate) fn new_unchecked(a: SkewMatrix) -> Self {
        debug_assert!(a.q > SUBSET_TABLE_LIMIT || a.is_skew_plus());
        SkewPlusMatrix(a)
    }

    /// The unique element of Skew+_1.
    pub fn point(field: Field) -> Self {
        SkewPlusMatrix(SkewMatrix::zero(field, 1))
    }

    pub fn empty(field: Field) -> Self {
        SkewPlusMatrix(SkewMatrix::zero(field, 0))
    }

    pub fn inner(&self) -> &SkewMatrix {
        &self.0
    }

    pub fn into_inner(self) -> SkewMatrix {
        self.0
    }

    /// Faces inherit the certificate: principal submatrices of a principal
    /// submatrix are principal submatrices of the original.
    pub fn remove_indices(&self, removed: &[usize]) -> Result<Self> {
        Ok(SkewPlusMatrix(self.0.remove_indices(removed)?))
    }

    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        Ok(SkewPlusMatrix(self.0.restrict(keep)?))
    }

    /// Reindexing permutes the family of principal submatrices.
    pub fn permuted(&self, sigma: &Permutation) -> Result<Self> {
        Ok(SkewPlusMatrix(self.0.permuted(sigma)?))
    }

    /// Scaling by a unit keeps every even Pfaffian nonzero.
    pub fn scale(&self, c: &Scalar) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroUnit);
        }
        Ok(SkewPlusMatrix(self.0.scale(c)))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let a = SkewMatrix::from_json(s)?;
        if a.size() > MAX_INPUT_SKEW_PLUS {
            return Err(Error::TooLarge {
                size: a.size(),
                max: MAX_INPUT_SKEW_PLUS,
            });
        }
        a.certify()
    }
}

impl Deref for SkewPlusMatrix {
    type Target = SkewMatrix;

    fn deref(&self) -> &SkewMatrix {
        &self.0
    }
}

impl fmt::Display for SkewPlusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for SkewPlusMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SkewPlusMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let a = SkewMatrix::deserialize(d)?;
        if a.size() > MAX_INPUT_SKEW_PLUS {
            return Err(serde::de::Error::custom(Error::TooLarge {
                size: a.size(),
                max: MAX_INPUT_SKEW_PLUS,
            }));
        }
        a.certify().map_err(serde::de::Error::custom)
    }
}

/// `A * v` for a certified `A`. The result is not certified: whether it is
/// Skew+ depends on `v`.
pub fn star_extend_matrix(a: &SkewPlusMatrix, v: &[Scalar]) -> Result<SkewMatrix> {
    a.star_extend(v)
}

/// Both sides of the four-index Pfaffian identity for `m` and the triple
/// `(i, j, k)`. With `j1 < j2 < j3 < j4` the sorted indices:
///
/// `Pf(A^_{j1j2})Pf(A^_{j3j4}) - Pf(A^_{j1j3})Pf(A^_{j2j4}) + Pf(A^_{j1j4})Pf(A^_{j2j3})
///  = Pf(A) Pf(A^_{j1j2j3j4})`.
///
/// For `m < i < j < k` the left side is
/// `Pf(A^_{mi})Pf(A^_{jk}) - Pf(A^_{mj})Pf(A^_{ik}) + Pf(A^_{mk})Pf(A^_{ij})`.
pub fn dress_wenzel_sides(a: &SkewMatrix, m: usize, triple: (usize, usize, usize)) -> Result<(Scalar, Scalar)> {
    let mut j = [m, triple.0, triple.1, triple.2];
    j.sort_unstable();
    if j.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BadRange(format!("indices {j:?} are not distinct")));
    }
    let pf = |rem: &[usize]| -> Result<Scalar> { a.remove_indices(rem)?.pf() };
    let lhs = pf(&[j[0], j[1]])? * pf(&[j[2], j[3]])? - pf(&[j[0], j[2]])? * pf(&[j[1], j[3]])?
        + pf(&[j[0], j[3]])? * pf(&[j[1], j[2]])?;
    let rhs = a.pf()? * pf(&j)?;
    Ok((lhs, rhs))
}

/// Uniform random skew matrix with entries from the sampling pool.
pub fn random_skew<R: rand::Rng + ?Sized>(field: Field, q: usize, rng: &mut R, bound: u64) -> SkewMatrix {
    SkewMatrix::from_fn(field, q, |_, _| field.sample(rng, bound))
}

/// Rejection-sample an element of Skew+_q.
pub fn random_skew_plus<R: rand::Rng + ?Sized>(
    field: Field,
    q: usize,
    rng: &mut R,
    bound: u64,
    max_attempts: usize,
) -> Result<SkewPlusMatrix> {
    for _ in 0..max_attempts {
        if let Ok(a) = random_skew(field, q, rng, bound).certify() {
            return Ok(a);
        }
    }
    Err(Error::SamplerExhausted {
        attempts: max_attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| s(x)).collect()
    }

    /// Table a1 pattern: upper rows a,a,a,a,a / b,b,b,b / c,c,c / d,d / e.
    fn a1(a: i64, b: i64, c: i64, d: i64, e: i64) -> SkewMatrix {
        SkewMatrix::from_upper_rows(
            Q,
            &[ints(&[a; 5]), ints(&[b; 4]), ints(&[c; 3]), ints(&[d; 2]), ints(&[e])],
        )
        .unwrap()
    }

    /// Brute-force Pfaffian over all perfect matchings, independent of both algorithms.
    fn pf_matchings(a: &SkewMatrix) -> Scalar {
        fn go(a: &SkewMatrix, rest: &[usize]) -> Scalar {
            if rest.is_empty() {
                return a.field().one();
            }
            let first = rest[0];
            let mut acc = a.field().zero();
            for t in 1..rest.len() {
                let partner = rest[t];
                let remaining: Vec<usize> = rest.iter().copied().filter(|&x| x != first && x != partner).collect();
                // sign of moving `partner` next to `first`
                let term = a.get(first, partner) * go(a, &remaining);
                acc = if t % 2 == 1 { acc + term } else { acc - term };
            }
            acc
        }
        go(a, &(1..=a.size()).collect::<Vec<_>>())
    }

    #[test]
    fn small_pfaffians() {
        let m2 = SkewMatrix::from_upper_rows(Q, &[ints(&[7])]).unwrap();
        assert_eq!(m2.pf_recursive().unwrap(), s(7));
        let (a, b, c, d, e, f) = (2, 3, 5, 7, 11, 13);
        let m4 = SkewMatrix::from_upper_rows(Q, &[ints(&[a, b, c]), ints(&[d, e]), ints(&[f])]).unwrap();
        let expect = s(a * f - b * e + c * d);
        assert_eq!(m4.pf_recursive().unwrap(), expect);
        assert_eq!(m4.pf_eliminate().unwrap(), expect);
        assert!(SkewMatrix::zero(Q, 0).pf_recursive().unwrap().is_one());
        assert!(SkewMatrix::zero(Q, 0).pf_eliminate().unwrap().is_one());
        assert!(matches!(SkewMatrix::zero(Q, 3).pf_recursive(), Err(Error::OddSize(3))));
        assert!(matches!(SkewMatrix::zero(Q, 3).pf_eliminate(), Err(Error::OddSize(3))));
    }

    #[test]
    fn psi_has_pfaffian_one() {
        for n in 0..=20 {
            assert!(SkewMatrix::psi(Q, n).pf_eliminate().unwrap().is_one(), "n = {n}");
        }
        assert!(SkewMatrix::psi(Q, 6).pf_recursive().unwrap().is_one());
    }

    #[test]
    fn a1_pfaffian_and_face() {
        let m = a1(2, 3, 5, 7, 11);
        assert_eq!(m.pf_eliminate().unwrap(), s(2 * 5 * 11));
        let face = m.remove_indices(&[1, 2, 3]).unwrap();
        assert_eq!(face, SkewMatrix::from_upper_rows(Q, &[ints(&[7, 7]), ints(&[11])]).unwrap());
        assert_eq!(m.remove_indices(&[]).unwrap(), m);
        assert_eq!(SkewMatrix::psi(Q, 2).remove_indices(&[1, 2]).unwrap(), SkewMatrix::psi(Q, 1));
        assert!(matches!(m.remove_indices(&[7]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn a1_skew_plus_matches_exhaustive_check() {
        let m = a1(1, 2, 3, 4, 5);
        let mut brute = true;
        for mask in 1u32..(1 << 6) {
            if mask.count_ones() % 2 == 0 {
                let keep: Vec<usize> = (1..=6).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                if pf_matchings(&m.restrict(&keep).unwrap()).is_zero() {
                    brute = false;
                }
            }
        }
        assert_eq!(m.is_skew_plus(), brute);
    }

    #[test]
    fn skew_plus_small() {
        let a = SkewMatrix::from_upper_rows(Q, &[ints(&[3])]).unwrap();
        assert!(a.is_skew_plus());
        assert!(!SkewMatrix::zero(Q, 2).is_skew_plus());
        let three = SkewMatrix::from_upper_rows(Q, &[ints(&[4, 4]), ints(&[4])]).unwrap();
        assert!(three.is_skew_plus());
        assert!(SkewMatrix::zero(Q, 1).is_skew_plus());
        assert!(SkewMatrix::zero(Q, 0).is_skew_plus());
        // all entries nonzero but the 4x4 Pfaffian af - be + cd vanishes
        let bad = SkewMatrix::from_upper_rows(Q, &[ints(&[1, 2, 1]), ints(&[1, 1]), ints(&[1])]).unwrap();
        assert!(!bad.is_skew_plus());
    }

    #[test]
    fn large_skew_plus_paths_agree() {
        let mut rng = seeded_rng(3);
        let a = random_skew(Q, 8, &mut rng, 50);
        assert_eq!(a.skew_plus_table(8), a.skew_plus_enumerate(8) && !a.upper.iter().any(Scalar::is_zero));
    }

    #[test]
    fn star_extension() {
        let psi2 = SkewMatrix::psi(Q, 1);
        let ext = psi2.star_extend(&ints(&[0, 0])).unwrap();
        assert_eq!(ext.size(), 3);
        assert_eq!(ext.restrict(&[1, 2]).unwrap(), psi2);
        assert!(ext.get(1, 3).is_zero() && ext.get(3, 2).is_zero());
        assert_eq!(SkewMatrix::zero(Q, 0).star_extend(&[]).unwrap(), SkewMatrix::zero(Q, 1));
        assert!(psi2.star_extend(&ints(&[1])).is_err());
        let v = ints(&[5, 6]);
        let e = psi2.star_extend(&v).unwrap();
        assert_eq!(e.get(3, 1), s(-5));
    }

    #[test]
    fn json_reads_upper_triangle_only() {
        let text = r#"{"field":"q","rows":2,"cols":2,"skew":true,"entries":[[9,"3/2"],[0,9]]}"#;
        let a = SkewMatrix::from_json(text).unwrap();
        assert_eq!(a.get(2, 1), Scalar::ratio(-3, 2));
        assert_eq!(SkewMatrix::from_json(&a.to_json()).unwrap(), a);
        let p = SkewPlusMatrix::from_json(text).unwrap();
        assert_eq!(p.inner(), &a);
        let zero = r#"{"field":"q","rows":2,"cols":2,"skew":true,"entries":[[0,0],[0,0]]}"#;
        assert!(matches!(SkewPlusMatrix::from_json(zero), Err(Error::NotSkewPlus)));
    }

    #[test]
    fn display_uses_upper_rows() {
        let a = SkewMatrix::from_upper_rows(Q, &[ints(&[1, 2]), ints(&[3])]).unwrap();
        assert_eq!(a.to_string(), "[1, 2; 3]");
    }

    fn dress_wenzel_holds(a: &SkewMatrix, n: usize, t: (usize, usize, usize)) -> bool {
        let (l, r) = dress_wenzel_sides(a, 2 * n - 1, t).unwrap();
        l == r
    }

    #[test]
    fn dress_wenzel_on_a1() {
        let a = a1(2, 3, 5, 7, 11);
        assert!(dress_wenzel_holds(&a, 2, (4, 5, 6)));
        assert!(dress_wenzel_holds(&a, 2, (1, 2, 6)));
        // literal form for m < i < j < k
        let pf = |rem: &[usize]| a.remove_indices(rem).unwrap().pf().unwrap();
        let lhs = pf(&[3, 4]) * pf(&[5, 6]) - pf(&[3, 5]) * pf(&[4, 6]) + pf(&[3, 6]) * pf(&[4, 5]);
        assert_eq!(lhs, a.pf().unwrap() * pf(&[3, 4, 5, 6]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn algorithms_agree(half in 0usize..=5, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let f = [Q, Field::prime(5).unwrap(), Field::function_field(2).unwrap()][seed as usize % 3];
            let a = random_skew(f, 2 * half, &mut rng, 6);
            let r = a.pf_recursive().unwrap();
            prop_assert_eq!(&r, &a.pf_eliminate().unwrap());
            if half <= 4 {
                prop_assert_eq!(r, pf_matchings(&a));
            }
        }

        #[test]
        fn modular_matches_field_elimination(half in 0usize..=8, bound in 1u64..1_000_000, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let mut a = random_skew(Q, 2 * half, &mut rng, bound);
            if half > 0 && seed % 5 == 0 {
                // a repeated row forces Pf = 0
                a = SkewMatrix::from_fn(Q, 2 * half, |i, j| {
                    let k = |x: usize| if x == 2 { 1 } else { x };
                    if k(i) == k(j) { Q.zero() } else { a.get(k(i), k(j)) }
                });
            }
            prop_assert_eq!(a.pf_modular(), a.pf_eliminate_field().unwrap());
        }

        #[test]
        fn pf_squared_is_det(half in 0usize..=4, seed in any::<u64>()) {
            let a = random_skew(Q, 2 * half, &mut seeded_rng(seed), 20);
            let p = a.pf().unwrap();
            prop_assert_eq!(&p * &p, a.to_matrix().det().unwrap());
        }

        #[test]
        fn congruence_scales_by_det(half in 1usize..=3, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let q = 2 * half;
            let a = random_skew(Q, q, &mut rng, 10);
            let u = Matrix::from_fn(Q, q, q, |_, _| Q.sample(&mut rng, 5));
            let lhs = a.congruence(&u).unwrap().pf().unwrap();
            prop_assert_eq!(lhs, u.det().unwrap() * a.pf().unwrap());
        }

        #[test]
        fn homogeneity(half in 0usize..=4, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let a = random_skew(Q, 2 * half, &mut rng, 10);
            let c = Q.sample(&mut rng, 10);
            prop_assert_eq!(a.scale(&c).pf().unwrap(), c.pow(half as i32).unwrap() * a.pf().unwrap());
        }

        #[test]
        fn dress_wenzel(n in 2usize..=3, seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let a = random_skew_plus(Q, 2 * n + 2, &mut rng, 1000, 50).unwrap();
            let pool: Vec<usize> = (1..=2 * n + 2).filter(|&x| x != 2 * n - 1).collect();
            let mut idx: Vec<usize> = rand::seq::index::sample(&mut rng, pool.len(), 3).iter().map(|t| pool[t]).collect();
            idx.sort_unstable();
            prop_assert!(dress_wenzel_holds(&a, n, (idx[0], idx[1], idx[2])));
        }
    }
}
