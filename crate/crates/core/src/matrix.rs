//! Dense exact matrices.
//!
//! Storage is row-major and element access through `Index` is 0-based.
//! Anything that takes row/column *labels* (permutations, index sets) uses
//! 1-based labels, matching the conventions of the algebra it implements.

use std::fmt;
use std::ops::{Index, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(x) = data.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(x.field(), field));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    /// Build from a 0-based entry function.
    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert_eq!(x.field(), field, "entry outside the matrix field");
                data.push(x);
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        Self::from_fn(field, rows.len(), c, |i, j| field.from_i64(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::ShapeMismatch("column length differs from row count".into()));
        }
        let m = Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone());
        Ok(m)
    }

    pub fn column_vector(v: &[Scalar], field: Field) -> Self {
        Self::from_fn(field, v.len(), 1, |i, _| v[i].clone())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert_eq!(x.field(), self.field, "entry outside the matrix field");
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.field.zero(), |acc, j| {
                    if v[j].is_zero() {
                        acc
                    } else {
                        acc + &self[(i, j)] * &v[j]
                    }
                })
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("operands differ in shape".into()));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(self.with_data(data))
    }

    fn with_data(&self, data: Vec<Scalar>) -> Self {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.with_data(self.data.iter().map(|x| x * c).collect())
    }

    /// Submatrix with the listed 0-based rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.field, rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Determinant. Over `Q` the rows are cleared of denominators and the
    /// integer matrix is reduced with Bareiss' fraction-free elimination;
    /// over the other fields plain Gaussian elimination is already exact.
    pub fn det(&self) -> Result<Scalar> {
        self.require_square()?;
        match self.field {
            Field::Rationals => Ok(Scalar::Rational(self.det_bareiss_rational())),
            _ => Ok(self.det_gauss()),
        }
    }

    fn det_bareiss_rational(&self) -> BigRational {
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row: Vec<&BigRational> = (0..n)
                    .map(|j| self[(i, j)].as_rational().expect("rational entry"))
                    .collect();
                let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                scale *= &l;
                row.iter().map(|r| r.numer() * (&l / r.denom())).collect()
            })
            .collect();
        let mut sign = 1;
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigRational::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let d = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
        BigRational::new(d * sign, scale)
    }

    fn det_gauss(&self) -> Scalar {
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[(r, k)].is_zero()) else {
                return self.field.zero();
            };
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let piv = m[(k, k)].clone();
            det = det * &piv;
            let pinv = piv.inv().expect("nonzero pivot");
            for i in k + 1..n {
                let f = &m[(i, k)] * &pinv;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = &m[(i, j)] - &(&f * &m[(k, j)]);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![self.field.zero(); self.cols];
                x[f] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = -&r[(row, f)];
                }
                x
            })
            .collect()
    }

    /// One solution of `A x = b` (free variables set to zero), or `None` if
    /// the system is inconsistent. Works for any shape.
    pub fn solve_particular(&self, b: &[Scalar]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = Self::from_fn(self.field, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    /// Solve `A X = B` for square invertible `A`.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        self.require_square()?;
        if b.rows != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side has {} rows, expected {}",
                b.rows, self.rows
            )));
        }
        let n = self.rows;
        let aug = Self::from_fn(self.field, n, n + b.cols, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                b[(i, j - n)].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return Err(Error::Singular);
        }
        Ok(r.select(&(0..n).collect::<Vec<_>>(), &(n..n + b.cols).collect::<Vec<_>>()))
    }

    pub fn solve_vec(&self, b: &[Scalar]) -> Result<Vector> {
        Ok(self.solve(&Self::column_vector(b, self.field))?.column(0))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.solve(&Self::identity(self.field, self.rows))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Reorder rows and/or columns: with `Side::Both`, `B[r][s] = A[σ(r)][σ(s)]`.
    pub fn apply_permutation(&self, sigma: &Permutation, side: Side) -> Result<Matrix> {
        let need_rows = matches!(side, Side::Rows | Side::Both);
        let need_cols = matches!(side, Side::Columns | Side::Both);
        if (need_rows && sigma.len() != self.rows) || (need_cols && sigma.len() != self.cols) {
            return Err(Error::ShapeMismatch(format!(
                "permutation of size {} for a {}x{} matrix",
                sigma.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(Self::from_fn(self.field, self.rows, self.cols, |i, j| {
            let r = if need_rows { sigma.image0(i) } else { i };
            let c = if need_cols { sigma.image0(j) } else { j };
            self[(r, c)].clone()
        }))
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            skew: None,
            entries: (0..self.rows).map(|i| self.row(i)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Matrix> {
        let f: MatrixFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        f.into_matrix()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        Matrix::mul(self, rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Rows,
    Columns,
    Both,
}

/// Bijection of `{1..q}` given by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let q = images.len();
        let mut seen = vec![false; q];
        for &x in &images {
            if x == 0 || x > q {
                return Err(Error::IndexOutOfRange { index: x, size: q });
            }
            if std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::BadRange(format!("{x} repeated in permutation")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(q: usize) -> Self {
        Permutation {
            images: (1..=q).collect(),
        }
    }

    /// The transposition of `k` and `k+1`.
    pub fn adjacent_swap(q: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= q {
            return Err(Error::IndexOutOfRange { index: k, size: q });
        }
        let mut p = Self::identity(q);
        p.images.swap(k - 1, k);
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// σ(i), 1-based.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    fn image0(&self, i: usize) -> usize {
        self.images[i] - 1
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.image(i)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// On-disk matrix format. Entries may be scalar literals or bare integers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skew: Option<bool>,
    pub entries: Vec<Vec<Scalar>>,
}

/// Hard cap on dimensions accepted from files.
pub const MAX_FILE_DIM: usize = 512;

impl MatrixFile {
    pub fn check_shape(&self) -> Result<()> {
        if self.rows > MAX_FILE_DIM || self.cols > MAX_FILE_DIM {
            return Err(Error::TooLarge {
                size: self.rows.max(self.cols),
                max: MAX_FILE_DIM,
            });
        }
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::ShapeMismatch(format!(
                "entries do not form a {}x{} array",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn into_matrix(self) -> Result<Matrix> {
        self.check_shape()?;
        let field = self.field;
        let data = self
            .entries
            .into_iter()
            .flatten()
            .map(|x| field.coerce(x))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(field, self.rows, self.cols, data)
    }
}

/// Linear independence of the given vectors.
pub fn independent(field: Field, dim: usize, vs: &[Vector]) -> bool {
    if vs.len() > dim {
        return false;
    }
    match Matrix::from_columns(field, dim, vs) {
        Ok(m) => m.rank() == vs.len(),
        Err(_) => false,
    }
}
