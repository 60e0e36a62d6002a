//! The standard symplectic space `(F^{2n}, psi_{2n})` and its groups.
//!
//! `Sp_{2n}` is realized by `2n x 2n` matrices and `Sp_{2n+1}` by the
//! `(2n+2) x (2n+2)` matrices of `Sp_{2n+2}` fixing `e_1`, which have the shape
//!
//! ```text
//! [ 1  c  ᵗuψM ]
//! [ 0  1   0   ]
//! [ 0  u   M   ]
//! ```

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};
use crate::matrix::{independent, Matrix, Vector};
use crate::pfaffian::SkewMatrix;

/// `F^{2n}` with the form `⟨x, y⟩ = Σ_r x_{2r-1} y_{2r} - x_{2r} y_{2r-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticSpace {
    n: usize,
    field: Field,
}

impl SymplecticSpace {
    pub fn new(field: Field, n: usize) -> Self {
        SymplecticSpace { n, field }
    }

    /// Space of the given (even) dimension.
    pub fn of_dim(field: Field, dim: usize) -> Result<Self> {
        if dim % 2 == 1 {
            return Err(Error::BadParity(format!("symplectic space of odd dimension {dim}")));
        }
        Ok(Self::new(field, dim / 2))
    }

    pub fn half_rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn psi(&self) -> SkewMatrix {
        SkewMatrix::psi(self.field, self.n)
    }

    /// Standard basis vector `e_i`, 1-based.
    pub fn e(&self, i: usize) -> Vector {
        unit(self.field, self.dim(), i)
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.field.zero(); self.dim()]
    }

    pub fn standard_basis(&self) -> VectorSeq {
        VectorSeq {
            field: self.field,
            dim: self.dim(),
            vectors: (1..=self.dim()).map(|i| self.e(i)).collect(),
        }
    }

    pub fn pairing(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        pairing(x, y, self.field)
    }

    pub fn check_vector(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} in a space of dimension {}",
                v.len(),
                self.dim()
            )));
        }
        match v.iter().find(|x| x.field() != self.field) {
            Some(x) => Err(Error::FieldMismatch(x.field(), self.field)),
            None => Ok(()),
        }
    }

    pub fn gram(&self, v: &VectorSeq) -> Result<SkewMatrix> {
        if v.dim != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "vectors of dimension {} in a space of dimension {}",
                v.dim,
                self.dim()
            )));
        }
        Ok(gram_of(self.field, &v.vectors))
    }
}

pub(crate) fn unit(field: Field, dim: usize, i: usize) -> Vector {
    (1..=dim).map(|k| if k == i { field.one() } else { field.zero() }).collect()
}

pub(crate) fn pairing(x: &[Scalar], y: &[Scalar], field: Field) -> Scalar {
    let mut acc = field.zero();
    for r in 0..x.len() / 2 {
        let (a, b) = (&x[2 * r], &x[2 * r + 1]);
        let (c, d) = (&y[2 * r], &y[2 * r + 1]);
        if !a.is_zero() && !d.is_zero() {
            acc = acc + a * d;
        }
        if !b.is_zero() && !c.is_zero() {
            acc = acc - b * c;
        }
    }
    acc
}

pub(crate) fn gram_of(field: Field, vs: &[Vector]) -> SkewMatrix {
    SkewMatrix::from_fn(field, vs.len(), |i, j| pairing(&vs[i - 1], &vs[j - 1], field))
}

/// `Γ(v)` for a sequence in a symplectic space.
pub fn gram(v: &VectorSeq, space: &SymplecticSpace) -> Result<SkewMatrix> {
    space.gram(v)
}

/// An ordered sequence of vectors in `F^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorSeq {
    field: Field,
    dim: usize,
    vectors: Vec<Vector>,
}

impl VectorSeq {
    pub fn new(field: Field, dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::ShapeMismatch(format!("vector of length {} in dimension {dim}", v.len())));
            }
            if let Some(x) = v.iter().find(|x| x.field() != field) {
                return Err(Error::FieldMismatch(x.field(), field));
            }
        }
        Ok(VectorSeq { field, dim, vectors })
    }

    pub fn empty(field: Field, dim: usize) -> Self {
        VectorSeq {
            field,
            dim,
            vectors: Vec::new(),
        }
    }

    pub fn from_matrix_columns(m: &Matrix) -> Self {
        VectorSeq {
            field: m.field(),
            dim: m.rows(),
            vectors: m.columns(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// `v_i`, 1-based.
    pub fn get(&self, i: usize) -> &Vector {
        &self.vectors[i - 1]
    }

    /// Drop the `i`-th vector (1-based).
    pub fn face(&self, i: usize) -> Self {
        let mut vectors = self.vectors.clone();
        vectors.remove(i - 1);
        VectorSeq { vectors, ..self.clone_shape() }
    }

    /// Subsequence on the given 1-based positions, in the given order.
    pub fn select(&self, idx: &[usize]) -> Self {
        VectorSeq {
            vectors: idx.iter().map(|&i| self.vectors[i - 1].clone()).collect(),
            ..self.clone_shape()
        }
    }

    fn clone_shape(&self) -> Self {
        VectorSeq {
            field: self.field,
            dim: self.dim,
            vectors: Vec::new(),
        }
    }

    pub fn push(&mut self, v: Vector) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::ShapeMismatch(format!("vector of length {} in dimension {}", v.len(), self.dim)));
        }
        self.vectors.push(v);
        Ok(())
    }

    /// `(x, v_1, ..., v_q)`.
    pub fn prepend(&self, x: Vector) -> Result<Self> {
        let mut vectors = Vec::with_capacity(self.len() + 1);
        vectors.push(x);
        vectors.extend(self.vectors.iter().cloned());
        Self::new(self.field, self.dim, vectors)
    }

    /// Columns as a `dim x len` matrix.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.dim, &self.vectors).expect("consistent lengths")
    }

    /// Pad every vector with zeros up to dimension `dim`.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::BadRange(format!("cannot embed dimension {} into {dim}", self.dim)));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.resize(dim, self.field.zero());
                w
            })
            .collect();
        Ok(VectorSeq {
            field: self.field,
            dim,
            vectors,
        })
    }

    /// Keep the first `dim` coordinates of every vector.
    pub fn truncate(&self, dim: usize) -> Result<Self> {
        if dim > self.dim {
            return Err(Error::BadRange(format!("cannot truncate dimension {} to {dim}", self.dim)));
        }
        Ok(VectorSeq {
            field: self.field,
            dim,
            vectors: self.vectors.iter().map(|v| v[..dim].to_vec()).collect(),
        })
    }

    pub fn apply(&self, g: &Matrix) -> Result<Self> {
        let vectors = self.vectors.iter().map(|v| g.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        Self::new(self.field, g.rows(), vectors)
    }

    pub fn is_independent(&self) -> bool {
        independent(self.field, self.dim, &self.vectors)
    }
}

impl fmt::Display for VectorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.vectors.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", parts.join(", "))?;
        }
        write!(f, ")")
    }
}

/// Subspace of a symplectic space given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    space: SymplecticSpace,
    basis: VectorSeq,
}

impl Subspace {
    pub fn new(space: SymplecticSpace, basis: VectorSeq) -> Result<Self> {
        if basis.dim != space.dim() || basis.field != space.field {
            return Err(Error::ShapeMismatch("basis does not live in the ambient space".into()));
        }
        if !basis.is_independent() {
            return Err(Error::RankMismatch(basis.to_matrix().rank(), basis.len()));
        }
        Ok(Subspace { space, basis })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn basis(&self) -> &VectorSeq {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn gram(&self) -> SkewMatrix {
        gram_of(self.space.field, &self.basis.vectors)
    }

    /// Coefficient vectors of the kernel of the restricted form.
    fn gram_kernel(&self) -> Vec<Vector> {
        self.gram().to_matrix().nullspace()
    }

    /// Non-degenerate: kernel of rank 0 (even rank) or 1 (odd rank).
    pub fn is_nondegenerate(&self) -> bool {
        self.gram_kernel().len() == self.rank() % 2
    }

    fn combine(&self, coeffs: &[Scalar]) -> Vector {
        combine(self.space.field, self.space.dim(), &self.basis.vectors, coeffs)
    }

    /// `V^⊥` in the ambient space.
    pub fn orthogonal_complement(&self) -> Result<Subspace> {
        let rows = pairing_rows(&self.space, &self.basis.vectors);
        let ns = rows.nullspace();
        Subspace::new(self.space, VectorSeq::new(self.space.field, self.space.dim(), ns)?)
    }

    pub fn apply(&self, g: &Matrix) -> Result<Subspace> {
        Subspace::new(self.space, self.basis.apply(g)?)
    }
}

fn combine(field: Field, dim: usize, vs: &[Vector], coeffs: &[Scalar]) -> Vector {
    let mut out = vec![field.zero(); dim];
    for (v, c) in vs.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = &*o + &(c * x);
        }
    }
    out
}

/// Matrix whose rows are `y ↦ ⟨v, y⟩` for each `v`.
fn pairing_rows(space: &SymplecticSpace, vs: &[Vector]) -> Matrix {
    let dim = space.dim();
    let basis: Vec<Vector> = (1..=dim).map(|k| space.e(k)).collect();
    Matrix::from_fn(space.field, vs.len(), dim, |i, j| space.pairing(&vs[i], &basis[j]))
}

/// Some `y` with `⟨vs[i], y⟩ = rhs[i]` for all `i`.
pub(crate) fn solve_pairings(space: &SymplecticSpace, vs: &[Vector], rhs: &[Scalar]) -> Result<Option<Vector>> {
    pairing_rows(space, vs).solve_particular(rhs)
}

/// Generator of `V ∩ V^⊥` for a non-degenerate `V` of odd rank.
pub fn radical_line(v: &Subspace) -> Result<Vector> {
    if v.rank().is_multiple_of(2) {
        return Err(Error::NotNonDegenerate(format!("rank {} is even", v.rank())));
    }
    let ker = v.gram_kernel();
    if ker.len() != 1 {
        return Err(Error::NotNonDegenerate(format!("radical has rank {}", ker.len())));
    }
    Ok(v.combine(&ker[0]))
}

/// Split a non-degenerate odd-rank `V` as `V0 ⊥ Fx`, with `y ⊥ V0` and `⟨x, y⟩ = 1`.
pub fn split_odd_space(v: &Subspace) -> Result<(Subspace, Vector, Vector)> {
    let (v0, x, _) = split_radical(v)?;
    let mut rows = v0.basis.vectors.clone();
    rows.push(x.clone());
    let mut rhs = vec![v.space.field.zero(); v0.rank()];
    rhs.push(v.space.field.one());
    let y = solve_pairings(&v.space, &rows, &rhs)?
        .ok_or_else(|| Error::InternalInvariant("no partner for the radical vector".into()))?;
    Ok((v0, x, y))
}

/// `(V0, x, m)`: `x` spans the radical and `V0` drops basis vector `m` (0-based),
/// the last one with a nonzero coefficient in `x`.
fn split_radical(v: &Subspace) -> Result<(Subspace, Vector, usize)> {
    if v.rank().is_multiple_of(2) {
        return Err(Error::NotNonDegenerate(format!("rank {} is even", v.rank())));
    }
    let ker = v.gram_kernel();
    if ker.len() != 1 {
        return Err(Error::NotNonDegenerate(format!("radical has rank {}", ker.len())));
    }
    let lambda = &ker[0];
    let m = (0..lambda.len())
        .rev()
        .find(|&i| !lambda[i].is_zero())
        .expect("nonzero kernel vector");
    let x = v.combine(lambda);
    let keep: Vec<Vector> = (0..v.rank()).filter(|&i| i != m).map(|i| v.basis.vectors[i].clone()).collect();
    let v0 = Subspace::new(v.space, VectorSeq::new(v.space.field, v.space.dim(), keep)?)?;
    Ok((v0, x, m))
}

/// Symplectic basis of a non-degenerate even-rank subspace.
///
/// Takes the first remaining vector, pairs it with the first later vector it
/// does not annihilate (scaled to pairing 1), then projects the rest onto the
/// orthogonal complement of that hyperbolic plane.
pub fn symplectic_basis(v: &Subspace) -> Result<VectorSeq> {
    if v.rank() % 2 == 1 {
        return Err(Error::Degenerate);
    }
    let sp = v.space;
    let mut rest: Vec<Vector> = v.basis.vectors.clone();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let a = rest.remove(0);
        let pos = rest
            .iter()
            .position(|w| !sp.pairing(&a, w).is_zero())
            .ok_or(Error::Degenerate)?;
        let b0 = rest.remove(pos);
        let s = sp.pairing(&a, &b0).inv()?;
        let b: Vector = b0.iter().map(|x| x * &s).collect();
        // w - ⟨w, b⟩ a + ⟨w, a⟩ b = w + ⟨b, w⟩ a - ⟨a, w⟩ b
        for w in rest.iter_mut() {
            let ca = sp.pairing(&b, w);
            let cb = sp.pairing(&a, w);
            for k in 0..w.len() {
                let t = &(&ca * &a[k]) - &(&cb * &b[k]);
                w[k] = &w[k] + &t;
            }
        }
        out.push(a);
        out.push(b);
    }
    VectorSeq::new(sp.field, sp.dim(), out)
}

/// An element of `Sp_size`; odd sizes are realized one dimension up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpMatrix {
    size: usize,
    m: Matrix,
}

/// Dimension of the matrices realizing `Sp_size`.
pub fn realized_dim(size: usize) -> usize {
    size + size % 2
}

impl SpMatrix {
    pub fn new(m: Matrix, size: usize) -> Result<Self> {
        if is_sp_member(&m, size)? {
            Ok(SpMatrix { size, m })
        } else {
            Err(Error::NotSymplectic(size))
        }
    }

    pub fn identity(field: Field, size: usize) -> Self {
        SpMatrix {
            size,
            m: Matrix::identity(field, realized_dim(size)),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    pub fn mul(&self, other: &SpMatrix) -> Result<SpMatrix> {
        if self.size != other.size {
            return Err(Error::ShapeMismatch(format!("Sp_{} times Sp_{}", self.size, other.size)));
        }
        Ok(SpMatrix {
            size: self.size,
            m: self.m.mul(&other.m)?,
        })
    }

    pub fn inverse(&self) -> Result<SpMatrix> {
        Ok(SpMatrix {
            size: self.size,
            m: self.m.inverse()?,
        })
    }

    /// `c` of the block form (odd sizes only).
    pub fn odd_c(&self) -> Result<Scalar> {
        self.require_odd()?;
        Ok(self.m[(0, 1)].clone())
    }

    /// `u` of the block form (odd sizes only).
    pub fn odd_u(&self) -> Result<Vector> {
        self.require_odd()?;
        Ok((2..self.m.rows()).map(|i| self.m[(i, 1)].clone()).collect())
    }

    fn require_odd(&self) -> Result<()> {
        if self.size % 2 == 1 {
            Ok(())
        } else {
            Err(Error::BadParity(format!("Sp_{} is not an odd group", self.size)))
        }
    }
}

/// Membership in `Sp_size`, with `A` of the realized dimension.
pub fn is_sp_member(a: &Matrix, size: usize) -> Result<bool> {
    let d = realized_dim(size);
    if a.rows() != d || a.cols() != d {
        return Err(Error::ShapeMismatch(format!(
            "Sp_{size} is realized by {d}x{d} matrices, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let psi = SkewMatrix::psi(a.field(), d / 2).to_matrix();
    if a.transpose().mul(&psi)?.mul(a)? != psi {
        return Ok(false);
    }
    if size.is_multiple_of(2) {
        return Ok(true);
    }
    let f = a.field();
    let first_col_ok = (0..d).all(|i| if i == 0 { a[(i, 0)].is_one() } else { a[(i, 0)].is_zero() });
    let second_row_ok = (0..d).all(|j| if j == 1 { a[(1, j)].is_one() } else { a[(1, j)].is_zero() });
    if !first_col_ok || !second_row_ok {
        return Ok(false);
    }
    // top-right block must be ᵗu ψ M
    let rest: Vec<usize> = (2..d).collect();
    let u = a.select(&rest, &[1]);
    let m = a.select(&rest, &rest);
    let psi_small = SkewMatrix::psi(f, d / 2 - 1).to_matrix();
    let w = u.transpose().mul(&psi_small)?.mul(&m)?;
    Ok(w == a.select(&[0], &rest))
}

/// Identity plus `a` at the 1-based position `(i, j)`.
pub fn elementary(i: usize, j: usize, a: &Scalar, dim: usize) -> Result<Matrix> {
    if i == j || i == 0 || j == 0 || i > dim || j > dim {
        return Err(Error::BadIndices { i, j, dim });
    }
    let mut m = Matrix::identity(a.field(), dim);
    m.set(i - 1, j - 1, a.clone());
    Ok(m)
}

/// The inclusion `Sp_size ⊂ Sp_target`: `M ↦ diag(1, 1, M)` across each
/// even-to-odd step and the identity on realized matrices otherwise.
pub fn embed(a: &SpMatrix, target: usize) -> Result<SpMatrix> {
    if target < a.size {
        return Err(Error::BadRange(format!("cannot embed Sp_{} into Sp_{target}", a.size)));
    }
    let d = realized_dim(target);
    let pad = d - a.m.rows();
    let f = a.m.field();
    let m = Matrix::from_fn(f, d, d, |i, j| {
        if i < pad || j < pad {
            if i == j {
                f.one()
            } else {
                f.zero()
            }
        } else {
            a.m[(i - pad, j - pad)].clone()
        }
    });
    Ok(SpMatrix { size: target, m })
}

/// `T_b = diag(b, b^{-1}, 1, ..., 1)` of the given dimension.
pub fn t_b(b: &Scalar, dim: usize) -> Result<Matrix> {
    if b.is_zero() {
        return Err(Error::ZeroUnit);
    }
    let mut m = Matrix::identity(b.field(), dim);
    m.set(0, 0, b.clone());
    m.set(1, 1, b.inv()?);
    Ok(m)
}

/// `T_b A T_b^{-1}`, computed in `Sp_{2n+2}` after embedding `A` into the
/// odd group. On odd `A` this sends `c ↦ b²c`, `u ↦ bu` and fixes `M`; even
/// elements commute with `T_b`.
pub fn conjugate_tb(a: &SpMatrix, b: &Scalar) -> Result<SpMatrix> {
    let odd_size = a.size + 1 - a.size % 2;
    let e = embed(a, odd_size)?;
    let d = e.m.rows();
    let t = t_b(b, d)?;
    let tinv = t_b(&b.inv()?, d)?;
    let conj = t.mul(&e.m)?.mul(&tinv)?;
    let conj = SpMatrix {
        size: odd_size,
        m: conj,
    };
    if a.size.is_multiple_of(2) {
        retract_rho(&conj)
    } else {
        Ok(conj)
    }
}

/// `ρ: Sp_{2n+1} → Sp_{2n}`, the `M` block.
pub fn retract_rho(a: &SpMatrix) -> Result<SpMatrix> {
    a.require_odd()?;
    let rest: Vec<usize> = (2..a.m.rows()).collect();
    Ok(SpMatrix {
        size: a.size - 1,
        m: a.m.select(&rest, &rest),
    })
}

/// Extend an isometry between non-degenerate subspaces to all of `F^{2n}`.
///
/// `v` is a basis of `V` and `w` lists the images of its vectors. Odd rank
/// first splits off the radical and adjoins partners on both sides, which
/// reduces to the even case; there both bases are completed by symplectic
/// bases of the orthogonal complements.
pub fn witt_extend(v: &VectorSeq, w: &VectorSeq, space: &SymplecticSpace) -> Result<SpMatrix> {
    if v.len() != w.len() {
        return Err(Error::RankMismatch(v.len(), w.len()));
    }
    let sv = Subspace::new(*space, v.clone())?;
    let sw = Subspace::new(*space, w.clone()).map_err(|e| match e {
        Error::RankMismatch(r, _) => Error::RankMismatch(v.len(), r),
        other => other,
    })?;
    if sv.gram() != sw.gram() {
        return Err(Error::NotIsometry);
    }
    if !sv.is_nondegenerate() {
        return Err(Error::NotNonDegenerate("source subspace".into()));
    }
    let (bv, bw) = if sv.rank() % 2 == 1 {
        let (v0, x, m) = split_radical(&sv)?;
        let ker = sv.gram_kernel();
        let xw = sw.combine(&ker[0]);
        let keep: Vec<Vector> = (0..sw.rank()).filter(|&i| i != m).map(|i| w.vectors[i].clone()).collect();
        let w0 = Subspace::new(*space, VectorSeq::new(space.field, space.dim(), keep)?)?;
        let partner = |basis: &Subspace, rad: &Vector| -> Result<Vector> {
            let mut rows = basis.basis.vectors.clone();
            rows.push(rad.clone());
            let mut rhs = vec![space.field.zero(); basis.rank()];
            rhs.push(space.field.one());
            solve_pairings(space, &rows, &rhs)?
                .ok_or_else(|| Error::InternalInvariant("no partner for the radical vector".into()))
        };
        let xp = partner(&v0, &x)?;
        let yp = partner(&w0, &xw)?;
        let mut bv = v0.basis.vectors.clone();
        bv.extend([x, xp]);
        let mut bw = w0.basis.vectors.clone();
        bw.extend([xw, yp]);
        (bv, bw)
    } else {
        (v.vectors.clone(), w.vectors.clone())
    };
    let complete = |b: Vec<Vector>| -> Result<Matrix> {
        let sub = Subspace::new(*space, VectorSeq::new(space.field, space.dim(), b.clone())?)?;
        let perp = symplectic_basis(&sub.orthogonal_complement()?)?;
        let mut cols = b;
        cols.extend(perp.vectors.iter().cloned());
        Matrix::from_columns(space.field, space.dim(), &cols)
    };
    let mv = complete(bv)?;
    let mw = complete(bw)?;
    let g = mw.mul(&mv.inverse()?)?;
    SpMatrix::new(g, space.dim())
        .map_err(|_| Error::InternalInvariant("Witt extension is not symplectic".into()))
}

/// Product of random symplectic transvections `x ↦ x + a⟨w, x⟩w` with
/// integral `a` and `w`.
pub fn random_sp<R: Rng + ?Sized>(space: &SymplecticSpace, rng: &mut R, bound: u64) -> SpMatrix {
    let f = space.field;
    let d = space.dim();
    let psi = space.psi().to_matrix();
    let mut g = Matrix::identity(f, d);
    for _ in 0..d + 2 {
        let w: Vector = (0..d).map(|_| f.sample_integral(rng, bound)).collect();
        let a = f.sample_integral(rng, bound);
        let wcol = Matrix::column_vector(&w, f);
        let t = Matrix::identity(f, d)
            .add(&wcol.mul(&wcol.transpose()).expect("shapes").mul(&psi).expect("shapes").scale(&a))
            .expect("shapes");
        g = t.mul(&g).expect("shapes");
    }
    SpMatrix { size: d, m: g }
}
