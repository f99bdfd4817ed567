//! Dense matrices and subspaces over an exact [`Field`].
//!
//! Subspaces are stored as the reduced row-echelon form of a spanning set,
//! which is unique, so subspace equality is plain entry equality.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalars::Field;

/// A dense row-major matrix.
#[derive(Clone)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Field> Eq for Matrix<F> {}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.field.format(self.get(i, j)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, f: impl Fn(usize, usize) -> F::Elem) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn diagonal(field: &F, entries: &[F::Elem]) -> Self {
        let n = entries.len();
        Self::from_fn(field, n, n, |i, j| if i == j { entries[i].clone() } else { field.zero() })
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let data = rows.iter().map(|row| row.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, data).expect("rectangular literal")
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn field(&self) -> &F {
        &self.field
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

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major entries as a flat vector.
    pub fn vectorize(&self) -> Vec<F::Elem> {
        self.data.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    fn conformable(&self, other: &Self, what: &str, ok: bool) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.descriptor(), other.field.descriptor()));
        }
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "{what} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.conformable(other, "sum", self.rows == other.rows && self.cols == other.cols)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Ok(Matrix { data, ..self.clone_shape() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.conformable(other, "difference", self.rows == other.rows && self.cols == other.cols)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Ok(Matrix { data, ..self.clone_shape() })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.conformable(other, "product", self.cols == other.rows)?;
        let f = &self.field;
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let columns: Vec<Vec<&F::Elem>> = (0..p).map(|j| (0..m).map(|k| &other.data[k * p + j]).collect()).collect();
        let mut data = Vec::with_capacity(n * p);
        for i in 0..n {
            let row = &self.data[i * m..(i + 1) * m];
            for col in &columns {
                data.push(f.dot(row.iter().zip(col.iter().copied())));
            }
        }
        Ok(Matrix { field: f.clone(), rows: n, cols: p, data })
    }

    fn clone_shape(&self) -> Self {
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: Vec::new() }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Matrix { data: self.data.iter().map(|a| f.mul(a, c)).collect(), ..self.clone_shape() }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Matrix { data: self.data.iter().map(|a| f.neg(a)).collect(), ..self.clone_shape() }
    }

    /// `self - c·I`.
    pub fn shift(&self, c: &F::Elem) -> Self {
        assert!(self.is_square(), "shift of a non-square matrix");
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = self.field.sub(m.get(i, i), c);
            m.set(i, i, v);
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> F::Elem {
        assert!(self.is_square(), "trace of a non-square matrix");
        let f = &self.field;
        (0..self.rows).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    pub fn mat_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = &self.field;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row count");
        Self::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    /// Reduced row-echelon form.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..self.cols {
                    if f.is_zero(m.get(r, j)) {
                        continue;
                    }
                    let v = f.sub_mul(m.get(i, j), &factor, m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, rank: r, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Right null space `{v : Mv = 0}`.
    pub fn kernel(&self) -> Subspace<F> {
        let f = &self.field;
        let Rref { matrix: r, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors: Vec<Vec<F::Elem>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(k, fc));
                }
                v
            })
            .collect();
        Subspace::span(f, self.cols, &vectors)
    }

    /// Column space as a subspace of `F^rows`.
    pub fn column_space(&self) -> Subspace<F> {
        Subspace::from_rows_of(&self.transpose())
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n)).rref();
        if aug.rank < n || (n > 0 && aug.pivots[n - 1] != n - 1) {
            return None;
        }
        Some(Self::from_fn(&self.field, n, n, |i, j| aug.matrix.get(i, n + j).clone()))
    }

    pub fn det(&self) -> F::Elem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else {
                return f.zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = f.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("pivot is nonzero");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Text of every entry, row by row.
    pub fn to_text(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| self.field.format(x)).collect()).collect()
    }
}

impl<F: Field> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: Self) -> Matrix<F> {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<F: Field> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: Self) -> Matrix<F> {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: Self) -> Matrix<F> {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Product of a sequence of square matrices; `identity(n)` when empty.
pub fn product<'a, F: Field>(field: &F, n: usize, mats: impl IntoIterator<Item = &'a Matrix<F>>) -> Matrix<F> {
    mats.into_iter().fold(Matrix::identity(field, n), |acc, m| &acc * m)
}

// ---------------------------------------------------------------------------
// Subspaces

/// A subspace of `F^ambient`, stored as a canonical rref basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Matrix<F>,
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{}", self.basis)
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient) }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(field, ambient) }
    }

    pub fn span(field: &F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Self {
        let m = Matrix::from_fn(field, vectors.len(), ambient, |i, j| vectors[i][j].clone());
        Self::from_rows_of(&m)
    }

    /// The row space of `m`.
    pub fn from_rows_of(m: &Matrix<F>) -> Self {
        let r = m.rref();
        let basis = Matrix::from_fn(m.field(), r.rank, m.cols(), |i, j| r.matrix.get(i, j).clone());
        Subspace { ambient: m.cols(), basis }
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F::Elem>> {
        self.basis.to_rows()
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::ShapeMismatch(format!("ambient dimensions {} and {}", self.ambient, other.ambient)));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().descriptor(), other.field().descriptor()));
        }
        Ok(())
    }

    pub fn try_sum(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let mut vectors = self.basis_vectors();
        vectors.extend(other.basis_vectors());
        Ok(Self::span(self.field(), self.ambient, &vectors))
    }

    pub fn sum(&self, other: &Self) -> Self {
        self.try_sum(other).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Intersection via the kernel of `[Sᵀ | −Tᵀ]`; the dimension law
    /// `dim S + dim T = dim(S+T) + dim(S∩T)` is asserted.
    pub fn try_intersect(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let f = self.field();
        let a = self.dim();
        let system = self.basis.transpose().hstack(&other.basis.transpose().neg());
        let kernel = system.kernel();
        let vectors: Vec<Vec<F::Elem>> = kernel
            .basis_vectors()
            .iter()
            .map(|x| {
                let coeffs = &x[..a];
                (0..self.ambient)
                    .map(|j| {
                        coeffs
                            .iter()
                            .enumerate()
                            .fold(f.zero(), |acc, (i, c)| f.add(&acc, &f.mul(c, self.basis.get(i, j))))
                    })
                    .collect()
            })
            .collect();
        let meet = Self::span(f, self.ambient, &vectors);
        let join = self.sum(other);
        assert_eq!(self.dim() + other.dim(), join.dim() + meet.dim(), "dimension law violated");
        Ok(meet)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.try_intersect(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn contains_vector(&self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length");
        self.coordinates(v).is_some()
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        other.basis_vectors().iter().all(|v| self.contains_vector(v))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = self.field();
        let r = self.basis.rref();
        let coords: Vec<F::Elem> = r.pivots.iter().map(|&p| v[p].clone()).collect();
        let back: Vec<F::Elem> = (0..self.ambient)
            .map(|j| {
                coords.iter().enumerate().fold(f.zero(), |acc, (i, c)| f.add(&acc, &f.mul(c, self.basis.get(i, j))))
            })
            .collect();
        (back == v).then_some(coords)
    }

    /// `M·S`.
    pub fn image(&self, m: &Matrix<F>) -> Self {
        assert_eq!(m.cols(), self.ambient, "image under a non-conformable map");
        let vectors: Vec<Vec<F::Elem>> = self.basis_vectors().iter().map(|v| m.mat_vec(v)).collect();
        Self::span(self.field(), m.rows(), &vectors)
    }

    pub fn is_invariant(&self, m: &Matrix<F>) -> bool {
        self.contains(&self.image(m))
    }

    /// Interpret each basis vector of a subspace of `F^{n²}` as an n×n matrix.
    pub fn as_matrices(&self, n: usize) -> Vec<Matrix<F>> {
        assert_eq!(self.ambient, n * n, "not a space of {n}x{n} matrices");
        self.basis_vectors().into_iter().map(|v| Matrix::from_vec(self.field(), n, n, v).expect("n² entries")).collect()
    }

    pub fn contains_matrix(&self, m: &Matrix<F>) -> bool {
        self.contains_vector(&m.vectorize())
    }
}

/// Span of matrices, as a subspace of `F^{rows·cols}`.
pub fn matrix_span<F: Field>(field: &F, rows: usize, cols: usize, mats: &[Matrix<F>]) -> Subspace<F> {
    let vectors: Vec<Vec<F::Elem>> = mats.iter().map(Matrix::vectorize).collect();
    Subspace::span(field, rows * cols, &vectors)
}

/// Incremental echelon basis: rows are reduced against earlier pivots on
/// insertion, so membership tests cost one pass.
#[derive(Clone, Debug)]
pub struct EchelonBuilder<F: Field> {
    field: F,
    len: usize,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> EchelonBuilder<F> {
    pub fn new(field: &F, len: usize) -> Self {
        EchelonBuilder { field: field.clone(), len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub_mul(x, &c, r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Insert `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.len, "vector length");
        let f = &self.field;
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero pivot");
        let r = r.iter().map(|x| f.mul(x, &inv)).collect();
        self.rows.push((p, r));
        true
    }

    pub fn to_subspace(&self) -> Subspace<F> {
        let vectors: Vec<Vec<F::Elem>> = self.rows.iter().map(|(_, r)| r.clone()).collect();
        Subspace::span(&self.field, self.len, &vectors)
    }
}

/// The smallest unital subalgebra of `End(F^n)` containing `gens`, as a
/// subspace of `F^{n²}`.
///
/// Every word in the generators is reached by left multiplication from `I`,
/// so the breadth-first search below spans the algebra. Growth is bounded
/// by `n²`.
pub fn algebra_closure<F: Field>(field: &F, n: usize, gens: &[Matrix<F>]) -> Subspace<F> {
    unital_closure(field, n, Matrix::identity(field, n), gens)
}

/// Closure of `{unit}` under left multiplication by `gens` followed by
/// projection into the span; used for corner algebras whose unit is not `I`.
pub fn unital_closure<F: Field>(field: &F, n: usize, unit: Matrix<F>, gens: &[Matrix<F>]) -> Subspace<F> {
    for g in gens {
        assert!(g.rows() == n && g.cols() == n, "generator is not {n}x{n}");
    }
    let mut builder = EchelonBuilder::new(field, n * n);
    let mut queue = std::collections::VecDeque::new();
    if builder.insert(&unit.vectorize()) {
        queue.push_back(unit);
    }
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g * &x;
            if builder.insert(&y.vectorize()) {
                queue.push_back(y);
            }
        }
    }
    builder.to_subspace()
}

/// `{γ : γA = Bγ, γA* = B*γ}` as a subspace of `F^{n²}` (row-major γ).
pub fn intertwiner_space<F: Field>(
    a: &Matrix<F>,
    a_star: &Matrix<F>,
    b: &Matrix<F>,
    b_star: &Matrix<F>,
) -> Result<Subspace<F>> {
    let n = a.rows();
    let field = a.field().clone();
    for m in [a, a_star, b, b_star] {
        if m.field() != &field {
            return Err(Error::FieldMismatch(field.descriptor(), m.field().descriptor()));
        }
        if m.rows() != n || m.cols() != n {
            return Err(Error::ShapeMismatch(format!("intertwiner of {}x{} with {n}x{n}", m.rows(), m.cols())));
        }
    }
    let nn = n * n;
    let mut system = Matrix::zeros(&field, 2 * nn, nn);
    for (block, (x, y)) in [(a, b), (a_star, b_star)].into_iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = block * nn + i * n + j;
                for k in 0..n {
                    // (γX)_{ij} = Σ_k γ_{ik} X_{kj}
                    let col = i * n + k;
                    let v = field.add(system.get(row, col), x.get(k, j));
                    system.set(row, col, v);
                    // (Yγ)_{ij} = Σ_k Y_{ik} γ_{kj}
                    let col = k * n + j;
                    let v = field.sub(system.get(row, col), y.get(i, k));
                    system.set(row, col, v);
                }
            }
        }
    }
    Ok(system.kernel())
}
