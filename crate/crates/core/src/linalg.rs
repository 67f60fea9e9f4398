//! Dense exact linear algebra over F_p.
//!
//! Row reduction is the single kernel: nullspaces, solves, ranks, inverses and
//! subspace coordinates all reduce to [`RowReducer`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::PrimeField;

pub type Vector = Vec<u64>;

/// Dense row-major matrix over a prime field. Matrices act on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.rows, self.cols, self.field.modulus())?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: usize, cols: usize, entries: &[Vec<u64>]) -> Self {
        assert_eq!(entries.len(), rows);
        let mut m = Self::zeros(field, rows, cols);
        for (r, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, &v) in row.iter().enumerate() {
                m.data[r * cols + c] = field.reduce(v);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = v;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.field.reduce(v);
    }
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    /// Row-major flattening, used to treat linear maps as vectors.
    pub fn to_vector(&self) -> Vector {
        self.data.clone()
    }
    pub fn from_vector(field: PrimeField, rows: usize, cols: usize, v: &[u64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self { field, rows, cols, data: v.to_vec() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        assert_eq!(self.field, other.field);
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(orow) {
                    if b != 0 {
                        *o = f.mul_add(*o, a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vector {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows).map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.mul_add(acc, a, b) })).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: u64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = f.mul_add(*a, c, b);
            }
        }
    }

    /// Kronecker product; index `(i, j)` of the result is `i * other.dim + j`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(f, rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a == 0 {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if b != 0 {
                            out.data[(r1 * other.rows + r2) * cols + c1 * other.cols + c2] = f.mul(a, b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Number of nonzero entries, used as a residual measure.
    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn rank(&self) -> usize {
        let mut rr = RowReducer::new(self.field, self.cols);
        for r in 0..self.rows {
            rr.push(self.row(r).to_vec());
        }
        rr.rank()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let mut rr = RowReducer::new(self.field, self.cols);
        for r in 0..self.rows {
            rr.push(self.row(r).to_vec());
        }
        rr.nullspace()
    }

    /// Some solution of `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        let mut rr = RowReducer::new(f, self.cols + 1);
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.push(b[r]);
            rr.push(row);
        }
        if rr.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (row, &p) in rr.rows.iter().zip(&rr.pivots) {
            x[p] = row[self.cols];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let f = self.field;
        let mut rr = RowReducer::new(f, 2 * n);
        for r in 0..n {
            let mut row = self.row(r).to_vec();
            row.extend((0..n).map(|c| u64::from(c == r)));
            rr.push(row);
        }
        if rr.rank() < n || rr.pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut inv = Matrix::zeros(f, n, n);
        for (row, &p) in rr.rows.iter().zip(&rr.pivots) {
            inv.data[p * n..(p + 1) * n].copy_from_slice(&row[n..]);
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Restriction to the given row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.data[i * cols.len() + j] = self.get(r, c);
            }
        }
        m
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut entries = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if v != 0 {
                    entries.push((r, c, v));
                }
            }
        }
        SparseMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn from_sparse(field: PrimeField, s: &SparseMatrix) -> Matrix {
        let mut m = Matrix::zeros(field, s.rows, s.cols);
        for &(r, c, v) in &s.entries {
            m.set(r, c, v);
        }
        m
    }
}

/// Coordinate-list form used in JSON dumps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, u64)>,
}

pub fn zero_vector(n: usize) -> Vector {
    vec![0; n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn is_zero_vector(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn vec_add(f: PrimeField, a: &[u64], b: &[u64]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vec_sub(f: PrimeField, a: &[u64], b: &[u64]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn vec_scale(f: PrimeField, c: u64, a: &[u64]) -> Vector {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

/// `acc += c * v`
pub fn vec_axpy(f: PrimeField, acc: &mut [u64], c: u64, v: &[u64]) {
    if c == 0 {
        return;
    }
    for (a, &x) in acc.iter_mut().zip(v) {
        if x != 0 {
            *a = f.mul_add(*a, c, x);
        }
    }
}

/// Coordinates of `kron(x, y)`, index `i * y.len() + j`.
pub fn kron_vec(f: PrimeField, x: &[u64], y: &[u64]) -> Vector {
    let mut out = vec![0; x.len() * y.len()];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            if b != 0 {
                out[i * y.len() + j] = f.mul(a, b);
            }
        }
    }
    out
}

/// Incremental reduced row echelon form.
///
/// Rows are kept fully reduced: each stored row has a leading 1 at its pivot
/// and zeros in every other pivot column.
#[derive(Clone, Debug)]
pub struct RowReducer {
    field: PrimeField,
    cols: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl RowReducer {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        Self { field, cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// Reduces `v` against the stored rows in place; the result vanishes on all pivots.
    pub fn reduce(&self, v: &mut [u64]) {
        let f = self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                vec_axpy(f, v, f.neg(c), row);
            }
        }
    }

    /// Adds a row; returns `true` if the rank grew.
    pub fn push(&mut self, mut v: Vector) -> bool {
        assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(v[p]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                vec_axpy(f, row, f.neg(c), &v);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, v);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero_vector(&w)
    }

    /// Basis of the right kernel of the stored rows, one vector per free column,
    /// ordered by free column.
    pub fn nullspace(&self) -> Vec<Vector> {
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![0; self.cols];
                x[free] = 1;
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    x[p] = f.neg(row[free]);
                }
                x
            })
            .collect()
    }
}

/// A subspace with a fixed (not necessarily echelon) basis and exact coordinate recovery.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    basis: Vec<Vector>,
    // echelon rows E with E = T * basis; columns `ambient..` of each row hold T.
    echelon: RowReducer,
}

impl Subspace {
    /// Builds the subspace spanned by `basis`; returns `None` if the vectors are dependent.
    pub fn new(field: PrimeField, ambient: usize, basis: Vec<Vector>) -> Option<Self> {
        let k = basis.len();
        let mut echelon = RowReducer::new(field, ambient + k);
        for (i, b) in basis.iter().enumerate() {
            assert_eq!(b.len(), ambient);
            let mut row = b.clone();
            row.extend((0..k).map(|j| u64::from(i == j)));
            echelon.push(row);
        }
        if echelon.pivots.iter().any(|&p| p >= ambient) {
            return None;
        }
        Some(Self { field, ambient, basis, echelon })
    }

    /// Extracts an independent spanning set (reduced echelon basis) of the span of `vectors`.
    pub fn spanned_by(field: PrimeField, ambient: usize, vectors: impl IntoIterator<Item = Vector>) -> Self {
        let mut rr = RowReducer::new(field, ambient);
        for v in vectors {
            rr.push(v);
        }
        let basis = rr.rows.clone();
        Self::new(field, ambient, basis).expect("echelon rows are independent")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is not in the subspace.
    pub fn coords(&self, v: &[u64]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let k = self.basis.len();
        let mut acc = vec![0u64; k];
        let mut w = v.to_vec();
        for (row, &p) in self.echelon.rows.iter().zip(&self.echelon.pivots) {
            let c = w[p];
            if c != 0 {
                vec_axpy(f, &mut w, f.neg(c), &row[..self.ambient]);
                vec_axpy(f, &mut acc, c, &row[self.ambient..]);
            }
        }
        if is_zero_vector(&w) {
            Some(acc)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.coords(v).is_some()
    }

    /// Linear combination of the basis.
    pub fn combine(&self, coords: &[u64]) -> Vector {
        let mut out = vec![0; self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            vec_axpy(self.field, &mut out, *c, b);
        }
        out
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient, &self.basis)
    }
}
