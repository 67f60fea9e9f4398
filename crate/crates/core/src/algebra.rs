//! Finite-dimensional associative algebras over F_p given by structure constants.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::{is_zero_vector, kron_vec, unit_vector, vec_scale, vec_sub, Matrix, RowReducer, Subspace, Vector};
use crate::poly;

/// Coordinates of an element with respect to an algebra's basis.
pub type AlgebraElement = Vector;

/// Serialized form of an [`Algebra`]; structure constants are sparse `(i, j, k, c)` triples
/// meaning `e_i e_j` has coefficient `c` at `e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDump {
    pub field: u64,
    pub dim: usize,
    pub labels: Vec<String>,
    pub unit: Vector,
    pub structure_constants: Vec<(usize, usize, usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: PrimeField,
    dim: usize,
    // products[i * dim + j] = e_i e_j as a sparse coordinate list
    products: Vec<Vec<(usize, u64)>>,
    unit: Vector,
    labels: Vec<String>,
}

impl Algebra {
    /// Builds an algebra from `e_i e_j` for all basis pairs without validating associativity.
    pub fn from_products(field: PrimeField, labels: Vec<String>, unit: Vector, mut product: impl FnMut(usize, usize) -> Vector) -> Self {
        let dim = labels.len();
        assert_eq!(unit.len(), dim);
        let mut products = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = product(i, j);
                products.push(v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c)).collect());
            }
        }
        Self { field, dim, products, unit, labels }
    }

    /// Builds and validates an algebra from sparse structure constants `(i, j, k, c)`:
    /// `e_i e_j = sum c e_k`.
    pub fn from_structure_constants(field: PrimeField, labels: Vec<String>, unit: Vector, constants: &[(usize, usize, usize, u64)]) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if unit.len() != dim {
            return Err(Error::InvalidAlgebra("unit has the wrong length".into()));
        }
        let mut dense = vec![vec![0u64; dim]; dim * dim];
        for &(i, j, k, c) in constants {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidAlgebra(format!("index out of range in ({i}, {j}, {k})")));
            }
            dense[i * dim + j][k] = field.add(dense[i * dim + j][k], field.reduce(c));
        }
        let unit = unit.iter().map(|&u| field.reduce(u)).collect();
        let a = Self::from_products(field, labels, unit, |i, j| dense[i * dim + j].clone());
        a.validate()?;
        Ok(a)
    }

    /// The one-dimensional algebra F_p.
    pub fn ground(field: PrimeField) -> Self {
        Self::from_products(field, vec!["1".into()], vec![1], |_, _| vec![1])
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn unit(&self) -> &[u64] {
        &self.unit
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, u64)] {
        &self.products[i * self.dim + j]
    }
    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        unit_vector(self.dim, i)
    }
    pub fn zero(&self) -> AlgebraElement {
        vec![0; self.dim]
    }

    /// Sparse structure constants `(i, j, k, c)`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, u64)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for &(k, c) in self.basis_product(i, j) {
                    out.push((i, j, k, c));
                }
            }
        }
        out
    }

    pub fn dump(&self) -> AlgebraDump {
        AlgebraDump {
            field: self.field.modulus(),
            dim: self.dim,
            labels: self.labels.clone(),
            unit: self.unit.clone(),
            structure_constants: self.structure_constants(),
        }
    }

    pub fn from_dump(d: &AlgebraDump) -> Result<Self> {
        if d.labels.len() != d.dim {
            return Err(Error::InvalidAlgebra("label count differs from dim".into()));
        }
        Self::from_structure_constants(PrimeField::new(d.field)?, d.labels.clone(), d.unit.clone(), &d.structure_constants)
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> AlgebraElement {
        let f = self.field;
        let mut out = vec![0; self.dim];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in &self.products[i * self.dim + j] {
                    out[k] = f.mul_add(out[k], ab, c);
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[u64], mut e: u64) -> AlgebraElement {
        let mut acc = self.unit.clone();
        let mut base = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> AlgebraElement {
        crate::linalg::vec_add(self.field, x, y)
    }
    pub fn sub(&self, x: &[u64], y: &[u64]) -> AlgebraElement {
        vec_sub(self.field, x, y)
    }
    pub fn scale(&self, c: u64, x: &[u64]) -> AlgebraElement {
        vec_scale(self.field, c, x)
    }

    /// Matrix of `y -> x y`.
    pub fn left_mult_matrix(&self, x: &[u64]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(x, &self.basis_element(j))).collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    /// Matrix of `y -> y x`.
    pub fn right_mult_matrix(&self, x: &[u64]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(&self.basis_element(j), x)).collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    pub fn inverse(&self, x: &[u64]) -> Option<AlgebraElement> {
        let y = self.left_mult_matrix(x).solve(&self.unit)?;
        (self.mul(&y, x) == self.unit).then_some(y)
    }

    pub fn is_central(&self, x: &[u64]) -> bool {
        (0..self.dim).all(|i| {
            let b = self.basis_element(i);
            self.mul(x, &b) == self.mul(&b, x)
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.dim {
            let b = self.basis_element(i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(Error::InvalidAlgebra(format!("unit is not two-sided at basis element {}", self.labels[i])));
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul(&self.basis_element(i), &self.basis_element(j));
                for k in 0..self.dim {
                    let ek = self.basis_element(k);
                    let left = self.mul(&ij, &ek);
                    let jk = self.mul(&self.basis_element(j), &ek);
                    let right = self.mul(&self.basis_element(i), &jk);
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!("not associative at ({}, {}, {})", self.labels[i], self.labels[j], self.labels[k])));
                    }
                }
            }
        }
        Ok(())
    }

    /// The opposite algebra: same basis, `e_i * e_j = e_j e_i`.
    pub fn opposite(&self) -> Algebra {
        let labels = self.labels.iter().map(|l| format!("{l}°")).collect();
        Algebra::from_products(self.field, labels, self.unit.clone(), |i, j| {
            let mut v = vec![0; self.dim];
            for &(k, c) in self.basis_product(j, i) {
                v[k] = c;
            }
            v
        })
    }

    /// `self ⊗ other` with basis index `i * other.dim + j`.
    pub fn tensor(&self, other: &Algebra) -> Algebra {
        let d2 = other.dim;
        let labels = self.labels.iter().flat_map(|a| other.labels.iter().map(move |b| format!("{a}⊗{b}"))).collect();
        let unit = kron_vec(self.field, &self.unit, &other.unit);
        Algebra::from_products(self.field, labels, unit, |x, y| {
            let (i, j) = (x / d2, x % d2);
            let (k, l) = (y / d2, y % d2);
            let a = self.mul(&self.basis_element(i), &self.basis_element(k));
            let b = other.mul(&other.basis_element(j), &other.basis_element(l));
            kron_vec(self.field, &a, &b)
        })
    }
}

/// A subalgebra (possibly with its own unit, as for `eA`) together with its embedding.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub algebra: Arc<Algebra>,
    /// Basis vectors in ambient coordinates.
    pub embedding: Subspace,
}

impl Subalgebra {
    /// Builds the algebra structure on an independent set closed under multiplication.
    /// `unit` is the subalgebra's own identity in ambient coordinates.
    pub fn new(ambient: &Algebra, basis: Vec<Vector>, unit: &[u64]) -> Result<Self> {
        let f = ambient.field();
        let space = Subspace::new(f, ambient.dim(), basis).ok_or_else(|| Error::NotSubalgebra("basis vectors are linearly dependent".into()))?;
        let unit_coords = space.coords(unit).ok_or_else(|| Error::NotSubalgebra("the unit does not lie in the span".into()))?;
        let k = space.dim();
        let mut table = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let prod = ambient.mul(&space.basis()[i], &space.basis()[j]);
                let c = space.coords(&prod).ok_or_else(|| Error::NotSubalgebra(format!("product of basis elements {i} and {j} leaves the span")))?;
                table.push(c);
            }
        }
        let labels = (0..k).map(|i| format!("s{i}")).collect();
        let algebra = Algebra::from_products(f, labels, unit_coords, |i, j| table[i * k + j].clone());
        for i in 0..k {
            let b = algebra.basis_element(i);
            if algebra.mul(algebra.unit(), &b) != b || algebra.mul(&b, algebra.unit()) != b {
                return Err(Error::NotSubalgebra("given unit is not an identity of the span".into()));
            }
        }
        Ok(Self { algebra: Arc::new(algebra), embedding: space })
    }

    pub fn dim(&self) -> usize {
        self.embedding.dim()
    }

    /// Image of a subalgebra element in the ambient algebra.
    pub fn embed(&self, x: &[u64]) -> Vector {
        self.embedding.combine(x)
    }

    /// Coordinates of an ambient element, if it lies in the subalgebra.
    pub fn coords(&self, x: &[u64]) -> Option<Vector> {
        self.embedding.coords(x)
    }
}

pub fn group_algebra(g: &FiniteGroup, field: PrimeField) -> Algebra {
    Algebra::from_products(field, g.labels().to_vec(), unit_vector(g.order(), 0), |a, b| unit_vector(g.order(), g.mul(a, b)))
}

/// Basis of the center, from the nullspace of all commutator maps `z -> z e_i - e_i z`.
pub fn center(a: &Algebra) -> Vec<AlgebraElement> {
    let mut rr = RowReducer::new(a.field(), a.dim());
    for i in 0..a.dim() {
        let b = a.basis_element(i);
        let m = a.right_mult_matrix(&b).sub(&a.left_mult_matrix(&b));
        for r in 0..m.rows() {
            rr.push(m.row(r).to_vec());
        }
    }
    rr.nullspace()
}

#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub idempotents: Vec<AlgebraElement>,
    /// `dim eA` for each idempotent.
    pub block_dims: Vec<usize>,
    pub center_dim: usize,
    pub nilradical_dim: usize,
}

/// All primitive central idempotents.
///
/// Inside the commutative center `Z`, the Frobenius map `z -> z^p` is F_p-linear.
/// Its kernel power gives the nilradical, and its fixed space `{z : z^p = z}` is
/// the split semisimple algebra spanned by the central idempotents. Sweeping the
/// fixed space's basis, each current idempotent `e` is split along the distinct
/// roots of the minimal polynomial of `e*s` using Lagrange idempotents.
///
/// Blocks are ordered by block dimension, then by coordinates.
pub fn primitive_central_idempotents(a: &Algebra) -> BlockDecomposition {
    let f = a.field();
    let p = f.modulus();
    let zbasis = center(a);
    let z = Subalgebra::new(a, zbasis, a.unit()).expect("the center is a unital subalgebra");
    let zalg = &z.algebra;
    let d = zalg.dim();

    let frob_cols: Vec<Vector> = (0..d).map(|j| zalg.pow(&zalg.basis_element(j), p)).collect();
    let frob = Matrix::from_columns(f, d, &frob_cols);

    let mut iterated = frob.clone();
    let mut reach = p;
    while (reach as usize) < d {
        iterated = iterated.mul(&frob);
        reach = reach.saturating_mul(p);
    }
    let nilradical_dim = iterated.nullspace().len();

    let fixed = frob.sub(&Matrix::identity(f, d)).nullspace();

    let mut idems: Vec<Vector> = vec![zalg.unit().to_vec()];
    for s in &fixed {
        let mut next = Vec::with_capacity(idems.len());
        for e in &idems {
            let y = zalg.mul(e, s);
            next.extend(split_idempotent(zalg, e, &y));
        }
        idems = next;
    }

    let mut blocks: Vec<(usize, Vector)> = idems
        .iter()
        .map(|e| {
            let ea = z.embed(e);
            let dim = Subspace::spanned_by(f, a.dim(), (0..a.dim()).map(|i| a.mul(&ea, &a.basis_element(i)))).dim();
            (dim, ea)
        })
        .collect();
    blocks.sort();
    BlockDecomposition {
        block_dims: blocks.iter().map(|b| b.0).collect(),
        idempotents: blocks.into_iter().map(|b| b.1).collect(),
        center_dim: d,
        nilradical_dim,
    }
}

/// Splits the idempotent `e` along the eigenvalues of `y ∈ eZ` (where `y^p = y`).
fn split_idempotent(z: &Algebra, e: &[u64], y: &[u64]) -> Vec<Vector> {
    let f = z.field();
    let minpoly = minimal_polynomial(z, e, y);
    if minpoly.len() <= 2 {
        return vec![e.to_vec()];
    }
    let roots = poly::split_roots(f, &minpoly).expect("elements of the Frobenius fixed space have split squarefree minimal polynomials");
    roots
        .iter()
        .map(|&c| {
            let mut acc = e.to_vec();
            for &other in roots.iter().filter(|&&r| r != c) {
                let factor = vec_sub(f, y, &vec_scale(f, other, e));
                let factor = vec_scale(f, f.inv(f.sub(c, other)), &factor);
                acc = z.mul(&acc, &factor);
            }
            acc
        })
        .collect()
}

/// Minimal polynomial of `y` in the algebra `eZ` whose identity is `e`.
fn minimal_polynomial(z: &Algebra, e: &[u64], y: &[u64]) -> poly::Poly {
    let f = z.field();
    let mut powers: Vec<Vector> = vec![e.to_vec()];
    loop {
        let next = z.mul(powers.last().unwrap(), y);
        powers.push(next);
        let m = Matrix::from_columns(f, z.dim(), &powers);
        if let Some(v) = m.nullspace().into_iter().next() {
            let lead = *v.last().unwrap();
            let mut pol = vec_scale(f, f.inv(lead), &v);
            poly::trim(&mut pol);
            return pol;
        }
    }
}

impl BlockDecomposition {
    /// Checks idempotency, centrality, orthogonality, completeness and primitivity.
    pub fn validate(&self, a: &Algebra) -> Result<()> {
        let f = a.field();
        let mut sum = a.zero();
        for (i, e) in self.idempotents.iter().enumerate() {
            if a.mul(e, e) != *e || is_zero_vector(e) {
                return Err(Error::NotCentralIdempotent(format!("block {i} is not a nonzero idempotent")));
            }
            if !a.is_central(e) {
                return Err(Error::NotCentralIdempotent(format!("block {i} is not central")));
            }
            for (j, e2) in self.idempotents.iter().enumerate() {
                if i != j && !is_zero_vector(&a.mul(e, e2)) {
                    return Err(Error::NotCentralIdempotent(format!("blocks {i} and {j} are not orthogonal")));
                }
            }
            sum = a.add(&sum, e);
        }
        if sum != a.unit() {
            return Err(Error::NotCentralIdempotent("block idempotents do not sum to 1".into()));
        }
        // e is primitive iff the Frobenius-fixed part of eZ is one-dimensional.
        let zb = center(a);
        let p = f.modulus();
        for (i, e) in self.idempotents.iter().enumerate() {
            let ez: Vec<Vector> = zb.iter().map(|c| a.mul(e, c)).collect();
            let ez_space = Subspace::spanned_by(f, a.dim(), ez);
            let k = ez_space.dim();
            let mut m = Matrix::zeros(f, k, k);
            for (j, b) in ez_space.basis().iter().enumerate() {
                let c = ez_space.coords(&a.pow(b, p)).expect("eZ is closed under powers");
                for (r, v) in c.into_iter().enumerate() {
                    m.set(r, j, v);
                }
                m.set(j, j, f.sub(m.get(j, j), 1));
            }
            if m.nullspace().len() != 1 {
                return Err(Error::NotCentralIdempotent(format!("block {i} is not primitive")));
            }
        }
        Ok(())
    }
}

/// The algebra `eA` with identity `e`, on a reduced echelon basis of `{e b_i}`.
pub fn block_cut(a: &Algebra, e: &[u64]) -> Result<Subalgebra> {
    if a.mul(e, e) != e {
        return Err(Error::NotCentralIdempotent("element is not idempotent".into()));
    }
    if !a.is_central(e) {
        return Err(Error::NotCentralIdempotent("element is not central".into()));
    }
    let span = Subspace::spanned_by(a.field(), a.dim(), (0..a.dim()).map(|i| a.mul(e, &a.basis_element(i))));
    Subalgebra::new(a, span.basis().to_vec(), e)
}

/// `C_A(B)` for the unital subalgebra spanned by `b_basis`.
pub fn centralizer_subalgebra(a: &Algebra, b_basis: &[AlgebraElement]) -> Result<Subalgebra> {
    let span = Subspace::spanned_by(a.field(), a.dim(), b_basis.iter().cloned());
    for x in b_basis {
        for y in b_basis {
            if !span.contains(&a.mul(x, y)) {
                return Err(Error::NotSubalgebra("the given basis is not closed under multiplication".into()));
            }
        }
    }
    let basis = centralizer_space(a, b_basis, None);
    Subalgebra::new(a, basis, a.unit())
}

/// `{c : cb = bc for all b}`, optionally restricted to the coordinate subset `support`.
pub(crate) fn centralizer_space(a: &Algebra, b_basis: &[AlgebraElement], support: Option<&[usize]>) -> Vec<Vector> {
    let n = a.dim();
    let cols: Vec<usize> = support.map(|s| s.to_vec()).unwrap_or_else(|| (0..n).collect());
    let mut rr = RowReducer::new(a.field(), cols.len());
    for b in b_basis {
        let m = a.right_mult_matrix(b).sub(&a.left_mult_matrix(b));
        let all_rows: Vec<usize> = (0..n).collect();
        let sub = m.submatrix(&all_rows, &cols);
        for r in 0..sub.rows() {
            rr.push(sub.row(r).to_vec());
        }
    }
    rr.nullspace()
        .into_iter()
        .map(|v| {
            let mut full = vec![0; n];
            for (k, &c) in cols.iter().enumerate() {
                full[c] = v[k];
            }
            full
        })
        .collect()
}

/// Whether the central idempotent `e` of `kN` is fixed under conjugation by `G`.
///
/// `e` is given in coordinates of `kN` indexed by the sorted elements of `n`.
pub fn is_invariant_block(g: &FiniteGroup, n: &Subgroup, field: PrimeField, e: &[u64]) -> Result<bool> {
    if !n.is_normal_in(g) {
        return Err(Error::NotNormal("N is not normal in G".into()));
    }
    let ngroup = crate::groups::subgroup_as_group(g, n);
    let kn = group_algebra(&ngroup, field);
    if e.len() != kn.dim() || kn.mul(e, e) != e || !kn.is_central(e) {
        return Err(Error::NotCentralIdempotent("not a central idempotent of kN".into()));
    }
    let q = crate::groups::quotient(g, n)?;
    for &r in &q.representatives {
        let mut conj = vec![0; n.order()];
        for (i, &x) in n.elements().iter().enumerate() {
            conj[n.position(g.conj(r, x)).unwrap()] = e[i];
        }
        if conj != e {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every nonzero coordinate of `x` times the corresponding coordinate vector,
/// i.e. `x` expanded in ambient coordinates through `basis`.
#[cfg(test)]
pub(crate) fn combine_in(field: PrimeField, ambient_dim: usize, basis: &[Vector], coords: &[u64]) -> Vector {
    let mut out = vec![0; ambient_dim];
    for (c, b) in coords.iter().zip(basis) {
        crate::linalg::vec_axpy(field, &mut out, *c, b);
    }
    out
}
