//! Finite-dimensional bimodules given by action matrices, balanced tensor
//! products, Hom spaces, duals and isomorphism search.
//!
//! Convention: `left_action[i]` is the matrix of `m -> e_i m` and
//! `right_action[j]` the matrix of `m -> m e_j`. Right actions are therefore
//! contravariant as matrices: `R_{xy} = R_y R_x`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::grading::GradedAlgebra;
use crate::linalg::{is_zero_vector, kron_vec, unit_vector, Matrix, RowReducer, Subspace, Vector};

/// Exhaustive enumeration is used when the search space has at most this many elements.
pub const EXHAUSTIVE_LIMIT: u64 = 65536;
/// Number of seeded random combinations tried beyond the exhaustive limit.
pub const RANDOM_TRIALS: usize = 4096;

pub fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || a.structure_constants() == b.structure_constants() && a.unit() == b.unit()
}

#[derive(Clone, Debug)]
pub struct Bimodule {
    pub left: Arc<Algebra>,
    pub right: Arc<Algebra>,
    dim: usize,
    left_action: Vec<Matrix>,
    right_action: Vec<Matrix>,
}

impl Bimodule {
    /// Validates unitality, multiplicativity of both actions, and that they commute.
    pub fn new(left: Arc<Algebra>, right: Arc<Algebra>, dim: usize, left_action: Vec<Matrix>, right_action: Vec<Matrix>) -> Result<Self> {
        let m = Self::new_unchecked(left, right, dim, left_action, right_action)?;
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(left: Arc<Algebra>, right: Arc<Algebra>, dim: usize, left_action: Vec<Matrix>, right_action: Vec<Matrix>) -> Result<Self> {
        if left_action.len() != left.dim() || right_action.len() != right.dim() {
            return Err(Error::InvalidModule("one action matrix per basis element is required".into()));
        }
        if left_action.iter().chain(&right_action).any(|x| x.rows() != dim || x.cols() != dim) {
            return Err(Error::InvalidModule(format!("action matrices must be {dim}x{dim}")));
        }
        Ok(Self { left, right, dim, left_action, right_action })
    }

    /// A left module, viewed as a bimodule over `(A, F_p)`.
    pub fn left_module(left: Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        let f = left.field();
        let ground = Arc::new(Algebra::ground(f));
        Self::new(left, ground, dim, action, vec![Matrix::identity(f, dim)])
    }

    /// `A` as an `(A, A)`-bimodule.
    pub fn regular(a: Arc<Algebra>) -> Self {
        let left_action = (0..a.dim()).map(|i| a.left_mult_matrix(&a.basis_element(i))).collect();
        let right_action = (0..a.dim()).map(|i| a.right_mult_matrix(&a.basis_element(i))).collect();
        Self { left: a.clone(), right: a.clone(), dim: a.dim(), left_action, right_action }
    }

    /// `A` as a left module over itself.
    pub fn regular_left(a: Arc<Algebra>) -> Self {
        let f = a.field();
        let left_action = (0..a.dim()).map(|i| a.left_mult_matrix(&a.basis_element(i))).collect();
        Self { left: a.clone(), right: Arc::new(Algebra::ground(f)), dim: a.dim(), left_action, right_action: vec![Matrix::identity(f, a.dim())] }
    }

    pub fn field(&self) -> PrimeField {
        self.left.field()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn left_basis_action(&self, i: usize) -> &Matrix {
        &self.left_action[i]
    }
    pub fn right_basis_action(&self, j: usize) -> &Matrix {
        &self.right_action[j]
    }
    pub fn left_actions(&self) -> &[Matrix] {
        &self.left_action
    }
    pub fn right_actions(&self) -> &[Matrix] {
        &self.right_action
    }

    pub fn left_matrix(&self, x: &[u64]) -> Matrix {
        combine(self.field(), self.dim, &self.left_action, x)
    }
    pub fn right_matrix(&self, y: &[u64]) -> Matrix {
        combine(self.field(), self.dim, &self.right_action, y)
    }
    pub fn act_left(&self, x: &[u64], m: &[u64]) -> Vector {
        self.left_matrix(x).mul_vec(m)
    }
    pub fn act_right(&self, m: &[u64], y: &[u64]) -> Vector {
        self.right_matrix(y).mul_vec(m)
    }

    /// The same space with both actions restricted along algebra embeddings,
    /// given as images of basis elements.
    pub fn restrict(&self, left: Arc<Algebra>, left_images: &[Vector], right: Arc<Algebra>, right_images: &[Vector]) -> Result<Bimodule> {
        let la = left_images.iter().map(|x| self.left_matrix(x)).collect();
        let ra = right_images.iter().map(|y| self.right_matrix(y)).collect();
        Bimodule::new(left, right, self.dim, la, ra)
    }

    /// The same left action with the right action forgotten.
    pub fn as_left_module(&self) -> Bimodule {
        let f = self.field();
        Self {
            left: self.left.clone(),
            right: Arc::new(Algebra::ground(f)),
            dim: self.dim,
            left_action: self.left_action.clone(),
            right_action: vec![Matrix::identity(f, self.dim)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let id = Matrix::identity(f, self.dim);
        if self.left_matrix(self.left.unit()) != id {
            return Err(Error::InvalidModule("the left unit does not act as the identity".into()));
        }
        if self.right_matrix(self.right.unit()) != id {
            return Err(Error::InvalidModule("the right unit does not act as the identity".into()));
        }
        for i in 0..self.left.dim() {
            for j in 0..self.left.dim() {
                let prod = self.left_action[i].mul(&self.left_action[j]);
                let expect = sparse_combine(f, self.dim, &self.left_action, self.left.basis_product(i, j));
                if prod != expect {
                    return Err(Error::InvalidModule(format!("left action is not multiplicative at ({}, {})", self.left.labels()[i], self.left.labels()[j])));
                }
            }
        }
        for i in 0..self.right.dim() {
            for j in 0..self.right.dim() {
                let prod = self.right_action[j].mul(&self.right_action[i]);
                let expect = sparse_combine(f, self.dim, &self.right_action, self.right.basis_product(i, j));
                if prod != expect {
                    return Err(Error::InvalidModule(format!(
                        "right action is not multiplicative at ({}, {})",
                        self.right.labels()[i],
                        self.right.labels()[j]
                    )));
                }
            }
        }
        for (i, l) in self.left_action.iter().enumerate() {
            for (j, r) in self.right_action.iter().enumerate() {
                if l.mul(r) != r.mul(l) {
                    return Err(Error::InvalidModule(format!(
                        "left action of {} does not commute with right action of {}",
                        self.left.labels()[i],
                        self.right.labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Direct sum with another bimodule over the same algebras.
    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        if !same_algebra(&self.left, &other.left) || !same_algebra(&self.right, &other.right) {
            return Err(Error::AlgebraMismatch("direct sum of bimodules over different algebras".into()));
        }
        let f = self.field();
        let block = |x: &Matrix, y: &Matrix| {
            let n = x.rows() + y.rows();
            let mut m = Matrix::zeros(f, n, n);
            for r in 0..x.rows() {
                for c in 0..x.cols() {
                    m.set(r, c, x.get(r, c));
                }
            }
            for r in 0..y.rows() {
                for c in 0..y.cols() {
                    m.set(x.rows() + r, x.cols() + c, y.get(r, c));
                }
            }
            m
        };
        let la = self.left_action.iter().zip(&other.left_action).map(|(x, y)| block(x, y)).collect();
        let ra = self.right_action.iter().zip(&other.right_action).map(|(x, y)| block(x, y)).collect();
        Bimodule::new(self.left.clone(), self.right.clone(), self.dim + other.dim, la, ra)
    }

    /// Transports the structure along an invertible change of basis `t` (new = t · old).
    pub fn transport(&self, t: &Matrix) -> Result<Bimodule> {
        let ti = t.inverse().ok_or_else(|| Error::InvalidModule("change of basis is not invertible".into()))?;
        let la = self.left_action.iter().map(|x| t.mul(x).mul(&ti)).collect();
        let ra = self.right_action.iter().map(|x| t.mul(x).mul(&ti)).collect();
        Bimodule::new(self.left.clone(), self.right.clone(), self.dim, la, ra)
    }
}

/// Extends generator images to a matrix representation of `g`, indexed by group
/// element, checking that the images define a homomorphism.
pub fn group_representation(g: &crate::groups::FiniteGroup, gens: &[(usize, Matrix)]) -> Result<Vec<Matrix>> {
    let Some((_, first)) = gens.first() else {
        return Err(Error::InvalidModule("no generator images".into()));
    };
    let (f, n) = (first.field(), first.rows());
    let mut rep: Vec<Option<Matrix>> = vec![None; g.order()];
    rep[0] = Some(Matrix::identity(f, n));
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (s, ms) in gens {
            if ms.rows() != n || ms.cols() != n {
                return Err(Error::InvalidModule("generator matrices have different sizes".into()));
            }
            let y = g.mul(x, *s);
            let value = rep[x].as_ref().unwrap().mul(ms);
            match &rep[y] {
                Some(existing) if *existing != value => {
                    return Err(Error::InvalidModule(format!("generator images do not respect the relations (at {})", g.label(y))));
                }
                Some(_) => {}
                None => {
                    rep[y] = Some(value);
                    queue.push_back(y);
                }
            }
        }
    }
    rep.into_iter().map(|m| m.ok_or_else(|| Error::InvalidModule("the given elements do not generate the group".into()))).collect()
}

/// The `(b·kN, b′·kN′)`-bimodule on `k^dim` given by the left action of generators
/// of `N` and the right action of generators of `N′` (group indices of the ambient
/// group). Right generator matrices are the maps `m -> m·s`.
pub fn block_bimodule(
    b: &crate::grading::BlockExtension,
    bp: &crate::grading::BlockExtension,
    dim: usize,
    left_gens: &[(usize, Matrix)],
    right_gens: &[(usize, Matrix)],
) -> Result<Bimodule> {
    let f = b.graded.field();
    let local = |ext: &crate::grading::BlockExtension, gens: &[(usize, Matrix)], invert: bool| -> Result<Vec<Matrix>> {
        let h = crate::groups::subgroup_as_group(&ext.group, &ext.carrier_normal);
        let mut images = Vec::with_capacity(gens.len());
        for (x, mat) in gens {
            let pos = ext.carrier_normal.position(*x).ok_or_else(|| Error::InvalidModule(format!("{} is not in the normal subgroup", ext.group.label(*x))))?;
            if mat.rows() != dim || mat.cols() != dim {
                return Err(Error::DimensionMismatch(format!("generator {} needs a {dim}×{dim} matrix", ext.group.label(*x))));
            }
            let mat = if invert { mat.inverse().ok_or_else(|| Error::InvalidModule("generator matrix is singular".into()))? } else { mat.clone() };
            images.push((pos, mat));
        }
        let rep = if h.order() == 1 { vec![Matrix::identity(f, dim)] } else { group_representation(&h, &images)? };
        // R_{xy} = R_y R_x: the right action is n -> ρ(n)⁻¹ for the representation ρ(s) = R_s⁻¹.
        let rep = if invert { rep.iter().map(|m| m.inverse().expect("representation matrices are invertible")).collect() } else { rep };
        Ok(ext.block.embedding.basis().iter().map(|v| combine(f, dim, &rep, v)).collect())
    };
    let left = local(b, left_gens, false)?;
    let right = local(bp, right_gens, true)?;
    Bimodule::new(b.graded.one_component.clone(), bp.graded.one_component.clone(), dim, left, right)
}

pub(crate) fn combine(f: PrimeField, dim: usize, mats: &[Matrix], coeffs: &[u64]) -> Matrix {
    let mut out = Matrix::zeros(f, dim, dim);
    for (m, &c) in mats.iter().zip(coeffs) {
        if c != 0 {
            out.add_scaled(c, m);
        }
    }
    out
}

fn sparse_combine(f: PrimeField, dim: usize, mats: &[Matrix], terms: &[(usize, u64)]) -> Matrix {
    let mut out = Matrix::zeros(f, dim, dim);
    for &(k, c) in terms {
        out.add_scaled(c, &mats[k]);
    }
    out
}

/// `M ⊗_B N` as a quotient of `M ⊗_k N` (index `i * dim N + j`), with
/// canonical coordinates on the non-pivot columns of the reduced relation space.
#[derive(Clone, Debug)]
pub struct TensorQuotient {
    pub bimodule: Bimodule,
    relations: RowReducer,
    free: Vec<usize>,
    free_position: Vec<Option<usize>>,
    left_dim: usize,
    right_dim: usize,
}

pub fn tensor_over(m: &Bimodule, n: &Bimodule) -> Result<TensorQuotient> {
    if !same_algebra(&m.right, &n.left) {
        return Err(Error::AlgebraMismatch("right algebra of M differs from left algebra of N".into()));
    }
    let f = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    let total = dm * dn;
    let mut rr = RowReducer::new(f, total);
    for b in 0..m.right.dim() {
        let rb = m.right_basis_action(b);
        let lb = n.left_basis_action(b);
        for i in 0..dm {
            let mb = rb.column(i);
            let ei = unit_vector(dm, i);
            for j in 0..dn {
                let left = kron_vec(f, &mb, &unit_vector(dn, j));
                let right = kron_vec(f, &ei, &lb.column(j));
                let rel = crate::linalg::vec_sub(f, &left, &right);
                if !is_zero_vector(&rel) {
                    rr.push(rel);
                }
            }
        }
    }
    let mut is_pivot = vec![false; total];
    for &p in rr.pivots() {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..total).filter(|&c| !is_pivot[c]).collect();
    let mut free_position = vec![None; total];
    for (k, &c) in free.iter().enumerate() {
        free_position[c] = Some(k);
    }
    let q = free.len();
    let mut tq = TensorQuotient {
        bimodule: Bimodule { left: m.left.clone(), right: n.right.clone(), dim: q, left_action: Vec::new(), right_action: Vec::new() },
        relations: rr,
        free,
        free_position,
        left_dim: dm,
        right_dim: dn,
    };
    let left_action = m.left_actions().iter().map(|l| tq.descend_unchecked(|i, j| kron_vec(f, &l.column(i), &unit_vector(dn, j)))).collect();
    let right_action = n.right_actions().iter().map(|r| tq.descend_unchecked(|i, j| kron_vec(f, &unit_vector(dm, i), &r.column(j)))).collect();
    tq.bimodule = Bimodule::new(m.left.clone(), n.right.clone(), q, left_action, right_action)?;
    Ok(tq)
}

impl TensorQuotient {
    pub fn dim(&self) -> usize {
        self.free.len()
    }
    pub fn factor_dims(&self) -> (usize, usize) {
        (self.left_dim, self.right_dim)
    }

    /// Quotient coordinates of a vector of `M ⊗_k N`.
    pub fn project(&self, v: &[u64]) -> Vector {
        let mut w = v.to_vec();
        self.relations.reduce(&mut w);
        self.free.iter().map(|&c| w[c]).collect()
    }

    /// Quotient coordinates of `x ⊗ y`.
    pub fn pure(&self, x: &[u64], y: &[u64]) -> Vector {
        self.project(&kron_vec(self.bimodule.field(), x, y))
    }

    /// Quotient coordinates of `e_i ⊗ e_j`.
    pub fn pure_basis(&self, i: usize, j: usize) -> Vector {
        let mut v = vec![0; self.left_dim * self.right_dim];
        v[i * self.right_dim + j] = 1;
        self.project(&v)
    }

    /// The pure basis tensor `e_i ⊗ e_j` representing quotient basis vector `k`.
    pub fn lift(&self, k: usize) -> (usize, usize) {
        (self.free[k] / self.right_dim, self.free[k] % self.right_dim)
    }

    /// Whether `e_i ⊗ e_j` is itself a quotient basis vector.
    pub fn free_position(&self, i: usize, j: usize) -> Option<usize> {
        self.free_position[i * self.right_dim + j]
    }

    fn descend_unchecked(&self, map: impl Fn(usize, usize) -> Vector) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim())
            .map(|k| {
                let (i, j) = self.lift(k);
                self.project(&map(i, j))
            })
            .collect();
        Matrix::from_columns(self.bimodule.field(), self.dim(), &cols)
    }

    /// Descends a map defined on pure basis tensors `e_i ⊗ e_j` (values in a space
    /// of dimension `target_dim`) to the quotient, checking it vanishes on relations.
    pub fn descend(&self, target_dim: usize, map: impl Fn(usize, usize) -> Vector) -> Result<Matrix> {
        let f = self.bimodule.field();
        let (dm, dn) = (self.left_dim, self.right_dim);
        let images: Vec<Vector> = (0..dm * dn).map(|c| map(c / dn, c % dn)).collect();
        let full = Matrix::from_columns(f, target_dim, &images);
        for rel in self.relations.rows() {
            if !is_zero_vector(&full.mul_vec(rel)) {
                return Err(Error::IllDefined("map does not vanish on the balancing relations".into()));
            }
        }
        let cols: Vec<Vector> = self.free.iter().map(|&c| images[c].clone()).collect();
        Ok(Matrix::from_columns(f, target_dim, &cols))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Left-module homomorphisms.
    Left,
    /// Bimodule homomorphisms.
    Both,
}

/// Basis of `Hom(M, N)`, as `dim N × dim M` matrices.
pub fn hom_space(m: &Bimodule, n: &Bimodule, side: Side) -> Result<Vec<Matrix>> {
    hom_space_masked(m, n, side, &|_, _| true)
}

/// `Hom(M, N)` restricted to matrices supported on entries `(r, c)` with `allowed(r, c)`.
pub fn hom_space_masked(m: &Bimodule, n: &Bimodule, side: Side, allowed: &dyn Fn(usize, usize) -> bool) -> Result<Vec<Matrix>> {
    if !same_algebra(&m.left, &n.left) {
        return Err(Error::AlgebraMismatch("Hom between modules over different algebras".into()));
    }
    if side == Side::Both && !same_algebra(&m.right, &n.right) {
        return Err(Error::AlgebraMismatch("Hom between bimodules over different right algebras".into()));
    }
    let f = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    let vars: Vec<(usize, usize)> = (0..dn).flat_map(|r| (0..dm).map(move |c| (r, c))).filter(|&(r, c)| allowed(r, c)).collect();
    let mut var_index = vec![usize::MAX; dn * dm];
    for (k, &(r, c)) in vars.iter().enumerate() {
        var_index[r * dm + c] = k;
    }
    let mut rr = RowReducer::new(f, vars.len());
    let mut pairs: Vec<(&Matrix, &Matrix)> = m.left_actions().iter().zip(n.left_actions()).collect();
    if side == Side::Both {
        pairs.extend(m.right_actions().iter().zip(n.right_actions()));
    }
    // f X = Y f, entry (r, c): sum_k f[r,k] X[k,c] - sum_k Y[r,k] f[k,c] = 0
    for (x, y) in pairs {
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![0; vars.len()];
                for k in 0..dm {
                    let v = var_index[r * dm + k];
                    if v != usize::MAX && x.get(k, c) != 0 {
                        row[v] = f.add(row[v], x.get(k, c));
                    }
                }
                for k in 0..dn {
                    let v = var_index[k * dm + c];
                    if v != usize::MAX && y.get(r, k) != 0 {
                        row[v] = f.sub(row[v], y.get(r, k));
                    }
                }
                if !is_zero_vector(&row) {
                    rr.push(row);
                }
            }
        }
    }
    Ok(rr
        .nullspace()
        .into_iter()
        .map(|sol| {
            let mut mat = Matrix::zeros(f, dn, dm);
            for (k, &(r, c)) in vars.iter().enumerate() {
                mat.set(r, c, sol[k]);
            }
            mat
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Matrix),
    /// Every element of the space was tried.
    Exhausted,
    /// The seeded trial budget ran out.
    Inconclusive,
}

/// Searches the span of `basis` for a matrix accepted by `accept`: basis elements
/// first, then every combination when the span has at most [`EXHAUSTIVE_LIMIT`]
/// elements, otherwise [`RANDOM_TRIALS`] seeded random combinations.
pub fn search_span(field: PrimeField, basis: &[Matrix], seed: u64, mut accept: impl FnMut(&Matrix) -> bool) -> SearchOutcome {
    for b in basis {
        if accept(b) {
            return SearchOutcome::Found(b.clone());
        }
    }
    if basis.is_empty() {
        return SearchOutcome::Exhausted;
    }
    let (rows, cols) = (basis[0].rows(), basis[0].cols());
    let p = field.modulus();
    let k = basis.len() as u32;
    let size = p.checked_pow(k).filter(|&s| s <= EXHAUSTIVE_LIMIT);
    let build = |coeffs: &[u64]| {
        let mut m = Matrix::zeros(field, rows, cols);
        for (b, &c) in basis.iter().zip(coeffs) {
            if c != 0 {
                m.add_scaled(c, b);
            }
        }
        m
    };
    if let Some(size) = size {
        let mut coeffs = vec![0u64; basis.len()];
        for _ in 1..size {
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c == p {
                    *c = 0;
                } else {
                    break;
                }
            }
            let m = build(&coeffs);
            if accept(&m) {
                return SearchOutcome::Found(m);
            }
        }
        return SearchOutcome::Exhausted;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<u64> = (0..basis.len()).map(|_| rng.gen_range(0..p)).collect();
        let m = build(&coeffs);
        if accept(&m) {
            return SearchOutcome::Found(m);
        }
    }
    SearchOutcome::Inconclusive
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// An explicit isomorphism `M -> N`.
    Isomorphic(Matrix),
    /// Proven: no invertible homomorphism exists.
    NotIsomorphic,
    /// No witness found within the trial budget.
    Inconclusive,
}

impl IsoOutcome {
    pub fn witness(&self) -> Option<&Matrix> {
        match self {
            IsoOutcome::Isomorphic(m) => Some(m),
            _ => None,
        }
    }
}

pub fn is_isomorphic(m: &Bimodule, n: &Bimodule, side: Side, seed: u64) -> Result<IsoOutcome> {
    is_isomorphic_masked(m, n, side, &|_, _| true, seed)
}

/// Isomorphism search within the homomorphisms supported on `allowed` entries.
pub fn is_isomorphic_masked(m: &Bimodule, n: &Bimodule, side: Side, allowed: &dyn Fn(usize, usize) -> bool, seed: u64) -> Result<IsoOutcome> {
    if m.dim() != n.dim() {
        return Ok(IsoOutcome::NotIsomorphic);
    }
    if m.dim() == 0 {
        return Ok(IsoOutcome::Isomorphic(Matrix::zeros(m.field(), 0, 0)));
    }
    let basis = hom_space_masked(m, n, side, allowed)?;
    Ok(match search_span(m.field(), &basis, seed, |x| x.is_invertible()) {
        SearchOutcome::Found(x) => IsoOutcome::Isomorphic(x),
        SearchOutcome::Exhausted => IsoOutcome::NotIsomorphic,
        SearchOutcome::Inconclusive => IsoOutcome::Inconclusive,
    })
}

/// `M* = Hom_B(M, B)` for a `(B, B′)`-bimodule `M`, as a `(B′, B)`-bimodule with
/// `(b′ f b)(m) = f(m b′) b`.
#[derive(Clone, Debug)]
pub struct DualBimodule {
    pub bimodule: Bimodule,
    /// Basis homomorphisms as `dim B × dim M` matrices.
    pub basis: Vec<Matrix>,
    /// Degree of each basis homomorphism, for duals of graded bimodules.
    pub degree: Option<Vec<usize>>,
    space: Subspace,
}

pub fn dual_bimodule(m: &Bimodule) -> Result<DualBimodule> {
    let b = Bimodule::regular_left(m.left.clone());
    let basis = hom_space(&m.as_left_module(), &b, Side::Left)?;
    DualBimodule::from_basis(m, basis, None)
}

/// `Hom_A(M, A)` for a graded `(A, A′)`-bimodule, split into homogeneous parts:
/// a homomorphism of degree `d` maps `M_h` into `A_{hd}`.
pub fn graded_dual(m: &GradedBimodule, a: &GradedAlgebra) -> Result<DualBimodule> {
    let reg = Bimodule::regular_left(m.bimodule.left.clone());
    let left = m.bimodule.as_left_module();
    let g = &a.grading;
    let mut basis = Vec::new();
    let mut degree = Vec::new();
    for d in g.elements() {
        let part = hom_space_masked(&left, &reg, Side::Left, &|r, c| a.degree[r] == g.mul(m.degree[c], d))?;
        degree.extend(std::iter::repeat_n(d, part.len()));
        basis.extend(part);
    }
    DualBimodule::from_basis(&m.bimodule, basis, Some(degree))
}

impl DualBimodule {
    fn from_basis(m: &Bimodule, basis: Vec<Matrix>, degree: Option<Vec<usize>>) -> Result<Self> {
        let f = m.field();
        let db = m.left.dim();
        let space = Subspace::new(f, db * m.dim(), basis.iter().map(|x| x.to_vector()).collect())
            .ok_or_else(|| Error::Inconsistent("Hom basis is dependent".into()))?;
        let k = basis.len();
        let coords = |x: &Matrix| space.coords(&x.to_vector()).ok_or_else(|| Error::Inconsistent("action leaves the dual".into()));
        let mut left_action = Vec::with_capacity(m.right.dim());
        for r in m.right_actions() {
            let cols = basis.iter().map(|fb| coords(&fb.mul(r))).collect::<Result<Vec<_>>>()?;
            left_action.push(Matrix::from_columns(f, k, &cols));
        }
        let mut right_action = Vec::with_capacity(db);
        for j in 0..db {
            let rb = m.left.right_mult_matrix(&m.left.basis_element(j));
            let cols = basis.iter().map(|fb| coords(&rb.mul(fb))).collect::<Result<Vec<_>>>()?;
            right_action.push(Matrix::from_columns(f, k, &cols));
        }
        let bimodule = Bimodule::new(m.right.clone(), m.left.clone(), k, left_action, right_action)?;
        Ok(Self { bimodule, basis, degree, space })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The homomorphism with the given coordinates, as a matrix.
    pub fn as_matrix(&self, f: &[u64]) -> Matrix {
        let field = self.bimodule.field();
        let (r, c) = (self.basis[0].rows(), self.basis[0].cols());
        Matrix::from_vector(field, r, c, &self.space.combine(f))
    }

    /// `f(m)` for `f` in dual coordinates.
    pub fn evaluate(&self, f: &[u64], m: &[u64]) -> Vector {
        self.as_matrix(f).mul_vec(m)
    }

    pub fn coords(&self, f: &Matrix) -> Option<Vector> {
        self.space.coords(&f.to_vector())
    }
}

/// A bimodule over graded algebras with a homogeneous basis.
#[derive(Clone, Debug)]
pub struct GradedBimodule {
    pub bimodule: Bimodule,
    pub grading: crate::groups::FiniteGroup,
    pub degree: Vec<usize>,
}

impl GradedBimodule {
    /// Checks `A_g M_h ⊆ M_gh` and `M_h A′_g ⊆ M_hg` on basis elements.
    pub fn new(bimodule: Bimodule, a: &GradedAlgebra, ap: &GradedAlgebra, degree: Vec<usize>) -> Result<Self> {
        if a.grading != ap.grading {
            return Err(Error::GradingMismatch("bimodule over differently graded algebras".into()));
        }
        if !same_algebra(&bimodule.left, &a.algebra) || !same_algebra(&bimodule.right, &ap.algebra) {
            return Err(Error::AlgebraMismatch("graded algebras do not match the bimodule".into()));
        }
        if degree.len() != bimodule.dim() {
            return Err(Error::InvalidGrading("one degree per basis vector is required".into()));
        }
        let g = &a.grading;
        for (side, grading, actions) in [("left", a, bimodule.left_actions()), ("right", ap, bimodule.right_actions())] {
            for (i, x) in actions.iter().enumerate() {
                let dx = grading.degree[i];
                for c in 0..x.cols() {
                    let target = if side == "left" { g.mul(dx, degree[c]) } else { g.mul(degree[c], dx) };
                    if let Some(r) = (0..x.rows()).find(|&r| x.get(r, c) != 0 && degree[r] != target) {
                        return Err(Error::InvalidGrading(format!(
                            "{side} action of basis element {i} sends basis vector {c} outside degree {} (hits {r})",
                            g.label(target)
                        )));
                    }
                }
            }
        }
        Ok(Self { bimodule, grading: g.clone(), degree })
    }

    pub fn component(&self, d: usize) -> Vec<usize> {
        (0..self.degree.len()).filter(|&i| self.degree[i] == d).collect()
    }

    /// Whether `A_g M_h = M_gh` for all pairs (rank check on the left action).
    pub fn is_strongly_graded(&self, a: &GradedAlgebra) -> bool {
        let f = self.bimodule.field();
        let g = &self.grading;
        for x in g.elements() {
            for h in g.elements() {
                let target = self.component(g.mul(x, h));
                let span = Subspace::spanned_by(
                    f,
                    self.bimodule.dim(),
                    a.component(x).iter().flat_map(|&i| {
                        let l = self.bimodule.left_basis_action(i);
                        self.component(h).into_iter().map(move |c| l.column(c))
                    }),
                );
                if span.dim() != target.len() {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix entries `(r, c)` a degree-preserving map into `other` may use.
    pub fn degree_preserving_mask<'a>(&'a self, other: &'a [usize]) -> impl Fn(usize, usize) -> bool + 'a {
        move |r, c| other[r] == self.degree[c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{block_cut, group_algebra, primitive_central_idempotents};
    use crate::groups::FiniteGroup;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Defect-zero block of F2[S3] and its 2-dim simple module, via the
    /// representation (0 1 2) -> [[0,1],[1,1]], (0 1) -> [[0,1],[1,0]].
    fn fixture() -> (Arc<Algebra>, Bimodule) {
        let f = fp(2);
        let s3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], 10).unwrap();
        let ka = group_algebra(&s3, f);
        let e = primitive_central_idempotents(&ka).idempotents[1].clone();
        let b = block_cut(&ka, &e).unwrap();
        let rho = group_rep(&s3, f);
        let action: Vec<Matrix> = b.embedding.basis().iter().map(|v| combine(f, 2, &rho, v)).collect();
        let m = Bimodule::left_module(b.algebra.clone(), 2, action).unwrap();
        (b.algebra.clone(), m)
    }

    fn group_rep(s3: &FiniteGroup, f: PrimeField) -> Vec<Matrix> {
        let c = Matrix::from_rows(f, 2, 2, &[vec![0, 1], vec![1, 1]]);
        let t = Matrix::from_rows(f, 2, 2, &[vec![0, 1], vec![1, 0]]);
        let mut rep = vec![None; 6];
        rep[0] = Some(Matrix::identity(f, 2));
        let gens = [(s3.index_of("(0 1 2)").unwrap(), c), (s3.index_of("(0 1)").unwrap(), t)];
        let mut changed = true;
        while changed {
            changed = false;
            for x in 0..6 {
                if let Some(mx) = rep[x].clone() {
                    for (g, mg) in &gens {
                        let y = s3.mul(x, *g);
                        if rep[y].is_none() {
                            rep[y] = Some(mx.mul(mg));
                            changed = true;
                        }
                    }
                }
            }
        }
        rep.into_iter().map(|m| m.unwrap()).collect()
    }

    #[test]
    fn regular_bimodule_is_valid() {
        let (b, _) = fixture();
        Bimodule::regular(b.clone()).validate().unwrap();
    }

    #[test]
    fn unit_tensor_identities() {
        let (b, m) = fixture();
        let reg = Bimodule::regular(b.clone());
        let t = tensor_over(&reg, &m).unwrap();
        assert_eq!(t.dim(), m.dim());
        // b ⊗ m -> bm descends and is an isomorphism of left modules
        let mult = t.descend(m.dim(), |i, j| m.left_basis_action(i).column(j)).unwrap();
        assert!(mult.is_invertible());
        for k in 0..b.dim() {
            assert_eq!(mult.mul(t.bimodule.left_basis_action(k)), m.left_basis_action(k).mul(&mult));
        }
        let t2 = tensor_over(&reg, &reg).unwrap();
        assert_eq!(t2.dim(), b.dim());
    }

    #[test]
    fn dual_of_simple_and_tensor() {
        let (b, m) = fixture();
        let d = dual_bimodule(&m).unwrap();
        assert_eq!(d.dim(), 2);
        let t = tensor_over(&d.bimodule, &m).unwrap();
        assert_eq!(t.dim(), 1);
        let dd = dual_bimodule(&d.bimodule).unwrap();
        assert!(Arc::ptr_eq(&dd.bimodule.left, &b));
        assert!(is_isomorphic(&dd.bimodule, &m, Side::Both, 0).unwrap().witness().is_some());
    }

    #[test]
    fn double_dual_of_regular() {
        let (b, _) = fixture();
        let reg = Bimodule::regular(b.clone());
        let d = dual_bimodule(&reg).unwrap();
        assert_eq!(d.dim(), b.dim());
        assert!(is_isomorphic(&d.bimodule, &reg, Side::Both, 0).unwrap().witness().is_some());
    }

    #[test]
    fn hom_dimensions() {
        let (b, m) = fixture();
        assert_eq!(hom_space(&m, &m, Side::Left).unwrap().len(), 1);
        let reg = Bimodule::regular_left(b.clone());
        assert_eq!(hom_space(&reg, &reg, Side::Left).unwrap().len(), b.dim());
        let zero = Bimodule::left_module(b.clone(), 0, vec![Matrix::zeros(fp(2), 0, 0); b.dim()]).unwrap();
        assert!(hom_space(&m, &zero, Side::Left).unwrap().is_empty());
    }

    #[test]
    fn isomorphism_search() {
        let (b, m) = fixture();
        let w = is_isomorphic(&m, &m, Side::Left, 0).unwrap();
        assert!(w.witness().is_some());
        let f = fp(2);
        let t = Matrix::from_rows(f, 2, 2, &[vec![1, 1], vec![0, 1]]);
        let m2 = m.transport(&t).unwrap();
        let w = is_isomorphic(&m, &m2, Side::Left, 0).unwrap();
        let x = w.witness().unwrap().clone();
        let xi = x.inverse().unwrap();
        assert!(is_isomorphic(&m2, &m, Side::Left, 0).unwrap().witness().is_some());
        for k in 0..b.dim() {
            assert_eq!(x.mul(m.left_basis_action(k)), m2.left_basis_action(k).mul(&x));
            assert_eq!(xi.mul(m2.left_basis_action(k)), m.left_basis_action(k).mul(&xi));
        }
        let reg = Bimodule::regular_left(b.clone());
        let mm = m.direct_sum(&m).unwrap();
        assert!(is_isomorphic(&reg, &mm, Side::Left, 0).unwrap().witness().is_some());
        let reg2 = Bimodule::regular_left(b.clone());
        assert_eq!(is_isomorphic(&reg2, &m, Side::Left, 0).unwrap(), IsoOutcome::NotIsomorphic);
    }

    #[test]
    fn regular_group_algebra_permuted() {
        let f = fp(2);
        let s3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], 10).unwrap();
        let ka = Arc::new(group_algebra(&s3, f));
        let reg = Bimodule::regular(ka.clone());
        let mut perm = Matrix::zeros(f, 6, 6);
        for i in 0..6 {
            perm.set((i + 1) % 6, i, 1);
        }
        let moved = reg.transport(&perm).unwrap();
        assert!(is_isomorphic(&reg, &moved, Side::Both, 0).unwrap().witness().is_some());
    }

    #[test]
    fn invalid_modules_rejected() {
        let (b, _) = fixture();
        let f = fp(2);
        let bad = vec![Matrix::identity(f, 2); b.dim()];
        assert!(Bimodule::left_module(b, 2, bad).is_err());
    }

    #[test]
    fn descend_rejects_unbalanced_map() {
        let (b, m) = fixture();
        let reg = Bimodule::regular(b.clone());
        let t = tensor_over(&reg, &m).unwrap();
        // (i, j) -> e_j ignores the B-action and is not balanced
        assert!(t.descend(m.dim(), |_, j| unit_vector(2, j)).is_err());
    }
}
