//! Morita contexts for a bimodule and its dual, module structures over the
//! diagonal subalgebra `Δ`, and the induced graded bimodules.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::bimodule::{
    dual_bimodule, hom_space, same_algebra, search_span, tensor_over, Bimodule, DualBimodule, GradedBimodule, SearchOutcome, Side, TensorQuotient,
};
use crate::error::{Error, Result};
use crate::grading::{diagonal_subalgebra, DiagonalAlgebra, GradedAlgebra};
use crate::linalg::{is_zero_vector, unit_vector, Matrix, Vector};

/// `(φ, ψ)` with dual bases for a bimodule `M` over `(B, B′)` and its dual `M*`.
#[derive(Clone, Debug)]
pub struct MoritaContext {
    pub m: Bimodule,
    pub mstar: DualBimodule,
    /// `M* ⊗_B M`, the domain of `φ`.
    pub star_m: TensorQuotient,
    /// `M ⊗_{B′} M*`, the domain of `ψ`.
    pub m_star: TensorQuotient,
    /// `φ: M* ⊗_B M -> B′`.
    pub phi: Matrix,
    /// `ψ: M ⊗_{B′} M* -> B`, evaluation.
    pub psi: Matrix,
    /// Pairs `(m_j*, m_j)` with `φ(Σ m_j* ⊗ m_j) = 1`.
    pub dual_basis_j: Vec<(Vector, Vector)>,
    /// Pairs `(n_i, n_i*)` with `ψ(Σ n_i ⊗ n_i*) = 1`.
    pub dual_basis_i: Vec<(Vector, Vector)>,
}

pub fn build_morita_context(m: &Bimodule) -> Result<MoritaContext> {
    let mstar = dual_bimodule(m)?;
    build_morita_context_with(m, mstar)
}

/// Builds the context from a given basis of `Hom(M, left algebra)` (for example
/// one split into graded parts).
pub fn build_morita_context_with(m: &Bimodule, mstar: DualBimodule) -> Result<MoritaContext> {
    let f = m.field();
    let b = m.left.clone();
    let bp = m.right.clone();
    let dm = m.dim();
    let ds = mstar.dim();

    // φ(f ⊗ e_j) = the unique b′ with n b′ = f(n) e_j for every n.
    let mut system = Matrix::zeros(f, dm * dm, bp.dim());
    for k in 0..bp.dim() {
        let r = m.right_basis_action(k);
        for n in 0..dm {
            for row in 0..dm {
                system.set(n * dm + row, k, r.get(row, n));
            }
        }
    }
    if system.rank() < bp.dim() {
        return Err(Error::NotFaithfullyBalanced("the right action is not faithful".into()));
    }
    let mut phi_pure = vec![vec![Vec::new(); dm]; ds];
    for (a, fm) in mstar.basis.iter().enumerate() {
        for j in 0..dm {
            let mut rhs = vec![0; dm * dm];
            for n in 0..dm {
                let v = m.left_matrix(&fm.column(n)).column(j);
                rhs[n * dm..(n + 1) * dm].copy_from_slice(&v);
            }
            phi_pure[a][j] = system.solve(&rhs).ok_or_else(|| Error::NotFaithfullyBalanced("n -> f(n) m is not a right multiplication".into()))?;
        }
    }
    let star_m = tensor_over(&mstar.bimodule, m)?;
    let phi = star_m.descend(bp.dim(), |a, j| phi_pure[a][j].clone())?;

    let m_star = tensor_over(m, &mstar.bimodule)?;
    let psi = m_star.descend(b.dim(), |i, a| mstar.basis[a].column(i))?;

    if phi.rows() != phi.cols() || !phi.is_invertible() {
        return Err(Error::NotMorita(format!("φ: M* ⊗ M -> B′ is not bijective ({}x{})", phi.rows(), phi.cols())));
    }
    if psi.rows() != psi.cols() || !psi.is_invertible() {
        return Err(Error::NotMorita(format!("ψ: M ⊗ M* -> B is not bijective ({}x{})", psi.rows(), psi.cols())));
    }
    check_bimodule_map(&phi, &star_m.bimodule, &Bimodule::regular(bp.clone()), "φ")?;
    check_bimodule_map(&psi, &m_star.bimodule, &Bimodule::regular(b.clone()), "ψ")?;

    let t = phi.inverse().unwrap().mul_vec(bp.unit());
    let dual_basis_j = group_pure_terms(&star_m, &t, ds, dm, false);
    let t = psi.inverse().unwrap().mul_vec(b.unit());
    let dual_basis_i = group_pure_terms(&m_star, &t, dm, ds, true);

    let ctx = MoritaContext { m: m.clone(), mstar, star_m, m_star, phi, psi, dual_basis_j, dual_basis_i };
    ctx.validate()?;
    Ok(ctx)
}

/// Writes quotient coordinates `t` as a sum of pure tensors grouped by the `M` factor.
/// Returns `(M* part, M part)` pairs, or `(M part, M* part)` when `m_first`.
fn group_pure_terms(tq: &TensorQuotient, t: &[u64], left_dim: usize, right_dim: usize, m_first: bool) -> Vec<(Vector, Vector)> {
    let f = tq.bimodule.field();
    let mut groups: Vec<Vector> = vec![vec![0; if m_first { right_dim } else { left_dim }]; if m_first { left_dim } else { right_dim }];
    for (k, &c) in t.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (i, j) = tq.lift(k);
        if m_first {
            groups[i][j] = f.add(groups[i][j], c);
        } else {
            groups[j][i] = f.add(groups[j][i], c);
        }
    }
    let mdim = if m_first { left_dim } else { right_dim };
    groups
        .into_iter()
        .enumerate()
        .filter(|(_, g)| !is_zero_vector(g))
        .map(|(idx, g)| {
            let mvec = unit_vector(mdim, idx);
            if m_first {
                (mvec, g)
            } else {
                (g, mvec)
            }
        })
        .collect()
}

pub(crate) fn check_bimodule_map(map: &Matrix, from: &Bimodule, to: &Bimodule, name: &str) -> Result<()> {
    for (x, y) in from.left_actions().iter().zip(to.left_actions()) {
        if map.mul(x) != y.mul(map) {
            return Err(Error::Inconsistent(format!("{name} is not left linear")));
        }
    }
    for (x, y) in from.right_actions().iter().zip(to.right_actions()) {
        if map.mul(x) != y.mul(map) {
            return Err(Error::Inconsistent(format!("{name} is not right linear")));
        }
    }
    Ok(())
}

impl MoritaContext {
    /// `φ(f ⊗ m)` for `f ∈ M*`, `m ∈ M` in coordinates.
    pub fn phi_of(&self, fstar: &[u64], m: &[u64]) -> Vector {
        self.phi.mul_vec(&self.star_m.pure(fstar, m))
    }

    /// `ψ(m ⊗ f) = f(m)`.
    pub fn psi_of(&self, m: &[u64], fstar: &[u64]) -> Vector {
        self.psi.mul_vec(&self.m_star.pure(m, fstar))
    }

    /// Checks both associativity identities on basis triples and both unit equations.
    pub fn validate(&self) -> Result<()> {
        let dm = self.m.dim();
        let ds = self.mstar.dim();
        let ms = &self.mstar.bimodule;
        for i in 0..dm {
            let mi = unit_vector(dm, i);
            for a in 0..ds {
                let fa = unit_vector(ds, a);
                let psi = self.psi_of(&mi, &fa);
                let phi = self.phi_of(&fa, &mi);
                for n in 0..dm {
                    let nv = unit_vector(dm, n);
                    // ψ(m ⊗ m*) n = m φ(m* ⊗ n)
                    if self.m.act_left(&psi, &nv) != self.m.act_right(&mi, &self.phi_of(&fa, &nv)) {
                        return Err(Error::NotMorita("ψ(m ⊗ m*) n ≠ m φ(m* ⊗ n)".into()));
                    }
                }
                for c in 0..ds {
                    let nc = unit_vector(ds, c);
                    // φ(m* ⊗ m) n* = m* ψ(m ⊗ n*)
                    if ms.act_left(&phi, &nc) != ms.act_right(&fa, &self.psi_of(&mi, &nc)) {
                        return Err(Error::NotMorita("φ(m* ⊗ m) n* ≠ m* ψ(m ⊗ n*)".into()));
                    }
                }
            }
        }
        let f = self.m.field();
        let mut sum = vec![0; self.m.right.dim()];
        for (fs, m) in &self.dual_basis_j {
            sum = crate::linalg::vec_add(f, &sum, &self.phi_of(fs, m));
        }
        if sum != self.m.right.unit() {
            return Err(Error::NotMorita("φ(Σ m_j* ⊗ m_j) ≠ 1".into()));
        }
        let mut sum = vec![0; self.m.left.dim()];
        for (m, fs) in &self.dual_basis_i {
            sum = crate::linalg::vec_add(f, &sum, &self.psi_of(m, fs));
        }
        if sum != self.m.left.unit() {
            return Err(Error::NotMorita("ψ(Σ n_i ⊗ n_i*) ≠ 1".into()));
        }
        Ok(())
    }
}

/// A `Δ`-module structure on a `(B, B′)`-bimodule `M`, determined by the
/// actions `X_g` of `u_g ⊗ u′_g⁻¹`. The element `x ⊗ y` with `x ∈ A_g`,
/// `y ∈ A′_{g⁻¹}` acts as `X_g L_{u_g⁻¹ x} R_{y u′_g}`.
#[derive(Clone, Debug)]
pub struct DeltaModuleStructure {
    pub a: Arc<GradedAlgebra>,
    pub ap: Arc<GradedAlgebra>,
    pub delta: Arc<DiagonalAlgebra>,
    pub m: Bimodule,
    pub unit_actions: Vec<Matrix>,
    /// `M` as a left `Δ`-module.
    pub module: Bimodule,
}

impl DeltaModuleStructure {
    pub fn new(a: Arc<GradedAlgebra>, ap: Arc<GradedAlgebra>, m: Bimodule, unit_actions: Vec<Matrix>) -> Result<Self> {
        let delta = Arc::new(diagonal_subalgebra(&a, &ap)?);
        Self::with_delta(a, ap, delta, m, unit_actions)
    }

    pub fn with_delta(a: Arc<GradedAlgebra>, ap: Arc<GradedAlgebra>, delta: Arc<DiagonalAlgebra>, m: Bimodule, unit_actions: Vec<Matrix>) -> Result<Self> {
        check_one_components(&a, &ap, &m)?;
        let g = &a.grading;
        if unit_actions.len() != g.order() {
            return Err(Error::InvalidDeltaStructure("one unit action per degree is required".into()));
        }
        let f = m.field();
        if unit_actions[0] != Matrix::identity(f, m.dim()) {
            return Err(Error::InvalidDeltaStructure("X_1 must be the identity".into()));
        }
        let mut actions = Vec::with_capacity(delta.pairs.len());
        for &(i, j) in &delta.pairs {
            let d = a.degree[i];
            let x = a.restrict_one(&a.algebra.mul(a.unit_inverse_of(d), &a.algebra.basis_element(i))).unwrap();
            let y = ap.restrict_one(&ap.algebra.mul(&ap.algebra.basis_element(j), ap.unit_of(d))).unwrap();
            actions.push(unit_actions[d].mul(&m.left_matrix(&x)).mul(&m.right_matrix(&y)));
        }
        let module =
            Bimodule::left_module(delta.graded.algebra.clone(), m.dim(), actions).map_err(|e| Error::InvalidDeltaStructure(format!("not a Δ-module: {e}")))?;
        Ok(Self { a, ap, delta, m, unit_actions, module })
    }

    /// The action of `x ⊗ y` for `x ∈ A_g`, `y ∈ A′_{g⁻¹}` (or sums of such).
    pub fn act(&self, x: &[u64], y: &[u64]) -> Matrix {
        let d = self.delta.pure(x, y).expect("x ⊗ y lies in Δ");
        self.module.left_matrix(&d)
    }

    /// `X_g L_b R_{b′} = L_{u_g b u_g⁻¹} R_{u′_g b′ u′_g⁻¹} X_g` and
    /// `X_g X_h = L_α R_{α′⁻¹} X_{gh}` with `α = u_g u_h u_gh⁻¹`, `α′ = u′_g u′_h u′_gh⁻¹`.
    pub fn check_unit_relations(&self) -> Result<()> {
        let (a, ap) = (&self.a, &self.ap);
        let g = &a.grading;
        for d in g.elements() {
            let x = &self.unit_actions[d];
            for k in 0..a.one_basis.len() {
                let b = a.embed_one(&unit_vector(a.one_basis.len(), k));
                let cb = a.restrict_one(&a.algebra.mul(&a.algebra.mul(a.unit_of(d), &b), a.unit_inverse_of(d))).unwrap();
                if x.mul(self.m.left_basis_action(k)) != self.m.left_matrix(&cb).mul(x) {
                    return Err(Error::InvalidDeltaStructure(format!("X_{} does not intertwine the left action", g.label(d))));
                }
            }
            for k in 0..ap.one_basis.len() {
                let b = ap.embed_one(&unit_vector(ap.one_basis.len(), k));
                let cb = ap.restrict_one(&ap.algebra.mul(&ap.algebra.mul(ap.unit_of(d), &b), ap.unit_inverse_of(d))).unwrap();
                if x.mul(self.m.right_basis_action(k)) != self.m.right_matrix(&cb).mul(x) {
                    return Err(Error::InvalidDeltaStructure(format!("X_{} does not intertwine the right action", g.label(d))));
                }
            }
            for h in g.elements() {
                let (lhs, rhs) = self.product_relation(d, h);
                if lhs != rhs {
                    return Err(Error::InvalidDeltaStructure(format!("X_{} X_{} violates the unit product rule", g.label(d), g.label(h))));
                }
            }
        }
        Ok(())
    }

    fn product_relation(&self, d: usize, h: usize) -> (Matrix, Matrix) {
        let corr = discrepancy(&self.a, &self.ap, &self.m, d, h);
        let gh = self.a.grading.mul(d, h);
        (self.unit_actions[d].mul(&self.unit_actions[h]), corr.mul(&self.unit_actions[gh]))
    }
}

/// `L_α R_{α′⁻¹}` for the unit discrepancy of the pair `(g, h)`.
fn discrepancy(a: &GradedAlgebra, ap: &GradedAlgebra, m: &Bimodule, g: usize, h: usize) -> Matrix {
    let gh = a.grading.mul(g, h);
    let alg = &a.algebra;
    let alpha = alg.mul(&alg.mul(a.unit_of(g), a.unit_of(h)), a.unit_inverse_of(gh));
    let alg2 = &ap.algebra;
    // α′⁻¹ = u′_gh u′_h⁻¹ u′_g⁻¹
    let alpha_p_inv = alg2.mul(&alg2.mul(ap.unit_of(gh), ap.unit_inverse_of(h)), ap.unit_inverse_of(g));
    let l = m.left_matrix(&a.restrict_one(&alpha).expect("unit discrepancy has degree 1"));
    let r = m.right_matrix(&ap.restrict_one(&alpha_p_inv).expect("unit discrepancy has degree 1"));
    l.mul(&r)
}

fn check_one_components(a: &GradedAlgebra, ap: &GradedAlgebra, m: &Bimodule) -> Result<()> {
    if a.units.is_none() || ap.units.is_none() {
        return Err(Error::InvalidGrading("Δ-structures need crossed-product units".into()));
    }
    if !same_algebra(&m.left, &a.one_component) || !same_algebra(&m.right, &ap.one_component) {
        return Err(Error::AlgebraMismatch("M must be a bimodule over the 1-components".into()));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum DeltaSearch {
    Found(Box<DeltaModuleStructure>),
    /// Proven: no extension exists.
    NoneCertain,
    /// No extension found within the trial budget.
    Inconclusive,
}

impl DeltaSearch {
    pub fn structure(&self) -> Option<&DeltaModuleStructure> {
        match self {
            DeltaSearch::Found(s) => Some(s),
            _ => None,
        }
    }
}

/// `M` with both actions twisted by conjugation with `u_g` and `u′_g`:
/// `b · m · b′ = (u_g b u_g⁻¹) m (u′_g b′ u′_g⁻¹)`.
fn conjugated(a: &GradedAlgebra, ap: &GradedAlgebra, m: &Bimodule, g: usize) -> Result<Bimodule> {
    let conj = |ga: &GradedAlgebra| -> Vec<Vector> {
        (0..ga.one_basis.len())
            .map(|k| {
                let b = ga.embed_one(&unit_vector(ga.one_basis.len(), k));
                let c = ga.algebra.mul(&ga.algebra.mul(ga.unit_of(g), &b), ga.unit_inverse_of(g));
                ga.restrict_one(&c).expect("units normalize the 1-component")
            })
            .collect()
    };
    m.restrict(m.left.clone(), &conj(a), m.right.clone(), &conj(ap))
}

/// Searches for `X_s` on a generating set, extends along the Cayley graph using
/// the unit product rule, and validates the full `Δ`-module structure.
pub fn find_delta_extension(a: Arc<GradedAlgebra>, ap: Arc<GradedAlgebra>, m: &Bimodule, seed: u64) -> Result<DeltaSearch> {
    check_one_components(&a, &ap, m)?;
    let delta = Arc::new(diagonal_subalgebra(&a, &ap)?);
    let g = a.grading.clone();
    let f = m.field();
    if g.order() == 1 {
        let s = DeltaModuleStructure::with_delta(a, ap, delta, m.clone(), vec![Matrix::identity(f, m.dim())])?;
        return Ok(DeltaSearch::Found(Box::new(s)));
    }
    let gens = g.generating_set();
    let mut spaces = Vec::with_capacity(gens.len());
    for &s in &gens {
        let twisted = conjugated(&a, &ap, m, s)?;
        let space = hom_space(m, &twisted, Side::Both)?;
        if let SearchOutcome::Exhausted = search_span(f, &space, seed, |x| x.is_invertible()) {
            return Ok(DeltaSearch::NoneCertain);
        }
        spaces.push(space);
    }
    let mut found = None;
    let outcome = search_generators(&spaces, seed, &mut Vec::new(), &mut |choice| {
        let Some(actions) = extend_along_generators(&a, &ap, m, &gens, choice) else {
            return false;
        };
        match DeltaModuleStructure::with_delta(a.clone(), ap.clone(), delta.clone(), m.clone(), actions) {
            Ok(s) => {
                found = Some(s);
                true
            }
            Err(_) => false,
        }
    });
    Ok(match (outcome, found) {
        (Level::Found, Some(s)) => DeltaSearch::Found(Box::new(s)),
        (Level::Exhausted, _) => DeltaSearch::NoneCertain,
        _ => DeltaSearch::Inconclusive,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Level {
    Found,
    Exhausted,
    Inconclusive,
}

fn search_generators(spaces: &[Vec<Matrix>], seed: u64, chosen: &mut Vec<Matrix>, accept: &mut dyn FnMut(&[Matrix]) -> bool) -> Level {
    let level = chosen.len();
    if level == spaces.len() {
        return if accept(chosen) { Level::Found } else { Level::Exhausted };
    }
    let f = spaces[level][0].field();
    let mut inner_certain = true;
    let outcome = search_span(f, &spaces[level], seed.wrapping_add(level as u64), |x| {
        if !x.is_invertible() {
            return false;
        }
        chosen.push(x.clone());
        let r = search_generators(spaces, seed, chosen, accept);
        chosen.pop();
        if r == Level::Inconclusive {
            inner_certain = false;
        }
        r == Level::Found
    });
    match outcome {
        SearchOutcome::Found(_) => Level::Found,
        SearchOutcome::Exhausted if inner_certain => Level::Exhausted,
        _ => Level::Inconclusive,
    }
}

/// Breadth-first extension `X_{gs} = (L_α R_{α′⁻¹})⁻¹ X_g X_s`, with consistency
/// checks whenever an element is reached twice.
fn extend_along_generators(a: &GradedAlgebra, ap: &GradedAlgebra, m: &Bimodule, gens: &[usize], choice: &[Matrix]) -> Option<Vec<Matrix>> {
    let g = &a.grading;
    let mut x: Vec<Option<Matrix>> = vec![None; g.order()];
    x[0] = Some(Matrix::identity(m.field(), m.dim()));
    let mut queue = VecDeque::from([0]);
    while let Some(h) = queue.pop_front() {
        for (k, &s) in gens.iter().enumerate() {
            let hs = g.mul(h, s);
            let corr = discrepancy(a, ap, m, h, s);
            let prod = x[h].as_ref().unwrap().mul(&choice[k]);
            let value = corr.inverse()?.mul(&prod);
            match &x[hs] {
                Some(existing) => {
                    if *existing != value {
                        return None;
                    }
                }
                None => {
                    x[hs] = Some(value);
                    queue.push_back(hs);
                }
            }
        }
    }
    x.into_iter().collect()
}

/// Result of inducing `M` up to a graded bimodule.
#[derive(Clone, Debug)]
pub struct InducedBimodule {
    pub graded: GradedBimodule,
    pub tensor: TensorQuotient,
    /// `m -> 1 ⊗ m` (or `m ⊗ 1`), the inclusion of `M` as the 1-component.
    pub one_embedding: Matrix,
}

/// `A ⊗_B M` with right `A′`-action `(a ⊗ m) a′ = a u_h ⊗ (u_h⁻¹ ⊗ a′) m` for `a′ ∈ A′_h`.
pub fn induce_left(delta: &DeltaModuleStructure) -> Result<InducedBimodule> {
    let (a, ap, m) = (&delta.a, &delta.ap, &delta.m);
    let f = m.field();
    let ab = graded_as_one_bimodule(a, true)?;
    let tq = tensor_over(&ab, m)?;
    let dm = m.dim();
    let mut right = Vec::with_capacity(ap.dim());
    for j in 0..ap.dim() {
        let h = ap.degree[j];
        let act = delta.act(a.unit_inverse_of(h), &ap.algebra.basis_element(j));
        let ru = a.algebra.right_mult_matrix(a.unit_of(h));
        right.push(tq.descend(tq.dim(), |i, k| tq.pure(&ru.column(i), &act.column(k)))?);
    }
    let left = tq.bimodule.left_actions().to_vec();
    let bim = Bimodule::new(a.algebra.clone(), ap.algebra.clone(), tq.dim(), left, right)
        .map_err(|e| Error::InvalidDeltaStructure(format!("induced right action is invalid: {e}")))?;
    let degree = (0..tq.dim()).map(|k| a.degree[tq.lift(k).0]).collect();
    let graded = GradedBimodule::new(bim, a, ap, degree)?;
    let cols: Vec<Vector> = (0..dm).map(|k| tq.pure(a.algebra.unit(), &unit_vector(dm, k))).collect();
    let one_embedding = Matrix::from_columns(f, tq.dim(), &cols);
    Ok(InducedBimodule { graded, tensor: tq, one_embedding })
}

/// `M ⊗_{B′} A′` with left `A`-action `a (m ⊗ a′) = (a ⊗ u′_h⁻¹) m ⊗ u′_h a′` for `a ∈ A_h`.
pub fn induce_right(delta: &DeltaModuleStructure) -> Result<InducedBimodule> {
    let (a, ap, m) = (&delta.a, &delta.ap, &delta.m);
    let f = m.field();
    let ba = graded_as_one_bimodule(ap, false)?;
    let tq = tensor_over(m, &ba)?;
    let dm = m.dim();
    let mut left = Vec::with_capacity(a.dim());
    for i in 0..a.dim() {
        let h = a.degree[i];
        let act = delta.act(&a.algebra.basis_element(i), ap.unit_inverse_of(h));
        let lu = ap.algebra.left_mult_matrix(ap.unit_of(h));
        left.push(tq.descend(tq.dim(), |k, j| tq.pure(&act.column(k), &lu.column(j)))?);
    }
    let right = tq.bimodule.right_actions().to_vec();
    let bim = Bimodule::new(a.algebra.clone(), ap.algebra.clone(), tq.dim(), left, right)
        .map_err(|e| Error::InvalidDeltaStructure(format!("induced left action is invalid: {e}")))?;
    let degree = (0..tq.dim()).map(|k| ap.degree[tq.lift(k).1]).collect();
    let graded = GradedBimodule::new(bim, a, ap, degree)?;
    let cols: Vec<Vector> = (0..dm).map(|k| tq.pure(&unit_vector(dm, k), ap.algebra.unit())).collect();
    let one_embedding = Matrix::from_columns(f, tq.dim(), &cols);
    Ok(InducedBimodule { graded, tensor: tq, one_embedding })
}

/// `A` as an `(A, B)`-bimodule (`left = true`) or a `(B, A)`-bimodule.
pub fn graded_as_one_bimodule(a: &GradedAlgebra, left: bool) -> Result<Bimodule> {
    let alg = &a.algebra;
    let full: Vec<Matrix> =
        (0..alg.dim()).map(|i| if left { alg.left_mult_matrix(&alg.basis_element(i)) } else { alg.right_mult_matrix(&alg.basis_element(i)) }).collect();
    let one: Vec<Matrix> =
        a.one_basis.iter().map(|&i| if left { alg.right_mult_matrix(&alg.basis_element(i)) } else { alg.left_mult_matrix(&alg.basis_element(i)) }).collect();
    if left {
        Bimodule::new(alg.clone(), a.one_component.clone(), alg.dim(), full, one)
    } else {
        Bimodule::new(a.one_component.clone(), alg.clone(), alg.dim(), one, full)
    }
}

/// The `Δ*`-structure on `M*` over `diag(A′, A)`: `X*_g f = C_g ∘ f ∘ X_g⁻¹` where
/// `C_g(b) = u_g b u_g⁻¹`.
pub fn dual_delta_structure(delta: &DeltaModuleStructure, mstar: &DualBimodule) -> Result<DeltaModuleStructure> {
    let a = &delta.a;
    let f = delta.m.field();
    let nb = a.one_basis.len();
    let mut actions = Vec::with_capacity(a.grading.order());
    for g in a.grading.elements() {
        let xinv = delta.unit_actions[g].inverse().ok_or_else(|| Error::InvalidDeltaStructure("unit action is not invertible".into()))?;
        let cols: Vec<Vector> = (0..nb)
            .map(|k| {
                let b = a.embed_one(&unit_vector(nb, k));
                a.restrict_one(&a.algebra.mul(&a.algebra.mul(a.unit_of(g), &b), a.unit_inverse_of(g))).unwrap()
            })
            .collect();
        let conj = Matrix::from_columns(f, nb, &cols);
        let mut images = Vec::with_capacity(mstar.dim());
        for fm in &mstar.basis {
            let img = conj.mul(fm).mul(&xinv);
            images.push(mstar.coords(&img).ok_or_else(|| Error::InvalidDeltaStructure("X*_g leaves the dual".into()))?);
        }
        actions.push(Matrix::from_columns(f, mstar.dim(), &images));
    }
    DeltaModuleStructure::new(delta.ap.clone(), delta.a.clone(), mstar.bimodule.clone(), actions)
}
