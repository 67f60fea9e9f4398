//! Graded endomorphism algebras `E(U) = End_A(A ⊗_B U)^op`, the centralizer map
//! `θ: C_A(B) -> E(U)`, the explicit isomorphisms `ε` and `β`, the induced maps
//! `φ₁`, `φ₂`, and certification of graded Morita equivalences.
//!
//! `E(U)` multiplies in the opposite order: `f · f′ = f′ ∘ f`.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{centralizer_space, Algebra};
use crate::bimodule::{graded_dual, is_isomorphic_masked, tensor_over, Bimodule, DualBimodule, GradedBimodule, IsoOutcome, Side, TensorQuotient};
use crate::error::{Error, Result};
use crate::grading::GradedAlgebra;
use crate::linalg::{is_zero_vector, unit_vector, Matrix, Subspace, Vector};
use crate::morita::{
    build_morita_context, build_morita_context_with, check_bimodule_map, dual_delta_structure, graded_as_one_bimodule, induce_left, induce_right,
    DeltaModuleStructure, InducedBimodule, MoritaContext,
};

/// `C_A(B)` with a homogeneous basis (coordinates in `A`).
#[derive(Clone, Debug)]
pub struct GradedCentralizer {
    pub graded: GradedAlgebra,
    pub basis: Vec<Vector>,
    space: Subspace,
}

/// The centralizer of the 1-component, computed degree by degree.
pub fn graded_centralizer(a: &GradedAlgebra) -> Result<GradedCentralizer> {
    let b_basis: Vec<Vector> = a.one_basis.iter().map(|&i| a.algebra.basis_element(i)).collect();
    let mut basis = Vec::new();
    let mut degree = Vec::new();
    for g in a.grading.elements() {
        let part = centralizer_space(&a.algebra, &b_basis, Some(a.component(g)));
        degree.extend(std::iter::repeat_n(g, part.len()));
        basis.extend(part);
    }
    let f = a.field();
    let space = Subspace::new(f, a.dim(), basis.clone()).ok_or_else(|| Error::Inconsistent("centralizer basis is dependent".into()))?;
    let k = basis.len();
    let unit = space.coords(a.algebra.unit()).ok_or_else(|| Error::Inconsistent("1 does not centralize B".into()))?;
    let mut table = Vec::with_capacity(k * k);
    for x in &basis {
        for y in &basis {
            table.push(space.coords(&a.algebra.mul(x, y)).ok_or_else(|| Error::NotSubalgebra("C_A(B) is not closed".into()))?);
        }
    }
    let labels = (0..k).map(|i| format!("c{i}")).collect();
    let algebra = Algebra::from_products(f, labels, unit, |i, j| table[i * k + j].clone());
    let graded = GradedAlgebra::new(Arc::new(algebra), a.grading.clone(), degree, None)?;
    Ok(GradedCentralizer { graded, basis, space })
}

impl GradedCentralizer {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    /// Coordinates of an element of `A`, if it centralizes `B`.
    pub fn coords(&self, x: &[u64]) -> Option<Vector> {
        self.space.coords(x)
    }
    pub fn embed(&self, c: &[u64]) -> Vector {
        self.space.combine(c)
    }
}

/// `E(U) = End_A(A ⊗_B U)^op` with homogeneous basis maps.
#[derive(Clone, Debug)]
pub struct GradedEndAlgebra {
    pub graded: GradedAlgebra,
    /// `A ⊗_B U`.
    pub induced: TensorQuotient,
    pub induced_degree: Vec<usize>,
    /// Basis maps on `A ⊗_B U`; a map of degree `h` sends degree `g` into `gh`.
    pub maps: Vec<Matrix>,
    space: Subspace,
}

pub fn graded_end_algebra(a: &GradedAlgebra, u: &Bimodule) -> Result<GradedEndAlgebra> {
    let ab = graded_as_one_bimodule(a, true)?;
    let induced = tensor_over(&ab, u)?;
    let induced_degree: Vec<usize> = (0..induced.dim()).map(|k| a.degree[induced.lift(k).0]).collect();
    let module = induced.bimodule.as_left_module();
    let g = &a.grading;
    let mut maps = Vec::new();
    let mut degree = Vec::new();
    for h in g.elements() {
        let part = crate::bimodule::hom_space_masked(&module, &module, Side::Left, &|r, c| induced_degree[r] == g.mul(induced_degree[c], h))?;
        degree.extend(std::iter::repeat_n(h, part.len()));
        maps.extend(part);
    }
    let f = a.field();
    let d = induced.dim();
    let space =
        Subspace::new(f, d * d, maps.iter().map(|m| m.to_vector()).collect()).ok_or_else(|| Error::Inconsistent("endomorphism basis is dependent".into()))?;
    let k = maps.len();
    let unit = space.coords(&Matrix::identity(f, d).to_vector()).ok_or_else(|| Error::Inconsistent("identity is missing from E(U)".into()))?;
    let mut table = Vec::with_capacity(k * k);
    for x in &maps {
        for y in &maps {
            table.push(space.coords(&y.mul(x).to_vector()).ok_or_else(|| Error::Inconsistent("E(U) is not closed".into()))?);
        }
    }
    let labels = (0..k).map(|i| format!("f{i}")).collect();
    let algebra = Algebra::from_products(f, labels, unit, |i, j| table[i * k + j].clone());
    let graded = GradedAlgebra::new(Arc::new(algebra), g.clone(), degree, None)?;
    Ok(GradedEndAlgebra { graded, induced, induced_degree, maps, space })
}

impl GradedEndAlgebra {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }
    pub fn coords(&self, map: &Matrix) -> Option<Vector> {
        self.space.coords(&map.to_vector())
    }
    pub fn map_of(&self, x: &[u64]) -> Matrix {
        let d = self.induced.dim();
        Matrix::from_vector(self.graded.field(), d, d, &self.space.combine(x))
    }

    /// The map `a ⊗ u -> a c ⊗ u` on `A ⊗_B U` for `c ∈ A` (coordinates in `A`).
    pub fn right_multiplication(&self, a: &GradedAlgebra, c: &[u64]) -> Result<Matrix> {
        let rc = a.algebra.right_mult_matrix(c);
        self.induced.descend(self.induced.dim(), |i, k| self.induced.pure(&rc.column(i), &unit_vector(self.induced.factor_dims().1, k)))
    }
}

/// `θ(c)` in `E(U)` coordinates, for `c ∈ C_A(B)` given in `A` coordinates.
pub fn theta(a: &GradedAlgebra, end: &GradedEndAlgebra, c: &[u64]) -> Result<Vector> {
    for &i in &a.one_basis {
        let b = a.algebra.basis_element(i);
        if a.algebra.mul(&b, c) != a.algebra.mul(c, &b) {
            return Err(Error::NotInCentralizer(format!("element does not commute with {}", a.algebra.labels()[i])));
        }
    }
    let map = end.right_multiplication(a, c)?;
    end.coords(&map).ok_or_else(|| Error::Inconsistent("θ(c) is not A-linear".into()))
}

/// The matrix of `θ: C_A(B) -> E(U)` on the centralizer basis.
pub fn theta_matrix(a: &GradedAlgebra, cent: &GradedCentralizer, end: &GradedEndAlgebra) -> Result<Matrix> {
    let cols = cent.basis.iter().map(|c| theta(a, end, c)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(a.field(), end.dim(), &cols))
}

/// `ε: M ⊗_{B′} A′ -> A ⊗_B M`, `m ⊗ a′_g -> u_g ⊗ (u_g⁻¹ ⊗ a′_g) m`, checked to be a
/// degree-preserving bimodule isomorphism.
pub fn epsilon_iso(delta: &DeltaModuleStructure, left: &InducedBimodule, right: &InducedBimodule) -> Result<Matrix> {
    let (a, ap) = (&delta.a, &delta.ap);
    let dm = delta.m.dim();
    let eps = right.tensor.descend(left.tensor.dim(), |k, j| {
        let g = ap.degree[j];
        let act = delta.act(a.unit_inverse_of(g), &ap.algebra.basis_element(j));
        left.tensor.pure(a.unit_of(g), &act.mul_vec(&unit_vector(dm, k)))
    })?;
    check_graded_iso(&eps, &right.graded, &left.graded, "ε")?;
    Ok(eps)
}

/// `β: A ⊗_{B} M -> M ⊗_{B′} A′`, `x_g ⊗ m -> (x_g ⊗ u′_g⁻¹) m ⊗ u′_g`, for a
/// `Δ`-structure over `(A, A′)`. Applied to the dual structure over `(A′, A)` this is
/// `a′_g ⊗ m* -> a′_g m* u_g⁻¹ ⊗ u_g`.
pub fn beta_iso(delta: &DeltaModuleStructure, left: &InducedBimodule, right: &InducedBimodule) -> Result<Matrix> {
    let (a, ap) = (&delta.a, &delta.ap);
    let dm = delta.m.dim();
    let beta = left.tensor.descend(right.tensor.dim(), |i, k| {
        let g = a.degree[i];
        let act = delta.act(&a.algebra.basis_element(i), ap.unit_inverse_of(g));
        right.tensor.pure(&act.mul_vec(&unit_vector(dm, k)), ap.unit_of(g))
    })?;
    check_graded_iso(&beta, &left.graded, &right.graded, "β")?;
    Ok(beta)
}

fn check_graded_iso(map: &Matrix, from: &GradedBimodule, to: &GradedBimodule, name: &str) -> Result<()> {
    if map.rows() != map.cols() || !map.is_invertible() {
        return Err(Error::Inconsistent(format!("{name} is not invertible")));
    }
    check_bimodule_map(map, &from.bimodule, &to.bimodule, name)?;
    check_degree_preserving(map, &from.degree, &to.degree, name)
}

fn check_degree_preserving(map: &Matrix, from: &[usize], to: &[usize], name: &str) -> Result<()> {
    for c in 0..map.cols() {
        for r in 0..map.rows() {
            if map.get(r, c) != 0 && to[r] != from[c] {
                return Err(Error::InvalidGrading(format!("{name} does not preserve degrees")));
            }
        }
    }
    Ok(())
}

/// Outcomes of the isomorphism searches run while certifying a witness.
#[derive(Clone, Debug, Serialize)]
pub struct IsoChecks {
    /// `M̃ ⊗_{A′} M̃* ≅ A` found by search.
    pub left: String,
    /// `M̃* ⊗_A M̃ ≅ A′` found by search.
    pub right: String,
    /// Candidate dual isomorphic to the Hom dual.
    pub candidate: Option<String>,
}

pub(crate) fn outcome_label(o: &IsoOutcome) -> String {
    match o {
        IsoOutcome::Isomorphic(_) => "isomorphic",
        IsoOutcome::NotIsomorphic => "not_isomorphic",
        IsoOutcome::Inconclusive => "inconclusive",
    }
    .to_string()
}

/// A certified graded Morita equivalence between `A` and `A′` induced by `M̃`,
/// with `M̃* = Hom_A(M̃, A)` split into homogeneous parts.
#[derive(Clone, Debug)]
pub struct GradedMoritaWitness {
    pub a: Arc<GradedAlgebra>,
    pub ap: Arc<GradedAlgebra>,
    pub mtilde: GradedBimodule,
    pub mstar: DualBimodule,
    pub mstar_graded: GradedBimodule,
    /// `φ̃` and `ψ̃` with their tensor domains.
    pub context: MoritaContext,
    /// The context of the 1-component `M`.
    pub one_context: MoritaContext,
    /// `M -> M̃_1`.
    pub one_embedding: Matrix,
    /// Basis indices of `(M̃*)_1` and the restriction `(M̃*)_1 -> M*`.
    pub star_one_indices: Vec<usize>,
    pub restriction: Matrix,
    /// The 1-component dual bases, extended to `M̃*` and `M̃`.
    pub dual_basis_j: Vec<(Vector, Vector)>,
    pub dual_basis_i: Vec<(Vector, Vector)>,
    pub iso_checks: IsoChecks,
    /// Per-degree right factors applied to `φ̃` (a deliberately corrupted witness).
    pub twist: Option<Vec<Vector>>,
}

/// Certifies that `M̃` induces a graded Morita equivalence whose 1-component is
/// the context of `M`, embedded by `one_embedding`.
pub fn verify_graded_morita(
    a: Arc<GradedAlgebra>,
    ap: Arc<GradedAlgebra>,
    mtilde: &GradedBimodule,
    m: &Bimodule,
    one_embedding: &Matrix,
    candidate_star: Option<&GradedBimodule>,
    seed: u64,
) -> Result<GradedMoritaWitness> {
    let f = a.field();
    let g = a.grading.clone();
    if !mtilde.is_strongly_graded(&a) {
        return Err(Error::NotMorita("M̃ is not strongly graded as a left module".into()));
    }
    let mstar = graded_dual(mtilde, &a)?;
    let sdeg = mstar.degree.clone().unwrap();
    let mstar_graded = GradedBimodule::new(mstar.bimodule.clone(), &ap, &a, sdeg.clone())?;
    let context = build_morita_context_with(&mtilde.bimodule, mstar.clone())?;

    let deg_star_m: Vec<usize> = (0..context.star_m.dim())
        .map(|k| {
            let (x, y) = context.star_m.lift(k);
            g.mul(sdeg[x], mtilde.degree[y])
        })
        .collect();
    let deg_m_star: Vec<usize> = (0..context.m_star.dim())
        .map(|k| {
            let (x, y) = context.m_star.lift(k);
            g.mul(mtilde.degree[x], sdeg[y])
        })
        .collect();
    check_degree_preserving(&context.phi, &deg_star_m, &ap.degree, "φ̃")?;
    check_degree_preserving(&context.psi, &deg_m_star, &a.degree, "ψ̃")?;

    let reg_a = Bimodule::regular(a.algebra.clone());
    let reg_ap = Bimodule::regular(ap.algebra.clone());
    let left = is_isomorphic_masked(&context.m_star.bimodule, &reg_a, Side::Both, &|r, c| a.degree[r] == deg_m_star[c], seed)?;
    let right = is_isomorphic_masked(&context.star_m.bimodule, &reg_ap, Side::Both, &|r, c| ap.degree[r] == deg_star_m[c], seed)?;
    if matches!(left, IsoOutcome::NotIsomorphic) || matches!(right, IsoOutcome::NotIsomorphic) {
        return Err(Error::NotMorita("no degree-preserving isomorphism onto the regular bimodule".into()));
    }
    let candidate = match candidate_star {
        Some(c) => {
            let o = is_isomorphic_masked(&c.bimodule, &mstar.bimodule, Side::Both, &|r, col| sdeg[r] == c.degree[col], seed)?;
            if matches!(o, IsoOutcome::NotIsomorphic) {
                return Err(Error::NotMorita("the candidate dual is not isomorphic to Hom_A(M̃, A)".into()));
            }
            Some(o)
        }
        None => None,
    };

    // 1-component agreement.
    let one_context = build_morita_context(m)?;
    if one_embedding.rows() != mtilde.bimodule.dim() || one_embedding.cols() != m.dim() {
        return Err(Error::DimensionMismatch("embedding of M has the wrong shape".into()));
    }
    for c in 0..m.dim() {
        if (0..one_embedding.rows()).any(|r| one_embedding.get(r, c) != 0 && mtilde.degree[r] != 0) {
            return Err(Error::InvalidGrading("M is not embedded in degree 1".into()));
        }
    }
    let b_images: Vec<Vector> = a.one_basis.iter().map(|&i| a.algebra.basis_element(i)).collect();
    let bp_images: Vec<Vector> = ap.one_basis.iter().map(|&i| ap.algebra.basis_element(i)).collect();
    let restricted = mtilde.bimodule.restrict(a.one_component.clone(), &b_images, ap.one_component.clone(), &bp_images)?;
    for k in 0..m.left.dim() {
        if one_embedding.mul(m.left_basis_action(k)) != restricted.left_basis_action(k).mul(one_embedding) {
            return Err(Error::Inconsistent("M -> M̃ is not left B-linear".into()));
        }
    }
    for k in 0..m.right.dim() {
        if one_embedding.mul(m.right_basis_action(k)) != restricted.right_basis_action(k).mul(one_embedding) {
            return Err(Error::Inconsistent("M -> M̃ is not right B′-linear".into()));
        }
    }
    if one_embedding.rank() != m.dim() || mtilde.component(0).len() != m.dim() {
        return Err(Error::Inconsistent("M is not the 1-component of M̃".into()));
    }
    let star_one_indices: Vec<usize> = (0..mstar.dim()).filter(|&i| sdeg[i] == 0).collect();
    let mut rcols = Vec::with_capacity(star_one_indices.len());
    for &i in &star_one_indices {
        let fm = mstar.basis[i].mul(one_embedding);
        let mut restricted_map = Matrix::zeros(f, a.one_basis.len(), m.dim());
        for c in 0..m.dim() {
            let col = a.restrict_one(&fm.column(c)).ok_or_else(|| Error::Inconsistent("degree-1 dual element leaves B".into()))?;
            for (r, v) in col.into_iter().enumerate() {
                restricted_map.set(r, c, v);
            }
        }
        rcols.push(one_context.mstar.coords(&restricted_map).ok_or_else(|| Error::Inconsistent("restriction is not B-linear".into()))?);
    }
    let restriction = Matrix::from_columns(f, one_context.mstar.dim(), &rcols);
    let rinv = restriction.inverse().ok_or_else(|| Error::Inconsistent("(M̃*)_1 -> M* is not bijective".into()))?;
    let extend_star = |x: &[u64]| -> Vector {
        let local = rinv.mul_vec(x);
        let mut out = vec![0; mstar.dim()];
        for (k, &i) in star_one_indices.iter().enumerate() {
            out[i] = local[k];
        }
        out
    };
    for (k, &i) in star_one_indices.iter().enumerate() {
        let fi = unit_vector(mstar.dim(), i);
        let fr = restriction.column(k);
        for c in 0..m.dim() {
            let mv = unit_vector(m.dim(), c);
            let im = one_embedding.mul_vec(&mv);
            if context.phi_of(&fi, &im) != ap.embed_one(&one_context.phi_of(&fr, &mv)) {
                return Err(Error::Inconsistent("φ̃ and φ disagree on the 1-component".into()));
            }
            if context.psi_of(&im, &fi) != a.embed_one(&one_context.psi_of(&mv, &fr)) {
                return Err(Error::Inconsistent("ψ̃ and ψ disagree on the 1-component".into()));
            }
        }
    }
    let dual_basis_j: Vec<(Vector, Vector)> = one_context.dual_basis_j.iter().map(|(s, x)| (extend_star(s), one_embedding.mul_vec(x))).collect();
    let dual_basis_i: Vec<(Vector, Vector)> = one_context.dual_basis_i.iter().map(|(x, s)| (one_embedding.mul_vec(x), extend_star(s))).collect();
    let mut sum = vec![0; ap.dim()];
    for (s, x) in &dual_basis_j {
        sum = crate::linalg::vec_add(f, &sum, &context.phi_of(s, x));
    }
    if sum != ap.algebra.unit() {
        return Err(Error::NotMorita("φ̃(Σ m_j* ⊗ m_j) ≠ 1 for the extended dual basis".into()));
    }
    let mut sum = vec![0; a.dim()];
    for (x, s) in &dual_basis_i {
        sum = crate::linalg::vec_add(f, &sum, &context.psi_of(x, s));
    }
    if sum != a.algebra.unit() {
        return Err(Error::NotMorita("ψ̃(Σ n_i ⊗ n_i*) ≠ 1 for the extended dual basis".into()));
    }

    Ok(GradedMoritaWitness {
        a,
        ap,
        mtilde: mtilde.clone(),
        mstar,
        mstar_graded,
        context,
        one_context,
        one_embedding: one_embedding.clone(),
        star_one_indices,
        restriction,
        dual_basis_j,
        dual_basis_i,
        iso_checks: IsoChecks { left: outcome_label(&left), right: outcome_label(&right), candidate: candidate.as_ref().map(outcome_label) },
        twist: None,
    })
}

impl GradedMoritaWitness {
    /// `φ̃(f ⊗ m)`, including the twist if any.
    pub fn phi_tilde(&self, fstar: &[u64], m: &[u64]) -> Vector {
        let value = self.context.phi_of(fstar, m);
        let Some(twist) = &self.twist else {
            return value;
        };
        let ap = &self.ap;
        let g = &ap.grading;
        let sdeg = self.mstar.degree.as_ref().unwrap();
        let mut out = vec![0; ap.dim()];
        for (a, &ca) in fstar.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (j, &cm) in m.iter().enumerate().filter(|(_, &c)| c != 0) {
                let d = g.mul(sdeg[a], self.mtilde.degree[j]);
                let part = self.context.phi_of(&scaled_unit(self.mstar.dim(), a, ca), &scaled_unit(m.len(), j, cm));
                out = crate::linalg::vec_add(ap.field(), &out, &ap.algebra.mul(&part, &twist[d]));
            }
        }
        out
    }

    /// A copy whose `φ̃` is followed by right multiplication with `λ(deg)`, where the
    /// `λ(g)` are central units of `A′` and `λ(1) = 1`.
    pub fn twisted(&self, lambda: Vec<Vector>) -> Result<GradedMoritaWitness> {
        let ap = &self.ap;
        if lambda.len() != ap.grading.order() || lambda[0] != ap.algebra.unit() {
            return Err(Error::InvalidGrading("twist needs one value per degree with λ(1) = 1".into()));
        }
        for l in &lambda {
            if !ap.algebra.is_central(l) || ap.algebra.inverse(l).is_none() {
                return Err(Error::InvalidGrading("twist values must be central units".into()));
            }
        }
        let mut w = self.clone();
        w.twist = Some(lambda);
        Ok(w)
    }

    /// `φ₂(c) = φ̃(Σ_j m_j* c ⊗ m_j)` for `c ∈ C_A(B)` in `A` coordinates.
    pub fn phi2(&self, c: &[u64]) -> Vector {
        let f = self.a.field();
        let mut out = vec![0; self.ap.dim()];
        for (s, x) in &self.dual_basis_j {
            let sc = self.mstar.bimodule.act_right(s, c);
            out = crate::linalg::vec_add(f, &out, &self.phi_tilde(&sc, x));
        }
        out
    }
}

fn scaled_unit(n: usize, i: usize, c: u64) -> Vector {
    let mut v = vec![0; n];
    v[i] = c;
    v
}

/// Everything derived from a `Δ`-structure on `M`: the induced bimodules, their
/// duals, `ε`, `β`, and the certified witness for `M̃ = A ⊗_B M`.
#[derive(Clone, Debug)]
pub struct DeltaWitness {
    pub delta: DeltaModuleStructure,
    pub dual_delta: DeltaModuleStructure,
    /// `A ⊗_B M`.
    pub mtilde: InducedBimodule,
    /// `M ⊗_{B′} A′`.
    pub mtilde_right: InducedBimodule,
    /// `A′ ⊗_{B′} M*`.
    pub mstar_left: InducedBimodule,
    /// `M* ⊗_B A`.
    pub mstar_right: InducedBimodule,
    pub epsilon: Matrix,
    pub beta: Matrix,
    pub witness: GradedMoritaWitness,
}

pub fn witness_from_delta(delta: &DeltaModuleStructure, seed: u64) -> Result<DeltaWitness> {
    let mtilde = induce_left(delta)?;
    let mtilde_right = induce_right(delta)?;
    let epsilon = epsilon_iso(delta, &mtilde, &mtilde_right)?;
    let one_ctx = build_morita_context(&delta.m)?;
    let dual_delta = dual_delta_structure(delta, &one_ctx.mstar)?;
    let mstar_left = induce_left(&dual_delta)?;
    let mstar_right = induce_right(&dual_delta)?;
    let beta = beta_iso(&dual_delta, &mstar_left, &mstar_right)?;
    let witness = verify_graded_morita(delta.a.clone(), delta.ap.clone(), &mtilde.graded, &delta.m, &mtilde.one_embedding, Some(&mstar_left.graded), seed)?;
    Ok(DeltaWitness { delta: delta.clone(), dual_delta, mtilde, mtilde_right, mstar_left, mstar_right, epsilon, beta, witness })
}

/// Residuals of `θ′ ∘ φ₂ - φ₁ ∘ θ` on the centralizer basis.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    pub dim_centralizer: usize,
    pub dim_centralizer_prime: usize,
    pub dim_end: usize,
    pub dim_end_prime: usize,
    pub theta_homomorphism: bool,
    pub theta_prime_homomorphism: bool,
    pub phi1_isomorphism: bool,
    pub phi2_isomorphism: bool,
    pub phi1_degree_preserving: bool,
    pub phi2_degree_preserving: bool,
    /// Number of nonzero matrix entries of the residual, per centralizer basis element.
    pub residuals: Vec<usize>,
    pub commutes: bool,
}

/// All the maps of the diagram for a module `U` over `B`, with `U′ = M* ⊗_B U`.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub centralizer: GradedCentralizer,
    pub centralizer_prime: GradedCentralizer,
    pub end: GradedEndAlgebra,
    pub end_prime: GradedEndAlgebra,
    pub u_prime: TensorQuotient,
    /// `β ⊗ id: A′ ⊗_{B′} U′ -> (M* ⊗_B A) ⊗_A (A ⊗_B U)`.
    pub gamma: Matrix,
    pub target: TensorQuotient,
    pub theta: Matrix,
    pub theta_prime: Matrix,
    pub phi1: Matrix,
    pub phi2: Matrix,
}

pub fn build_diagram(w: &DeltaWitness, u: &Bimodule) -> Result<Diagram> {
    let (a, ap) = (&w.delta.a, &w.delta.ap);
    let f = a.field();
    if !crate::bimodule::same_algebra(&u.left, &a.one_component) {
        return Err(Error::AlgebraMismatch("U must be a module over B".into()));
    }
    let centralizer = graded_centralizer(a)?;
    let centralizer_prime = graded_centralizer(ap)?;
    let end = graded_end_algebra(a, u)?;
    let one_ctx = &w.witness.one_context;
    let u_prime = tensor_over(&one_ctx.mstar.bimodule, u)?;
    let end_prime = graded_end_algebra(ap, &u_prime.bimodule)?;

    let target = tensor_over(&w.mstar_right.graded.bimodule, &end.induced.bimodule)?;
    let d = &end_prime.induced;
    let dual = &w.dual_delta;
    let mstar_dim = dual.m.dim();
    let gamma = d.descend(target.dim(), |i, k| {
        let g = ap.degree[i];
        let (fa, ub) = u_prime.lift(k);
        let act = dual.act(&ap.algebra.basis_element(i), a.unit_inverse_of(g));
        let fprime = act.mul_vec(&unit_vector(mstar_dim, fa));
        let left = w.mstar_right.tensor.pure(&fprime, a.unit_of(g));
        let right = end.induced.pure(a.algebra.unit(), &unit_vector(u.dim(), ub));
        target.pure(&left, &right)
    })?;
    let gamma_inv = gamma.inverse().ok_or_else(|| Error::Inconsistent("β ⊗ id is not invertible".into()))?;

    let theta = theta_matrix(a, &centralizer, &end)?;
    let theta_prime = theta_matrix(ap, &centralizer_prime, &end_prime)?;

    let (left_dim, _) = target.factor_dims();
    let mut phi1_cols = Vec::with_capacity(end.dim());
    for fmap in &end.maps {
        let id_f = target.descend(target.dim(), |x, y| target.pure(&unit_vector(left_dim, x), &fmap.column(y)))?;
        let conj = gamma_inv.mul(&id_f).mul(&gamma);
        phi1_cols.push(end_prime.coords(&conj).ok_or_else(|| Error::Inconsistent("φ₁(f) is not in E(U′)".into()))?);
    }
    let phi1 = Matrix::from_columns(f, end_prime.dim(), &phi1_cols);

    let mut phi2_cols = Vec::with_capacity(centralizer.dim());
    for c in &centralizer.basis {
        let image = w.witness.phi2(c);
        phi2_cols.push(centralizer_prime.coords(&image).ok_or_else(|| Error::Inconsistent("φ₂(c) does not centralize B′".into()))?);
    }
    let phi2 = Matrix::from_columns(f, centralizer_prime.dim(), &phi2_cols);
    Ok(Diagram { centralizer, centralizer_prime, end, end_prime, u_prime, gamma, target, theta, theta_prime, phi1, phi2 })
}

pub fn verify_diagram(w: &DeltaWitness, u: &Bimodule) -> Result<DiagramReport> {
    let dg = build_diagram(w, u)?;
    let lhs = dg.theta_prime.mul(&dg.phi2);
    let rhs = dg.phi1.mul(&dg.theta);
    let diff = lhs.sub(&rhs);
    let residuals: Vec<usize> = (0..dg.centralizer.dim())
        .map(|k| {
            let m = dg.end_prime.map_of(&diff.column(k));
            m.count_nonzero()
        })
        .collect();
    let commutes = residuals.iter().all(|&r| r == 0);
    Ok(DiagramReport {
        dim_centralizer: dg.centralizer.dim(),
        dim_centralizer_prime: dg.centralizer_prime.dim(),
        dim_end: dg.end.dim(),
        dim_end_prime: dg.end_prime.dim(),
        theta_homomorphism: is_graded_homomorphism(&dg.theta, &dg.centralizer.graded, &dg.end.graded),
        theta_prime_homomorphism: is_graded_homomorphism(&dg.theta_prime, &dg.centralizer_prime.graded, &dg.end_prime.graded),
        phi1_isomorphism: dg.phi1.rows() == dg.phi1.cols()
            && dg.phi1.is_invertible()
            && is_homomorphism(&dg.phi1, &dg.end.graded.algebra, &dg.end_prime.graded.algebra),
        phi2_isomorphism: dg.phi2.rows() == dg.phi2.cols()
            && dg.phi2.is_invertible()
            && is_homomorphism(&dg.phi2, &dg.centralizer.graded.algebra, &dg.centralizer_prime.graded.algebra),
        phi1_degree_preserving: check_degree_preserving(&dg.phi1, &dg.end.graded.degree, &dg.end_prime.graded.degree, "φ₁").is_ok(),
        phi2_degree_preserving: check_degree_preserving(&dg.phi2, &dg.centralizer.graded.degree, &dg.centralizer_prime.graded.degree, "φ₂").is_ok(),
        residuals,
        commutes,
    })
}

/// Whether a linear map between algebras is unital and multiplicative on basis pairs.
pub fn is_homomorphism(map: &Matrix, from: &Algebra, to: &Algebra) -> bool {
    if map.mul_vec(from.unit()) != to.unit() {
        return false;
    }
    let images: Vec<Vector> = (0..from.dim()).map(|i| map.column(i)).collect();
    for i in 0..from.dim() {
        for j in 0..from.dim() {
            let lhs = map.mul_vec(&from.mul(&from.basis_element(i), &from.basis_element(j)));
            if lhs != to.mul(&images[i], &images[j]) {
                return false;
            }
        }
    }
    true
}

pub fn is_graded_homomorphism(map: &Matrix, from: &GradedAlgebra, to: &GradedAlgebra) -> bool {
    is_homomorphism(map, &from.algebra, &to.algebra) && check_degree_preserving(map, &from.degree, &to.degree, "").is_ok()
}

/// Whether every nonzero vector in `v` sits in a single degree.
pub fn is_homogeneous(degrees: &[usize], v: &[u64]) -> bool {
    let mut d = None;
    for (i, &c) in v.iter().enumerate() {
        if c != 0 {
            if d.is_some_and(|x| x != degrees[i]) {
                return false;
            }
            d = Some(degrees[i]);
        }
    }
    !is_zero_vector(v) || d.is_none()
}
