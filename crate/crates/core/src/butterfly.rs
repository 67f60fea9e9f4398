//! Extension of a Morita equivalence to the centralizer layer `N C_G(N)` and its
//! transport to a second ambient group `Ĝ` inducing the same automorphisms of `N`.

use std::sync::Arc;

use crate::algebra::{block_cut, group_algebra, Subalgebra};
use crate::bimodule::{tensor_over, Bimodule, GradedBimodule};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graded_morita::{verify_graded_morita, witness_from_delta, DeltaWitness, GradedMoritaWitness};
use crate::grading::{grade_block_extension, grade_block_extension_over, BlockExtension};
use crate::groups::{butterfly_group_data, centralizer_in_group, product_subgroup, subgroup_as_group, ButterflyGroupData, FiniteGroup, Subgroup};
use crate::linalg::{unit_vector, Matrix, Vector};
use crate::morita::{find_delta_extension, graded_as_one_bimodule, DeltaModuleStructure};

/// `C ⊗_B M` as a graded `(C, C′)`-bimodule over `N C_G(N) / N`, where
/// `C = b·k[N C_G(N)]` and `C′ = b′·k[N′ C_G(N)]`.
#[derive(Clone, Debug)]
pub struct CentralizerLayer {
    /// `N C_G(N)` inside `G`, and as a group (indices are positions in the subgroup).
    pub layer: Subgroup,
    pub layer_group: FiniteGroup,
    pub c: BlockExtension,
    pub c_prime: BlockExtension,
    pub mhat: GradedBimodule,
    /// `m -> 1 ⊗ m`.
    pub one_embedding: Matrix,
    pub witness: GradedMoritaWitness,
    /// Number of `C_G(N)·N′` factorizations compared while installing the right action.
    pub factorizations_checked: usize,
}

fn block_coords_of(ext: &BlockExtension, x: usize) -> Result<Vector> {
    let v = ext.group_element(x)?;
    ext.graded.restrict_one(&v).ok_or_else(|| Error::Inconsistent(format!("{} is not in the 1-component", ext.group.label(x))))
}

pub fn extend_to_centralizer_layer(
    g: &FiniteGroup,
    n: &Subgroup,
    g_prime: &Subgroup,
    field: PrimeField,
    e: &[u64],
    e_prime: &[u64],
    m: &Bimodule,
    seed: u64,
) -> Result<CentralizerLayer> {
    let cent = centralizer_in_group(g, n)?;
    if let Some(&x) = cent.elements().iter().find(|&&x| !g_prime.contains(x)) {
        return Err(Error::Hypothesis { index: 1, detail: format!("{} centralizes N but is not in G'", g.label(x)) });
    }
    let n_prime = g_prime.intersection(n);
    let layer = product_subgroup(g, n, &cent)?;
    let layer_prime = product_subgroup(g, &n_prime, &cent)?;
    let kg = subgroup_as_group(g, &layer);
    let to_k = |s: &Subgroup| Subgroup::from_elements(&kg, s.elements().iter().map(|&x| layer.position(x).unwrap()));
    let n_k = to_k(n)?;
    let kp_k = to_k(&layer_prime)?;
    let c = grade_block_extension(&kg, &n_k, field, e)?;
    let c_prime = grade_block_extension_over(&kg, &n_k, &kp_k, field, e_prime)?;
    if !crate::bimodule::same_algebra(&m.left, &c.graded.one_component) || !crate::bimodule::same_algebra(&m.right, &c_prime.graded.one_component) {
        return Err(Error::AlgebraMismatch("M must be a bimodule over b·kN and b′·kN′".into()));
    }

    // z m = m z for z ∈ Z(N).
    for &z in cent.elements().iter().filter(|&&z| n.contains(z) && z != g.identity()) {
        let zk = layer.position(z).unwrap();
        let left = m.left_matrix(&block_coords_of(&c, zk)?);
        let right = m.right_matrix(&block_coords_of(&c_prime, zk)?);
        if left != right {
            return Err(Error::Hypothesis { index: 3, detail: format!("z = {} acts differently on the two sides of M", g.label(z)) });
        }
    }

    let ca = graded_as_one_bimodule(&c.graded, true)?;
    let t = tensor_over(&ca, m)?;
    let (cdim, mdim) = t.factor_dims();
    let cent_k: Vec<usize> = cent.elements().iter().map(|&x| layer.position(x).unwrap()).collect();
    let bp = &c_prime.graded.one_component;
    let dim_bp = bp.dim();
    let mut right_action = Vec::with_capacity(c_prime.graded.dim());
    let mut factorizations_checked = 0;
    for idx in 0..c_prime.graded.dim() {
        let (d, k) = (idx / dim_bp, idx % dim_bp);
        let r = c_prime.representatives[d];
        let mut found: Option<(Matrix, usize)> = None;
        for &ck in &cent_k {
            let nk = kg.mul(kg.inv(ck), r);
            if !c_prime.carrier_normal.contains(nk) {
                continue;
            }
            let rc = c.graded.algebra.right_mult_matrix(&c.group_element(ck)?);
            let y = bp.mul(&bp.basis_element(k), &block_coords_of(&c_prime, nk)?);
            let ry = m.right_matrix(&y);
            let mat = t.descend(t.dim(), |i, j| t.pure(&rc.column(i), &ry.mul_vec(&unit_vector(mdim, j))))?;
            factorizations_checked += 1;
            match &found {
                None => found = Some((mat, ck)),
                Some((prev, c0)) if *prev != mat => {
                    let z = kg.mul(kg.inv(*c0), ck);
                    return Err(Error::IllDefined(format!("right action depends on the factorization; z = {}", kg.label(z))));
                }
                Some(_) => {}
            }
        }
        let (mat, _) = found.ok_or_else(|| Error::Inconsistent("representative does not factor through C_G(N)·N′".into()))?;
        right_action.push(mat);
    }
    let bimodule = Bimodule::new(c.graded.algebra.clone(), c_prime.graded.algebra.clone(), t.dim(), t.bimodule.left_actions().to_vec(), right_action)?;
    let degree: Vec<usize> = (0..t.dim()).map(|k| c.graded.degree[t.lift(k).0]).collect();
    let mhat = GradedBimodule::new(bimodule, &c.graded, &c_prime.graded, degree)?;
    let cols: Vec<Vector> = (0..mdim).map(|j| t.pure(c.graded.algebra.unit(), &unit_vector(mdim, j))).collect();
    let one_embedding = Matrix::from_columns(field, t.dim(), &cols);
    debug_assert_eq!(cdim, c.graded.dim());
    let witness = verify_graded_morita(Arc::new(c.graded.clone()), Arc::new(c_prime.graded.clone()), &mhat, m, &one_embedding, None, seed)?;
    Ok(CentralizerLayer { layer, layer_group: kg, c, c_prime, mhat, one_embedding, witness, factorizations_checked })
}

impl CentralizerLayer {
    /// The action on `M` of `b x ⊗ b′ x⁻¹` for `x ∈ N′ C_G(N)` (an index of `G`),
    /// computed inside `C ⊗_B M` as `m -> x (1 ⊗ m) x⁻¹`.
    pub fn diagonal_action(&self, x: usize) -> Result<Matrix> {
        let xk = self.layer.position(x).ok_or_else(|| Error::NotSubgroup("element is outside the centralizer layer".into()))?;
        let kg = &self.layer_group;
        let left = self.c.group_element(xk)?;
        let right = self.c_prime.group_element(kg.inv(xk))?;
        let bm = &self.mhat.bimodule;
        let lm = bm.left_matrix(&left);
        let rm = bm.right_matrix(&right);
        let conj = rm.mul(&lm).mul(&self.one_embedding);
        let f = self.one_embedding.field();
        let cols = (0..conj.cols())
            .map(|j| self.one_embedding.solve(&conj.column(j)).ok_or_else(|| Error::Inconsistent("x (1 ⊗ m) x⁻¹ left the 1-component".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(f, self.one_embedding.cols(), &cols))
    }
}

/// The input of the transport: block extensions over `G` and `G′`, the bimodule `M`,
/// and a certified witness given by a `Δ`-structure on `M`.
#[derive(Clone, Debug)]
pub struct ButterflyScenario {
    pub group: FiniteGroup,
    pub normal: Subgroup,
    pub g_prime: Subgroup,
    pub field: PrimeField,
    /// `b` in `kN` coordinates and `b′` in `kN′` coordinates (sorted elements).
    pub e: Vector,
    pub e_prime: Vector,
    pub a: BlockExtension,
    pub ap: BlockExtension,
    pub m: Bimodule,
    pub delta: DeltaWitness,
    pub seed: u64,
}

impl ButterflyScenario {
    /// Validates the hypotheses and certifies the witness. `m` is given by the
    /// action matrices of the basis of `b·kN` and `b′·kN′` (as produced by `block_cut`).
    /// Without `unit_actions` a `Δ`-structure is searched for.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        group: FiniteGroup,
        normal: Subgroup,
        g_prime: Subgroup,
        field: PrimeField,
        e: Vector,
        e_prime: Vector,
        left_action: Vec<Matrix>,
        right_action: Vec<Matrix>,
        unit_actions: Option<Vec<Matrix>>,
        seed: u64,
    ) -> Result<Self> {
        let n_prime = g_prime.intersection(&normal);
        if group.order() * n_prime.order() != normal.order() * g_prime.order() {
            return Err(Error::NotFactorized("G is not N G′".into()));
        }
        let a = grade_block_extension(&group, &normal, field, &e)?;
        let ap = grade_block_extension_over(&group, &normal, &g_prime, field, &e_prime)?;
        let dim = left_action.first().map(|x| x.rows()).unwrap_or(0);
        let m = Bimodule::new(a.graded.one_component.clone(), ap.graded.one_component.clone(), dim, left_action, right_action)?;
        let ga = Arc::new(a.graded.clone());
        let gap = Arc::new(ap.graded.clone());
        let delta = match unit_actions {
            Some(x) => DeltaModuleStructure::new(ga, gap, m.clone(), x)?,
            None => find_delta_extension(ga, gap, &m, seed)?
                .structure()
                .cloned()
                .ok_or_else(|| Error::Hypothesis { index: 2, detail: "M does not extend to a Δ-module".into() })?,
        };
        delta.check_unit_relations()?;
        let delta = witness_from_delta(&delta, seed)?;
        Ok(Self { group, normal, g_prime, field, e, e_prime, a, ap, m, delta, seed })
    }

    pub fn n_prime(&self) -> Subgroup {
        self.g_prime.intersection(&self.normal)
    }
}

#[derive(Clone, Debug)]
pub struct TransportResult {
    pub group_data: ButterflyGroupData,
    pub ahat: BlockExtension,
    pub ahat_prime: BlockExtension,
    /// `M` over `b·kN̂` and `b′·kN̂′`.
    pub m: Bimodule,
    /// The centralizer layer of `Ĝ`.
    pub layer: CentralizerLayer,
    pub delta_hat: DeltaModuleStructure,
    /// `M̂ = Â ⊗_B M` with its certification.
    pub hat: DeltaWitness,
    /// Number of coset representatives compared per degree when computing `Δ̂`.
    pub independence_checks: usize,
}

impl TransportResult {
    pub fn mhat(&self) -> &GradedBimodule {
        &self.hat.mtilde.graded
    }
    pub fn hat_witness(&self) -> &GradedMoritaWitness {
        &self.hat.witness
    }
}

/// Moves `x` (coordinates over the sorted elements of `from`) along `map` to the
/// sorted elements of `to`.
fn transport_coords(from: &[usize], to: &Subgroup, map: impl Fn(usize) -> usize, x: &[u64]) -> Result<Vector> {
    let mut out = vec![0; to.order()];
    for (i, &y) in from.iter().enumerate() {
        let pos = to.position(map(y)).ok_or_else(|| Error::Inconsistent("embedding does not map onto the target subgroup".into()))?;
        out[pos] = x[i];
    }
    Ok(out)
}

/// Images of the basis of `hat` (a block of `k[to]`) in `block` (a block of `k[from]`).
fn pull_back_basis(hat: &Subalgebra, to: &Subgroup, block: &Subalgebra, from: &Subgroup, inverse: impl Fn(usize) -> usize) -> Result<Vec<Vector>> {
    hat.embedding
        .basis()
        .iter()
        .map(|v| {
            let back = transport_coords(to.elements(), from, &inverse, v)?;
            block.coords(&back).ok_or_else(|| Error::Inconsistent("transported block basis leaves the block".into()))
        })
        .collect()
}

/// Transports the equivalence of `scenario` to `Â = b·kĜ` and `Â′ = b′·kĜ′`, with
/// `embedding[i]` the image in `Ĝ` of the `i`-th element of `N`.
pub fn butterfly_transport(scenario: &ButterflyScenario, ghat: &FiniteGroup, embedding: &[usize]) -> Result<TransportResult> {
    let g = &scenario.group;
    let n = &scenario.normal;
    let field = scenario.field;
    let data = butterfly_group_data(g, n, &scenario.g_prime, ghat, embedding)?;
    let iota = |x: usize| embedding[n.position(x).unwrap()];
    let iota_inv = |y: usize| n.elements()[embedding.iter().position(|&z| z == y).unwrap()];
    let n_prime = scenario.n_prime();
    let n_hat_prime = data.n_hat.intersection(&data.ghat_prime);
    let e_hat = transport_coords(n.elements(), &data.n_hat, iota, &scenario.e)?;
    let e_hat_prime = transport_coords(n_prime.elements(), &n_hat_prime, iota, &scenario.e_prime)?;
    let ahat = grade_block_extension(ghat, &data.n_hat, field, &e_hat)?;
    let ahat_prime = grade_block_extension_over(ghat, &data.n_hat, &data.ghat_prime, field, &e_hat_prime)?;

    let left_images = pull_back_basis(&ahat.block, &data.n_hat, &scenario.a.block, n, iota_inv)?;
    let right_images = pull_back_basis(&ahat_prime.block, &n_hat_prime, &scenario.ap.block, &n_prime, iota_inv)?;
    let m = scenario.m.restrict(ahat.graded.one_component.clone(), &left_images, ahat_prime.graded.one_component.clone(), &right_images)?;

    let layer = extend_to_centralizer_layer(ghat, &data.n_hat, &data.ghat_prime, field, &e_hat, &e_hat_prime, &m, scenario.seed)?;
    let layer_prime = product_subgroup(ghat, &n_hat_prime, &data.centralizer_hat)?;

    // t̂ acts as t does in the input witness.
    let witness_delta = &scenario.delta.delta;
    let mut matched = Vec::with_capacity(data.transversal.len());
    for (&t, &th) in data.transversal.iter().zip(&data.hat_transversal) {
        let x = scenario.a.group_element(t)?;
        let y = scenario.ap.group_element(g.inv(t))?;
        matched.push((th, witness_delta.act(&x, &y)));
    }
    let y_action = |yh: usize| -> Result<Matrix> {
        let (th, yt) = matched
            .iter()
            .find(|(th, _)| layer_prime.contains(ghat.mul(ghat.inv(*th), yh)))
            .ok_or_else(|| Error::Inconsistent("T̂ misses a coset of N′C_Ĝ(N)".into()))?;
        Ok(yt.mul(&layer.diagonal_action(ghat.mul(ghat.inv(*th), yh))?))
    };

    let q = &ahat.quotient;
    let mut unit_actions = Vec::with_capacity(q.quotient.order());
    let mut independence_checks = 0;
    for d in q.quotient.elements() {
        let r = ahat.representatives[d];
        let rp = ahat_prime.representatives[d];
        let mut value: Option<Matrix> = None;
        for &yh in data.ghat_prime.elements().iter().filter(|&&y| q.projection[y] == d) {
            let left = m.left_matrix(&block_coords_of(&ahat, ghat.mul(r, ghat.inv(yh)))?);
            let right = m.right_matrix(&block_coords_of(&ahat_prime, ghat.mul(ghat.inv(rp), yh))?);
            // (b r ŷ⁻¹ ⊗ 1)(b ŷ ⊗ b′ ŷ⁻¹)(1 ⊗ b′ r′⁻¹ ŷ) = b r ⊗ b′ r′⁻¹
            let x = left.mul(&y_action(yh)?).mul(&right);
            independence_checks += 1;
            match &value {
                None => value = Some(x),
                Some(v) if *v != x => {
                    return Err(Error::Inconsistent(format!(
                        "input witness is inconsistent: Δ̂ unit action of degree {} depends on the representative {}",
                        q.quotient.label(d),
                        ghat.label(yh)
                    )))
                }
                Some(_) => {}
            }
        }
        unit_actions.push(value.ok_or_else(|| Error::Inconsistent("Ĝ′ misses a coset of N̂".into()))?);
    }
    let delta_hat = DeltaModuleStructure::new(Arc::new(ahat.graded.clone()), Arc::new(ahat_prime.graded.clone()), m.clone(), unit_actions)
        .map_err(|e| Error::Inconsistent(format!("input witness is inconsistent: {e}")))?;
    delta_hat.check_unit_relations().map_err(|e| Error::Inconsistent(format!("input witness is inconsistent: {e}")))?;
    let hat = witness_from_delta(&delta_hat, scenario.seed)?;
    Ok(TransportResult { group_data: data, ahat, ahat_prime, m, layer, delta_hat, hat, independence_checks })
}

/// Block `index` of `kN` in `kN` coordinates, for scenario authoring.
pub fn block_of(g: &FiniteGroup, n: &Subgroup, field: PrimeField, index: usize) -> Result<(Vector, Subalgebra)> {
    let kn = group_algebra(&subgroup_as_group(g, n), field);
    let blocks = crate::algebra::primitive_central_idempotents(&kn);
    let e = blocks.idempotents.get(index).cloned().ok_or_else(|| Error::NotCentralIdempotent(format!("there are only {} blocks", blocks.idempotents.len())))?;
    let cut = block_cut(&kn, &e)?;
    Ok((e, cut))
}
