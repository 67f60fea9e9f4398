//! Group-graded algebras with homogeneous bases, block extensions as crossed
//! products, truncation to subgroups of the grading group, and the diagonal
//! subalgebra of `A ⊗ A′^op`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{block_cut, group_algebra, Algebra, AlgebraElement, Subalgebra};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groups::{product_subgroup, quotient, subgroup_as_group, FiniteGroup, QuotientGroup, Subgroup};
use crate::linalg::{is_zero_vector, Subspace, Vector};

/// An algebra whose basis is homogeneous for a grading by a finite group.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub algebra: Arc<Algebra>,
    pub grading: FiniteGroup,
    /// Degree of each basis element.
    pub degree: Vec<usize>,
    /// Invertible homogeneous `u_g ∈ A_g`, when the algebra is a crossed product.
    pub units: Option<Vec<AlgebraElement>>,
    pub unit_inverses: Option<Vec<AlgebraElement>>,
    /// The 1-component as an algebra on the degree-1 basis elements.
    pub one_component: Arc<Algebra>,
    pub one_basis: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl GradedAlgebra {
    /// Checks `A_g A_h ⊆ A_gh` on basis products and that 1 has degree 1.
    /// Units, if given, must be invertible and homogeneous with `u_1 = 1`.
    pub fn new(algebra: Arc<Algebra>, grading: FiniteGroup, degree: Vec<usize>, units: Option<Vec<AlgebraElement>>) -> Result<Self> {
        let n = algebra.dim();
        if degree.len() != n || degree.iter().any(|&d| d >= grading.order()) {
            return Err(Error::InvalidGrading("degree list does not match the basis".into()));
        }
        let mut components = vec![Vec::new(); grading.order()];
        for (i, &d) in degree.iter().enumerate() {
            components[d].push(i);
        }
        for i in 0..n {
            for j in 0..n {
                let target = grading.mul(degree[i], degree[j]);
                if let Some(&(k, _)) = algebra.basis_product(i, j).iter().find(|(k, _)| degree[*k] != target) {
                    return Err(Error::InvalidGrading(format!(
                        "product of {} and {} has a term {} outside degree {}",
                        algebra.labels()[i],
                        algebra.labels()[j],
                        algebra.labels()[k],
                        grading.label(target)
                    )));
                }
            }
        }
        if algebra.unit().iter().enumerate().any(|(i, &c)| c != 0 && degree[i] != 0) {
            return Err(Error::InvalidGrading("the unit is not of degree 1".into()));
        }
        let one_basis = components[0].clone();
        let one_component = Arc::new(restrict(&algebra, &one_basis));
        let mut out = Self { algebra, grading, degree, units: None, unit_inverses: None, one_component, one_basis, components };
        if let Some(units) = units {
            out.set_units(units)?;
        }
        Ok(out)
    }

    fn set_units(&mut self, units: Vec<AlgebraElement>) -> Result<()> {
        if units.len() != self.grading.order() {
            return Err(Error::InvalidGrading("one unit per degree is required".into()));
        }
        if units[0] != self.algebra.unit() {
            return Err(Error::InvalidGrading("u_1 must be the identity".into()));
        }
        let mut inverses = Vec::with_capacity(units.len());
        for (g, u) in units.iter().enumerate() {
            if self.homogeneous_degree(u) != Some(g) {
                return Err(Error::InvalidGrading(format!("u_{} is not homogeneous of its degree", self.grading.label(g))));
            }
            let inv = self.algebra.inverse(u).ok_or_else(|| Error::InvalidGrading(format!("u_{} is not invertible", self.grading.label(g))))?;
            if self.homogeneous_degree(&inv) != Some(self.grading.inv(g)) {
                return Err(Error::InvalidGrading(format!("inverse of u_{} is not homogeneous", self.grading.label(g))));
            }
            inverses.push(inv);
        }
        self.units = Some(units);
        self.unit_inverses = Some(inverses);
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
    pub fn component(&self, g: usize) -> &[usize] {
        &self.components[g]
    }
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, x: &[u64]) -> Option<usize> {
        let mut deg = None;
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                match deg {
                    None => deg = Some(self.degree[i]),
                    Some(d) if d != self.degree[i] => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    pub fn project(&self, x: &[u64], g: usize) -> AlgebraElement {
        x.iter().enumerate().map(|(i, &c)| if self.degree[i] == g { c } else { 0 }).collect()
    }

    pub fn unit_of(&self, g: usize) -> &[u64] {
        &self.units.as_ref().expect("crossed product units")[g]
    }
    pub fn unit_inverse_of(&self, g: usize) -> &[u64] {
        &self.unit_inverses.as_ref().expect("crossed product units")[g]
    }

    /// Embeds coordinates of the 1-component.
    pub fn embed_one(&self, b: &[u64]) -> AlgebraElement {
        let mut out = self.algebra.zero();
        for (k, &i) in self.one_basis.iter().enumerate() {
            out[i] = b[k];
        }
        out
    }

    /// Coordinates in the 1-component of an element of degree 1.
    pub fn restrict_one(&self, x: &[u64]) -> Option<Vector> {
        if x.iter().enumerate().any(|(i, &c)| c != 0 && self.degree[i] != 0) {
            return None;
        }
        Some(self.one_basis.iter().map(|&i| x[i]).collect())
    }

    /// Rank check that `A_g A_h` spans `A_gh` for every pair.
    pub fn is_strongly_graded(&self) -> bool {
        let a = &self.algebra;
        let f = a.field();
        for g in self.grading.elements() {
            for h in self.grading.elements() {
                let gh = self.grading.mul(g, h);
                let span = Subspace::spanned_by(
                    f,
                    a.dim(),
                    self.components[g].iter().flat_map(|&i| self.components[h].iter().map(move |&j| a.mul(&a.basis_element(i), &a.basis_element(j)))),
                );
                if span.dim() != self.components[gh].len() {
                    return false;
                }
            }
        }
        true
    }

    /// Full invariant check including associativity of the carrier.
    pub fn validate(&self) -> Result<()> {
        self.algebra.validate()?;
        if !self.is_strongly_graded() {
            return Err(Error::InvalidGrading("the grading is not strong".into()));
        }
        Ok(())
    }

    /// The truncation to a subgroup `H` of the grading group, together with the
    /// ambient index of each retained basis element.
    pub fn truncate(&self, h: &Subgroup) -> Result<(GradedAlgebra, Vec<usize>)> {
        if h.parent_order() != self.grading.order() {
            return Err(Error::InvalidGrading("subgroup of a different grading group".into()));
        }
        let indices: Vec<usize> = (0..self.dim()).filter(|&i| h.contains(self.degree[i])).collect();
        let algebra = Arc::new(restrict(&self.algebra, &indices));
        let degree = indices.iter().map(|&i| h.position(self.degree[i]).unwrap()).collect();
        let units = self.units.as_ref().map(|u| h.elements().iter().map(|&g| indices.iter().map(|&i| u[g][i]).collect()).collect());
        let t = GradedAlgebra::new(algebra, subgroup_as_group(&self.grading, h), degree, units)?;
        Ok((t, indices))
    }
}

/// The algebra on a subset of basis indices closed under products.
fn restrict(a: &Algebra, indices: &[usize]) -> Algebra {
    let mut pos = vec![usize::MAX; a.dim()];
    for (k, &i) in indices.iter().enumerate() {
        pos[i] = k;
    }
    let labels = indices.iter().map(|&i| a.labels()[i].clone()).collect();
    let unit = indices.iter().map(|&i| a.unit()[i]).collect();
    Algebra::from_products(a.field(), labels, unit, |x, y| {
        let mut v = vec![0; indices.len()];
        for &(k, c) in a.basis_product(indices[x], indices[y]) {
            assert_ne!(pos[k], usize::MAX, "restricted basis is not closed under products");
            v[pos[k]] = c;
        }
        v
    })
}

/// `A = e·kH` graded by `Ḡ = G/N`, where `H` is `G` itself or a subgroup with
/// `HN = G`, and `e` is an `H`-invariant central idempotent of `k[N ∩ H]`.
///
/// Basis element `(d, k)` is `β_k · r_d`, where `β_k` runs over the basis of
/// `B = e·k[N ∩ H]` and `r_d` is the smallest element of `H` in the coset `d`.
/// Degrees are listed in the order of `Ḡ`, so `B` occupies the first `dim B`
/// coordinates with the structure constants of the block.
#[derive(Clone, Debug)]
pub struct BlockExtension {
    pub graded: GradedAlgebra,
    pub group: FiniteGroup,
    pub normal: Subgroup,
    pub carrier: Subgroup,
    /// `N ∩ H` as a subgroup of `G`.
    pub carrier_normal: Subgroup,
    /// `G/N`, the grading group.
    pub quotient: QuotientGroup,
    pub representatives: Vec<usize>,
    /// `B` inside `k[N ∩ H]` (coordinates indexed by sorted elements of `N ∩ H`).
    pub block: Subalgebra,
}

pub fn grade_block_extension(g: &FiniteGroup, n: &Subgroup, field: PrimeField, e: &[u64]) -> Result<BlockExtension> {
    grade_block_extension_over(g, n, &Subgroup::whole(g), field, e)
}

pub fn grade_block_extension_over(g: &FiniteGroup, n: &Subgroup, h: &Subgroup, field: PrimeField, e: &[u64]) -> Result<BlockExtension> {
    let q = quotient(g, n)?;
    if h.parent_order() != g.order() || Subgroup::from_elements(g, h.elements().iter().copied()).is_err() {
        return Err(Error::NotSubgroup("carrier is not a subgroup of G".into()));
    }
    if product_subgroup(g, h, n).map(|p| p.order() != g.order()).unwrap_or(true) {
        return Err(Error::NotFactorized("the carrier subgroup does not cover G/N".into()));
    }
    let nh = n.intersection(h);
    let nh_group = subgroup_as_group(g, &nh);
    let knh = group_algebra(&nh_group, field);
    let block = block_cut(&knh, e)?;
    for &x in h.elements() {
        let mut conj = vec![0; nh.order()];
        for (i, &y) in nh.elements().iter().enumerate() {
            conj[nh.position(g.conj(x, y)).unwrap()] = e[i];
        }
        if conj != e {
            return Err(Error::NotInvariant(format!("the block idempotent is not invariant under {}", g.label(x))));
        }
    }
    let reps: Vec<usize> = q.cosets.iter().map(|c| *c.iter().find(|&&x| h.contains(x)).expect("carrier meets every coset")).collect();
    let gbar = q.quotient.clone();
    let dim_b = block.dim();
    let d = gbar.order() * dim_b;
    let ext = ExtensionCoords { g, nh: &nh, block: &block, reps: &reps, projection: &q.projection, field };

    let mut labels = Vec::with_capacity(d);
    for (deg, &r) in reps.iter().enumerate() {
        for k in 0..dim_b {
            labels.push(if deg == 0 { block.algebra.labels()[k].clone() } else { format!("{}·{}", block.algebra.labels()[k], g.label(r)) });
        }
    }
    let vectors: Vec<Vector> = (0..d).map(|i| ext.to_group_algebra(&unit(d, i))).collect();
    let mut unit_vec = vec![0; d];
    unit_vec[..dim_b].copy_from_slice(block.algebra.unit());
    let kg_mul = |x: &[u64], y: &[u64]| -> Vector {
        let mut out = vec![0; g.order()];
        for (a, &ca) in x.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (b, &cb) in y.iter().enumerate().filter(|(_, &c)| c != 0) {
                let ab = g.mul(a, b);
                out[ab] = field.mul_add(out[ab], ca, cb);
            }
        }
        out
    };
    let mut failure = None;
    let algebra = Algebra::from_products(field, labels, unit_vec.clone(), |i, j| {
        let prod = kg_mul(&vectors[i], &vectors[j]);
        match ext.from_group_algebra(&prod) {
            Some(c) => c,
            None => {
                failure.get_or_insert((i, j));
                vec![0; d]
            }
        }
    });
    if let Some((i, j)) = failure {
        return Err(Error::Inconsistent(format!("product of basis elements {i} and {j} leaves e·kG")));
    }
    let degree = (0..d).map(|i| i / dim_b).collect();
    let units = (0..gbar.order())
        .map(|deg| {
            let mut u = vec![0; d];
            u[deg * dim_b..(deg + 1) * dim_b].copy_from_slice(block.algebra.unit());
            u
        })
        .collect();
    let graded = GradedAlgebra::new(Arc::new(algebra), gbar, degree, Some(units))?;
    Ok(BlockExtension { graded, group: g.clone(), normal: n.clone(), carrier: h.clone(), carrier_normal: nh, quotient: q, representatives: reps, block })
}

fn unit(n: usize, i: usize) -> Vector {
    crate::linalg::unit_vector(n, i)
}

struct ExtensionCoords<'a> {
    g: &'a FiniteGroup,
    nh: &'a Subgroup,
    block: &'a Subalgebra,
    reps: &'a [usize],
    projection: &'a [usize],
    field: PrimeField,
}

impl ExtensionCoords<'_> {
    fn to_group_algebra(&self, x: &[u64]) -> Vector {
        let dim_b = self.block.dim();
        let mut out = vec![0; self.g.order()];
        for (deg, &r) in self.reps.iter().enumerate() {
            let part = &x[deg * dim_b..(deg + 1) * dim_b];
            if is_zero_vector(part) {
                continue;
            }
            let beta = self.block.embed(part);
            for (i, &c) in beta.iter().enumerate() {
                if c != 0 {
                    let gi = self.g.mul(self.nh.elements()[i], r);
                    out[gi] = self.field.add(out[gi], c);
                }
            }
        }
        out
    }

    fn from_group_algebra(&self, z: &[u64]) -> Option<Vector> {
        let dim_b = self.block.dim();
        let mut out = vec![0; self.reps.len() * dim_b];
        let mut parts = vec![vec![0u64; self.nh.order()]; self.reps.len()];
        for (x, &c) in z.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let deg = self.projection[x];
            let n = self.g.mul(x, self.g.inv(self.reps[deg]));
            let pos = self.nh.position(n)?;
            parts[deg][pos] = c;
        }
        for (deg, part) in parts.iter().enumerate() {
            if is_zero_vector(part) {
                continue;
            }
            let c = self.block.coords(part)?;
            out[deg * dim_b..(deg + 1) * dim_b].copy_from_slice(&c);
        }
        Some(out)
    }
}

impl BlockExtension {
    fn coords_helper(&self) -> ExtensionCoords<'_> {
        ExtensionCoords {
            g: &self.group,
            nh: &self.carrier_normal,
            block: &self.block,
            reps: &self.representatives,
            projection: &self.quotient.projection,
            field: self.graded.field(),
        }
    }

    pub fn dim_block(&self) -> usize {
        self.block.dim()
    }

    /// The element in `kG` coordinates.
    pub fn to_group_algebra(&self, x: &[u64]) -> Vector {
        self.coords_helper().to_group_algebra(x)
    }

    /// Coordinates of an element of `kG`, if it lies in `e·kH`.
    pub fn from_group_algebra(&self, z: &[u64]) -> Option<Vector> {
        self.coords_helper().from_group_algebra(z)
    }

    /// `e·x` for a group element `x` of the carrier.
    pub fn group_element(&self, x: usize) -> Result<AlgebraElement> {
        if !self.carrier.contains(x) {
            return Err(Error::NotSubgroup(format!("{} is not in the carrier group", self.group.label(x))));
        }
        let e = self.to_group_algebra(self.graded.algebra.unit());
        let mut ex = vec![0; self.group.order()];
        for (y, &c) in e.iter().enumerate() {
            ex[self.group.mul(y, x)] = c;
        }
        self.from_group_algebra(&ex).ok_or_else(|| Error::Inconsistent("e·x left the block extension".into()))
    }
}

/// `Δ = ⊕_g A_g ⊗ A′_{g⁻¹}` inside `A ⊗ A′^op`, on basis pairs `(i, j)` with
/// `deg j = (deg i)⁻¹`, listed degree-major. The product is
/// `(a ⊗ a′)(c ⊗ c′) = ac ⊗ c′a′`.
#[derive(Clone, Debug)]
pub struct DiagonalAlgebra {
    pub graded: GradedAlgebra,
    pub pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    left_dim: usize,
    right_dim: usize,
}

pub fn diagonal_subalgebra(a: &GradedAlgebra, ap: &GradedAlgebra) -> Result<DiagonalAlgebra> {
    if a.grading != ap.grading {
        return Err(Error::GradingMismatch("Δ needs a common grading group".into()));
    }
    let f = a.field();
    let gbar = &a.grading;
    let mut pairs = Vec::new();
    for g in gbar.elements() {
        for &i in a.component(g) {
            for &j in ap.component(gbar.inv(g)) {
                pairs.push((i, j));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let d = pairs.len();
    let labels = pairs.iter().map(|&(i, j)| format!("{}⊗{}", a.algebra.labels()[i], ap.algebra.labels()[j])).collect();
    let pure = |x: &[u64], y: &[u64]| -> Option<Vector> {
        let mut out = vec![0; d];
        for (i, &cx) in x.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (j, &cy) in y.iter().enumerate().filter(|(_, &c)| c != 0) {
                let k = *index.get(&(i, j))?;
                out[k] = f.mul_add(out[k], cx, cy);
            }
        }
        Some(out)
    };
    let mut unit_vec = vec![0; d];
    for (i, &cx) in a.algebra.unit().iter().enumerate().filter(|(_, &c)| c != 0) {
        for (j, &cy) in ap.algebra.unit().iter().enumerate().filter(|(_, &c)| c != 0) {
            unit_vec[index[&(i, j)]] = f.mul(cx, cy);
        }
    }
    let algebra = Algebra::from_products(f, labels, unit_vec, |x, y| {
        let (i, j) = pairs[x];
        let (k, l) = pairs[y];
        let left = a.algebra.mul(&a.algebra.basis_element(i), &a.algebra.basis_element(k));
        let right = ap.algebra.mul(&ap.algebra.basis_element(l), &ap.algebra.basis_element(j));
        pure(&left, &right).expect("degrees of Δ multiply within Δ")
    });
    let degree = pairs.iter().map(|&(i, _)| a.degree[i]).collect();
    let units = match (&a.units, &ap.unit_inverses) {
        (Some(u), Some(uinv)) => Some(gbar.elements().map(|g| pure(&u[g], &uinv[g]).expect("units are homogeneous")).collect()),
        _ => None,
    };
    let graded = GradedAlgebra::new(Arc::new(algebra), gbar.clone(), degree, units)?;
    let expected = a.one_component.tensor(&ap.one_component.opposite());
    if graded.one_component.structure_constants() != expected.structure_constants() {
        return Err(Error::Inconsistent("1-component of Δ differs from B ⊗ B′^op".into()));
    }
    Ok(DiagonalAlgebra { graded, pairs, index, left_dim: a.dim(), right_dim: ap.dim() })
}

impl DiagonalAlgebra {
    /// `x ⊗ y` for `x ∈ A`, `y ∈ A′` whose homogeneous parts pair up inside `Δ`.
    pub fn pure(&self, x: &[u64], y: &[u64]) -> Option<AlgebraElement> {
        assert_eq!((x.len(), y.len()), (self.left_dim, self.right_dim));
        let f = self.graded.field();
        let mut out = vec![0; self.pairs.len()];
        for (i, &cx) in x.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (j, &cy) in y.iter().enumerate().filter(|(_, &c)| c != 0) {
                let k = *self.index.get(&(i, j))?;
                out[k] = f.mul_add(out[k], cx, cy);
            }
        }
        Some(out)
    }

    pub fn pair_index(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::primitive_central_idempotents;
    use crate::groups::subgroup_as_group;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn s3xc3() -> (FiniteGroup, Subgroup, Subgroup) {
        let g = FiniteGroup::from_permutations(6, &[vec![1, 2, 0, 3, 4, 5], vec![1, 0, 2, 3, 4, 5], vec![0, 1, 2, 4, 5, 3]], 100).unwrap();
        let n = Subgroup::generated(&g, &[g.index_of("(0 1 2)").unwrap(), g.index_of("(0 1)").unwrap()]);
        let gp = Subgroup::generated(&g, &[g.index_of("(3 4 5)").unwrap()]);
        (g, n, gp)
    }

    fn defect_zero(g: &FiniteGroup, n: &Subgroup) -> Vector {
        let kn = group_algebra(&subgroup_as_group(g, n), fp(2));
        let bd = primitive_central_idempotents(&kn);
        assert_eq!(bd.block_dims, vec![2, 4]);
        bd.idempotents[1].clone()
    }

    #[test]
    fn fixture_block_extension() {
        let (g, n, _) = s3xc3();
        let e = defect_zero(&g, &n);
        let ext = grade_block_extension(&g, &n, fp(2), &e).unwrap();
        let a = &ext.graded;
        assert_eq!(a.grading.order(), 3);
        assert_eq!(a.dim(), 12);
        for d in 0..3 {
            assert_eq!(a.component(d).len(), 4);
        }
        a.validate().unwrap();
        assert_eq!(*a.one_component, *ext.block.algebra);
        // round trip through kG
        for i in 0..a.dim() {
            let v = ext.to_group_algebra(&a.algebra.basis_element(i));
            assert_eq!(ext.from_group_algebra(&v).unwrap(), a.algebra.basis_element(i));
        }
    }

    #[test]
    fn carrier_subgroup_extension() {
        let (g, n, gp) = s3xc3();
        let ext = grade_block_extension_over(&g, &n, &gp, fp(2), &[1]).unwrap();
        assert_eq!(ext.graded.dim(), 3);
        assert_eq!(ext.graded.grading.order(), 3);
        ext.graded.validate().unwrap();
        let a = grade_block_extension(&g, &n, fp(2), &defect_zero(&g, &n)).unwrap();
        assert_eq!(a.graded.grading, ext.graded.grading);
    }

    #[test]
    fn trivial_grading_when_g_equals_n() {
        let (g, n, _) = s3xc3();
        let s3 = subgroup_as_group(&g, &n);
        let whole = Subgroup::whole(&s3);
        let kn = group_algebra(&s3, fp(2));
        let e = primitive_central_idempotents(&kn).idempotents[1].clone();
        let ext = grade_block_extension(&s3, &whole, fp(2), &e).unwrap();
        assert_eq!(ext.graded.grading.order(), 1);
        assert_eq!(ext.graded.dim(), 4);
    }

    #[test]
    fn non_invariant_block_rejected() {
        let s3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], 10).unwrap();
        let n = Subgroup::generated(&s3, &[s3.index_of("(0 1 2)").unwrap()]);
        let kn = group_algebra(&subgroup_as_group(&s3, &n), fp(7));
        let bd = primitive_central_idempotents(&kn);
        let bad = bd.idempotents.iter().filter(|e| grade_block_extension(&s3, &n, fp(7), e).is_err()).count();
        assert_eq!(bad, 2);
    }

    #[test]
    fn group_elements_map_to_units() {
        let (g, n, _) = s3xc3();
        let ext = grade_block_extension(&g, &n, fp(2), &defect_zero(&g, &n)).unwrap();
        for x in g.elements() {
            let ex = ext.group_element(x).unwrap();
            assert!(ext.graded.algebra.inverse(&ex).is_some());
            assert_eq!(ext.graded.homogeneous_degree(&ex), Some(ext.quotient.projection[x]));
        }
        for (d, &r) in ext.representatives.iter().enumerate() {
            assert_eq!(ext.group_element(r).unwrap(), ext.graded.unit_of(d));
        }
    }

    #[test]
    fn truncations() {
        let (g, n, _) = s3xc3();
        let ext = grade_block_extension(&g, &n, fp(2), &defect_zero(&g, &n)).unwrap();
        let a = &ext.graded;
        let (whole, idx) = a.truncate(&Subgroup::whole(&a.grading)).unwrap();
        assert_eq!(idx.len(), a.dim());
        assert_eq!(*whole.algebra, *a.algebra);
        let (one, _) = a.truncate(&Subgroup::trivial(&a.grading)).unwrap();
        assert_eq!(*one.algebra, *ext.block.algebra);
    }

    #[test]
    fn diagonal_dimensions() {
        let (g, n, gp) = s3xc3();
        let a = grade_block_extension(&g, &n, fp(2), &defect_zero(&g, &n)).unwrap();
        let d = diagonal_subalgebra(&a.graded, &a.graded).unwrap();
        assert_eq!(d.graded.dim(), 48);
        d.graded.algebra.validate().unwrap();
        assert!(d.graded.is_strongly_graded());
        let ap = grade_block_extension_over(&g, &n, &gp, fp(2), &[1]).unwrap();
        let d2 = diagonal_subalgebra(&a.graded, &ap.graded).unwrap();
        assert_eq!(d2.graded.dim(), 3 * 4);
        assert_eq!(d2.graded.one_component.dim(), 4);
    }
}
