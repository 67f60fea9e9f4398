//! Finite groups given by multiplication tables.
//!
//! Every group is stored in canonical order: the identity has index 0 and the
//! remaining elements follow in label order (image-tuple order for permutation
//! groups). Subgroups, quotients and conjugation actions are all computed from the
//! table.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_BOUND: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    labels: Vec<String>,
    inverses: Vec<usize>,
}

/// Input record for [`load_group`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Perm {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

pub fn load_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    load_group_bounded(spec, DEFAULT_ORDER_BOUND)
}

pub fn load_group_bounded(spec: &GroupSpec, bound: usize) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Table { table, labels } => {
            let labels = labels.clone().unwrap_or_else(|| (0..table.len()).map(|i| format!("g{i}")).collect());
            FiniteGroup::from_table(table, labels)
        }
        GroupSpec::Perm { degree, generators } => FiniteGroup::from_permutations(*degree, generators, bound),
    }
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        Self { order: 1, table: vec![0], labels: vec!["1".into()], inverses: vec![0] }
    }

    /// Validates a multiplication table (`table[a][b] = a*b`) and reorders it canonically.
    pub fn from_table(table: &[Vec<usize>], labels: Vec<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidGroup("label count differs from table size".into()));
        }
        if labels.iter().collect::<HashSet<_>>().len() != n {
            return Err(Error::InvalidGroup("duplicate labels".into()));
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {r} has wrong length")));
            }
            if row.iter().collect::<HashSet<_>>().len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidGroup(format!("row {r} is not a permutation (not a Latin square)")));
            }
        }
        for c in 0..n {
            if (0..n).map(|r| table[r][c]).collect::<HashSet<_>>().len() != n {
                return Err(Error::InvalidGroup(format!("column {c} is not a permutation (not a Latin square)")));
            }
        }
        let identity =
            (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)).ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("not associative at ({}, {}, {})", labels[a], labels[b], labels[c])));
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&x| x != identity).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        order.insert(0, identity);
        Ok(Self::reindexed(table, &labels, &order))
    }

    // `order[new] = old`
    fn reindexed(table: &[Vec<usize>], labels: &[String], order: &[usize]) -> Self {
        let n = order.len();
        let mut new_of = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let mut flat = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[a * n + b] = new_of[table[order[a]][order[b]]];
            }
        }
        let mut inverses = vec![0; n];
        for a in 0..n {
            inverses[a] = (0..n).find(|&b| flat[a * n + b] == 0).expect("Latin square has inverses");
        }
        Self { order: n, table: flat, labels: order.iter().map(|&o| labels[o].clone()).collect(), inverses }
    }

    /// The permutation group generated by image arrays on `0..degree`, ordered by image tuple.
    /// Products compose right to left: `(g*h)(x) = g(h(x))`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>], bound: usize) -> Result<Self> {
        for g in generators {
            if g.len() != degree {
                return Err(Error::InvalidGroup(format!("generator {g:?} does not have degree {degree}")));
            }
            if g.iter().collect::<HashSet<_>>().len() != degree || g.iter().any(|&x| x >= degree) {
                return Err(Error::InvalidGroup(format!("generator {g:?} is not a permutation")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
                if seen.insert(y.clone()) {
                    if seen.len() > bound {
                        return Err(Error::OrderBoundExceeded { bound });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elems: Vec<Vec<usize>> = seen.into_iter().collect();
        elems.sort();
        let index: HashMap<&[usize], usize> = elems.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
        let n = elems.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let ab: Vec<usize> = (0..degree).map(|x| elems[a][elems[b][x]]).collect();
                table[a * n + b] = index[ab.as_slice()];
            }
        }
        let mut inverses = vec![0; n];
        for a in 0..n {
            inverses[a] = (0..n).find(|&b| table[a * n + b] == 0).unwrap();
        }
        let labels = elems.iter().map(|e| cycle_notation(e)).collect();
        Ok(Self { order: n, table, labels, inverses })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }
    #[inline]
    pub fn identity(&self) -> usize {
        0
    }
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }
    /// `a b a^-1`
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }
    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.table[a * self.order..(a + 1) * self.order].to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Greedy generating set: scan elements in order, keep those outside the span so far.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial(self);
        for g in self.elements() {
            if !span.contains(g) {
                gens.push(g);
                span = Subgroup::generated(self, &gens);
                if span.order() == self.order {
                    break;
                }
            }
        }
        gens
    }

    pub fn validate(&self) -> Result<()> {
        Self::from_table(&self.table_rows(), self.labels.clone()).map(|_| ())
    }
}

/// Cycle notation with 0-indexed points; cycles start at their smallest point.
pub fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = perm[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = perm[x];
        }
        out.push('(');
        out.push_str(&cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl Subgroup {
    fn from_sorted(parent_order: usize, elements: Vec<usize>) -> Self {
        let mut member = vec![false; parent_order];
        for &e in &elements {
            member[e] = true;
        }
        Self { elements, member }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Self::from_sorted(g.order(), g.elements().collect())
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Self::from_sorted(g.order(), vec![0])
    }

    pub fn generated(g: &FiniteGroup, gens: &[usize]) -> Self {
        let mut set = BTreeSet::from([0]);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = g.mul(x, s);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Self::from_sorted(g.order(), set.into_iter().collect())
    }

    /// Validates closure under the parent table and inversion.
    pub fn from_elements(g: &FiniteGroup, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        if set.iter().any(|&x| x >= g.order()) {
            return Err(Error::NotSubgroup("element index out of range".into()));
        }
        if !set.contains(&0) {
            return Err(Error::NotSubgroup("does not contain the identity".into()));
        }
        for &a in &set {
            if !set.contains(&g.inv(a)) {
                return Err(Error::NotSubgroup(format!("not closed under inversion at {}", g.label(a))));
            }
            for &b in &set {
                if !set.contains(&g.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("not closed under multiplication at ({}, {})", g.label(a), g.label(b))));
                }
            }
        }
        Ok(Self::from_sorted(g.order(), set.into_iter().collect()))
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn parent_order(&self) -> usize {
        self.member.len()
    }
    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.member.get(x).copied().unwrap_or(false)
    }
    /// Position of a member in the sorted element list.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }
    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        g.elements().all(|x| self.elements.iter().all(|&n| self.contains(g.conj(x, n))))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Self::from_sorted(self.parent_order(), elements)
    }

    fn check_parent(&self, g: &FiniteGroup) -> Result<()> {
        if self.parent_order() != g.order() {
            return Err(Error::NotSubgroup("subgroup belongs to a group of different order".into()));
        }
        Ok(())
    }
}

/// The product set `HK`, which must be a subgroup.
pub fn product_subgroup(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
    let set: BTreeSet<usize> = h.elements().iter().flat_map(|&a| k.elements().iter().map(move |&b| g.mul(a, b))).collect();
    Subgroup::from_elements(g, set)
}

/// `{g in G : gn = ng for all n in N}`; with `G = N` this is the center `Z(N)`.
pub fn centralizer_in_group(g: &FiniteGroup, n: &Subgroup) -> Result<Subgroup> {
    n.check_parent(g)?;
    Subgroup::from_elements(g, n.elements().iter().copied())?;
    let elements = g.elements().filter(|&x| n.elements().iter().all(|&y| g.mul(x, y) == g.mul(y, x))).collect();
    Ok(Subgroup::from_sorted(g.order(), elements))
}

pub fn group_center(g: &FiniteGroup) -> Subgroup {
    centralizer_in_group(g, &Subgroup::whole(g)).expect("whole group is a subgroup")
}

/// A subgroup as a group in its own right. The elements keep their labels and their
/// relative order, so index `i` of the result is `h.elements()[i]`.
pub fn subgroup_as_group(g: &FiniteGroup, h: &Subgroup) -> FiniteGroup {
    let n = h.order();
    let mut table = vec![0; n * n];
    for (i, &a) in h.elements().iter().enumerate() {
        for (j, &b) in h.elements().iter().enumerate() {
            table[i * n + j] = h.position(g.mul(a, b)).expect("subgroup is closed");
        }
    }
    let inverses = h.elements().iter().map(|&a| h.position(g.inv(a)).unwrap()).collect();
    let labels = h.elements().iter().map(|&a| g.label(a).to_string()).collect();
    FiniteGroup { order: n, table, labels, inverses }
}

#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub kernel: Subgroup,
    /// Cosets `rep * kernel`, in the order of the quotient's elements.
    pub cosets: Vec<Vec<usize>>,
    /// Smallest element index of each coset.
    pub representatives: Vec<usize>,
    pub quotient: FiniteGroup,
    /// Parent element -> quotient element.
    pub projection: Vec<usize>,
}

pub fn quotient(g: &FiniteGroup, n: &Subgroup) -> Result<QuotientGroup> {
    n.check_parent(g)?;
    if !n.is_normal_in(g) {
        return Err(Error::NotNormal("quotient requires a normal subgroup".into()));
    }
    let mut projection = vec![usize::MAX; g.order()];
    let mut cosets = Vec::new();
    let mut representatives = Vec::new();
    for x in g.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let idx = cosets.len();
        let mut coset: Vec<usize> = n.elements().iter().map(|&k| g.mul(x, k)).collect();
        coset.sort_unstable();
        for &y in &coset {
            projection[y] = idx;
        }
        representatives.push(x);
        cosets.push(coset);
    }
    let q = cosets.len();
    let mut table = vec![0; q * q];
    for a in 0..q {
        for b in 0..q {
            table[a * q + b] = projection[g.mul(representatives[a], representatives[b])];
        }
    }
    let inverses = (0..q).map(|a| projection[g.inv(representatives[a])]).collect();
    let labels = representatives.iter().map(|&r| g.label(r).to_string()).collect();
    let quotient = FiniteGroup { order: q, table, labels, inverses };
    Ok(QuotientGroup { kernel: n.clone(), cosets, representatives, quotient, projection })
}

/// `g -> (n -> g n g^-1)` with automorphisms written as permutations of the
/// positions of `N`'s sorted element list.
#[derive(Clone, Debug)]
pub struct ConjugationMap {
    pub normal: Subgroup,
    pub images: Vec<Vec<usize>>,
    pub kernel: Subgroup,
}

impl ConjugationMap {
    /// The set of automorphisms realized, `eps(S)` for a subset `S`.
    pub fn image_of(&self, elements: &[usize]) -> BTreeSet<Vec<usize>> {
        elements.iter().map(|&x| self.images[x].clone()).collect()
    }
}

pub fn conjugation_map(g: &FiniteGroup, n: &Subgroup) -> Result<ConjugationMap> {
    n.check_parent(g)?;
    if !n.is_normal_in(g) {
        return Err(Error::NotNormal("conjugation map requires a normal subgroup".into()));
    }
    let images: Vec<Vec<usize>> = g.elements().map(|x| n.elements().iter().map(|&y| n.position(g.conj(x, y)).unwrap()).collect()).collect();
    let id: Vec<usize> = (0..n.order()).collect();
    let kernel = Subgroup::from_sorted(g.order(), g.elements().filter(|&x| images[x] == id).collect());
    Ok(ConjugationMap { normal: n.clone(), images, kernel })
}

/// Extends generator images to a homomorphism `source -> target`, checking well-definedness.
pub fn extend_homomorphism(source: &FiniteGroup, target: &FiniteGroup, gen_images: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut map = vec![usize::MAX; source.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &(s, t) in gen_images {
            let y = source.mul(x, s);
            let img = target.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = img;
                queue.push_back(y);
            } else if map[y] != img {
                return Err(Error::InvalidHomomorphism(format!("images are inconsistent at {}", source.label(y))));
            }
        }
    }
    if map.contains(&usize::MAX) {
        return Err(Error::InvalidHomomorphism("the given elements do not generate the source group".into()));
    }
    for a in source.elements() {
        for b in source.elements() {
            if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                return Err(Error::InvalidHomomorphism("map is not multiplicative".into()));
            }
        }
    }
    Ok(map)
}

/// Group-theoretic data of the transport construction.
#[derive(Clone, Debug)]
pub struct ButterflyGroupData {
    /// `N' = G' ∩ N` inside `G`.
    pub n_prime: Subgroup,
    pub centralizer: Subgroup,
    /// `ι(N)` inside `Ĝ`.
    pub n_hat: Subgroup,
    pub centralizer_hat: Subgroup,
    /// `Ĝ' = ε̂^{-1}(ε(G'))`.
    pub ghat_prime: Subgroup,
    /// Transversal of `N'C_G(N)` in `G'`.
    pub transversal: Vec<usize>,
    /// `t̂` with `ε(t) = ε̂(t̂)`, matched position by position.
    pub hat_transversal: Vec<usize>,
}

/// Computes `Ĝ'`, the matched transversals, and checks every derived group fact.
///
/// `embedding[i]` is the image in `Ĝ` of the `i`-th element of `N` (sorted order).
pub fn butterfly_group_data(g: &FiniteGroup, n: &Subgroup, g_prime: &Subgroup, ghat: &FiniteGroup, embedding: &[usize]) -> Result<ButterflyGroupData> {
    n.check_parent(g)?;
    g_prime.check_parent(g)?;
    if !n.is_normal_in(g) {
        return Err(Error::NotNormal("N is not normal in G".into()));
    }
    if embedding.len() != n.order() || embedding.iter().collect::<HashSet<_>>().len() != n.order() {
        return Err(Error::InvalidHomomorphism("embedding of N is not injective".into()));
    }
    for (i, &a) in n.elements().iter().enumerate() {
        for (j, &b) in n.elements().iter().enumerate() {
            let ab = n.position(g.mul(a, b)).unwrap();
            if embedding[ab] != ghat.mul(embedding[i], embedding[j]) {
                return Err(Error::InvalidHomomorphism("embedding of N is not multiplicative".into()));
            }
        }
    }
    let n_hat = Subgroup::from_elements(ghat, embedding.iter().copied())?;
    if !n_hat.is_normal_in(ghat) {
        return Err(Error::NotNormal("image of N is not normal in the second ambient group".into()));
    }

    let centralizer = centralizer_in_group(g, n)?;
    if !centralizer.is_subset_of(g_prime) {
        let bad = centralizer.elements().iter().find(|&&x| !g_prime.contains(x)).unwrap();
        return Err(Error::Hypothesis { index: 1, detail: format!("C_G(N) is not contained in G'; {} is missing", g.label(*bad)) });
    }
    let n_prime = g_prime.intersection(n);
    if n.order() * g_prime.order() / n_prime.order() != g.order() {
        return Err(Error::NotFactorized(format!("|N||G'|/|N ∩ G'| = {} but |G| = {}", n.order() * g_prime.order() / n_prime.order(), g.order())));
    }

    let eps = conjugation_map(g, n)?;
    // ε̂(ĝ) transported back to N's positions through the embedding.
    let hat_pos: HashMap<usize, usize> = embedding.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let eps_hat: Vec<Vec<usize>> = ghat.elements().map(|x| embedding.iter().map(|&y| hat_pos[&ghat.conj(x, y)]).collect()).collect();
    let image_g = eps.image_of(&g.elements().collect::<Vec<_>>());
    let image_hat: BTreeSet<Vec<usize>> = eps_hat.iter().cloned().collect();
    if image_g != image_hat {
        return Err(Error::Hypothesis {
            index: 4, detail: format!("conjugation images differ: |ε(G)| = {}, |ε̂(Ĝ)| = {}", image_g.len(), image_hat.len())
        });
    }
    let image_gp = eps.image_of(g_prime.elements());
    let ghat_prime = Subgroup::from_elements(ghat, ghat.elements().filter(|&x| image_gp.contains(&eps_hat[x])))?;

    let id: Vec<usize> = (0..n.order()).collect();
    let centralizer_hat = Subgroup::from_sorted(ghat.order(), ghat.elements().filter(|&x| eps_hat[x] == id).collect());
    if !centralizer_hat.is_subset_of(&ghat_prime) {
        return Err(Error::Inconsistent("C_Ĝ(N) is not contained in Ĝ'".into()));
    }
    let n_hat_prime = n_hat.intersection(&ghat_prime);
    if n.order() * ghat_prime.order() / n_hat_prime.order() != ghat.order() {
        return Err(Error::Inconsistent("Ĝ is not the product NĜ'".into()));
    }
    let n_prime_image: BTreeSet<usize> = n_prime.elements().iter().map(|&x| embedding[n.position(x).unwrap()]).collect();
    if n_prime_image != n_hat_prime.elements().iter().copied().collect() {
        return Err(Error::Inconsistent("N' does not correspond to N ∩ Ĝ'".into()));
    }

    let layer = product_subgroup(g, &n_prime, &centralizer)?;
    let mut covered = vec![false; g.order()];
    let mut transversal = Vec::new();
    for &x in g_prime.elements() {
        if covered[x] {
            continue;
        }
        transversal.push(x);
        for &k in layer.elements() {
            covered[g.mul(x, k)] = true;
        }
    }
    let mut hat_transversal = Vec::with_capacity(transversal.len());
    for &t in &transversal {
        let th = ghat_prime
            .elements()
            .iter()
            .copied()
            .find(|&x| eps_hat[x] == eps.images[t])
            .ok_or_else(|| Error::Inconsistent(format!("no element of Ĝ' induces the same automorphism as {}", g.label(t))))?;
        hat_transversal.push(th);
    }

    let data = ButterflyGroupData { n_prime, centralizer, n_hat, centralizer_hat, ghat_prime, transversal, hat_transversal };
    data.check_outer_isomorphism(g, n, ghat)?;
    Ok(data)
}

impl ButterflyGroupData {
    /// Checks that `t ↦ t̂` induces an isomorphism `G/NC_G(N) ≅ Ĝ/NC_Ĝ(N)` and that the
    /// transversals cover both quotients exactly once.
    pub fn check_outer_isomorphism(&self, g: &FiniteGroup, n: &Subgroup, ghat: &FiniteGroup) -> Result<()> {
        let k = product_subgroup(g, n, &self.centralizer)?;
        let khat = product_subgroup(ghat, &self.n_hat, &self.centralizer_hat)?;
        let qk = quotient(g, &k)?;
        let qkhat = quotient(ghat, &khat)?;
        let classes: Vec<usize> = self.transversal.iter().map(|&t| qk.projection[t]).collect();
        let hat_classes: Vec<usize> = self.hat_transversal.iter().map(|&t| qkhat.projection[t]).collect();
        let distinct = |v: &[usize]| v.iter().collect::<HashSet<_>>().len() == v.len();
        if classes.len() != qk.quotient.order() || !distinct(&classes) {
            return Err(Error::Inconsistent("T is not a transversal of NC_G(N) in G".into()));
        }
        if hat_classes.len() != qkhat.quotient.order() || !distinct(&hat_classes) {
            return Err(Error::Inconsistent("T̂ is not a transversal of NC_Ĝ(N) in Ĝ".into()));
        }
        let mut map = vec![0; qk.quotient.order()];
        for (&c, &h) in classes.iter().zip(&hat_classes) {
            map[c] = h;
        }
        for a in qk.quotient.elements() {
            for b in qk.quotient.elements() {
                if map[qk.quotient.mul(a, b)] != qkhat.quotient.mul(map[a], map[b]) {
                    return Err(Error::Inconsistent("t ↦ t̂ is not a homomorphism modulo the centralizer layers".into()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], 100).unwrap()
    }

    fn s3_x_c3() -> FiniteGroup {
        FiniteGroup::from_permutations(6, &[vec![1, 2, 0, 3, 4, 5], vec![1, 0, 2, 3, 4, 5], vec![0, 1, 2, 4, 5, 3]], 100).unwrap()
    }

    fn perm_index(g: &FiniteGroup, perm: &[usize]) -> usize {
        g.index_of(&cycle_notation(perm)).unwrap()
    }

    fn s3_factor(g: &FiniteGroup) -> Subgroup {
        Subgroup::generated(g, &[perm_index(g, &[1, 2, 0, 3, 4, 5]), perm_index(g, &[1, 0, 2, 3, 4, 5])])
    }

    fn c3_factor(g: &FiniteGroup) -> Subgroup {
        Subgroup::generated(g, &[perm_index(g, &[0, 1, 2, 4, 5, 3])])
    }

    /// Brute-force closure: multiply everything until nothing new appears.
    fn closure_order(degree: usize, gens: &[Vec<usize>]) -> usize {
        let mut set: HashSet<Vec<usize>> = HashSet::from([(0..degree).collect()]);
        loop {
            let before = set.len();
            let snapshot: Vec<_> = set.iter().cloned().collect();
            for a in &snapshot {
                for g in gens {
                    set.insert(a.iter().map(|&i| g[i]).collect());
                }
            }
            if set.len() == before {
                return before;
            }
        }
    }

    #[test]
    fn load_from_generators_matches_closure() {
        let s3 = s3();
        assert_eq!(s3.order(), closure_order(3, &[vec![1, 2, 0], vec![1, 0, 2]]));
        assert_eq!(s3.order(), 6);
        let c3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0]], 100).unwrap();
        assert_eq!(c3.order(), closure_order(3, &[vec![1, 2, 0]]));
        assert_eq!(c3.order(), 3);
        assert_eq!(s3.label(0), "()");
        s3.validate().unwrap();
    }

    #[test]
    fn trivial_table() {
        let g = load_group(&GroupSpec::Table { table: vec![vec![0]], labels: None }).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn rejects_bad_tables() {
        let not_latin = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(FiniteGroup::from_table(&not_latin, vec!["a".into(), "b".into()]), Err(Error::InvalidGroup(_))));
        // Latin square without associativity (a quasigroup with identity of order 5).
        let loop5 = vec![vec![0, 1, 2, 3, 4], vec![1, 0, 3, 4, 2], vec![2, 4, 0, 1, 3], vec![3, 2, 4, 0, 1], vec![4, 3, 1, 2, 0]];
        let labels = (0..5).map(|i| i.to_string()).collect();
        let err = FiniteGroup::from_table(&loop5, labels).unwrap_err();
        assert!(err.to_string().contains("associative"), "{err}");
    }

    #[test]
    fn order_bound_is_enforced() {
        let s5 = [vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]];
        assert!(matches!(FiniteGroup::from_permutations(5, &s5, 100), Err(Error::OrderBoundExceeded { bound: 100 })));
        assert_eq!(FiniteGroup::from_permutations(5, &s5, 120).unwrap().order(), 120);
    }

    #[test]
    fn table_reordering_puts_identity_first() {
        // C2 given with the identity second.
        let t = vec![vec![1, 0], vec![0, 1]];
        let g = FiniteGroup::from_table(&t, vec!["a".into(), "e".into()]).unwrap();
        assert_eq!(g.label(0), "e");
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn centralizers() {
        let s3 = s3();
        assert_eq!(group_center(&s3).elements(), &[0]);
        let g = s3_x_c3();
        let n = s3_factor(&g);
        let c = centralizer_in_group(&g, &n).unwrap();
        assert_eq!(c, c3_factor(&g));
        assert_eq!(centralizer_in_group(&g, &Subgroup::trivial(&g)).unwrap().order(), 18);
    }

    #[test]
    fn quotients() {
        let s3 = s3();
        let c3 = Subgroup::generated(&s3, &[s3.index_of("(0 1 2)").unwrap()]);
        let q = quotient(&s3, &c3).unwrap();
        assert_eq!(q.quotient.order(), 2);
        assert_eq!(quotient(&s3, &Subgroup::whole(&s3)).unwrap().quotient.order(), 1);
        let g = s3_x_c3();
        let q = quotient(&g, &s3_factor(&g)).unwrap();
        assert_eq!(q.quotient.order(), 3);
        assert!(q.quotient.is_abelian());
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(q.projection[g.mul(a, b)], q.quotient.mul(q.projection[a], q.projection[b]));
            }
        }
        let c2 = Subgroup::generated(&s3, &[s3.index_of("(0 1)").unwrap()]);
        assert!(matches!(quotient(&s3, &c2), Err(Error::NotNormal(_))));
    }

    #[test]
    fn conjugation_images_and_kernel() {
        let c3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0]], 10).unwrap();
        let eps = conjugation_map(&c3, &Subgroup::whole(&c3)).unwrap();
        assert_eq!(eps.image_of(&[0, 1, 2]).len(), 1);

        let s3 = s3();
        let n = Subgroup::generated(&s3, &[s3.index_of("(0 1 2)").unwrap()]);
        let eps = conjugation_map(&s3, &n).unwrap();
        assert_eq!(eps.image_of(&s3.elements().collect::<Vec<_>>()).len(), 2);
        assert_eq!(eps.kernel, centralizer_in_group(&s3, &n).unwrap());

        let g = s3_x_c3();
        let n = s3_factor(&g);
        let eps = conjugation_map(&g, &n).unwrap();
        assert_eq!(eps.image_of(&g.elements().collect::<Vec<_>>()).len(), 6);
        assert_eq!(eps.kernel, centralizer_in_group(&g, &n).unwrap());
    }

    #[test]
    fn butterfly_data_identical_ambient() {
        let g = s3_x_c3();
        let n = s3_factor(&g);
        let gp = c3_factor(&g);
        let data = butterfly_group_data(&g, &n, &gp, &g, n.elements()).unwrap();
        assert_eq!(data.ghat_prime, gp);
        assert_eq!(data.transversal, data.hat_transversal);
    }

    #[test]
    fn butterfly_data_to_s3() {
        let g = s3_x_c3();
        let n = s3_factor(&g);
        let gp = c3_factor(&g);
        let ghat = FiniteGroup::from_permutations(6, &[vec![1, 2, 0, 3, 4, 5], vec![1, 0, 2, 3, 4, 5]], 100).unwrap();
        let emb: Vec<usize> = n.elements().iter().map(|&x| ghat.index_of(g.label(x)).unwrap()).collect();
        let data = butterfly_group_data(&g, &n, &gp, &ghat, &emb).unwrap();
        assert_eq!(data.ghat_prime.order(), 1);
        assert_eq!(data.transversal.len(), 1);
    }

    #[test]
    fn butterfly_data_to_s3_x_c2() {
        let g = s3_x_c3();
        let n = s3_factor(&g);
        let gp = c3_factor(&g);
        let ghat = FiniteGroup::from_permutations(5, &[vec![1, 2, 0, 3, 4], vec![1, 0, 2, 3, 4], vec![0, 1, 2, 4, 3]], 100).unwrap();
        let emb: Vec<usize> = n
            .elements()
            .iter()
            .map(|&x| {
                let lbl = g.label(x);
                ghat.index_of(lbl).unwrap()
            })
            .collect();
        let data = butterfly_group_data(&g, &n, &gp, &ghat, &emb).unwrap();
        assert_eq!(data.ghat_prime.order(), 2);
        assert_eq!(data.ghat_prime.elements(), &[0, ghat.index_of("(3 4)").unwrap()]);
        assert_eq!(data.centralizer_hat, data.ghat_prime);
    }

    #[test]
    fn butterfly_data_reports_each_failure() {
        let g = s3_x_c3();
        let n = s3_factor(&g);
        // C_G(N) = C3 is not inside the trivial subgroup.
        let err = butterfly_group_data(&g, &n, &Subgroup::trivial(&g), &g, n.elements()).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { index: 1, .. }));
        // Ĝ = C3 realizes no outer... it realizes only the trivial automorphism of N.
        let c3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0]], 10).unwrap();
        let s3 = s3();
        let whole = Subgroup::whole(&s3);
        let bad = butterfly_group_data(&s3, &whole, &whole, &c3, &[0, 1, 2, 0, 1, 2]);
        assert!(matches!(bad, Err(Error::InvalidHomomorphism(_))));
        // Image mismatch: N = C3 in S3, Ĝ = C3 acting trivially on itself.
        let n3 = Subgroup::generated(&s3, &[s3.index_of("(0 1 2)").unwrap()]);
        let emb: Vec<usize> = n3.elements().iter().map(|&x| c3.index_of(s3.label(x)).unwrap()).collect();
        let err = butterfly_group_data(&s3, &n3, &Subgroup::whole(&s3), &c3, &emb).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { index: 4, .. }), "{err}");
        // Factorization: G' = C2 in S3 with N = C3... G = G'N holds; use N = 1 instead.
        let err = butterfly_group_data(&s3, &Subgroup::trivial(&s3), &n3, &s3, &[0]).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { index: 1, .. } | Error::NotFactorized(_)), "{err}");
    }

    #[test]
    fn homomorphism_extension() {
        let c3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0]], 10).unwrap();
        let s3 = s3();
        let r = s3.index_of("(0 1 2)").unwrap();
        let map = extend_homomorphism(&c3, &s3, &[(c3.index_of("(0 1 2)").unwrap(), r)]).unwrap();
        assert_eq!(map.iter().collect::<HashSet<_>>().len(), 3);
        let t = s3.index_of("(0 1)").unwrap();
        assert!(extend_homomorphism(&c3, &s3, &[(1, t)]).is_err());
    }
}
