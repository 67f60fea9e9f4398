//! Workloads shared by the benchmarks.

use gmorita_core::bimodule::block_bimodule;
use gmorita_core::butterfly::block_of;
use gmorita_core::grading::{grade_block_extension, grade_block_extension_over};
use gmorita_core::{ButterflyScenario, FiniteGroup, Matrix, PrimeField, Subgroup};

pub fn symmetric(n: usize) -> FiniteGroup {
    let cycle = (0..n).map(|i| (i + 1) % n).collect();
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    FiniteGroup::from_permutations(n, &[cycle, swap], 1000).unwrap()
}

pub fn s3_x_c3() -> FiniteGroup {
    FiniteGroup::from_permutations(6, &[vec![1, 2, 0, 3, 4, 5], vec![1, 0, 2, 3, 4, 5], vec![0, 1, 2, 4, 5, 3]], 100).unwrap()
}

pub fn s3_x_c2() -> FiniteGroup {
    FiniteGroup::from_permutations(5, &[vec![1, 2, 0, 3, 4], vec![1, 0, 2, 3, 4], vec![0, 1, 2, 4, 3]], 100).unwrap()
}

/// `S3×C3 ⊵ S3` over F2 with the 2-dimensional simple module and `b′ = 1`.
pub fn fixture() -> ButterflyScenario {
    let f = PrimeField::new(2).unwrap();
    let g = s3_x_c3();
    let el = |l: &str| g.index_of(l).unwrap();
    let n = Subgroup::generated(&g, &[el("(0 1 2)"), el("(0 1)")]);
    let gp = Subgroup::generated(&g, &[el("(3 4 5)")]);
    let (e, _) = block_of(&g, &n, f, 1).unwrap();
    let a = grade_block_extension(&g, &n, f, &e).unwrap();
    let ap = grade_block_extension_over(&g, &n, &gp, f, &[1]).unwrap();
    let gens = [(el("(0 1 2)"), Matrix::from_rows(f, 2, 2, &[vec![0, 1], vec![1, 1]])), (el("(0 1)"), Matrix::from_rows(f, 2, 2, &[vec![0, 1], vec![1, 0]]))];
    let m = block_bimodule(&a, &ap, 2, &gens, &[]).unwrap();
    ButterflyScenario::new(g, n, gp, f, e, vec![1], m.left_actions().to_vec(), m.right_actions().to_vec(), None, 0).unwrap()
}

/// `N` sent to the elements of `ghat` with the same labels.
pub fn embedding_by_label(s: &ButterflyScenario, ghat: &FiniteGroup) -> Vec<usize> {
    s.normal.elements().iter().map(|&x| ghat.index_of(s.group.label(x)).unwrap()).collect()
}
