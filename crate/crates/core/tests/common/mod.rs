#![allow(dead_code)]

use gmorita_core::bimodule::block_bimodule;
use gmorita_core::butterfly::block_of;
use gmorita_core::grading::{grade_block_extension, grade_block_extension_over};
use gmorita_core::{Bimodule, ButterflyScenario, FiniteGroup, Matrix, PrimeField, Subgroup};

pub fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

pub fn s3() -> FiniteGroup {
    FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], 100).unwrap()
}

pub fn s3_x_c3() -> FiniteGroup {
    FiniteGroup::from_permutations(6, &[vec![1, 2, 0, 3, 4, 5], vec![1, 0, 2, 3, 4, 5], vec![0, 1, 2, 4, 5, 3]], 100).unwrap()
}

pub fn s3_x_c2() -> FiniteGroup {
    FiniteGroup::from_permutations(5, &[vec![1, 2, 0, 3, 4], vec![1, 0, 2, 3, 4], vec![0, 1, 2, 4, 3]], 100).unwrap()
}

pub fn el(g: &FiniteGroup, label: &str) -> usize {
    g.index_of(label).unwrap_or_else(|| panic!("no element {label}"))
}

/// The 2-dimensional simple module of S3 over F2, by generator matrices.
pub fn simple_generators(g: &FiniteGroup) -> Vec<(usize, Matrix)> {
    let f = f2();
    vec![(el(g, "(0 1 2)"), Matrix::from_rows(f, 2, 2, &[vec![0, 1], vec![1, 1]])), (el(g, "(0 1)"), Matrix::from_rows(f, 2, 2, &[vec![0, 1], vec![1, 0]]))]
}

/// `G = S3×C3`, `N = S3`, `G′ = C3`, `b` the defect-zero block, `b′ = 1`,
/// `M` the 2-dimensional simple module.
pub fn fixture() -> ButterflyScenario {
    let g = s3_x_c3();
    let n = Subgroup::generated(&g, &[el(&g, "(0 1 2)"), el(&g, "(0 1)")]);
    let gp = Subgroup::generated(&g, &[el(&g, "(3 4 5)")]);
    let (e, _) = block_of(&g, &n, f2(), 1).unwrap();
    let a = grade_block_extension(&g, &n, f2(), &e).unwrap();
    let ap = grade_block_extension_over(&g, &n, &gp, f2(), &[1]).unwrap();
    let m = block_bimodule(&a, &ap, 2, &simple_generators(&g), &[]).unwrap();
    ButterflyScenario::new(g, n, gp, f2(), e, vec![1], m.left_actions().to_vec(), m.right_actions().to_vec(), None, 0).unwrap()
}

/// `B` as a left module.
pub fn regular_left(s: &ButterflyScenario) -> Bimodule {
    Bimodule::regular_left(s.a.graded.one_component.clone())
}

/// `embedding[i]` = element of `ghat` with the same label as the `i`-th element of `N`.
pub fn embedding_by_label(s: &ButterflyScenario, ghat: &FiniteGroup) -> Vec<usize> {
    s.normal.elements().iter().map(|&x| el(ghat, s.group.label(x))).collect()
}
