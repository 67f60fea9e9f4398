use std::collections::BTreeSet;

use proptest::prelude::*;

use gmorita_core::algebra::{block_cut, group_algebra, primitive_central_idempotents};
use gmorita_core::bimodule::Bimodule;
use gmorita_core::grading::grade_block_extension;
use gmorita_core::morita::build_morita_context;
use gmorita_core::{FiniteGroup, PrimeField, Subgroup};

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn cyclic(n: usize) -> FiniteGroup {
    FiniteGroup::from_permutations(n, &[(0..n).map(|i| (i + 1) % n).collect()], 1000).unwrap()
}

fn dihedral(n: usize) -> FiniteGroup {
    let rot = (0..n).map(|i| (i + 1) % n).collect();
    let refl = (0..n).map(|i| (n - i) % n).collect();
    FiniteGroup::from_permutations(n, &[rot, refl], 1000).unwrap()
}

fn small_groups() -> Vec<FiniteGroup> {
    vec![
        cyclic(1),
        cyclic(4),
        cyclic(6),
        dihedral(4),
        dihedral(5),
        FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], 100).unwrap(),
        FiniteGroup::from_permutations(4, &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]], 100).unwrap(),
    ]
}

/// Orbits of `x -> p·x` on `Z/m`.
fn cyclotomic_cosets(m: usize, p: usize) -> usize {
    let mut seen = vec![false; m];
    let mut count = 0;
    for start in 0..m {
        if !seen[start] {
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = x * p % m;
            }
        }
    }
    count
}

fn conjugacy_classes(g: &FiniteGroup) -> usize {
    g.elements().map(|x| g.elements().map(|y| g.conj(y, x)).collect::<BTreeSet<_>>()).collect::<BTreeSet<_>>().len()
}

proptest! {
    #[test]
    fn field_axioms(pi in 0usize..5, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000) {
        let f = PrimeField::new(PRIMES[pi]).unwrap();
        let (a, b, c) = (f.reduce(a), f.reduce(b), f.reduce(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        prop_assert_eq!(f.pow(a, PRIMES[pi]), a);
    }

    #[test]
    fn cyclic_blocks_match_cyclotomic_cosets(n in 1usize..13, pi in 0usize..4) {
        let p = PRIMES[pi] as usize;
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        let kg = group_algebra(&cyclic(n), PrimeField::new(p as u64).unwrap());
        let dec = primitive_central_idempotents(&kg);
        prop_assert_eq!(dec.idempotents.len(), cyclotomic_cosets(m, p));
        prop_assert_eq!(dec.block_dims.iter().sum::<usize>(), n);
        prop_assert!(dec.block_dims.iter().all(|d| d % (n / m) == 0));
    }

    #[test]
    fn block_idempotents_partition_unity(gi in 0usize..7, pi in 0usize..4) {
        let g = &small_groups()[gi];
        let f = PrimeField::new(PRIMES[pi]).unwrap();
        let kg = group_algebra(g, f);
        let dec = primitive_central_idempotents(&kg);
        prop_assert_eq!(dec.center_dim, conjugacy_classes(g));
        let mut sum = kg.zero();
        for (i, e) in dec.idempotents.iter().enumerate() {
            prop_assert_eq!(&kg.mul(e, e), e);
            prop_assert!(kg.is_central(e));
            for h in &dec.idempotents[i + 1..] {
                prop_assert!(kg.mul(e, h).iter().all(|&x| x == 0));
            }
            sum = kg.add(&sum, e);
        }
        prop_assert_eq!(sum.as_slice(), kg.unit());
    }

    #[test]
    fn regular_block_bimodule_is_a_morita_context(gi in 0usize..7, pi in 0usize..3, bi in 0usize..8) {
        let g = &small_groups()[gi];
        let kg = group_algebra(g, PrimeField::new(PRIMES[pi]).unwrap());
        let dec = primitive_central_idempotents(&kg);
        let e = &dec.idempotents[bi % dec.idempotents.len()];
        let b = block_cut(&kg, e).unwrap();
        let ctx = build_morita_context(&Bimodule::regular(b.algebra.clone())).unwrap();
        prop_assert!(ctx.validate().is_ok());
        prop_assert_eq!(ctx.mstar.dim(), b.dim());
    }

    #[test]
    fn block_extension_over_the_whole_group_is_strongly_graded(pi in 0usize..3, bi in 0usize..4, gi in 0usize..2) {
        // (G, N): (S4, A4) or (D5, C5).
        let (g, gens): (FiniteGroup, Vec<&str>) = match gi {
            0 => (small_groups()[6].clone(), vec!["(0 1 2)", "(1 2 3)"]),
            _ => (dihedral(5), vec!["(0 1 2 3 4)"]),
        };
        let f = PrimeField::new(PRIMES[pi]).unwrap();
        let n = Subgroup::generated(&g, &gens.iter().map(|l| g.index_of(l).unwrap()).collect::<Vec<_>>());
        prop_assert!(n.is_normal_in(&g));
        let ng = gmorita_core::groups::subgroup_as_group(&g, &n);
        let kn = group_algebra(&ng, f);
        let dec = primitive_central_idempotents(&kn);
        let stable: Vec<_> = dec
            .idempotents
            .iter()
            .filter(|e| gmorita_core::algebra::is_invariant_block(&g, &n, f, e).unwrap())
            .collect();
        prop_assume!(!stable.is_empty());
        let e = stable[bi % stable.len()];
        let a = grade_block_extension(&g, &n, f, e).unwrap();
        prop_assert!(a.graded.is_strongly_graded());
        prop_assert_eq!(a.graded.dim(), a.quotient.quotient.order() * a.dim_block());
        prop_assert_eq!(a.quotient.quotient.order(), g.order() / n.order());
    }
}
