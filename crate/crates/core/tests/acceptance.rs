//! The acceptance battery: one line per criterion, then a single assertion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use gmorita_core::algebra::{block_cut, group_algebra, primitive_central_idempotents};
use gmorita_core::butterfly::{butterfly_transport, extend_to_centralizer_layer};
use gmorita_core::graded_morita::{
    graded_centralizer, graded_end_algebra, is_graded_homomorphism, theta, theta_matrix, verify_diagram, verify_graded_morita, witness_from_delta,
};
use gmorita_core::groups::{centralizer_in_group, product_subgroup};
use gmorita_core::linalg::unit_vector;
use gmorita_core::morita::{build_morita_context, find_delta_extension, MoritaContext};
use gmorita_core::{Algebra, Bimodule, Error, FiniteGroup, GradedAlgebra, Matrix, PrimeField, Subgroup, Subspace, Vector};

fn run(results: &mut Vec<bool>, id: usize, name: &str, limit: Duration, check: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check));
    let elapsed = start.elapsed();
    let ok = outcome.is_ok() && elapsed < limit;
    let detail = match (&outcome, elapsed < limit) {
        (Err(_), _) => "assertion failed".to_string(),
        (Ok(()), false) => format!("over the {} ms limit", limit.as_millis()),
        (Ok(()), true) => String::new(),
    };
    println!("criterion {id} [{}] {name} ({} ms) {detail}", if ok { "PASS" } else { "FAIL" }, elapsed.as_millis());
    results.push(ok);
}

fn kg_mul(g: &FiniteGroup, f: PrimeField, x: &[u64], y: &[u64]) -> Vector {
    let mut out = vec![0; g.order()];
    for a in g.elements() {
        for b in g.elements() {
            let ab = g.mul(a, b);
            out[ab] = f.add(out[ab], f.mul(x[a], y[b]));
        }
    }
    out
}

/// All subsets of the class sums, the idempotents among them, and the primitive ones.
fn oracle_blocks(g: &FiniteGroup, f: PrimeField) -> Vec<Vector> {
    let mut seen = vec![false; g.order()];
    let mut class_sums = Vec::new();
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        let mut sum = vec![0; g.order()];
        for y in g.elements() {
            let c = g.conj(y, x);
            if !seen[c] {
                seen[c] = true;
                sum[c] = 1;
            }
        }
        class_sums.push(sum);
    }
    assert_eq!(f.modulus(), 2);
    let k = class_sums.len();
    let mut central = Vec::new();
    for mask in 0..(1u32 << k) {
        let mut z = vec![0; g.order()];
        for (i, s) in class_sums.iter().enumerate() {
            if mask >> i & 1 == 1 {
                z = z.iter().zip(s).map(|(a, b)| f.add(*a, *b)).collect();
            }
        }
        central.push(z);
    }
    assert_eq!(central.len(), 8);
    let zero = vec![0; g.order()];
    let idempotents: Vec<Vector> = central.into_iter().filter(|z| *z != zero && kg_mul(g, f, z, z) == *z).collect();
    idempotents.iter().filter(|e| !idempotents.iter().any(|h| h != *e && kg_mul(g, f, h, e) == *h)).cloned().collect()
}

fn criterion_1() {
    let f = f2();
    let g = s3();
    let kg = group_algebra(&g, f);
    let blocks = primitive_central_idempotents(&kg);
    let mut expected = oracle_blocks(&g, f);
    let mut got = blocks.idempotents.clone();
    expected.sort();
    got.sort();
    assert_eq!(got, expected);
    let mut dims: Vec<usize> =
        got.iter().map(|e| Subspace::spanned_by(f, g.order(), g.elements().map(|x| kg_mul(&g, f, e, &unit_vector(g.order(), x)))).dim()).collect();
    dims.sort();
    assert_eq!(dims, vec![2, 4]);
    let mut reported = blocks.block_dims.clone();
    reported.sort();
    assert_eq!(reported, dims);
}

fn component_span(a: &GradedAlgebra, d: usize) -> Subspace {
    Subspace::spanned_by(a.field(), a.dim(), a.component(d).iter().map(|&i| a.algebra.basis_element(i)))
}

fn criterion_2() {
    let s = fixture();
    let a = &s.a.graded;
    let f = a.field();
    assert_eq!(a.dim(), 12);
    assert_eq!(a.dim(), a.grading.order() * a.one_component.dim());
    for d in a.grading.elements() {
        let comp = a.component(d);
        assert_eq!(comp.len(), 4);
        let mut found = false;
        for mask in 1u32..(1 << comp.len()) {
            let mut x = vec![0; a.dim()];
            for (k, &i) in comp.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    x[i] = 1;
                }
            }
            if a.algebra.left_mult_matrix(&x).is_invertible() {
                found = true;
                break;
            }
        }
        assert!(found, "no invertible element in degree {d}");
    }
    let mut pairs = 0;
    for g in a.grading.elements() {
        for h in a.grading.elements() {
            let products = Subspace::spanned_by(
                f,
                a.dim(),
                a.component(g)
                    .iter()
                    .flat_map(|&i| a.component(h).iter().map(move |&j| (i, j)))
                    .map(|(i, j)| a.algebra.mul(&a.algebra.basis_element(i), &a.algebra.basis_element(j))),
            );
            let target = component_span(a, a.grading.mul(g, h));
            assert_eq!(products.dim(), target.dim());
            assert!(products.basis().iter().all(|v| target.contains(v)));
            pairs += 1;
        }
    }
    assert_eq!(pairs, 9);
}

fn check_context(ctx: &MoritaContext) {
    let m = &ctx.m;
    let ms = &ctx.mstar.bimodule;
    let f = m.field();
    ctx.validate().unwrap();
    for x in 0..m.dim() {
        for fs in 0..ms.dim() {
            for y in 0..m.dim() {
                let (mx, my, mf) = (unit_vector(m.dim(), x), unit_vector(m.dim(), y), unit_vector(ms.dim(), fs));
                // ψ(m ⊗ m*) n = m φ(m* ⊗ n)
                assert_eq!(m.act_left(&ctx.psi_of(&mx, &mf), &my), m.act_right(&mx, &ctx.phi_of(&mf, &my)));
            }
            for gs in 0..ms.dim() {
                let (mx, mf, mg) = (unit_vector(m.dim(), x), unit_vector(ms.dim(), fs), unit_vector(ms.dim(), gs));
                // φ(m* ⊗ m) n* = m* ψ(m ⊗ n*)
                assert_eq!(ms.act_left(&ctx.phi_of(&mf, &mx), &mg), ms.act_right(&mf, &ctx.psi_of(&mx, &mg)));
            }
        }
    }
    let mut sum = vec![0; m.right.dim()];
    for (s, x) in &ctx.dual_basis_j {
        sum = sum.iter().zip(ctx.phi_of(s, x)).map(|(a, b)| f.add(*a, b)).collect();
    }
    assert_eq!(sum, m.right.unit());
    let mut sum = vec![0; m.left.dim()];
    for (x, s) in &ctx.dual_basis_i {
        sum = sum.iter().zip(ctx.psi_of(x, s)).map(|(a, b)| f.add(*a, b)).collect();
    }
    assert_eq!(sum, m.left.unit());
}

fn criterion_3() {
    let s = fixture();
    check_context(&build_morita_context(&Bimodule::regular(s.a.graded.one_component.clone())).unwrap());
    let ctx = build_morita_context(&s.m).unwrap();
    assert_eq!(ctx.m.right.dim(), 1);
    check_context(&ctx);
}

fn criterion_4() {
    let s = fixture();
    let a = &s.a.graded;
    for u in [s.m.as_left_module(), regular_left(&s)] {
        let end = graded_end_algebra(a, &u).unwrap();
        let cent = graded_centralizer(a).unwrap();
        let t = theta_matrix(a, &cent, &end).unwrap();
        assert!(is_graded_homomorphism(&t, &cent.graded, &end.graded));
        assert_eq!(t.mul_vec(cent.graded.algebra.unit()), end.graded.algebra.unit());
        // E(U) multiplies in the opposite order: θ(cc′) = θ(c′) ∘ θ(c) as maps.
        for (i, c) in cent.basis.iter().enumerate() {
            let tc = end.map_of(&theta(a, &end, c).unwrap());
            let d = cent.graded.degree[i];
            assert!(!end.graded.component(d).is_empty());
            let tv = theta(a, &end, c).unwrap();
            assert!(tv.iter().enumerate().all(|(k, &x)| x == 0 || end.graded.degree[k] == d));
            for c2 in &cent.basis {
                let tc2 = end.map_of(&theta(a, &end, c2).unwrap());
                let prod = end.map_of(&theta(a, &end, &a.algebra.mul(c, c2)).unwrap());
                assert_eq!(prod, tc2.mul(&tc));
            }
        }
    }
}

fn criterion_5() {
    let s = fixture();
    let u = s.m.as_left_module();
    let report = verify_diagram(&s.delta, &u).unwrap();
    assert_eq!(report.dim_centralizer, 3);
    assert!(report.commutes);
    assert!(report.residuals.iter().all(|&r| r == 0));
    let mut twisted = s.delta.clone();
    let ap = twisted.delta.ap.clone();
    let lambda: Vec<Vector> = ap.grading.elements().map(|d| if d == 0 { ap.algebra.unit().to_vec() } else { ap.unit_of(1).to_vec() }).collect();
    twisted.witness = twisted.witness.twisted(lambda).unwrap();
    let bad = verify_diagram(&twisted, &u).unwrap();
    assert!(!bad.commutes);
    assert!(bad.residuals.iter().any(|&r| r > 0));
}

fn hypothesis_three_fixture() -> Result<(), Error> {
    let f = PrimeField::new(3).unwrap();
    let g = FiniteGroup::from_permutations(2, &[vec![1, 0]], 10).unwrap();
    let whole = Subgroup::whole(&g);
    let kg = group_algebra(&g, f);
    let z = g.index_of("(0 1)").unwrap();
    let blocks = primitive_central_idempotents(&kg).idempotents;
    let minus = blocks.iter().find(|e| e[z] == f.neg(e[0])).unwrap().clone();
    let plus = blocks.iter().find(|e| e[z] == e[0]).unwrap().clone();
    let b = Arc::new(block_cut(&kg, &minus).unwrap().algebra.as_ref().clone());
    let bp = Arc::new(block_cut(&kg, &plus).unwrap().algebra.as_ref().clone());
    let scalar = |a: &Algebra| Matrix::from_rows(f, 1, 1, &[vec![f.inv(a.unit()[0])]]);
    let m = Bimodule::new(b.clone(), bp.clone(), 1, vec![scalar(&b)], vec![scalar(&bp)]).unwrap();
    extend_to_centralizer_layer(&g, &whole, &whole, f, &minus, &plus, &m, 0).map(|_| ())
}

fn criterion_6() {
    let s = fixture();
    let layer = extend_to_centralizer_layer(&s.group, &s.normal, &s.g_prime, s.field, &s.e, &s.e_prime, &s.m, 0).unwrap();
    assert_eq!(layer.c.graded.grading.order(), 3);
    assert_eq!(layer.mhat.bimodule.dim(), 6);
    assert!(layer.mhat.is_strongly_graded(&layer.c.graded));
    let again =
        verify_graded_morita(Arc::new(layer.c.graded.clone()), Arc::new(layer.c_prime.graded.clone()), &layer.mhat, &s.m, &layer.one_embedding, None, 1);
    assert!(again.is_ok());
    match hypothesis_three_fixture() {
        Err(Error::Hypothesis { index: 3, detail }) => assert!(detail.contains("(0 1)")),
        other => panic!("expected a hypothesis (3) failure, got {other:?}"),
    }
}

/// `C_X(N)` by brute force, for `N` given as a list of elements of `X`.
fn brute_centralizer(x: &FiniteGroup, n: &[usize]) -> Vec<usize> {
    x.elements().filter(|&c| n.iter().all(|&y| x.mul(c, y) == x.mul(y, c))).collect()
}

fn criterion_7() {
    let s = fixture();
    let g = &s.group;
    let ng = s.normal.elements().to_vec();
    let cg = brute_centralizer(g, &ng);
    let k = product_subgroup(g, &s.normal, &centralizer_in_group(g, &s.normal).unwrap()).unwrap();
    assert_eq!(k.order(), ng.len() * cg.len() / cg.iter().filter(|c| ng.contains(c)).count());
    for (ghat, degree) in [(s3(), 1), (s3_x_c2(), 2)] {
        let emb = embedding_by_label(&s, &ghat);
        let t = butterfly_transport(&s, &ghat, &emb).unwrap();
        let data = &t.group_data;
        assert_eq!(t.ahat.graded.grading.order(), degree);
        assert_eq!(t.mhat().bimodule.dim(), degree * 2);
        let chat = brute_centralizer(&ghat, &emb);
        assert!(chat.iter().all(|&c| data.ghat_prime.contains(c)));
        let nhat_gp: Vec<usize> = emb.iter().copied().filter(|&x| data.ghat_prime.contains(x)).collect();
        assert_eq!(ghat.order() * nhat_gp.len(), emb.len() * data.ghat_prime.order());
        let mut nprime_image: Vec<usize> = s.n_prime().elements().iter().map(|&x| emb[s.normal.position(x).unwrap()]).collect();
        nprime_image.sort();
        let mut nhat_gp = nhat_gp;
        nhat_gp.sort();
        assert_eq!(nprime_image, nhat_gp);
        let khat_order = emb.len() * chat.len() / chat.iter().filter(|c| emb.contains(c)).count();
        assert_eq!(g.order() / k.order(), ghat.order() / khat_order);
        data.check_outer_isomorphism(g, &s.normal, &ghat).unwrap();
        let w = t.hat_witness();
        let again = verify_graded_morita(w.a.clone(), w.ap.clone(), t.mhat(), &t.m, &t.hat.mtilde.one_embedding, None, 3);
        assert!(again.is_ok());
    }
}

fn criterion_8() {
    let s = fixture();
    let f = s.field;
    // Trivial grading.
    let trivial = |a: &GradedAlgebra| a.truncate(&Subgroup::trivial(&a.grading)).unwrap().0;
    let a1 = Arc::new(trivial(&s.a.graded));
    let ap1 = Arc::new(trivial(&s.ap.graded));
    let delta = find_delta_extension(a1.clone(), ap1.clone(), &s.m, 0).unwrap().structure().unwrap().clone();
    assert_eq!(delta.unit_actions, vec![Matrix::identity(f, 2)]);
    let w = witness_from_delta(&delta, 0).unwrap();
    let (mdim, bdim, bpdim) = (s.m.dim(), a1.dim(), ap1.dim());
    // ε(m ⊗ b′) = 1 ⊗ m b′
    for x in 0..mdim {
        for y in 0..bpdim {
            let src = w.mtilde_right.tensor.pure(&unit_vector(mdim, x), &ap1.algebra.basis_element(y));
            let dst = w.mtilde.tensor.pure(a1.algebra.unit(), &s.m.act_right(&unit_vector(mdim, x), &ap1.algebra.basis_element(y)));
            assert_eq!(w.epsilon.mul_vec(&src), dst);
        }
    }
    // β(b′ ⊗ f) = b′ f ⊗ 1
    let ms = &w.dual_delta.m;
    for x in 0..bpdim {
        for y in 0..ms.dim() {
            let src = w.mstar_left.tensor.pure(&ap1.algebra.basis_element(x), &unit_vector(ms.dim(), y));
            let dst = w.mstar_right.tensor.pure(&ms.act_left(&ap1.algebra.basis_element(x), &unit_vector(ms.dim(), y)), a1.algebra.unit());
            assert_eq!(w.beta.mul_vec(&src), dst);
        }
    }
    // θ(c)(1 ⊗ u) = 1 ⊗ c u, and φ₂(c) is the central element acting on M as c does.
    let u = s.m.as_left_module();
    let end = graded_end_algebra(&a1, &u).unwrap();
    let cent = graded_centralizer(&a1).unwrap();
    for c in &cent.basis {
        let map = end.map_of(&theta(&a1, &end, c).unwrap());
        for k in 0..mdim {
            let src = end.induced.pure(a1.algebra.unit(), &unit_vector(mdim, k));
            let dst = end.induced.pure(a1.algebra.unit(), &u.act_left(c, &unit_vector(mdim, k)));
            assert_eq!(map.mul_vec(&src), dst);
        }
        let z = w.witness.phi2(c);
        assert_eq!(s.m.left_matrix(c), s.m.right_matrix(&z));
    }
    let report = verify_diagram(&w, &u).unwrap();
    assert!(report.commutes && report.phi1_isomorphism && report.phi2_isomorphism);
    assert_eq!(report.dim_end, 1);
    assert_eq!(bdim, 4);

    // Ĝ = G reproduces the input witness.
    let t = butterfly_transport(&s, &s.group, s.normal.elements()).unwrap();
    assert_eq!(t.delta_hat.unit_actions, s.delta.delta.unit_actions);
    assert_eq!(t.mhat().degree, s.delta.mtilde.graded.degree);
    assert_eq!(t.mhat().bimodule.left_actions(), s.delta.mtilde.graded.bimodule.left_actions());
    assert_eq!(t.mhat().bimodule.right_actions(), s.delta.mtilde.graded.bimodule.right_actions());
    assert_eq!(t.hat_witness().context.phi, s.delta.witness.context.phi);
    assert_eq!(t.hat_witness().context.psi, s.delta.witness.context.psi);
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    let second = Duration::from_secs(1);
    run(&mut results, 1, "block decomposition of F2[S3]", second, criterion_1);
    run(&mut results, 2, "crossed product b·F2[S3×C3]", second, criterion_2);
    run(&mut results, 3, "Morita context identities", second, criterion_3);
    run(&mut results, 4, "θ is a graded homomorphism", second, criterion_4);
    run(&mut results, 5, "diagram commutes; twisted witness fails", Duration::from_secs(5), criterion_5);
    run(&mut results, 6, "centralizer-layer extension", Duration::from_secs(5), criterion_6);
    run(&mut results, 7, "butterfly transport to S3 and S3×C2", Duration::from_secs(10), criterion_7);
    run(&mut results, 8, "degenerate cases", second, criterion_8);
    let passed = results.iter().filter(|&&x| x).count();
    println!("{passed}/{} criteria passed", results.len());
    assert!(results.iter().all(|&x| x));
}
