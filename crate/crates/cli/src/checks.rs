//! The commands behind `gmorita blocks` and `gmorita verify`.

use serde::Serialize;
use serde_json::{json, Value};

use gmorita_core::algebra::{center, group_algebra, primitive_central_idempotents};
use gmorita_core::bimodule::{hom_space, Side};
use gmorita_core::butterfly::{butterfly_transport, extend_to_centralizer_layer};
use gmorita_core::graded_morita::{graded_centralizer, graded_end_algebra, theta, verify_diagram};
use gmorita_core::linalg::{unit_vector, vec_add};
use gmorita_core::morita::build_morita_context;
use gmorita_core::{Algebra, ButterflyScenario, DeltaWitness, FiniteGroup, Matrix, MoritaContext, PrimeField, Vector};

use crate::scenario::Resolved;
use crate::CliError;

/// Enumeration bound for brute-force oracles.
const ORACLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Serialize)]
pub struct Invariant {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: &'static str,
    pub invariants: Vec<Invariant>,
    pub data: Value,
}

impl CheckReport {
    fn new(check: &str, invariants: Vec<Invariant>, data: Value) -> Self {
        let status = if invariants.iter().all(|i| i.pass) { "pass" } else { "fail" };
        Self { check: check.to_string(), status, invariants, data }
    }
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

fn inv(name: &str, pass: bool) -> Invariant {
    Invariant { name: name.to_string(), pass, detail: None }
}

fn inv_detail(name: &str, pass: bool, detail: impl Into<String>) -> Invariant {
    Invariant { name: name.to_string(), pass, detail: Some(detail.into()) }
}

fn rows(m: &Matrix) -> Vec<Vec<u64>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn labelled(labels: &[String], v: &[u64]) -> Value {
    let map: serde_json::Map<String, Value> = v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (labels[i].clone(), json!(c))).collect();
    Value::Object(map)
}

pub fn blocks(g: &FiniteGroup, field: PrimeField, oracle: bool) -> CheckReport {
    let kg = group_algebra(g, field);
    let dec = primitive_central_idempotents(&kg);
    let labels = g.labels();
    let mut invariants = Vec::new();
    let mut blocks = Vec::new();
    let mut sum = vec![0; kg.dim()];
    for (i, e) in dec.idempotents.iter().enumerate() {
        let idem = kg.mul(e, e).iter().zip(e).filter(|(a, b)| a != b).count();
        let central: usize = (0..kg.dim())
            .map(|k| {
                let b = kg.basis_element(k);
                kg.mul(e, &b).iter().zip(kg.mul(&b, e)).filter(|(x, y)| **x != *y).count()
            })
            .sum();
        invariants.push(inv_detail(&format!("block {i}: e² = e"), idem == 0, format!("residual {idem}")));
        invariants.push(inv_detail(&format!("block {i}: e is central"), central == 0, format!("residual {central}")));
        blocks
            .push(json!({ "index": i, "dim": dec.block_dims[i], "idempotent": labelled(labels, e), "idempotent_residual": idem, "central_residual": central }));
        sum = vec_add(field, &sum, e);
    }
    let mut orth = 0;
    for (i, e) in dec.idempotents.iter().enumerate() {
        for (j, h) in dec.idempotents.iter().enumerate() {
            if i != j {
                orth += kg.mul(e, h).iter().filter(|&&x| x != 0).count();
            }
        }
    }
    invariants.push(inv_detail("idempotents are orthogonal", orth == 0, format!("residual {orth}")));
    invariants.push(inv("idempotents sum to 1", sum == kg.unit()));
    let mut data = json!({
        "group_order": g.order(),
        "field": field.modulus(),
        "center_dim": dec.center_dim,
        "nilradical_dim": dec.nilradical_dim,
        "block_dims": dec.block_dims,
        "blocks": blocks,
        "algebra": kg.dump(),
    });
    if oracle {
        let z = center(&kg);
        let size = field.modulus().checked_pow(z.len() as u32).filter(|&s| s <= ORACLE_LIMIT);
        match size {
            Some(size) => {
                let mut found = oracle_primitive_idempotents(&kg, &z, field, size);
                let mut got = dec.idempotents.clone();
                found.sort();
                got.sort();
                invariants.push(inv_detail("oracle: exhaustive idempotent enumeration agrees", found == got, format!("{size} central elements")));
            }
            None => data["oracle"] = json!("skipped: center too large"),
        }
    }
    CheckReport::new("blocks", invariants, data)
}

fn oracle_primitive_idempotents(a: &Algebra, z: &[Vector], f: PrimeField, size: u64) -> Vec<Vector> {
    let p = f.modulus();
    let mut idempotents = Vec::new();
    for code in 1..size {
        let mut c = code;
        let mut x = vec![0; a.dim()];
        for b in z {
            x = vec_add(f, &x, &b.iter().map(|&v| f.mul(v, c % p)).collect::<Vec<_>>());
            c /= p;
        }
        if a.mul(&x, &x) == x && x.iter().any(|&v| v != 0) {
            idempotents.push(x);
        }
    }
    idempotents.iter().filter(|e| !idempotents.iter().any(|h| h != *e && a.mul(h, e) == **h)).cloned().collect()
}

fn context_invariants(ctx: &MoritaContext) -> Vec<Invariant> {
    let m = &ctx.m;
    let ms = &ctx.mstar.bimodule;
    let f = m.field();
    let (mut first, mut second) = (0, 0);
    for x in 0..m.dim() {
        let mx = unit_vector(m.dim(), x);
        for s in 0..ms.dim() {
            let fs = unit_vector(ms.dim(), s);
            for y in 0..m.dim() {
                let my = unit_vector(m.dim(), y);
                if m.act_left(&ctx.psi_of(&mx, &fs), &my) != m.act_right(&mx, &ctx.phi_of(&fs, &my)) {
                    first += 1;
                }
            }
            for t in 0..ms.dim() {
                let ft = unit_vector(ms.dim(), t);
                if ms.act_left(&ctx.phi_of(&fs, &mx), &ft) != ms.act_right(&fs, &ctx.psi_of(&mx, &ft)) {
                    second += 1;
                }
            }
        }
    }
    let sum_j = ctx.dual_basis_j.iter().fold(vec![0; m.right.dim()], |acc, (s, x)| vec_add(f, &acc, &ctx.phi_of(s, x)));
    let sum_i = ctx.dual_basis_i.iter().fold(vec![0; m.left.dim()], |acc, (x, s)| vec_add(f, &acc, &ctx.psi_of(x, s)));
    vec![
        inv("φ is bijective", ctx.phi.is_square() && ctx.phi.is_invertible()),
        inv("ψ is bijective", ctx.psi.is_square() && ctx.psi.is_invertible()),
        inv_detail("ψ(m ⊗ m*) n = m φ(m* ⊗ n)", first == 0, format!("{first} failing triples")),
        inv_detail("φ(m* ⊗ m) n* = m* ψ(m ⊗ n*)", second == 0, format!("{second} failing triples")),
        inv("φ(Σ m_j* ⊗ m_j) = 1", sum_j == m.right.unit()),
        inv("ψ(Σ n_i ⊗ n_i*) = 1", sum_i == m.left.unit()),
        inv("context validates", ctx.validate().is_ok()),
    ]
}

pub fn morita(r: &Resolved, oracle: bool) -> Result<CheckReport, CliError> {
    let ctx = match build_morita_context(&r.module) {
        Ok(c) => c,
        Err(e) => return Ok(CheckReport::new("morita", vec![inv_detail("M is a Morita bimodule", false, e.to_string())], Value::Null)),
    };
    let mut invariants = context_invariants(&ctx);
    let mut data = json!({
        "dim_b": r.module.left.dim(),
        "dim_b_prime": r.module.right.dim(),
        "dim_m": r.module.dim(),
        "dim_m_star": ctx.mstar.dim(),
        "dual_basis_j": ctx.dual_basis_j.len(),
        "dual_basis_i": ctx.dual_basis_i.len(),
        "phi": rows(&ctx.phi),
        "psi": rows(&ctx.psi),
    });
    if oracle {
        // Every d×d matrix commuting with the left action, against dim B′.
        let d = r.module.dim();
        let p = r.field.modulus();
        match p.checked_pow((d * d) as u32).filter(|&s| s <= ORACLE_LIMIT) {
            Some(size) => {
                let mut count = 0u64;
                for code in 0..size {
                    let mut c = code;
                    let mut x = Matrix::zeros(r.field, d, d);
                    for i in 0..d * d {
                        x.set(i / d, i % d, c % p);
                        c /= p;
                    }
                    if r.module.left_actions().iter().all(|l| l.mul(&x) == x.mul(l)) {
                        count += 1;
                    }
                }
                let expected = p.pow(r.module.right.dim() as u32);
                invariants.push(inv_detail("oracle: |End_B(M)| = |B′|", count == expected, format!("{count} endomorphisms, |B′| = {expected}")));
            }
            None => data["oracle"] = json!("skipped: matrix space too large"),
        }
        let sweep = hom_space(&r.module.as_left_module(), &r.module.as_left_module(), Side::Left)?;
        invariants.push(inv("oracle: Hom sweep gives dim End_B(M) = dim B′", sweep.len() == r.module.right.dim()));
    }
    Ok(CheckReport::new("morita", invariants, data))
}

pub fn scenario(r: &Resolved, seed: u64) -> Result<ButterflyScenario, CliError> {
    let mut s = ButterflyScenario::new(
        r.group.clone(),
        r.normal.clone(),
        r.g_prime.clone(),
        r.field,
        r.e.clone(),
        r.e_prime.clone(),
        r.module.left_actions().to_vec(),
        r.module.right_actions().to_vec(),
        r.unit_actions.clone(),
        seed,
    )?;
    if let Some(twist) = &r.twist {
        let ap = &s.delta.witness.ap;
        let mut lambda: Vec<Vector> = (0..ap.grading.order()).map(|_| ap.algebra.unit().to_vec()).collect();
        for &(d, x) in twist {
            lambda[d] = s.ap.group_element(x)?;
        }
        s.delta.witness = s.delta.witness.twisted(lambda)?;
    }
    Ok(s)
}

fn witness_invariants(w: &DeltaWitness) -> Vec<Invariant> {
    let gw = &w.witness;
    let ap = &gw.ap;
    let mt = &gw.mtilde.bimodule;
    let ms = &gw.mstar.bimodule;
    let mut bad = 0;
    for s in 0..ms.dim() {
        let fs = unit_vector(ms.dim(), s);
        for x in 0..mt.dim() {
            let mx = unit_vector(mt.dim(), x);
            let value = gw.phi_tilde(&fs, &mx);
            for k in 0..ap.dim() {
                let b = ap.algebra.basis_element(k);
                if gw.phi_tilde(&ms.act_left(&b, &fs), &mx) != ap.algebra.mul(&b, &value) {
                    bad += 1;
                }
                if gw.phi_tilde(&fs, &mt.act_right(&mx, &b)) != ap.algebra.mul(&value, &b) {
                    bad += 1;
                }
            }
        }
    }
    let f = ap.field();
    let unit = gw.dual_basis_j.iter().fold(vec![0; ap.dim()], |acc, (s, x)| vec_add(f, &acc, &gw.phi_tilde(s, x)));
    vec![
        inv("Δ-structure satisfies the unit relations", w.delta.check_unit_relations().is_ok()),
        inv("ε: M ⊗ A′ -> A ⊗ M is a graded isomorphism", w.epsilon.is_invertible()),
        inv("β: A′ ⊗ M* -> M* ⊗ A is a graded isomorphism", w.beta.is_invertible()),
        inv("M̃ ⊗ M̃* ≅ A (degree-preserving)", gw.iso_checks.left == "isomorphic"),
        inv("M̃* ⊗ M̃ ≅ A′ (degree-preserving)", gw.iso_checks.right == "isomorphic"),
        inv("A′ ⊗ M* ≅ Hom_A(M̃, A)", gw.iso_checks.candidate.as_deref() == Some("isomorphic")),
        inv_detail("φ̃ is an (A′, A′)-bimodule map", bad == 0, format!("{bad} failing basis products")),
        inv("φ̃(Σ m_j* ⊗ m_j) = 1", unit == ap.algebra.unit()),
    ]
}

pub fn graded_morita(r: &Resolved, seed: u64) -> Result<CheckReport, CliError> {
    let s = scenario(r, seed)?;
    let w = &s.delta;
    let data = json!({
        "grading_order": w.witness.a.grading.order(),
        "dim_a": w.witness.a.dim(),
        "dim_a_prime": w.witness.ap.dim(),
        "dim_m_tilde": w.mtilde.graded.bimodule.dim(),
        "dim_m_tilde_star": w.witness.mstar.dim(),
        "unit_actions": w.delta.unit_actions.iter().map(rows).collect::<Vec<_>>(),
        "twisted": w.witness.twist.is_some(),
    });
    Ok(CheckReport::new("graded-morita", witness_invariants(w), data))
}

pub fn diagram(r: &Resolved, seed: u64, oracle: bool) -> Result<CheckReport, CliError> {
    let s = scenario(r, seed)?;
    let u = r.module.as_left_module();
    let rep = verify_diagram(&s.delta, &u)?;
    let nonzero: usize = rep.residuals.iter().sum();
    let mut invariants = vec![
        inv("θ is a graded algebra homomorphism", rep.theta_homomorphism),
        inv("θ′ is a graded algebra homomorphism", rep.theta_prime_homomorphism),
        inv("φ₁ is an algebra isomorphism", rep.phi1_isomorphism),
        inv("φ₂ is an algebra isomorphism", rep.phi2_isomorphism),
        inv("φ₁ preserves degrees", rep.phi1_degree_preserving),
        inv("φ₂ preserves degrees", rep.phi2_degree_preserving),
        inv_detail("θ′ ∘ φ₂ = φ₁ ∘ θ", rep.commutes, format!("{nonzero} nonzero residual entries")),
    ];
    if oracle {
        let a = &s.delta.witness.a;
        let end = graded_end_algebra(a, &u)?;
        let cent = graded_centralizer(a)?;
        let mut bad = 0;
        for c in &cent.basis {
            let tc = end.map_of(&theta(a, &end, c)?);
            for c2 in &cent.basis {
                let tc2 = end.map_of(&theta(a, &end, c2)?);
                if end.map_of(&theta(a, &end, &a.algebra.mul(c, c2))?) != tc2.mul(&tc) {
                    bad += 1;
                }
            }
        }
        invariants.push(inv_detail("oracle: θ(cc′) = θ(c′) ∘ θ(c) as maps", bad == 0, format!("{bad} failing pairs")));
    }
    let data = serde_json::to_value(&rep).expect("report serializes");
    Ok(CheckReport::new("diagram", invariants, data))
}

pub fn centralizer_layer(r: &Resolved, seed: u64) -> Result<CheckReport, CliError> {
    let layer = match extend_to_centralizer_layer(&r.group, &r.normal, &r.g_prime, r.field, &r.e, &r.e_prime, &r.module, seed) {
        Ok(l) => l,
        Err(e @ gmorita_core::Error::Inconsistent(_)) => return Err(e.into()),
        Err(e) => return Ok(CheckReport::new("centralizer-layer", vec![inv_detail("extension to the centralizer layer", false, e.to_string())], Value::Null)),
    };
    let w = &layer.witness;
    let invariants = vec![
        inv("C ⊗_B M is strongly graded", layer.mhat.is_strongly_graded(&layer.c.graded)),
        inv_detail("right C′-action is independent of the factorization", true, format!("{} factorizations compared", layer.factorizations_checked)),
        inv("C ⊗_B M ⊗ (C ⊗_B M)* ≅ C", w.iso_checks.left == "isomorphic"),
        inv("(C ⊗_B M)* ⊗ C ⊗_B M ≅ C′", w.iso_checks.right == "isomorphic"),
    ];
    let data = json!({
        "layer_order": layer.layer.order(),
        "grading_order": layer.c.graded.grading.order(),
        "dim_c": layer.c.graded.dim(),
        "dim_c_prime": layer.c_prime.graded.dim(),
        "dim_m_hat": layer.mhat.bimodule.dim(),
    });
    Ok(CheckReport::new("centralizer-layer", invariants, data))
}

pub fn butterfly(r: &Resolved, seed: u64) -> Result<CheckReport, CliError> {
    let Some((ghat, embedding)) = &r.ambient else {
        return Err(CliError::Parse("the butterfly check needs an \"ambient\" section".into()));
    };
    let s = scenario(r, seed)?;
    let t = match butterfly_transport(&s, ghat, embedding) {
        Ok(t) => t,
        Err(e @ gmorita_core::Error::Inconsistent(_)) => return Err(e.into()),
        Err(e) => return Ok(CheckReport::new("butterfly", vec![inv_detail("transport", false, e.to_string())], Value::Null)),
    };
    let d = &t.group_data;
    let w = t.hat_witness();
    let degrees = t.ahat.graded.grading.order();
    let invariants = vec![
        inv("C_Ĝ(N) ≤ Ĝ′", d.centralizer_hat.is_subset_of(&d.ghat_prime)),
        inv("Ĝ = N Ĝ′", d.n_hat.order() * d.ghat_prime.order() == ghat.order() * d.n_hat.intersection(&d.ghat_prime).order()),
        inv("N′ = N ∩ Ĝ′", d.n_hat.intersection(&d.ghat_prime).order() == s.n_prime().order()),
        inv("G/NC_G(N) ≅ Ĝ/NC_Ĝ(N)", d.check_outer_isomorphism(&r.group, &r.normal, ghat).is_ok()),
        inv_detail("Δ̂ is independent of the representatives", true, format!("{} representatives compared", t.independence_checks)),
        inv("dim M̂ = |Ĝ/N| · dim M", t.mhat().bimodule.dim() == degrees * r.module.dim()),
        inv("M̂ ⊗ M̂* ≅ Â (degree-preserving)", w.iso_checks.left == "isomorphic"),
        inv("M̂* ⊗ M̂ ≅ Â′ (degree-preserving)", w.iso_checks.right == "isomorphic"),
    ];
    let data = json!({
        "ghat_order": ghat.order(),
        "ghat_prime_order": d.ghat_prime.order(),
        "grading_order": degrees,
        "dim_a_hat": t.ahat.graded.dim(),
        "dim_a_hat_prime": t.ahat_prime.graded.dim(),
        "dim_m_hat": t.mhat().bimodule.dim(),
        "unit_actions": t.delta_hat.unit_actions.iter().map(rows).collect::<Vec<_>>(),
    });
    Ok(CheckReport::new("butterfly", invariants, data))
}
