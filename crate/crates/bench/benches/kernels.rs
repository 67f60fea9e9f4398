use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use gmorita_bench::{embedding_by_label, fixture, s3_x_c2, symmetric};
use gmorita_core::algebra::{group_algebra, primitive_central_idempotents};
use gmorita_core::butterfly::butterfly_transport;
use gmorita_core::graded_morita::verify_diagram;
use gmorita_core::morita::build_morita_context;
use gmorita_core::{Bimodule, PrimeField};

fn blocks(c: &mut Criterion) {
    for (n, p) in [(4, 2), (4, 3), (5, 5)] {
        let kg = group_algebra(&symmetric(n), PrimeField::new(p).unwrap());
        c.bench_function(&format!("blocks S{n} F{p}"), |b| b.iter(|| primitive_central_idempotents(black_box(&kg))));
    }
}

fn morita(c: &mut Criterion) {
    let s = fixture();
    c.bench_function("morita context", |b| b.iter(|| build_morita_context(black_box(&s.m)).unwrap()));
    c.bench_function("fixture scenario", |b| b.iter(fixture));
}

fn diagram(c: &mut Criterion) {
    let s = fixture();
    let u = Bimodule::regular_left(s.a.graded.one_component.clone());
    c.bench_function("diagram", |b| b.iter(|| verify_diagram(black_box(&s.delta), &u).unwrap()));
}

fn transport(c: &mut Criterion) {
    let s = fixture();
    let ghat = s3_x_c2();
    let emb = embedding_by_label(&s, &ghat);
    c.bench_function("butterfly S3×C2", |b| b.iter(|| butterfly_transport(black_box(&s), &ghat, &emb).unwrap()));
}

criterion_group!(benches, blocks, morita, diagram, transport);
criterion_main!(benches);
