use std::hint::black_box;
use std::sync::Arc;

use aq_core::catalog;
use aq_core::fock::{bargmann_toeplitz, purify_projector, random_near_projector, FockSpace, PurifyOptions};
use aq_core::random::random_poly;
use aq_core::star::{star, FlatFrameConfig};
use aq_core::symplectic::{induced_poisson, schouten_jacobi};
use aq_core::parse_poly;
use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly_mul(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = random_poly(&mut rng, 4, 6, 20);
    let q = random_poly(&mut rng, 4, 6, 20);
    c.bench_function("poly_mul_4vars_20x20_terms", |b| b.iter(|| black_box(&p) * black_box(&q)));
}

fn poisson(c: &mut Criterion) {
    let a = catalog::b_algebroid(2);
    let om = catalog::standard_omega_matrix(4, 4);
    c.bench_function("induced_poisson_and_schouten_b_n2", |b| {
        b.iter(|| schouten_jacobi(&induced_poisson(black_box(&a), black_box(&om)).unwrap()))
    });
}

fn star_product(c: &mut Criterion) {
    let a = catalog::tangent(1);
    let cfg = FlatFrameConfig::new(&a, &catalog::standard_omega_matrix(2, 2), None).unwrap();
    let f = parse_poly("x^4 - 2*x*y^3 + y", a.chart()).unwrap().complexify();
    let g = parse_poly("x^2*y^2 + 3*x - 1/2", a.chart()).unwrap().complexify();
    c.bench_function("star_order6_plane", |b| b.iter(|| star(&cfg, black_box(&f), black_box(&g), 6).unwrap()));
}

fn purify(c: &mut Criterion) {
    let s0 = random_near_projector(20, 0.1, 3);
    c.bench_function("purify_20x20", |b| b.iter(|| purify_projector(black_box(&s0), &PurifyOptions::default()).unwrap()));
}

fn toeplitz(c: &mut Criterion) {
    let chart = catalog::phase_space_chart(1);
    let f = parse_poly("x^2*y^2 + x*y - 3", &chart).unwrap();
    let space = Arc::new(FockSpace::new(1, 32));
    c.bench_function("toeplitz_cutoff32", |b| b.iter(|| bargmann_toeplitz(black_box(&f), 0.125, space.clone()).unwrap()));
}

criterion_group!(benches, poly_mul, poisson, star_product, purify, toeplitz);
criterion_main!(benches);
