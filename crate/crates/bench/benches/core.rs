use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use covwit_core::hh::{self, HhCoeffs};
use covwit_core::linalg::herm_eigvals;
use covwit_core::quo::{self, QuoCoeffs};
use covwit_core::random::{random_hermitian, random_matrix, rng};
use covwit_core::twirl::{cond_expect, std_basis, Symmetry};
use covwit_core::{werner3, Tolerances};

fn eigensolver(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut r = rng(1);
    for n in [9, 27, 64] {
        let h = random_hermitian(&mut r, n);
        c.bench_function(&format!("herm_eigvals n={n}"), |b| b.iter(|| herm_eigvals(black_box(&h), &tol).unwrap()));
    }
}

fn decisions(c: &mut Criterion) {
    let tol = Tolerances::default();
    let h = HhCoeffs::new(3, 1.0, 0.2, 0.1).unwrap();
    c.bench_function("hh decide d=3", |b| b.iter(|| hh::decide(black_box(&h), &tol, 0).unwrap()));
    let q = QuoCoeffs::from_tuple(3, [1.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    c.bench_function("decide_quo d=3 grid=8", |b| b.iter(|| quo::decide_quo(black_box(&q), 8, &tol, 0).unwrap()));
    let (rho, _) = werner3::rho_t(3, 1.0).unwrap();
    let mut g = c.benchmark_group("detect_entanglement_w3");
    g.sample_size(20);
    g.bench_function("rho_1 grid=64", |b| {
        b.iter(|| werner3::detect_entanglement_w3(black_box(&rho), werner3::DEFAULT_GRID, &tol, 0).unwrap())
    });
    g.finish();
}

fn twirls(c: &mut Criterion) {
    let mut r = rng(2);
    for sym in [Symmetry::Hh, Symmetry::Uuu, Symmetry::Uubaru] {
        let basis = std_basis(sym, 3).unwrap();
        let n = 3usize.pow(sym.parties());
        let x = random_matrix(&mut r, n, n);
        c.bench_function(&format!("cond_expect {sym} d=3"), |b| b.iter(|| cond_expect(black_box(&x), &basis).unwrap()));
    }
}

criterion_group!(benches, eigensolver, decisions, twirls);
criterion_main!(benches);
