use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dyq_core::fock::checks::FockParams;
use dyq_core::fock::classical::Vacuum;
use dyq_core::kernels::{expand, Direction, Kern};
use dyq_core::rewrite::decks::AbstractSerre;
use dyq_core::rewrite::serre::serre_normal_form;
use dyq_core::rewrite::Strategy;
use dyq_core::scalar::q;
use dyq_core::{Gcm, OpSeries, Window};

fn bench_ops(c: &mut Criterion) {
    c.bench_function("f_compose_g", |b| b.iter(|| OpSeries::f(black_box(8)).compose(&OpSeries::g(8))));
}

fn bench_expand(c: &mut Criterion) {
    let k = Kern::pair(2, 0, 1, q(2), -1).mul(&Kern::pair(2, 0, 1, q(-2), 1)).mul(&Kern::pair(2, 0, 1, q(1), -2));
    let w = Window::new(&["z", "w"], 6, 0, 5);
    c.bench_function("expand_pair_kernel", |b| b.iter(|| expand(black_box(&k), &Direction(vec![0, 1]), &w).unwrap()));
}

fn bench_rewrite(c: &mut Criterion) {
    let deck = AbstractSerre::new(q(1));
    c.bench_function("serre_normal_form", |b| b.iter(|| serre_normal_form(&deck, Strategy::Leftmost).unwrap()));
}

fn bench_fock(c: &mut Criterion) {
    let p = FockParams { gcm: Gcm::preset("A2").unwrap(), level: q(1), n: 3, depth: 3, xwin: 2 };
    c.bench_function("heis_derive_a2", |b| b.iter(|| p.model().unwrap()));
    c.bench_function("vacuum_a1_layer4", |b| {
        b.iter(|| {
            let v = Vacuum::new(&Gcm::preset("A1").unwrap(), &q(1)).unwrap();
            v.layer(black_box(4)).len()
        })
    });
}

criterion_group!(benches, bench_ops, bench_expand, bench_rewrite, bench_fock);
criterion_main!(benches);
