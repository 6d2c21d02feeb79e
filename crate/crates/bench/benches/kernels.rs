use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qsl2_core::characters::{bosonic_level_minus_one, bosonic_m_max, melzer_n_max, melzer_rhs};
use qsl2_core::fock::{drinfeld_check, sample_kets, DrinfeldRelation, Level, ModeWindow};
use qsl2_core::funcspace::{graded_dimension, w_basis, SpaceKind, SpaceSpec, Window};
use qsl2_core::MPoly;

fn wbasis(c: &mut Criterion) {
    c.bench_function("w_basis n=5 M=[2,4]", |b| {
        b.iter(|| w_basis(black_box(5), black_box(&[2, 4])).unwrap())
    });
}

fn mpoly_mul(c: &mut Criterion) {
    let a = w_basis(4, &[1, 3]).unwrap().poly;
    let b = MPoly::parse("X1 * z1 - q^2 * X2 * z4 + z2^-1", 2, 4).unwrap();
    c.bench_function("mpoly mul", |bn| bn.iter(|| black_box(&a) * black_box(&b)));
}

fn graded(c: &mut Criterion) {
    let spec = SpaceSpec::new(SpaceKind::Wgeq0, 3);
    c.bench_function("graded_dimension W>=0 n=3 v<=3", |b| {
        b.iter(|| graded_dimension(black_box(&spec), &Window { vmin: 0, vmax: 3 }).unwrap())
    });
}

fn characters(c: &mut Criterion) {
    c.bench_function("melzer vs bosonic v<=5", |b| {
        b.iter(|| {
            let l = melzer_rhs(0, 5, melzer_n_max(0, 5)).unwrap();
            let r = bosonic_level_minus_one(0, 5, bosonic_m_max(0, 5)).unwrap();
            (l, r)
        })
    });
}

fn fock(c: &mut Criterion) {
    let states = sample_kets(Level::Plus, 2);
    c.bench_function("Dr6 level 1 degree<=2", |b| {
        b.iter(|| drinfeld_check(DrinfeldRelation::Dr6, black_box(&states), &ModeWindow::symmetric(2)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = wbasis, mpoly_mul, graded, characters, fock
}
criterion_main!(benches);
