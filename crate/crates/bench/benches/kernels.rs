use std::hint::black_box;

use acris_core::acris::conucleo_solve;
use acris_core::fcrystals::{library_datum, smoothness_predicate};
use acris_core::group_cohomology::{compute_figure, z2_cohomology};
use acris_core::hasse_witt::{fermat, hw_matrix};
use acris_core::{DPSeries, FgInvModule, FieldDesc, Profile, RSPair, RingDesc, RunConfig, WittArith, WittVector};
use criterion::{criterion_group, criterion_main, Criterion};

fn witt(c: &mut Criterion) {
    let k = FieldDesc::new(2, 2).unwrap();
    let mut rng = RunConfig::default().rng(0);
    let w = WittArith::new(2, 4);
    let a = WittVector::new((0..4).map(|_| k.random(&mut rng)).collect());
    let b = WittVector::new((0..4).map(|_| k.random(&mut rng)).collect());
    c.bench_function("witt_mul_len4_f4", |bn| bn.iter(|| w.mul(black_box(&a), black_box(&b)).unwrap()));
}

fn acris(c: &mut Criterion) {
    let pr = Profile::new(RingDesc::standard(2, 1, 4).unwrap(), 4, 8).unwrap();
    let mut rng = RunConfig::default().rng(1);
    let a = DPSeries::random(&pr, 5, 3, &mut rng);
    let b = DPSeries::random(&pr, 5, 3, &mut rng);
    c.bench_function("dpseries_mul", |bn| bn.iter(|| black_box(&a).mul(black_box(&b)).unwrap()));
    let rs = RSPair::new(1, 2).unwrap();
    c.bench_function("conucleo_solve_1_2", |bn| bn.iter(|| conucleo_solve(black_box(&a), rs).unwrap()));
}

fn crystals(c: &mut Criterion) {
    let d = library_datum("chain-breaks-at-three").unwrap().unwrap();
    c.bench_function("smoothness_predicate", |bn| bn.iter(|| smoothness_predicate(black_box(&d), 4, 8).unwrap()));
}

fn cohomology(c: &mut Criterion) {
    let m = FgInvModule::new(2, 3, vec![], vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]], false).unwrap();
    c.bench_function("z2_cohomology_rank3", |bn| bn.iter(|| z2_cohomology(black_box(&m), 3).unwrap()));
    c.bench_function("force_figure_5", |bn| bn.iter(|| compute_figure(black_box(5)).unwrap()));
}

fn hasse_witt(c: &mut Criterion) {
    let f = fermat(&FieldDesc::new(3, 1).unwrap(), 3, 4);
    c.bench_function("hw_matrix_fermat_quartic_p3", |bn| bn.iter(|| hw_matrix(black_box(&f))));
}

criterion_group!(benches, witt, acris, crystals, cohomology, hasse_witt);
criterion_main!(benches);
