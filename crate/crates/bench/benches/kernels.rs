//! Timings for the hot paths: family enumeration, conjugacy classes of a
//! mid-sized matrix group, zeta partial products, and mod-p rank.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use cheblab::density;
use cheblab::library;
use cheblab::localglobal;
use cheblab::orbitgen::{self, LengthScheme};
use cheblab::KnotFamily;

fn enumeration(c: &mut Criterion) {
    c.bench_function("cat_orbits_numax_12", |b| {
        b.iter(|| {
            orbitgen::cat_primitive_orbits(black_box([[2, 1], [1, 1]]), 12, false).unwrap()
        })
    });
    c.bench_function("modular_geodesics_maxlen_14", |b| {
        b.iter(|| orbitgen::modular_geodesics(black_box(14)).unwrap())
    });
}

fn group_tables(c: &mut Criterion) {
    c.bench_function("sl2_f5_conjugacy_classes", |b| {
        b.iter(|| {
            let (g, _, _) = library::sl2(black_box(5));
            g.conjugacy_classes().len()
        })
    });
    c.bench_function("class_tags_modular_maxlen_14_mod_3", |b| {
        let geos = orbitgen::modular_geodesics(14).unwrap();
        b.iter(|| orbitgen::modular_class_tags_mod(black_box(&geos), 3).1.len())
    });
}

fn zeta(c: &mut Criterion) {
    let geos = orbitgen::modular_geodesics(14).unwrap();
    let family = KnotFamily::Modular(geos);
    let assignment = orbitgen::assign_lengths(&family, LengthScheme::Geometric);
    let n = assignment.lengths.len();
    c.bench_function("zeta_partial_2536_terms", |b| {
        b.iter(|| density::zeta_partial(black_box(&assignment), 1.05, n).unwrap())
    });
}

fn mod_p_linear_algebra(c: &mut Criterion) {
    let lk = localglobal::synthetic_linking_model(50, 10, 7);
    let s: Vec<usize> = (0..50).collect();
    c.bench_function("restriction_rank_n50_p3", |b| {
        b.iter(|| localglobal::restriction_map(black_box(&lk), 3, &s).unwrap().rank())
    });
}

criterion_group!(kernels, enumeration, group_tables, zeta, mod_p_linear_algebra);
criterion_main!(kernels);
