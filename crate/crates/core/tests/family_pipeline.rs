//! Cross-module runs of the realistic pipelines: enumerate a family, map
//! it into a finite quotient, and check that the counting, splitting, and
//! zeta layers all tell one consistent story.

use cheblab::covers::{self, PeripheralImage};
use cheblab::density;
use cheblab::fingroup::{semidirect_image, semidirect_quotient, DEFAULT_QUOTIENT_BOUND};
use cheblab::library;
use cheblab::orbitgen::{self, LengthScheme};
use cheblab::KnotFamily;

use proptest::prelude::*;
use std::sync::Arc;

/// Independent 2x2 integer helpers for the oracles.
fn mul2(x: [[i64; 2]; 2], y: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut z = [[0i64; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            z[r][c] = x[r][0] * y[0][c] + x[r][1] * y[1][c];
        }
    }
    z
}

fn matvec(m: [[i64; 2]; 2], v: [i64; 2]) -> [i64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// An unramified knot in the mod-2 cover of the modular family splits into
/// 6/ord(Frobenius) components, and it is totally split exactly when its
/// class tag is the identity class.
#[test]
fn modular_split_counts_match_cover_components() {
    let geos = orbitgen::modular_geodesics(12).unwrap();
    let (g, r, l) = library::sl2(2);
    let cmap = g.class_map();
    let id_class = cmap[g.identity() as usize] as usize;
    let (group, tags) = orbitgen::modular_class_tags_mod(&geos, 2);
    assert_eq!(group.order(), 6);
    let arc = Arc::new(g);
    let identity = arc.identity();

    let mut totally_split = 0usize;
    for (geo, &tag) in geos.iter().zip(&tags) {
        let image = orbitgen::modular_frobenius_images(geo, &arc, r, l);
        assert_eq!(cmap[image as usize] as usize, tag, "tags come from the same images");
        let p = PeripheralImage::new(identity, image, Arc::clone(&arc)).unwrap();
        let data = covers::splitting_data(&p);
        assert_eq!(data.e, 1, "trivial meridian image means unramified");
        let ord = arc.element_order(image);
        assert_eq!(data.f, ord);
        assert_eq!(data.g, 6 / ord);
        assert!(data.frobenius.is_some());
        if covers::is_totally_split(&p) {
            totally_split += 1;
            assert_eq!(tag, id_class);
        } else {
            assert_ne!(tag, id_class);
        }
    }
    let identity_tagged = tags.iter().filter(|&&t| t == id_class).count();
    assert_eq!(totally_split, identity_tagged);
    assert!(totally_split > 0, "some words do land on the identity");
}

/// The primitive-orbit census and the fixed-point counts satisfy the
/// divisor-sum relation #Fix(A^nu) = sum over d | nu of d * (orbits of
/// period d), with the origin orbit included.
#[test]
fn cat_census_obeys_divisor_sum_consistency() {
    let family = orbitgen::cat_primitive_orbits([[2, 1], [1, 1]], 8, true).unwrap();
    let mut per_period = vec![0i64; 9];
    for o in &family.orbits {
        per_period[o.period as usize] += 1;
    }
    for nu in 1..=8usize {
        let total: i64 = (1..=nu)
            .filter(|d| nu % d == 0)
            .map(|d| d as i64 * per_period[d])
            .sum();
        assert_eq!(
            total,
            family.fixed_point_counts[nu - 1],
            "period census mismatch at nu = {nu}"
        );
    }
}

/// Datasets from both families survive the JSON-lines round trip bit for
/// bit, including the real-valued lengths.
#[test]
fn records_roundtrip_across_families() {
    let cat = orbitgen::cat_primitive_orbits([[2, 1], [1, 1]], 6, false).unwrap();
    let geos = orbitgen::modular_geodesics(10).unwrap();
    for records in [orbitgen::cat_records(&cat), orbitgen::modular_records(&geos)] {
        let text = orbitgen::records_to_json_lines(&records);
        let back = orbitgen::records_from_json_lines(&text).unwrap();
        assert_eq!(records, back);
    }
}

/// Counting functions computed from a length assignment partition the
/// census: the per-class counters sum to the total at every threshold, and
/// the final natural frequency equals count/total.
#[test]
fn counting_functions_partition_the_census() {
    let geos = orbitgen::modular_geodesics(10).unwrap();
    let (group, tags) = orbitgen::modular_class_tags_mod(&geos, 3);
    assert_eq!(group.order(), 24);
    let family = KnotFamily::Modular(geos);
    let assignment = orbitgen::assign_lengths(&family, LengthScheme::Geometric);
    let counting = density::CountingFunctions::new(&assignment, &tags);
    let classes = group.conjugacy_classes().len();
    let max_norm = assignment.norms.iter().cloned().fold(0.0f64, f64::max);
    for x in [1.0, 7.0, 50.0, 400.0, max_norm] {
        let total = counting.pi(x);
        let by_class: usize = (0..classes).map(|c| counting.pi_class(x, c)).sum();
        assert_eq!(by_class, total);
        for c in 0..classes {
            assert!(counting.pi_class(x, c) <= total);
            assert!(counting.psi_class(x, c) <= counting.psi(x) + 1e-9);
        }
    }
    assert_eq!(counting.pi(max_norm), tags.len());

    for class in 0..classes {
        let series = density::natural_density(&tags, class, 0).unwrap();
        let count = tags.iter().filter(|&&t| t == class).count();
        let expect = count as f64 / tags.len() as f64;
        assert!((series.last().unwrap() - expect).abs() < 1e-12);
    }
}

proptest! {
    /// The quotient of the orbit-family group is a homomorphism: composing
    /// translation-and-power data and then mapping equals mapping first and
    /// multiplying in the finite group.  Composition in the source is
    /// (v, k) * (w, j) = (v + A^k w, k + j).
    #[test]
    fn semidirect_images_respect_the_group_law(
        m in prop::sample::select(vec![2i64, 3, 5]),
        v in [-6i64..=6, -6i64..=6],
        w in [-6i64..=6, -6i64..=6],
        k in 0i64..=5,
        j in 0i64..=5,
    ) {
        const A: [[i64; 2]; 2] = [[2, 1], [1, 1]];
        let q = semidirect_quotient(m, A, DEFAULT_QUOTIENT_BOUND).unwrap();
        let g = &*q.target;
        let mut ak = [[1, 0], [0, 1]];
        for _ in 0..k {
            ak = mul2(ak, A);
        }
        let akw = matvec(ak, w);
        let combined = semidirect_image(&q, [v[0] + akw[0], v[1] + akw[1]], k + j).unwrap();
        let separate = g.mul(
            semidirect_image(&q, v, k).unwrap(),
            semidirect_image(&q, w, j).unwrap(),
        );
        prop_assert_eq!(combined, separate);
    }

    /// The relative zeta factors multiply back to the partial zeta product
    /// at every truncation and every s, not just at the configured grid.
    #[test]
    fn zeta_partition_holds_at_any_truncation(
        truncation in 1usize..=745,
        s in 1.01f64..2.0,
    ) {
        let geos = orbitgen::modular_geodesics(12).unwrap();
        let (group, tags) = orbitgen::modular_class_tags_mod(&geos, 2);
        let family = KnotFamily::Modular(geos);
        let assignment = orbitgen::assign_lengths(&family, LengthScheme::Geometric);
        let truncation = truncation.min(assignment.lengths.len());
        let partial = density::zeta_partial(&assignment, s, truncation).unwrap();
        let mut product = 1.0f64;
        for class in 0..group.conjugacy_classes().len() {
            product *= density::zeta_relative(&assignment, &tags, class, s, truncation, 0).unwrap();
        }
        prop_assert!(((product - partial) / partial).abs() < 1e-12);
    }
}
