use std::f64::consts::TAU;

use nalgebra::{Isometry3, Translation3, UnitQuaternion};
use quadsec::knot::*;
use quadsec::secants::*;
use quadsec::{Point3, ToleranceConfig};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn generic(f: KnotFamily, n: usize, seed: u64) -> PolygonalKnot {
    let k = builtin_knot(f, n).unwrap();
    perturb_to_generic(&k, 1e-3 * k.min_edge_length(), seed, &tol()).unwrap()
}

fn convex_octagon() -> PolygonalKnot {
    let v = (0..8).map(|i| {
        let s = TAU * i as f64 / 8.0;
        Point3::new(2.0 * s.cos(), s.sin(), 0.0)
    });
    let k = PolygonalKnot::new(v.collect(), &tol()).unwrap();
    perturb_to_generic(&k, 1e-3, 1, &tol()).unwrap()
}

#[test]
fn convex_polygon_has_no_trisecants() {
    let k = convex_octagon();
    assert!(enumerate_quadrisecants(&k, &tol()).unwrap().is_empty());
    assert!(trisecant_families(&k, &tol()).unwrap().is_empty());
    assert_eq!(trisecant_coverage(&k, &tol()).fraction, 0.0);
}

#[test]
fn hexagonal_trefoil_has_three_alternating() {
    let k = builtin_knot(KnotFamily::HexagonalTrefoil, 6).unwrap();
    for seed in 0..5 {
        let p = perturb_to_generic(&k, 1e-3, seed, &tol()).unwrap();
        let q = enumerate_quadrisecants(&p, &tol()).unwrap();
        assert_eq!(q.len(), 3);
        assert!(q.iter().all(|x| x.class == DihedralClass::Alternating));
        assert!(pannwitz_lower_check(&p, &q).unwrap());
    }
}

#[test]
fn upper_bound_holds() {
    let cases = [
        (KnotFamily::HexagonalTrefoil, 6),
        (KnotFamily::Torus { p: 2, q: 3 }, 16),
        (KnotFamily::Figure8, 16),
        (KnotFamily::Torus { p: 2, q: 5 }, 24),
        (KnotFamily::FiveTwo, 20),
    ];
    for (f, n) in cases {
        let k = generic(f, n, 3);
        let q = enumerate_quadrisecants(&k, &tol()).unwrap();
        assert!(q.len() <= quadrisecant_upper_bound(k.n()), "{f:?}");
        assert!(q.iter().any(|x| x.class == DihedralClass::Alternating), "{f:?} lacks an alternating quadrisecant");
    }
}

#[test]
fn classification_examples() {
    assert_eq!(classify_dihedral([0, 1, 2, 3], [0, 1, 2, 3]), DihedralClass::Simple);
    assert_eq!(classify_dihedral([0, 1, 2, 3], [0, 2, 1, 3]), DihedralClass::Alternating);
    assert_eq!(classify_dihedral([0, 1, 2, 3], [3, 2, 1, 0]), DihedralClass::Simple);
    assert_eq!(classify_dihedral([0, 1, 2, 3], [0, 1, 3, 2]), DihedralClass::Flipped);
}

#[test]
fn pannwitz_cases() {
    let t = generic(KnotFamily::Torus { p: 2, q: 3 }, 24, 2);
    let q = enumerate_quadrisecants(&t, &tol()).unwrap();
    assert!(q.len() >= 2);
    assert!(pannwitz_lower_check(&t, &q).unwrap());
    let u = convex_octagon().with_unknotting_number(Some(0));
    assert!(pannwitz_lower_check(&u, &[]).unwrap());
    let bare = PolygonalKnot::new(u.vertices().to_vec(), &tol()).unwrap();
    assert!(matches!(pannwitz_lower_check(&bare, &[]), Err(SecantError::MissingMetadata)));
}

#[test]
fn enumeration_is_idempotent_and_consistent() {
    let k = generic(KnotFamily::Figure8, 20, 4);
    let a = enumerate_quadrisecants(&k, &tol()).unwrap();
    let b = enumerate_quadrisecants(&k, &tol()).unwrap();
    assert_eq!(a, b);
    let unfiltered =
        enumerate_quadrisecants_with(&k, &tol(), EnumerateOptions { prefilter: false, require_generic: true }).unwrap();
    assert_eq!(a, unfiltered);
    for q in &a {
        let lp = q.line_points();
        for w in lp.windows(2) {
            assert!(q.line.param_of(&w[0].point) < q.line.param_of(&w[1].point));
        }
        assert!((q.r - (lp[1].point - lp[0].point).norm()).abs() < 1e-12);
        for tri in q.sub_trisecants(&k) {
            assert!(tri.collinearity_residual() < 1e-7 * k.diameter());
        }
        for p in &lp {
            assert!(q.line.distance_to_point(&p.point) < 1e-7 * k.diameter());
        }
    }
}

#[test]
fn counts_and_classes_are_rigid_motion_invariant() {
    let k = generic(KnotFamily::Torus { p: 2, q: 5 }, 20, 6);
    let classes = |k: &PolygonalKnot| {
        let mut c: Vec<DihedralClass> = enumerate_quadrisecants(k, &tol()).unwrap().iter().map(|q| q.class).collect();
        c.sort();
        c
    };
    let base = classes(&k);
    assert!(!base.is_empty());
    for (i, euler) in [(0.1, 0.2, 0.3), (-1.0, 2.0, 0.5), (2.5, -0.7, 1.9)].into_iter().enumerate() {
        let iso = Isometry3::from_parts(
            Translation3::new(i as f64 * 4.0, -1.0, 2.0),
            UnitQuaternion::from_euler_angles(euler.0, euler.1, euler.2),
        );
        assert_eq!(classes(&k.transformed(&iso)), base);
    }
}

#[test]
fn trefoil_coverage_is_full() {
    let hex = perturb_to_generic(&builtin_knot(KnotFamily::HexagonalTrefoil, 6).unwrap(), 1e-3, 1, &tol()).unwrap();
    let c = trisecant_coverage(&hex, &tol());
    assert_eq!(c.fraction, 1.0, "uncovered {:?}", c.uncovered);
    assert!(!trisecant_families(&hex, &tol()).unwrap().is_empty());
    let t = generic(KnotFamily::Torus { p: 2, q: 3 }, 40, 1);
    let c = trisecant_coverage(&t, &tol());
    assert_eq!(c.fraction, 1.0, "uncovered {:?}", c.uncovered);
}

#[test]
fn saddle_generators_give_a_closed_family() {
    // edges 0, 2, 4 lie on x = 0, 1, -1 of xy - z = 0; lines y = c meet all three
    let v = vec![
        Point3::new(0.0, -1.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(1.0, -1.5, -1.5),
        Point3::new(1.0, 1.5, 1.5),
        Point3::new(-1.0, 1.3, -1.3),
        Point3::new(-1.0, -1.3, 1.3),
    ];
    let k = PolygonalKnot::new(v, &tol()).unwrap();
    let fams = trisecant_families(&k, &tol()).unwrap();
    let f: Vec<&TrisecantFamily> = fams.iter().filter(|f| f.edges == [0, 2, 4]).collect();
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].topology, FamilyTopology::ClosedInterval);
    for tri in &f[0].samples {
        let y = tri.a.point.y;
        for p in [tri.b.point, tri.c.point] {
            assert!((p.y - y).abs() < 1e-9);
        }
    }
}

#[test]
fn csv_has_one_row_per_quadrisecant() {
    let k = generic(KnotFamily::Torus { p: 2, q: 3 }, 24, 2);
    let q = enumerate_quadrisecants(&k, &tol()).unwrap();
    let csv = quadrisecants_csv(&q);
    assert_eq!(csv.lines().count(), q.len() + 1);
    assert!(csv.lines().skip(1).all(|l| l.contains("alternating")));
}
