use std::f64::consts::TAU;

use proptest::prelude::*;
use quadsec::knot::*;
use quadsec::topology::knot_signature;
use quadsec::{Point3, ToleranceConfig, Vec3};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn planar_hexagon() -> PolygonalKnot {
    let v = (0..6).map(|i| {
        let s = TAU * i as f64 / 6.0;
        Point3::new(s.cos(), s.sin(), 0.0)
    });
    PolygonalKnot::new(v.collect(), &tol()).unwrap()
}

#[test]
fn square_arc_lengths() {
    let sq = vec![
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(1.0, 1.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
    ];
    let k = PolygonalKnot::new(sq, &tol()).unwrap();
    let a = k.point(0, 0.0);
    let b = k.point(2, 0.0);
    assert!((arc_length(&k, &a, &b) - 2.0).abs() < 1e-15);
    assert_eq!(arc_length(&k, &a, &a), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arcs_cover_the_knot(seed in 0u64..1000, ea in 0usize..7, ta in 0.0f64..1.0, eb in 0usize..7, tb in 0.0f64..1.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<Point3> = (0..7)
            .map(|i| {
                let s = TAU * i as f64 / 7.0;
                Point3::new(s.cos() * 3.0 + rng.gen_range(-0.5..0.5), s.sin() * 3.0 + rng.gen_range(-0.5..0.5), rng.gen_range(-1.0..1.0))
            })
            .collect();
        let k = PolygonalKnot::new(v, &tol()).unwrap();
        let a = k.point(ea, ta);
        let b = k.point(eb, tb);
        prop_assume!((a.point - b.point).norm() > 1e-9);
        let total = arc_length(&k, &a, &b) + arc_length(&k, &b, &a);
        prop_assert!((total - k.total_length()).abs() < 1e-9 * k.total_length());
        let arc = Arc { start: a, end: b };
        let poly = arc.polyline(&k);
        let len: f64 = poly.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        prop_assert!((len - arc.length(&k)).abs() < 1e-9 * k.total_length());
    }
}

#[test]
fn planar_hexagon_is_not_generic() {
    let r = check_genericity(&planar_hexagon(), &tol());
    assert!(!r.is_generic);
    assert_eq!(r.coplanar_total, 15);
}

#[test]
fn collinear_adjacent_edges_are_flagged() {
    let v = vec![
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(2.0, 0.0, 0.0),
        Point3::new(1.0, 1.0, 0.3),
        Point3::new(0.2, 1.4, -0.5),
    ];
    let k = PolygonalKnot::new(v, &tol()).unwrap();
    let r = check_genericity(&k, &tol());
    assert!(r.collinear_triples.contains(&[0, 1, 2]));
    assert!(!r.is_generic);
}

#[test]
fn perturbed_hexagonal_trefoil_is_generic() {
    let k = builtin_knot(KnotFamily::HexagonalTrefoil, 6).unwrap();
    let p = perturb_to_generic(&k, 1e-3, 7, &tol()).unwrap();
    assert!(check_genericity(&p, &tol()).is_generic);
}

#[test]
fn perturb_planar_hexagon() {
    let k = planar_hexagon();
    let p = perturb_to_generic(&k, 1e-3, 1, &tol()).unwrap();
    assert!(check_genericity(&p, &tol()).is_generic);
    assert_eq!(knot_signature(&p, 0).unwrap().determinant, 1);
    assert!(matches!(perturb_to_generic(&k, 0.0, 1, &tol()), Err(KnotError::CannotPerturb(_))));
    let same = perturb_to_generic(&p, 0.0, 1, &tol()).unwrap();
    assert_eq!(same.vertices(), p.vertices());
}

#[test]
fn tight_polygon_cannot_be_perturbed() {
    // two long parallel edges 1e-3 apart
    let v = vec![
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 1e-3),
        Point3::new(0.1, 0.5, 0.5),
        Point3::new(-0.2, 0.0, 1e-3 + 0.01),
    ];
    let k = PolygonalKnot::new(v, &tol()).unwrap();
    assert!(k.min_nonadjacent_gap() < 2e-3);
    let r = perturb_to_generic(&k, 9e-4, 1, &tol());
    assert!(matches!(r, Err(KnotError::CannotPerturb(_))));
}

#[test]
fn generic_on_almost_all_seeds() {
    let k = builtin_knot(KnotFamily::HexagonalTrefoil, 6).unwrap();
    let bad = (0..100u64)
        .filter(|&seed| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let v = k
                .vertices()
                .iter()
                .map(|p| p + Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * 1e-3)
                .collect();
            !check_genericity(&PolygonalKnot::new(v, &tol()).unwrap(), &tol()).is_generic
        })
        .count();
    assert!(bad <= 1, "{bad} non-generic seeds");
}

#[test]
fn builtin_signatures() {
    let cases = [
        (KnotFamily::Torus { p: 2, q: 3 }, 40, 3),
        (KnotFamily::RoundCircle, 64, 1),
        (KnotFamily::HexagonalTrefoil, 6, 3),
        (KnotFamily::Torus { p: 2, q: 5 }, 40, 5),
        (KnotFamily::Figure8, 40, 5),
        (KnotFamily::FiveTwo, 40, 7),
    ];
    for (f, n, det) in cases {
        let k = builtin_knot(f, n).unwrap();
        assert_eq!(k.n(), if f == KnotFamily::HexagonalTrefoil { 6 } else { n });
        assert_eq!(knot_signature(&k, 3).unwrap().determinant, det, "{f:?}");
    }
    let circle = builtin_knot(KnotFamily::RoundCircle, 64).unwrap();
    assert!(circle.vertices().iter().all(|p| p.z.abs() < 1e-15));
}

#[test]
fn builtin_errors() {
    assert!(matches!(KnotFamily::parse("granny"), Err(KnotError::UnknownFamily(_))));
    assert!(matches!(
        builtin_knot(KnotFamily::Torus { p: 2, q: 3 }, 5),
        Err(KnotError::FamilyTooFewVertices { .. })
    ));
}

#[test]
fn signature_survives_perturbation_and_motion() {
    use nalgebra::{Isometry3, Translation3, UnitQuaternion};
    for (f, n) in [(KnotFamily::Torus { p: 2, q: 3 }, 24), (KnotFamily::Figure8, 24), (KnotFamily::FiveTwo, 24)] {
        let k = builtin_knot(f, n).unwrap();
        let base = knot_signature(&k, 0).unwrap();
        let p = perturb_to_generic(&k, 1e-3 * k.min_edge_length(), 5, &tol()).unwrap();
        assert_eq!(knot_signature(&p, 1).unwrap(), base);
        let iso = Isometry3::from_parts(
            Translation3::new(3.0, -1.0, 2.0),
            UnitQuaternion::from_euler_angles(0.3, -1.1, 2.0),
        );
        assert_eq!(knot_signature(&k.transformed(&iso), 2).unwrap(), base);
    }
}

#[test]
fn json_round_trip() {
    let k = builtin_knot(KnotFamily::HexagonalTrefoil, 6).unwrap();
    let s = knot_to_json(&k);
    let back = knot_from_json(&s, &tol()).unwrap();
    assert_eq!(back.vertices(), k.vertices());
    assert_eq!(back.name(), k.name());
    assert_eq!(back.unknotting_number(), Some(1));
    assert!(knot_from_json(r#"{"vertices": [[0,0,0],[1,0,0]]}"#, &tol()).is_err());
}
