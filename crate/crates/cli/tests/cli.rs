use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn quadsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadsec")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn write_knot(dir: &Path, name: &str, pts: &[[f64; 3]]) -> String {
    let path = dir.join(name);
    let body = serde_json::json!({ "schema": 1, "vertices": pts });
    std::fs::write(&path, body.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn convex_polygon(n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|i| {
            let s = TAU * i as f64 / n as f64;
            [2.0 * s.cos(), s.sin(), 0.0]
        })
        .collect()
}

#[test]
fn bounds_table() {
    let v = stdout_json(&quadsec(&["bounds"]));
    assert_eq!(v["schema"], 1);
    let b = v["bounds"].as_array().unwrap();
    let val = |i: usize| b[i]["value"].as_f64().unwrap();
    let s3 = 3f64.sqrt();
    let pi = std::f64::consts::PI;
    assert_eq!(b[0]["kind"], "simple");
    assert!((val(0) - (10.0 * pi / 3.0 + 2.0 * s3 + 2.0)).abs() < 1e-4);
    assert!((val(1) - (10.0 * pi / 3.0 + 2.0 * s3)).abs() < 1e-4);
    assert!((15.66..=15.67).contains(&val(2)));

    let csv = quadsec(&["bounds", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 4);
    let grid = quadsec(&["bounds", "--grid", "10"]);
    assert_eq!(String::from_utf8(grid.stdout).unwrap().lines().count(), 12);
    assert_eq!(quadsec(&["bounds", "--kind", "bogus"]).status.code(), Some(3));
}

#[test]
fn hexagonal_trefoil_quadrisecants() {
    let v = stdout_json(&quadsec(&["quadrisecants", "--builtin", "hexagonal_trefoil", "--perturb", "1e-3", "--seed", "2"]));
    assert_eq!(v["count"], 3);
    assert_eq!(v["upper_bound"], 3);
    assert_eq!(v["pannwitz_floor"], true);
    for q in v["quadrisecants"].as_array().unwrap() {
        assert_eq!(q["class"], "alternating");
        assert_eq!(q["essential"], "certified");
    }
}

#[test]
fn quadrisecants_csv_output() {
    let o = quadsec(&["quadrisecants", "--builtin", "trefoil", "-n", "24", "--perturb", "1e-3", "--format", "csv", "--no-essential"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() >= 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(quadsec(&["quadrisecants", bad.to_str().unwrap()]).status.code(), Some(3));

    let crossing = write_knot(dir.path(), "crossing.json", &[[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
    assert_eq!(quadsec(&["quadrisecants", &crossing]).status.code(), Some(3));

    let planar = write_knot(dir.path(), "planar.json", &convex_polygon(8));
    let o = quadsec(&["quadrisecants", &planar]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--perturb"));
    let v = stdout_json(&quadsec(&["quadrisecants", &planar, "--perturb", "1e-3"]));
    assert_eq!(v["count"], 0);

    let out = dir.path().join("approx");
    let o = quadsec(&["approx", &planar, "--perturb", "1e-3", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));

    assert_eq!(quadsec(&["measures", "--builtin", "nonsense"]).status.code(), Some(3));
    assert_eq!(quadsec(&["bounds", "--tol-line", "-1"]).status.code(), Some(3));
}

#[test]
fn approximation_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hex");
    let v = stdout_json(&quadsec(&[
        "approx",
        "--builtin",
        "hexagonal_trefoil",
        "--perturb",
        "1e-3",
        "--out-dir",
        out.to_str().unwrap(),
    ]));
    assert_eq!(v["embedded"], true);
    assert_eq!(v["same_signature"], true);
    assert_eq!(v["same_quadrisecant_set"], true);
    assert_eq!(v["approx_signature"]["determinant"], 3);
    let verdict: Value = serde_json::from_str(&std::fs::read_to_string(out.join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict, v);
    let approx = out.join("approximation.json");
    let q = stdout_json(&quadsec(&["quadrisecants", approx.to_str().unwrap(), "--perturb", "1e-2", "--no-essential"]));
    assert!(q["count"].as_u64().unwrap() >= 2);
}

#[test]
fn circle_measures() {
    let v = stdout_json(&quadsec(&["measures", "--builtin", "circle", "-n", "256"]));
    assert!((v["total_curvature"].as_f64().unwrap() - TAU).abs() < 1e-9);
    let lo = v["distortion"]["lo"].as_f64().unwrap();
    let hi = v["distortion"]["hi"].as_f64().unwrap();
    assert!(lo <= FRAC_PI_2 && FRAC_PI_2 <= hi && hi - lo < 0.02);
    assert_eq!(v["superbridge_estimate"], 1);
    let csv = quadsec(&["measures", "--builtin", "circle", "-n", "64", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("measure,value\n"));
}

fn parse_obj(text: &str) -> (usize, Vec<Vec<usize>>) {
    let mut nv = 0;
    let mut lines = Vec::new();
    for l in text.lines() {
        let mut it = l.split_whitespace();
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it.map(|x| x.parse().unwrap()).collect();
                assert_eq!(c.len(), 3);
                nv += 1;
            }
            Some("l") => lines.push(it.map(|x| x.parse().unwrap()).collect()),
            Some("g") | Some("#") | None => {}
            Some(other) => panic!("unexpected record {other}"),
        }
    }
    (nv, lines)
}

#[test]
fn obj_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.obj");
    let o = quadsec(&["export", "--builtin", "hexagonal_trefoil", "--perturb", "1e-3", "--theta", "--export", path.to_str().unwrap()]);
    assert!(o.status.success());
    let (nv, lines) = parse_obj(&std::fs::read_to_string(&path).unwrap());
    assert!(lines.len() >= 1 + 3);
    assert_eq!(lines[0].len(), 7);
    assert!(lines.iter().flatten().all(|&i| i >= 1 && i <= nv));

    let ply = dir.path().join("scene.ply");
    let o = quadsec(&["export", "--builtin", "trefoil", "-n", "24", "--perturb", "1e-3", "--export", ply.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&ply).unwrap().starts_with("ply\n"));

    let side = dir.path().join("side.obj");
    let o = quadsec(&["quadrisecants", "--builtin", "trefoil", "-n", "24", "--perturb", "1e-3", "--no-essential", "--export", side.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(side.exists());
}

#[test]
fn reports_are_deterministic() {
    let args = ["quadrisecants", "--builtin", "figure8", "-n", "24", "--perturb", "1e-3", "--seed", "9"];
    let a = quadsec(&args);
    let b = quadsec(&[&args[..], &["--threads", "1"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let m1 = quadsec(&["measures", "--builtin", "trefoil", "-n", "48"]);
    let m2 = quadsec(&["measures", "--builtin", "trefoil", "-n", "48", "--threads", "2"]);
    assert_eq!(m1.stdout, m2.stdout);
}

#[test]
fn generated_knots_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let o = quadsec(&["generate", "torus(2,5)", "-n", "40", "--perturb", "1e-3", "--seed", "4", "-o", first.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&first).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["unknotting_number"], 2);

    // quadrisecants on the file equal quadrisecants on the builtin with the same perturbation
    let from_file = quadsec(&["quadrisecants", first.to_str().unwrap(), "--no-essential"]);
    let from_builtin = quadsec(&["quadrisecants", "--builtin", "torus(2,5)", "-n", "40", "--perturb", "1e-3", "--seed", "4", "--no-essential"]);
    assert_eq!(from_file.stdout, from_builtin.stdout);
}
