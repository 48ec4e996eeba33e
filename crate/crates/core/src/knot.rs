//! Polygonal knots, edge-local points and arcs, genericity checks, perturbation
//! and built-in families.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::Isometry3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom3::{quadric_through_lines, segment_distance, Point3, Vec3};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Error)]
pub enum KnotError {
    #[error("a polygonal knot needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge {0} has zero length")]
    ZeroLengthEdge(usize),
    #[error("edges {0} and {1} intersect or touch")]
    NotEmbedded(usize, usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("unknown knot family `{0}`")]
    UnknownFamily(String),
    #[error("cannot perturb to a generic knot: {0}")]
    CannotPerturb(String),
    #[error("family {family} needs at least {min} vertices")]
    FamilyTooFewVertices { family: String, min: usize },
    #[error("sampled polygon does not have the expected knot type ({0})")]
    WrongKnotType(String),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// A point on the knot addressed by edge and edge parameter `t ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotPoint {
    pub edge: usize,
    pub t: f64,
    pub point: Point3,
}

/// Closed oriented polygon. Edge `i` runs from vertex `i` to vertex `i + 1 mod n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonalKnot {
    vertices: Vec<Point3>,
    name: Option<String>,
    unknotting_number: Option<u32>,
    cumulative: Vec<f64>,
}

impl PolygonalKnot {
    /// Builds and validates a knot; `tol` is the unit-scene tolerance policy.
    pub fn new(vertices: Vec<Point3>, tol: &ToleranceConfig) -> Result<Self, KnotError> {
        let k = Self::new_unchecked(vertices)?;
        k.validate(tol)?;
        Ok(k)
    }

    /// Builds a knot checking only vertex count, finiteness and edge lengths.
    pub fn new_unchecked(vertices: Vec<Point3>) -> Result<Self, KnotError> {
        let n = vertices.len();
        if n < 3 {
            return Err(KnotError::TooFewVertices(n));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
                return Err(KnotError::NonFinite(i));
            }
        }
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(0.0);
        for i in 0..n {
            let l = (vertices[(i + 1) % n] - vertices[i]).norm();
            if !(l > 0.0) {
                return Err(KnotError::ZeroLengthEdge(i));
            }
            cumulative.push(cumulative[i] + l);
        }
        Ok(Self { vertices, name: None, unknotting_number: None, cumulative })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_unknotting_number(mut self, u: Option<u32>) -> Self {
        self.unknotting_number = u;
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn unknotting_number(&self) -> Option<u32> {
        self.unknotting_number
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point3 {
        self.vertices[i % self.n()]
    }

    pub fn edge(&self, i: usize) -> (Point3, Point3) {
        let n = self.n();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edge_vector(&self, i: usize) -> Vec3 {
        let (a, b) = self.edge(i);
        b - a
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        let i = i % self.n();
        self.cumulative[i + 1] - self.cumulative[i]
    }

    pub fn total_length(&self) -> f64 {
        self.cumulative[self.n()]
    }

    pub fn min_edge_length(&self) -> f64 {
        (0..self.n()).map(|i| self.edge_length(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                d = d.max((self.vertices[i] - self.vertices[j]).norm());
            }
        }
        d
    }

    /// Tolerance policy with length tolerances scaled to this knot.
    pub fn tolerance(&self, base: &ToleranceConfig) -> ToleranceConfig {
        base.scaled(self.diameter())
    }

    pub fn edges_adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.n();
        let (i, j) = (i % n, j % n);
        i == j || (i + 1) % n == j || (j + 1) % n == i
    }

    pub fn point(&self, edge: usize, t: f64) -> KnotPoint {
        let n = self.n();
        let mut e = edge % n;
        let mut t = t;
        if t >= 1.0 {
            e = (e + 1) % n;
            t = 0.0;
        }
        let t = t.max(0.0);
        let (a, b) = self.edge(e);
        KnotPoint { edge: e, t, point: a + (b - a) * t }
    }

    pub fn arclength_of(&self, p: &KnotPoint) -> f64 {
        self.cumulative[p.edge] + p.t * self.edge_length(p.edge)
    }

    pub fn point_at_arclength(&self, s: f64) -> KnotPoint {
        let total = self.total_length();
        let s = s.rem_euclid(total);
        let e = match self.cumulative.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(self.n() - 1),
            Err(i) => i - 1,
        };
        self.point(e, (s - self.cumulative[e]) / self.edge_length(e))
    }

    /// True when `a` and `b` lie on a common closed edge (the Δ̃ exclusion).
    pub fn share_closed_edge(&self, a: &KnotPoint, b: &KnotPoint, tol_param: f64) -> bool {
        let n = self.n();
        let closed = |p: &KnotPoint| -> (usize, Option<usize>) {
            if p.t <= tol_param {
                (p.edge, Some((p.edge + n - 1) % n))
            } else if p.t >= 1.0 - tol_param {
                (p.edge, Some((p.edge + 1) % n))
            } else {
                (p.edge, None)
            }
        };
        let (ea, xa) = closed(a);
        let (eb, xb) = closed(b);
        let sa = [Some(ea), xa];
        let sb = [Some(eb), xb];
        sa.iter().flatten().any(|e| sb.iter().flatten().any(|f| e == f))
    }

    pub fn transformed(&self, iso: &Isometry3<f64>) -> Self {
        let v = self.vertices.iter().map(|p| iso.transform_point(p)).collect();
        Self::new_unchecked(v).expect("rigid motion keeps edges").relabel(self)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let v = self.vertices.iter().map(|p| Point3::from(p.coords * factor)).collect();
        Self::new_unchecked(v).expect("positive scale keeps edges").relabel(self)
    }

    fn relabel(mut self, from: &Self) -> Self {
        self.name = from.name.clone();
        self.unknotting_number = from.unknotting_number;
        self
    }

    /// Checks edge lengths and embeddedness against the scaled policy.
    pub fn validate(&self, tol: &ToleranceConfig) -> Result<(), KnotError> {
        let t = self.tolerance(tol);
        let n = self.n();
        for i in 0..n {
            if self.edge_length(i) <= t.tol_len {
                return Err(KnotError::ZeroLengthEdge(i));
            }
        }
        for i in 0..n {
            let (a0, a1) = self.edge(i);
            for j in (i + 1)..n {
                let (b0, b1) = self.edge(j);
                if self.edges_adjacent(i, j) {
                    // adjacent edges only fail by folding back onto each other
                    let (far_a, far_b, shared) = if (i + 1) % n == j { (a0, b1, a1) } else { (a1, b0, a0) };
                    let u = (far_a - shared).normalize();
                    let v = (far_b - shared).normalize();
                    if n == 3 {
                        continue;
                    }
                    if u.dot(&v) > 1.0 - 1e-15 {
                        return Err(KnotError::NotEmbedded(i, j));
                    }
                    continue;
                }
                if segment_distance(&a0, &a1, &b0, &b1).0 <= t.tol_embed {
                    return Err(KnotError::NotEmbedded(i, j));
                }
            }
        }
        Ok(())
    }

    /// Smallest distance between non-adjacent edges.
    pub fn min_nonadjacent_gap(&self) -> f64 {
        let n = self.n();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let (a0, a1) = self.edge(i);
            for j in (i + 2)..n {
                if self.edges_adjacent(i, j) {
                    continue;
                }
                let (b0, b1) = self.edge(j);
                best = best.min(segment_distance(&a0, &a1, &b0, &b1).0);
            }
        }
        best
    }
}

/// Oriented sub-arc of the knot from `start` to `end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: KnotPoint,
    pub end: KnotPoint,
}

impl Arc {
    pub fn length(&self, k: &PolygonalKnot) -> f64 {
        arc_length(k, &self.start, &self.end)
    }

    /// Vertices of the arc as a polyline, endpoints included.
    pub fn polyline(&self, k: &PolygonalKnot) -> Vec<Point3> {
        let n = k.n();
        let mut out = vec![self.start.point];
        if arc_length(k, &self.start, &self.end) == 0.0 {
            return out;
        }
        let same_edge_forward = self.start.edge == self.end.edge && self.end.t > self.start.t;
        if !same_edge_forward {
            let mut e = (self.start.edge + 1) % n;
            loop {
                out.push(k.vertex(e));
                if e == self.end.edge {
                    break;
                }
                e = (e + 1) % n;
            }
        }
        if self.end.t > 0.0 || same_edge_forward {
            out.push(self.end.point);
        }
        out
    }
}

/// Length along the orientation from `a` to `b`.
pub fn arc_length(k: &PolygonalKnot, a: &KnotPoint, b: &KnotPoint) -> f64 {
    let sa = k.arclength_of(a);
    let sb = k.arclength_of(b);
    if sb >= sa {
        sb - sa
    } else {
        k.total_length() - sa + sb
    }
}

/// Violations of genericity. Lists keep at most [`REPORT_CAP`] witnesses; the
/// `*_total` fields carry the full counts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub coplanar_quadruples: Vec<[usize; 4]>,
    pub collinear_triples: Vec<[usize; 3]>,
    /// `[i, j, k, e]`: edge `e` lies on the quadric through edges `i, j, k`.
    pub quadric_violations: Vec<[usize; 4]>,
    /// Edge lists of lines meeting the knot in five or more components.
    pub n_secant_excess: Vec<Vec<usize>>,
    pub coplanar_total: usize,
    pub collinear_total: usize,
    pub quadric_total: usize,
    pub n_secant_total: usize,
    pub is_generic: bool,
}

pub const REPORT_CAP: usize = 256;

fn capped<T: Clone>(v: &[T]) -> Vec<T> {
    v.iter().take(REPORT_CAP).cloned().collect()
}

fn vertex_checks(k: &PolygonalKnot, tol: &ToleranceConfig) -> (Vec<[usize; 4]>, Vec<[usize; 3]>) {
    let n = k.n();
    let v = k.vertices();
    let collinear: Vec<[usize; 3]> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in (i + 1)..n {
                for l in (j + 1)..n {
                    let a = v[j] - v[i];
                    let b = v[l] - v[i];
                    if a.cross(&b).norm() <= tol.tol_dir * a.norm() * b.norm() {
                        out.push([i, j, l]);
                    }
                }
            }
            out
        })
        .collect();
    let coplanar: Vec<[usize; 4]> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in (i + 1)..n {
                let a = v[j] - v[i];
                for l in (j + 1)..n {
                    let b = v[l] - v[i];
                    let ab = a.cross(&b);
                    for m in (l + 1)..n {
                        let c = v[m] - v[i];
                        let scale = a.norm() * b.norm() * c.norm();
                        if ab.dot(&c).abs() <= tol.tol_dir * scale {
                            out.push([i, j, l, m]);
                        }
                    }
                }
            }
            out
        })
        .collect();
    (coplanar, collinear)
}

fn quadric_checks(k: &PolygonalKnot, tol: &ToleranceConfig) -> Vec<[usize; 4]> {
    let n = k.n();
    let scale = k.diameter();
    let lines: Vec<_> = (0..n).map(|i| crate::geom3::OrientedLine::through(&k.edge(i).0, &k.edge(i).1).unwrap()).collect();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in (i + 1)..n {
                if k.edges_adjacent(i, j) {
                    continue;
                }
                for l in (j + 1)..n {
                    if k.edges_adjacent(i, l) || k.edges_adjacent(j, l) {
                        continue;
                    }
                    let Ok(q) = quadric_through_lines(&lines[i], &lines[j], &lines[l], tol) else {
                        continue;
                    };
                    for e in 0..n {
                        if e == i || e == j || e == l {
                            continue;
                        }
                        let (a, b) = k.edge(e);
                        let on = [a, Point3::from((a.coords + b.coords) / 2.0), b]
                            .iter()
                            .all(|p| q.surface_distance(p) <= tol.tol_contained * scale);
                        if on {
                            out.push([i, j, l, e]);
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// Vertex-configuration and quadric-containment conditions only.
pub fn check_static_genericity(k: &PolygonalKnot, tol: &ToleranceConfig) -> GenericityReport {
    let t = k.tolerance(tol);
    let (coplanar, collinear) = vertex_checks(k, &t);
    let quadric = quadric_checks(k, &t);
    GenericityReport {
        coplanar_quadruples: capped(&coplanar),
        collinear_triples: capped(&collinear),
        quadric_violations: capped(&quadric),
        n_secant_excess: Vec::new(),
        coplanar_total: coplanar.len(),
        collinear_total: collinear.len(),
        quadric_total: quadric.len(),
        n_secant_total: 0,
        is_generic: coplanar.is_empty() && collinear.is_empty() && quadric.is_empty(),
    }
}

/// Full genericity check. The five-secant scan runs only when the static
/// conditions hold, since enumeration presupposes them.
pub fn check_genericity(k: &PolygonalKnot, tol: &ToleranceConfig) -> GenericityReport {
    let mut r = check_static_genericity(k, tol);
    if r.is_generic {
        let five = crate::secants::five_secant_witnesses(k, tol);
        r.n_secant_total = five.len();
        r.n_secant_excess = capped(&five);
        r.is_generic = five.is_empty();
    }
    r
}

pub const MAX_PERTURB_RETRIES: usize = 16;

/// Seeded random vertex displacement of length at most `magnitude`, retried
/// until the result is generic. The displacement is small enough that no edge
/// sweeps through another, so the knot type is preserved.
pub fn perturb_to_generic(
    k: &PolygonalKnot,
    magnitude: f64,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<PolygonalKnot, KnotError> {
    if magnitude == 0.0 {
        return if check_genericity(k, tol).is_generic {
            Ok(k.clone())
        } else {
            Err(KnotError::CannotPerturb("knot is not generic and magnitude is 0".into()))
        };
    }
    if !(magnitude > 0.0) || magnitude >= k.min_edge_length() / 10.0 {
        return Err(KnotError::CannotPerturb(format!(
            "magnitude {magnitude} must be positive and below a tenth of the shortest edge ({})",
            k.min_edge_length()
        )));
    }
    if k.min_nonadjacent_gap() <= 2.0 * magnitude {
        return Err(KnotError::CannotPerturb("knot too tight for an isotopic perturbation".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_PERTURB_RETRIES {
        let v: Vec<Point3> = k
            .vertices()
            .iter()
            .map(|p| {
                let d = loop {
                    let d = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    if d.norm_squared() <= 1.0 {
                        break d;
                    }
                };
                p + d * magnitude
            })
            .collect();
        let Ok(cand) = PolygonalKnot::new(v, tol) else {
            continue;
        };
        let cand = cand.relabel(k);
        if check_genericity(&cand, tol).is_generic {
            return Ok(cand);
        }
    }
    Err(KnotError::CannotPerturb(format!("no generic perturbation in {MAX_PERTURB_RETRIES} attempts")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum KnotFamily {
    RoundCircle,
    Torus { p: u32, q: u32 },
    HexagonalTrefoil,
    Figure8,
    FiveTwo,
}

impl KnotFamily {
    pub fn parse(s: &str) -> Result<Self, KnotError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("torus") {
            let rest = rest.trim_start_matches([':', '(']).trim_end_matches(')');
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if let [p, q] = parts.as_slice() {
                if let (Ok(p), Ok(q)) = (p.parse::<u32>(), q.parse::<u32>()) {
                    if p >= 2 && q >= 2 && gcd(p, q) == 1 {
                        return Ok(KnotFamily::Torus { p, q });
                    }
                }
            }
            return Err(KnotError::UnknownFamily(s.into()));
        }
        match s {
            "round_circle" | "circle" | "unknot" => Ok(KnotFamily::RoundCircle),
            "hexagonal_trefoil" => Ok(KnotFamily::HexagonalTrefoil),
            "figure8" | "figure8_sampled" | "4_1" => Ok(KnotFamily::Figure8),
            "five_two" | "5_2" => Ok(KnotFamily::FiveTwo),
            "trefoil" | "3_1" => Ok(KnotFamily::Torus { p: 2, q: 3 }),
            "5_1" => Ok(KnotFamily::Torus { p: 2, q: 5 }),
            _ => Err(KnotError::UnknownFamily(s.into())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            KnotFamily::RoundCircle => "round_circle".into(),
            KnotFamily::Torus { p, q } => format!("torus({p},{q})"),
            KnotFamily::HexagonalTrefoil => "hexagonal_trefoil".into(),
            KnotFamily::Figure8 => "figure8".into(),
            KnotFamily::FiveTwo => "five_two".into(),
        }
    }

    /// Unknotting number where it is classical: torus knots (p−1)(q−1)/2,
    /// 4_1 and 5_2 both 1.
    pub fn unknotting_number(&self) -> u32 {
        match self {
            KnotFamily::RoundCircle => 0,
            KnotFamily::Torus { p, q } => (p - 1) * (q - 1) / 2,
            KnotFamily::HexagonalTrefoil | KnotFamily::Figure8 | KnotFamily::FiveTwo => 1,
        }
    }

    pub fn min_vertices(&self) -> usize {
        match self {
            KnotFamily::RoundCircle => 3,
            KnotFamily::Torus { p, q } => 2 * (*p).max(*q) as usize + 2,
            KnotFamily::HexagonalTrefoil => 6,
            KnotFamily::Figure8 => 12,
            KnotFamily::FiveTwo => 16,
        }
    }

    pub fn curve(&self, s: f64) -> Point3 {
        match *self {
            KnotFamily::RoundCircle => Point3::new(s.cos(), s.sin(), 0.0),
            KnotFamily::Torus { p, q } => torus_point(p as f64, q as f64, s),
            KnotFamily::HexagonalTrefoil => torus_point(2.0, 3.0, s),
            KnotFamily::Figure8 => {
                let r = 2.0 + (2.0 * s).cos();
                Point3::new(r * (3.0 * s).cos(), r * (3.0 * s).sin(), (4.0 * s).sin())
            }
            KnotFamily::FiveTwo => {
                let (nx, ny, nz) = FIVE_TWO_FREQ;
                let (px, py) = FIVE_TWO_PHASE;
                Point3::new((nx * s + px).cos(), (ny * s + py).cos(), (nz * s).cos())
            }
        }
    }
}

fn torus_point(p: f64, q: f64, s: f64) -> Point3 {
    let r = 2.0 + (q * s).cos();
    Point3::new(r * (p * s).cos(), r * (p * s).sin(), (q * s).sin())
}

/// Lissajous frequencies and phases of the 5_2 sample.
pub const FIVE_TWO_FREQ: (f64, f64, f64) = (3.0, 2.0, 7.0);
pub const FIVE_TWO_PHASE: (f64, f64) = (0.7, 0.2);

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Six vertices of the stick trefoil: two vertices and their images under
/// rotations by 240° and 480° about the z-axis, winding twice around it.
pub fn hexagonal_trefoil_vertices() -> Vec<Point3> {
    let phi = 100f64.to_radians();
    let base = [Point3::new(3.0, 0.0, 1.0), Point3::new(2.0 * phi.cos(), 2.0 * phi.sin(), -1.0)];
    (0..3)
        .flat_map(|j| {
            let a = 4.0 * PI * j as f64 / 3.0;
            base.map(|p| Point3::new(a.cos() * p.x - a.sin() * p.y, a.sin() * p.x + a.cos() * p.y, p.z))
        })
        .collect()
}

/// Uniform parameter samples of the family's curve, with the knot type checked
/// against the expected Alexander determinant.
pub fn builtin_knot(family: KnotFamily, n_vertices: usize) -> Result<PolygonalKnot, KnotError> {
    let n = if family == KnotFamily::HexagonalTrefoil { 6 } else { n_vertices };
    if n < family.min_vertices() {
        return Err(KnotError::FamilyTooFewVertices { family: family.label(), min: family.min_vertices() });
    }
    let vertices: Vec<Point3> = if family == KnotFamily::HexagonalTrefoil {
        hexagonal_trefoil_vertices()
    } else {
        (0..n).map(|i| family.curve(2.0 * PI * i as f64 / n as f64)).collect()
    };
    let k = PolygonalKnot::new(vertices, &ToleranceConfig::default())?
        .with_name(family.label())
        .with_unknotting_number(Some(family.unknotting_number()));
    let expected = crate::topology::expected_determinant(&family);
    let sig = crate::topology::knot_signature(&k, 0)
        .map_err(|e| KnotError::WrongKnotType(format!("signature failed: {e}")))?;
    if sig.determinant != expected {
        return Err(KnotError::WrongKnotType(format!(
            "{} with {n} vertices has determinant {}, expected {expected}",
            family.label(),
            sig.determinant
        )));
    }
    Ok(k)
}

#[derive(Serialize, Deserialize)]
struct KnotFile {
    #[serde(default)]
    schema: Option<u32>,
    #[serde(default)]
    name: Option<String>,
    vertices: Vec<[f64; 3]>,
    #[serde(default)]
    unknotting_number: Option<u32>,
}

pub fn knot_from_json(s: &str, tol: &ToleranceConfig) -> Result<PolygonalKnot, KnotError> {
    let f: KnotFile = serde_json::from_str(s)?;
    if let Some(v) = f.schema {
        if v != 1 {
            return Err(KnotError::Schema(v));
        }
    }
    let verts = f.vertices.iter().map(|v| Point3::new(v[0], v[1], v[2])).collect();
    let mut k = PolygonalKnot::new(verts, tol)?.with_unknotting_number(f.unknotting_number);
    k.name = f.name;
    Ok(k)
}

pub fn knot_to_json(k: &PolygonalKnot) -> String {
    let f = KnotFile {
        schema: Some(1),
        name: k.name.clone(),
        vertices: k.vertices.iter().map(|p| [p.x, p.y, p.z]).collect(),
        unknotting_number: k.unknotting_number,
    };
    serde_json::to_string_pretty(&f).expect("knot serializes")
}

pub fn load_knot(path: &Path, tol: &ToleranceConfig) -> Result<PolygonalKnot, KnotError> {
    knot_from_json(&std::fs::read_to_string(path)?, tol)
}

pub fn save_knot(k: &PolygonalKnot, path: &Path) -> Result<(), KnotError> {
    std::fs::write(path, knot_to_json(k) + "\n")?;
    Ok(())
}
