//! Θ-graphs over secants, zero-linking parallel loops and essentiality
//! certificates.

use std::f64::consts::{FRAC_PI_8, PI, TAU};

use nalgebra::{Rotation3, Unit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::alexander::KnotDiagram;
use super::diagram::{directions, random_direction, Projection};
use super::groups::{default_groups, FiniteGroup};
use super::wirtinger::{eval_word, find_homs, loop_word, QuotientWitness, SearchBudget, WirtingerPresentation};
use super::{linking_number, min_distance, TopologyError};
use crate::geom3::{any_perpendicular, segment_distance, Point3, Vec3};
use crate::knot::{Arc, KnotPoint, PolygonalKnot};
use crate::secants::{Essentiality, Quadrisecant};
use crate::tolerance::ToleranceConfig;

const DETOUR_RETRIES: usize = 16;
const OFFSET_RETRIES: usize = 6;
const UNKNOT_DIRECTIONS: usize = 64;
const CACHED_DIAGRAMS: usize = 3;

/// Arcs `alpha` (along the knot from `a` to `b`), `beta` (from `a` to `b`
/// off the knot) and `gamma` (along the knot from `b` to `a`).
#[derive(Clone, Debug)]
pub struct ThetaGraph {
    pub a: KnotPoint,
    pub b: KnotPoint,
    pub alpha: Vec<Point3>,
    pub beta: Vec<Point3>,
    pub gamma: Vec<Point3>,
    pub straight: bool,
}

/// Knot edges containing `p`, split at `p` into rays given by their far ends.
fn incident_pieces(k: &PolygonalKnot, p: &KnotPoint, tol_param: f64) -> (Vec<usize>, Vec<Point3>) {
    let n = k.n();
    let mut edges = vec![p.edge];
    if p.t <= tol_param {
        edges.push((p.edge + n - 1) % n);
    }
    if p.t >= 1.0 - tol_param {
        edges.push((p.edge + 1) % n);
    }
    let mut ends = Vec::new();
    for &e in &edges {
        let (v0, v1) = k.edge(e);
        for v in [v0, v1] {
            if (v - p.point).norm() > 1e-12 * k.diameter() {
                ends.push(v);
            }
        }
    }
    (edges, ends)
}

/// True when the polyline `path` from `a` to `b` meets the knot only at its
/// endpoints, with clearance `tol_embed` elsewhere.
fn path_is_clear(k: &PolygonalKnot, a: &KnotPoint, b: &KnotPoint, path: &[Point3], tol: &ToleranceConfig) -> bool {
    let (ea, ends_a) = incident_pieces(k, a, tol.tol_param);
    let (eb, ends_b) = incident_pieces(k, b, tol.tol_param);
    let m = path.len() - 1;
    for s in 0..m {
        let (p0, p1) = (path[s], path[s + 1]);
        for e in 0..k.n() {
            let at_a = s == 0 && ea.contains(&e);
            let at_b = s == m - 1 && eb.contains(&e);
            if at_a || at_b {
                continue;
            }
            let (q0, q1) = k.edge(e);
            if segment_distance(&p0, &p1, &q0, &q1).0 <= tol.tol_embed {
                return false;
            }
        }
    }
    // incident pieces may only touch the path at the shared endpoint
    let transverse = |from: &Point3, dir: Vec3, ends: &[Point3]| {
        ends.iter().all(|v| {
            let u = (v - from).normalize();
            u.cross(&dir).norm() > 1e-7 || u.dot(&dir) < 0.0
        })
    };
    let w0 = (path[1] - path[0]).normalize();
    let w1 = (path[m - 1] - path[m]).normalize();
    if !transverse(&path[0], w0, &ends_a) || !transverse(&path[m], w1, &ends_b) {
        return false;
    }
    // pieces at `a` against later path segments and vice versa
    for (from, ends, skip) in [(path[0], &ends_a, 0usize), (path[m], &ends_b, m - 1)] {
        for v in ends.iter() {
            for s in 0..m {
                if s == skip {
                    continue;
                }
                if segment_distance(&from, v, &path[s], &path[s + 1]).0 <= tol.tol_embed {
                    return false;
                }
            }
        }
    }
    true
}

pub fn build_theta(
    k: &PolygonalKnot,
    a: &KnotPoint,
    b: &KnotPoint,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ThetaGraph, TopologyError> {
    let t = k.tolerance(tol);
    let chord = (b.point - a.point).norm();
    if chord <= t.tol_len || k.share_closed_edge(a, b, t.tol_param) {
        return Err(TopologyError::InvalidSecant("endpoints share a closed edge".into()));
    }
    let alpha = Arc { start: *a, end: *b }.polyline(k);
    let gamma = Arc { start: *b, end: *a }.polyline(k);
    let straight = vec![a.point, b.point];
    if path_is_clear(k, a, b, &straight, &t) {
        return Ok(ThetaGraph { a: *a, b: *b, alpha, beta: straight, gamma, straight: true });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb37a);
    let axis = (b.point - a.point) / chord;
    let mid = Point3::from((a.point.coords + b.point.coords) * 0.5);
    for attempt in 0..DETOUR_RETRIES {
        let r = random_direction(&mut rng);
        let off = r - axis * r.dot(&axis);
        if off.norm() < 1e-3 {
            continue;
        }
        let h = 0.01 * chord * (1 + attempt) as f64 * rng.gen_range(0.5..1.0);
        let path = vec![a.point, mid + off.normalize() * h, b.point];
        if path_is_clear(k, a, b, &path, &t) {
            return Ok(ThetaGraph { a: *a, b: *b, alpha, beta: path, gamma, straight: false });
        }
    }
    Err(TopologyError::CannotEmbed(format!("{DETOUR_RETRIES} detours all meet the knot")))
}

/// Closed polyline `δ` parallel to `α ∪ β` with `lk(δ, K) = 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParallelLoop {
    pub points: Vec<Point3>,
    pub linking: i64,
    pub epsilon: f64,
    pub twists: i64,
}

struct Core {
    pts: Vec<Point3>,
    /// Number of leading edges that lie on the knot.
    alpha_edges: usize,
    /// Unit normals leaving each vertex (route from the incoming edge's end
    /// normal to the outgoing edge's start normal); `None` at straight joins.
    routes: Vec<Option<Vec<Vec3>>>,
}

fn dedup(mut pts: Vec<Point3>, eps: f64) -> Vec<Point3> {
    pts.dedup_by(|x, y| (*x - *y).norm() <= eps);
    pts
}

fn rotate(axis: &Vec3, angle: f64, v: &Vec3) -> Vec3 {
    Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle) * v
}


fn core_of(theta: &ThetaGraph, scale: f64) -> Core {
    let alpha = dedup(theta.alpha.clone(), 1e-12 * scale);
    let ib = alpha.len() - 1;
    let mut pts = alpha;
    let beta_back: Vec<Point3> = theta.beta[1..theta.beta.len() - 1].iter().rev().copied().collect();
    pts.extend(beta_back);
    let m = pts.len();
    let ng = theta.gamma.len();
    let forbidden = |i: usize| -> Vec<Vec3> {
        if i == 0 && ng >= 2 {
            vec![(theta.gamma[ng - 2] - pts[0]).normalize()]
        } else if i == ib && ng >= 2 {
            vec![(theta.gamma[1] - pts[ib]).normalize()]
        } else {
            vec![]
        }
    };
    let routes = (0..m)
        .map(|i| {
            let p = (pts[i] - pts[(i + m - 1) % m]).normalize();
            let q = (pts[(i + 1) % m] - pts[i]).normalize();
            let ax = p.cross(&q);
            if ax.norm() < 1e-9 && p.dot(&q) > 0.0 {
                return None;
            }
            let b = if ax.norm() < 1e-9 { any_perpendicular(&p) } else { ax.normalize() };
            let n_in = -(q - p * q.dot(&p));
            let n_in = if n_in.norm() < 1e-12 { b.cross(&p) } else { n_in.normalize() };
            let f = forbidden(i);
            if !f.is_empty() {
                // at the ends of the secant the knot continues on the outer
                // side, so leave along the binormal facing away from it
                let away = |v: Vec3| f.iter().map(|g| v.dot(g).clamp(-1.0, 1.0).acos()).fold(PI, f64::min);
                return Some(vec![if away(b) >= away(-b) { b } else { -b }]);
            }
            let theta_ang = p.dot(&q).clamp(-1.0, 1.0).acos();
            let mut outer = vec![n_in];
            let steps = (theta_ang / FRAC_PI_8).ceil().max(1.0) as usize;
            for s in 1..=steps {
                outer.push(rotate(&b, theta_ang * s as f64 / steps as f64, &n_in));
            }
            Some(outer)
        })
        .collect();
    Core { pts, alpha_edges: ib, routes }
}


fn offset_loop(core: &Core, eps: f64, twist_edge: usize, twists: i64) -> Vec<Point3> {
    let pts = &core.pts;
    let m = pts.len();
    let dir = |j: usize| (pts[(j + 1) % m] - pts[j]).normalize();
    let start = core.routes.iter().position(|r| r.is_some()).expect("closed polygon has a corner");
    let mut s_norm = vec![Vec3::zeros(); m];
    let mut e_norm = vec![Vec3::zeros(); m];
    for step in 0..m {
        let j = (start + step) % m;
        let d = dir(j);
        s_norm[j] = match &core.routes[j] {
            Some(r) => *r.last().unwrap(),
            None => {
                let prev = e_norm[(j + m - 1) % m];
                (prev - d * prev.dot(&d)).normalize()
            }
        };
        e_norm[j] = match &core.routes[(j + 1) % m] {
            Some(r) => r[0],
            None => s_norm[j],
        };
    }
    let mut out = Vec::new();
    for j in 0..m {
        match &core.routes[j] {
            Some(r) => out.extend(r.iter().map(|v| pts[j] + v * eps)),
            None => out.push(pts[j] + s_norm[j] * eps),
        }
        let d = dir(j);
        let (s, e) = (s_norm[j], e_norm[j]);
        let mut phi = d.dot(&s.cross(&e)).atan2(s.dot(&e));
        if j == twist_edge {
            phi += TAU * twists as f64;
        }
        let steps = (phi.abs() / FRAC_PI_8).ceil().max(1.0) as usize;
        let seg = pts[(j + 1) % m] - pts[j];
        for i in 1..steps {
            let t = i as f64 / steps as f64;
            out.push(pts[j] + seg * t + rotate(&d, phi * t, &s) * eps);
        }
    }
    out
}

/// Builds `δ`, shrinking the offset on collisions and adding twists about the
/// longest knot edge of `α` until the linking number with the knot vanishes.
pub fn parallel_with_zero_linking(
    k: &PolygonalKnot,
    theta: &ThetaGraph,
    seed: u64,
) -> Result<ParallelLoop, TopologyError> {
    let scale = k.diameter();
    let core = core_of(theta, scale);
    let m = core.pts.len();
    let min_edge = (0..m).map(|j| (core.pts[(j + 1) % m] - core.pts[j]).norm()).fold(f64::INFINITY, f64::min);
    let mut feature = min_edge.min(k.min_nonadjacent_gap()).min((theta.b.point - theta.a.point).norm());
    if theta.beta.len() > 2 {
        // clearance of a detour from the knot away from its ends
        let inner: Vec<Point3> = theta.beta[1..theta.beta.len() - 1].to_vec();
        feature = feature.min(min_distance(&inner, k.vertices()));
    }
    let twist_edge = (0..core.alpha_edges)
        .max_by(|&x, &y| {
            let lx = (core.pts[x + 1] - core.pts[x]).norm();
            let ly = (core.pts[y + 1] - core.pts[y]).norm();
            lx.partial_cmp(&ly).unwrap()
        })
        .unwrap_or(0);
    let mut eps = 0.1 * feature;
    for _ in 0..OFFSET_RETRIES {
        let d0 = offset_loop(&core, eps, twist_edge, 0);
        if min_distance(&d0, k.vertices()) < 0.3 * eps {
            eps *= 0.5;
            continue;
        }
        let lk0 = linking_number(k.vertices(), &d0, seed)?;
        let twists = if lk0 == 0 {
            0
        } else {
            let d1 = offset_loop(&core, eps, twist_edge, 1);
            let slope = linking_number(k.vertices(), &d1, seed)? - lk0;
            if slope == 0 || lk0 % slope != 0 {
                return Err(TopologyError::OffsetCollision);
            }
            -lk0 / slope
        };
        let pts = if twists == 0 { d0 } else { offset_loop(&core, eps, twist_edge, twists) };
        if min_distance(&pts, k.vertices()) < 0.3 * eps {
            eps *= 0.5;
            continue;
        }
        let linking = linking_number(k.vertices(), &pts, seed)?;
        if linking != 0 {
            return Err(TopologyError::OffsetCollision);
        }
        return Ok(ParallelLoop { points: pts, linking, epsilon: eps, twists });
    }
    Err(TopologyError::OffsetCollision)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    EssentialCertified,
    InessentialCertified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Quotient(QuotientWitness),
    /// A projection of the knot with at most two crossings.
    Unknot { direction: [f64; 3], crossings: usize },
    /// Chord shorter than the thickness.
    BallLemma { chord: f64, thickness: f64 },
    /// `α` inside the ball on diameter `ab`, `γ` outside, `α ∪ β` of total
    /// curvature below `4π`.
    Ball { radius: f64, total_curvature: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssentialityVerdict {
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
}

impl EssentialityVerdict {
    fn inconclusive() -> Self {
        Self { status: VerdictStatus::Inconclusive, witness: None }
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub seed: u64,
    /// Thickness of the knot, when known.
    pub thickness: Option<f64>,
    pub budget: SearchBudget,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { seed: 0, thickness: None, budget: SearchBudget::default() }
    }
}

struct CacheEntry {
    kd: KnotDiagram,
    homs: Vec<(usize, Vec<u16>)>,
}

/// Per-knot diagrams and non-abelian representations, shared by all loops in
/// the knot complement.
pub struct KnotGroupCache {
    vertices: Vec<Point3>,
    pub groups: Vec<FiniteGroup>,
    entries: Vec<CacheEntry>,
    pub unknot: Option<Witness>,
}

impl KnotGroupCache {
    pub fn new(k: &PolygonalKnot, seed: u64, budget: SearchBudget) -> Self {
        let vertices = k.vertices().to_vec();
        let mut diagrams: Vec<KnotDiagram> = directions(seed, UNKNOT_DIRECTIONS)
            .into_par_iter()
            .filter_map(|d| KnotDiagram::new(&vertices, Projection::new(d)).ok())
            .collect();
        diagrams.sort_by_key(|d| d.crossing_count());
        let groups = default_groups();
        let unknot = diagrams.first().filter(|d| d.crossing_count() <= 2).map(|d| Witness::Unknot {
            direction: d.diagram.proj.dir.into(),
            crossings: d.crossing_count(),
        });
        let entries = if unknot.is_some() {
            vec![]
        } else {
            diagrams
                .into_iter()
                .take(CACHED_DIAGRAMS)
                .map(|kd| {
                    let p = WirtingerPresentation::from_diagram(&kd);
                    let homs = groups
                        .par_iter()
                        .enumerate()
                        .flat_map_iter(|(gi, g)| find_homs(&p, g, budget).into_iter().map(move |h| (gi, h)))
                        .collect();
                    CacheEntry { kd, homs }
                })
                .collect()
        };
        Self { vertices, groups, entries, unknot }
    }

    pub fn hom_count(&self) -> usize {
        self.entries.first().map_or(0, |e| e.homs.len())
    }

    /// A finite quotient in which the loop is non-trivial.
    pub fn quotient_witness(&self, lp: &[Point3]) -> Option<QuotientWitness> {
        for e in &self.entries {
            let Ok(word) = loop_word(&e.kd, &self.vertices, lp) else { continue };
            for (gi, img) in &e.homs {
                let g = &self.groups[*gi];
                let v = eval_word(g, img, &word);
                if v != g.identity {
                    return Some(QuotientWitness {
                        group: g.name.clone(),
                        images: img.iter().map(|&x| g.elems[x as usize].clone()).collect(),
                        loop_image: g.elems[v as usize].clone(),
                        crossings: e.kd.crossing_count(),
                    });
                }
            }
        }
        None
    }
}

fn total_curvature(pts: &[Point3]) -> f64 {
    let m = pts.len();
    (0..m)
        .map(|i| {
            let p = pts[(i + 1) % m] - pts[i];
            let q = pts[(i + 2) % m] - pts[(i + 1) % m];
            p.angle(&q)
        })
        .sum()
}

/// Ball on the diameter `ab`: `α` inside, `γ` outside except at its ends,
/// `α ∪ β` unknotted by total curvature.
fn ball_witness(theta: &ThetaGraph) -> Option<Witness> {
    let c = Point3::from((theta.a.point.coords + theta.b.point.coords) * 0.5);
    let r = (theta.b.point - theta.a.point).norm() * 0.5;
    let slack = 1e-9 * r;
    if theta.alpha.iter().any(|p| (p - c).norm() > r + slack) {
        return None;
    }
    let g = &theta.gamma;
    for i in 0..g.len() - 1 {
        let (d, s, _) = segment_distance(&g[i], &g[i + 1], &c, &c);
        let touches_end = (i == 0 && s <= 1e-9) || (i == g.len() - 2 && s >= 1.0 - 1e-9);
        if d < r - slack || (d <= r + slack && !touches_end) {
            return None;
        }
    }
    let mut loop_pts = theta.alpha.clone();
    loop_pts.extend(theta.beta[1..theta.beta.len() - 1].iter().rev());
    let kappa = total_curvature(&dedup(loop_pts, 1e-12 * r));
    (kappa < 4.0 * PI - 1e-9).then_some(Witness::Ball { radius: r, total_curvature: kappa })
}

/// Constructive certificate that the Θ-graph is inessential, if one applies.
pub fn inessential_certificate(
    theta: &ThetaGraph,
    cache: &KnotGroupCache,
    opts: &CertifyOptions,
) -> Option<Witness> {
    if let Some(w) = &cache.unknot {
        return Some(w.clone());
    }
    let chord = (theta.b.point - theta.a.point).norm();
    if let Some(tau) = opts.thickness {
        if chord < tau {
            return Some(Witness::BallLemma { chord, thickness: tau });
        }
    }
    ball_witness(theta)
}

/// Verdict for a Θ-graph with a zero-linking parallel `δ`.
pub fn certify_essential(
    theta: &ThetaGraph,
    delta: &ParallelLoop,
    cache: &KnotGroupCache,
    opts: &CertifyOptions,
) -> EssentialityVerdict {
    if let Some(w) = inessential_certificate(theta, cache, opts) {
        return EssentialityVerdict { status: VerdictStatus::InessentialCertified, witness: Some(w) };
    }
    match cache.quotient_witness(&delta.points) {
        Some(w) => EssentialityVerdict { status: VerdictStatus::EssentialCertified, witness: Some(Witness::Quotient(w)) },
        None => EssentialityVerdict::inconclusive(),
    }
}

/// Verdict on the arc from `a` to `b`, with a note when a step failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcReport {
    pub from: String,
    pub to: String,
    pub length: f64,
    pub straight_beta: bool,
    #[serde(flatten)]
    pub verdict: EssentialityVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn certify_arc(
    k: &PolygonalKnot,
    a: &KnotPoint,
    b: &KnotPoint,
    cache: &KnotGroupCache,
    opts: &CertifyOptions,
    tol: &ToleranceConfig,
) -> (EssentialityVerdict, bool, Option<String>) {
    let theta = match build_theta(k, a, b, opts.seed, tol) {
        Ok(t) => t,
        Err(e) => return (EssentialityVerdict::inconclusive(), false, Some(e.to_string())),
    };
    if let Some(w) = inessential_certificate(&theta, cache, opts) {
        let v = EssentialityVerdict { status: VerdictStatus::InessentialCertified, witness: Some(w) };
        return (v, theta.straight, None);
    }
    match parallel_with_zero_linking(k, &theta, opts.seed) {
        Ok(delta) => (certify_essential(&theta, &delta, cache, opts), theta.straight, None),
        Err(e) => (EssentialityVerdict::inconclusive(), theta.straight, Some(e.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecantReport {
    pub pair: String,
    pub status: Essentiality,
    pub arcs: Vec<ArcReport>,
}

/// Essentiality report for one quadrisecant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssentialityReport {
    pub class: crate::secants::DihedralClass,
    pub status: Essentiality,
    pub secants: Vec<SecantReport>,
}

fn combine(statuses: impl IntoIterator<Item = Essentiality>) -> Essentiality {
    let v: Vec<Essentiality> = statuses.into_iter().collect();
    if v.iter().any(|s| *s == Essentiality::Inessential) {
        Essentiality::Inessential
    } else if v.iter().all(|s| *s == Essentiality::Certified) {
        Essentiality::Certified
    } else {
        Essentiality::Inconclusive
    }
}

/// Checks the class-dependent secants of `q`, each through both of its arcs.
pub fn essential_quadrisecant_check(
    k: &PolygonalKnot,
    q: &Quadrisecant,
    cache: &KnotGroupCache,
    opts: &CertifyOptions,
    tol: &ToleranceConfig,
) -> (Quadrisecant, EssentialityReport) {
    const LABELS: [&str; 4] = ["a", "b", "c", "d"];
    let lp = q.line_points();
    let secants: Vec<SecantReport> = q
        .required_secants()
        .into_iter()
        .map(|(i, j)| {
            let arcs: Vec<ArcReport> = [(i, j), (j, i)]
                .into_iter()
                .map(|(x, y)| {
                    let (verdict, straight_beta, note) = certify_arc(k, &lp[x], &lp[y], cache, opts, tol);
                    ArcReport {
                        from: LABELS[x].into(),
                        to: LABELS[y].into(),
                        length: Arc { start: lp[x], end: lp[y] }.length(k),
                        straight_beta,
                        verdict,
                        note,
                    }
                })
                .collect();
            let status = combine(arcs.iter().map(|r| match r.verdict.status {
                VerdictStatus::EssentialCertified => Essentiality::Certified,
                VerdictStatus::InessentialCertified => Essentiality::Inessential,
                VerdictStatus::Inconclusive => Essentiality::Inconclusive,
            }));
            SecantReport { pair: format!("{}{}", LABELS[i], LABELS[j]), status, arcs }
        })
        .collect();
    let status = combine(secants.iter().map(|s| s.status));
    let mut out = q.clone();
    out.essential = status;
    (out, EssentialityReport { class: q.class, status, secants })
}

/// Shortest certified-essential arc on the arclength grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShortestArc {
    pub arc: Arc,
    pub length: f64,
    /// `length` minus the grid spacing on both ends.
    pub lower_estimate: f64,
    pub witness: Witness,
    /// Distance from the secant line to the rest of the knot; small values
    /// suggest a nearby trisecant.
    pub line_gap: f64,
    pub arcs_tested: usize,
}

pub fn shortest_essential_arc(
    k: &PolygonalKnot,
    resolution: f64,
    cache: &KnotGroupCache,
    opts: &CertifyOptions,
    tol: &ToleranceConfig,
) -> Result<ShortestArc, TopologyError> {
    if cache.unknot.is_some() {
        return Err(TopologyError::NoneCertified);
    }
    let total = k.total_length();
    let n = ((total / resolution).round() as usize).max(4);
    let step = total / n as f64;
    let grid: Vec<KnotPoint> = (0..n).map(|i| k.point_at_arclength(step * i as f64)).collect();
    let t = k.tolerance(tol);
    let mut pairs: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (1..n).map(move |len| (len, i, (i + len) % n)))
        .filter(|&(_, i, j)| !k.share_closed_edge(&grid[i], &grid[j], t.tol_param))
        .collect();
    pairs.sort();
    for chunk in pairs.chunks(64) {
        let results: Vec<Option<Witness>> = chunk
            .par_iter()
            .map(|&(_, i, j)| {
                let (v, _, _) = certify_arc(k, &grid[i], &grid[j], cache, opts, tol);
                (v.status == VerdictStatus::EssentialCertified).then(|| v.witness.unwrap())
            })
            .collect();
        if let Some(pos) = results.iter().position(|r| r.is_some()) {
            let (_, i, j) = chunk[pos];
            let arc = Arc { start: grid[i], end: grid[j] };
            let length = arc.length(k);
            let tested = pairs.iter().position(|p| *p == chunk[pos]).unwrap() + 1;
            return Ok(ShortestArc {
                arc,
                length,
                lower_estimate: (length - 2.0 * step).max(0.0),
                witness: results[pos].clone().unwrap(),
                line_gap: line_gap(k, &grid[i], &grid[j], &t),
                arcs_tested: tested,
            });
        }
    }
    Err(TopologyError::NoneCertified)
}

fn line_gap(k: &PolygonalKnot, a: &KnotPoint, b: &KnotPoint, tol: &ToleranceConfig) -> f64 {
    let d = (b.point - a.point).normalize();
    let far = 4.0 * k.diameter();
    let (p0, p1) = (a.point - d * far, a.point + d * far);
    let (ea, _) = incident_pieces(k, a, tol.tol_param);
    let (eb, _) = incident_pieces(k, b, tol.tol_param);
    (0..k.n())
        .filter(|e| !ea.contains(e) && !eb.contains(e))
        .map(|e| {
            let (q0, q1) = k.edge(e);
            segment_distance(&p0, &p1, &q0, &q1).0
        })
        .fold(f64::INFINITY, f64::min)
}

