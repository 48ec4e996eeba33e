//! Total curvature, thickness, ropelength, distortion, second hull, bridge
//! counts and the ropelength bound functions `f`, `g`, `m`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom3::{segment_distance, Point3, Vec3};
use crate::knot::PolygonalKnot;
use crate::secants::{enumerate_quadrisecants, SecantError};
use crate::tolerance::ToleranceConfig;
use crate::topology::diagram::{diagram, Projection};

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("thickness is zero or below the sampling resolution")]
    ZeroThickness,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("point lies on the knot")]
    PointOnKnot,
    #[error("no generic direction found")]
    DegenerateDirection,
    #[error("knot has no quadrisecants")]
    NoQuadrisecants,
    #[error(transparent)]
    Secant(#[from] SecantError),
}

/// Sum of exterior angles of a closed polygon; a reversal contributes `π`.
pub fn total_curvature(pts: &[Point3]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let a = pts[(i + 1) % n] - pts[i];
            let b = pts[(i + 2) % n] - pts[(i + 1) % n];
            (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos()
        })
        .sum()
}

fn circumradius(a: &Point3, b: &Point3, c: &Point3) -> f64 {
    let (x, y, z) = ((b - c).norm(), (c - a).norm(), (a - b).norm());
    let area2 = (b - a).cross(&(c - a)).norm();
    if area2 == 0.0 {
        return f64::INFINITY;
    }
    x * y * z / (2.0 * area2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thickness {
    pub value: f64,
    /// Vertex triple realising the minimum.
    pub triple: [usize; 3],
    /// The minimum comes from a local triple at the scale of the sampling,
    /// so corners rather than curvature dominate.
    pub near_zero: bool,
}

/// Cyclic span, in edges, of the smallest arc containing three vertices.
fn span(n: usize, mut v: [usize; 3]) -> usize {
    v.sort();
    let gaps = [v[1] - v[0], v[2] - v[1], n - v[2] + v[0]];
    n - gaps.iter().max().unwrap()
}

/// Twice the least circumradius over vertex triples spanning at least
/// `window` edges.
pub fn thickness(pts: &[Point3], window: usize) -> Thickness {
    let n = pts.len();
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::INFINITY, [i, i, i]);
            for j in (i + 1)..n {
                let dij = (pts[j] - pts[i]).norm();
                if dij >= 2.0 * best.0 {
                    continue;
                }
                for k in (j + 1)..n {
                    if span(n, [i, j, k]) < window {
                        continue;
                    }
                    let r = circumradius(&pts[i], &pts[j], &pts[k]);
                    if r < best.0 {
                        best = (r, [i, j, k]);
                    }
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, [0; 3]), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let value = 2.0 * best.0;
    let [i, j, k] = best.1;
    let local = span(n, best.1) < 2 * window;
    let near_zero = !value.is_finite() || (local && {
        // mean edge length over the arc spanned by the triple
        let (lo, hi) = if k - i == span(n, best.1) { (i, k) } else if i + n - j == span(n, best.1) { (j, i + n) } else { (k, j + n) };
        let len: f64 = (lo..hi).map(|m| (pts[(m + 1) % n] - pts[m % n]).norm()).sum();
        value < 4.0 * len / (hi - lo) as f64
    });
    Thickness { value, triple: best.1, near_zero }
}

/// Default: triples spanning fewer than three consecutive edges are ignored.
pub const SMOOTHING_WINDOW: usize = 3;

pub fn ropelength(k: &PolygonalKnot, tol: &ToleranceConfig) -> Result<f64, MeasureError> {
    let th = thickness(k.vertices(), SMOOTHING_WINDOW);
    let tau = th.value;
    if !(tau > k.tolerance(tol).tol_len) || th.near_zero {
        return Err(MeasureError::ZeroThickness);
    }
    Ok(k.total_length() / tau)
}

pub fn f(r: f64) -> f64 {
    (r * r - 1.0).max(0.0).sqrt() + (1.0 / r).min(1.0).asin()
}

pub fn g(d: f64) -> f64 {
    if d <= 2.0 {
        2.0 * PI - 2.0 * (d / 2.0).asin()
    } else {
        PI
    }
}

/// Least length of an arc from `a` to `b` outside the unit ball at `p`, with
/// `r = |a-p|`, `s = |b-p|`, `θ = ∠apb`.
pub fn min_length_outside_ball(r: f64, s: f64, theta: f64) -> Result<f64, MeasureError> {
    if !(r >= 1.0 && s >= 1.0 && (0.0..=PI).contains(&theta)) {
        return Err(MeasureError::DomainError(format!("m({r}, {s}, {theta})")));
    }
    Ok(m_unchecked(r, s, theta))
}

pub fn branch_angle(r: f64, s: f64) -> f64 {
    (1.0 / r).acos() + (1.0 / s).acos()
}

fn m_unchecked(r: f64, s: f64, theta: f64) -> f64 {
    if theta <= branch_angle(r, s) {
        (r * r + s * s - 2.0 * r * s * theta.cos()).max(0.0).sqrt()
    } else {
        f(r) + f(s) + (theta - PI)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundType {
    Simple,
    Flipped,
    Alternating,
}

impl BoundType {
    pub const ALL: [BoundType; 3] = [BoundType::Simple, BoundType::Flipped, BoundType::Alternating];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "simple" => Some(Self::Simple),
            "flipped" => Some(Self::Flipped),
            "alternating" => Some(Self::Alternating),
            _ => None,
        }
    }

    /// The three summands, each a function of one of `r`, `s`, `t`.
    fn terms(self) -> [fn(f64) -> f64; 3] {
        match self {
            BoundType::Simple => [|r| g(r) + f(r), |s| g(s) + s, |t| g(t) + f(t)],
            BoundType::Flipped => [|r| g(r) + f(r), |s| 2.0 * f(s), |t| g(t) + f(t)],
            BoundType::Alternating => [|r| 2.0 * f(r), |s| 2.0 * f(s) + g(s) + s, |t| 2.0 * f(t)],
        }
    }
}

/// Length lower bound for a unit-thickness knot with an essential
/// quadrisecant of the given type and gaps `r`, `s`, `t`.
pub fn eval_bounds(ty: BoundType, r: f64, s: f64, t: f64) -> Result<f64, MeasureError> {
    if !(r >= 1.0 && s >= 1.0 && t >= 1.0) {
        return Err(MeasureError::DomainError(format!("gaps ({r}, {s}, {t}) below 1")));
    }
    let [a, b, c] = ty.terms();
    Ok(a(r) + b(s) + c(t))
}

pub const OPT_TOL: f64 = 1e-6;

/// Minimum of `h` on `[lo, hi]`: a grid, then golden-section refinement
/// around the best grid point.
fn minimize_1d(h: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const GRID: usize = 200;
    let step = (hi - lo) / GRID as f64;
    let (mut x0, mut v0) = (lo, h(lo));
    for i in 1..=GRID {
        let x = if i == GRID { hi } else { lo + step * i as f64 };
        let v = h(x);
        if v < v0 {
            (x0, v0) = (x, v);
        }
    }
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = ((x0 - step).max(lo), (x0 + step).min(hi));
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    while b - a > OPT_TOL * 1e-3 {
        if h(c) < h(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - invphi * (b - a);
        d = a + invphi * (b - a);
    }
    let xm = 0.5 * (a + b);
    let vm = h(xm);
    if vm < v0 {
        (xm, vm)
    } else {
        (x0, v0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundMinimum {
    pub kind: BoundType,
    pub value: f64,
    pub argmin: [f64; 3],
}

/// Termwise minimum over `[1, 2]`; beyond 2 every term is non-decreasing.
pub fn minimize_bound(ty: BoundType) -> BoundMinimum {
    let mut argmin = [0.0; 3];
    let mut value = 0.0;
    for (i, term) in ty.terms().into_iter().enumerate() {
        let (x, v) = minimize_1d(term, 1.0, 2.0);
        argmin[i] = x;
        value += v;
    }
    BoundMinimum { kind: ty, value, argmin }
}

/// CSV samples of `f`, `g` and `m(r, r, θ)` for plotting.
pub fn bound_grid_csv(samples: usize) -> String {
    let mut s = String::from("x,f,g,m_r2,m_r1_5\n");
    for i in 0..=samples {
        let u = i as f64 / samples as f64;
        let x = 1.0 + 2.0 * u;
        let theta = PI * u;
        s.push_str(&format!(
            "{x:.6},{:.12},{:.12},{:.12},{:.12}\n",
            f(x),
            g(2.0 * u + 1.0),
            m_unchecked(2.0, 2.0, theta),
            m_unchecked(1.5, 1.5, theta)
        ));
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionInterval {
    pub lo: f64,
    pub hi: f64,
    pub cells: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    ub: f64,
    e: usize,
    f: usize,
    s: [f64; 2],
    t: [f64; 2],
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.ub.total_cmp(&o.ub) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> Ordering {
        self.ub.total_cmp(&o.ub)
    }
}

pub const DISTORTION_CELL_BUDGET: usize = 2_000_000;

struct Curve<'a> {
    pts: &'a [Point3],
    cum: Vec<f64>,
    total: f64,
}

impl Curve<'_> {
    fn point(&self, e: usize, u: f64) -> Point3 {
        let n = self.pts.len();
        self.pts[e] + (self.pts[(e + 1) % n] - self.pts[e]) * u
    }

    fn edge_len(&self, e: usize) -> f64 {
        self.cum[e + 1] - self.cum[e]
    }

    fn arc(&self, s: f64, t: f64) -> f64 {
        let d = (s - t).abs();
        d.min(self.total - d)
    }

    /// Largest arc distance between arclength intervals `a` and `b`.
    fn arc_max(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let lo = (b[0] - a[1]).max(a[0] - b[1]).max(0.0);
        let hi = (b[1] - a[0]).max(a[1] - b[0]);
        let half = 0.5 * self.total;
        // |s - t| ranges over [lo, hi] when the intervals are disjoint or overlapping
        if lo <= half && half <= hi {
            half
        } else {
            (lo.min(self.total - lo)).max(hi.min(self.total - hi))
        }
    }

    /// Upper bound of the arc-to-chord ratio on a cell.
    fn bound(&self, c: &Cell) -> f64 {
        let n = self.pts.len();
        if c.e == c.f {
            return 1.0;
        }
        let sa = [self.cum[c.e] + c.s[0] * self.edge_len(c.e), self.cum[c.e] + c.s[1] * self.edge_len(c.e)];
        let ta = [self.cum[c.f] + c.t[0] * self.edge_len(c.f), self.cum[c.f] + c.t[1] * self.edge_len(c.f)];
        // pieces of adjacent edges: the ratio depends only on the ratio of
        // distances to the shared vertex and peaks where they are equal
        let adjacent = if (c.e + 1) % n == c.f {
            Some((c.e, c.s, c.f, c.t))
        } else if (c.f + 1) % n == c.e {
            Some((c.f, c.t, c.e, c.s))
        } else {
            None
        };
        if let Some((a, sa, b, tb)) = adjacent {
            let v = self.pts[b];
            let cos = (self.pts[a] - v).normalize().dot(&(self.pts[(b + 1) % n] - v).normalize());
            let (la, lb) = (self.edge_len(a), self.edge_len(b));
            let (x0, x1) = ((1.0 - sa[1]) * la, (1.0 - sa[0]) * la);
            let (y0, y1) = (tb[0] * lb, tb[1] * lb);
            let rho_min = if y1 > 0.0 { x0 / y1 } else { f64::INFINITY };
            let rho_max = if y0 > 0.0 { x1 / y0 } else { f64::INFINITY };
            let rho = 1.0f64.clamp(rho_min, rho_max.max(rho_min));
            let den = (rho * rho + 1.0 - 2.0 * rho * cos).max(0.0).sqrt();
            return if rho.is_infinite() {
                1.0
            } else if den > 0.0 {
                (rho + 1.0) / den
            } else {
                f64::INFINITY
            };
        }
        let (p0, p1) = (self.point(c.e, c.s[0]), self.point(c.e, c.s[1]));
        let (q0, q1) = (self.point(c.f, c.t[0]), self.point(c.f, c.t[1]));
        let d = segment_distance(&p0, &p1, &q0, &q1).0;
        if d <= 0.0 {
            return f64::INFINITY;
        }
        self.arc_max(sa, ta) / d
    }
}

/// Interval `[lo, hi]` for the distortion of a closed polygon. `lo` is the
/// largest ratio over vertex pairs and vertex corners; `hi` is a certified
/// upper bound from branch and bound over pairs of edge pieces.
pub fn distortion(pts: &[Point3], tol: f64) -> DistortionInterval {
    distortion_with_budget(pts, tol, DISTORTION_CELL_BUDGET)
}

pub fn distortion_with_budget(pts: &[Point3], tol: f64, budget: usize) -> DistortionInterval {
    let n = pts.len();
    let mut cum = vec![0.0];
    for i in 0..n {
        cum.push(cum[i] + (pts[(i + 1) % n] - pts[i]).norm());
    }
    let curve = Curve { pts, total: cum[n], cum };
    let vertex_lo = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| curve.arc(curve.cum[i], curve.cum[j]) / (pts[j] - pts[i]).norm())
                .fold(1.0, f64::max)
        })
        .reduce(|| 1.0, f64::max);
    let corner_lo = (0..n)
        .map(|i| {
            let u = pts[(i + n - 1) % n] - pts[i];
            let v = pts[(i + 1) % n] - pts[i];
            1.0 / (0.5 * u.angle(&v)).sin()
        })
        .fold(1.0, f64::max);
    let lo = vertex_lo.max(corner_lo);
    let mut heap: BinaryHeap<Cell> = (0..n)
        .into_par_iter()
        .flat_map_iter(|e| {
            let curve = &curve;
            (e..n).map(move |f| {
                let mut c = Cell { ub: 0.0, e, f, s: [0.0, 1.0], t: [0.0, 1.0] };
                c.ub = curve.bound(&c);
                c
            })
        })
        .collect::<Vec<_>>()
        .into();
    let mut cells = heap.len();
    while cells < budget {
        let Some(top) = heap.peek() else { break };
        if top.ub - lo < tol {
            break;
        }
        let c = heap.pop().unwrap();
        let sm = 0.5 * (c.s[0] + c.s[1]);
        let tm = 0.5 * (c.t[0] + c.t[1]);
        for s in [[c.s[0], sm], [sm, c.s[1]]] {
            for t in [[c.t[0], tm], [tm, c.t[1]]] {
                let mut child = Cell { ub: 0.0, e: c.e, f: c.f, s, t };
                child.ub = curve.bound(&child).min(c.ub);
                heap.push(child);
                cells += 1;
            }
        }
    }
    let hi = heap.peek().map_or(lo, |c| c.ub.max(lo));
    DistortionInterval { lo, hi, cells, converged: hi - lo < tol }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum HullMembership {
    /// Every sampled plane cut the knot at least `2n` times.
    MemberSampled { normals: usize, min_crossings: usize },
    /// Every plane through the point in general position cuts at least `2n` times.
    ExactMember { min_crossings: usize },
    NotMember { normal: [f64; 3], crossings: usize },
}

pub const EXACT_HULL_MAX_VERTICES: usize = 64;

/// Transversal crossings of the closed polygon with the plane, given the
/// sign of each vertex.
fn crossings_from_signs(signs: &[i8]) -> usize {
    let n = signs.len();
    (0..n).filter(|&i| signs[i] != signs[(i + 1) % n]).count()
}

pub fn fibonacci_sphere(count: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

fn check_off_knot(k: &PolygonalKnot, p: &Point3, tol: &ToleranceConfig) -> Result<(), MeasureError> {
    let t = k.tolerance(tol);
    let d = (0..k.n())
        .map(|e| {
            let (a, b) = k.edge(e);
            segment_distance(&a, &b, p, p).0
        })
        .fold(f64::INFINITY, f64::min);
    if d <= t.tol_embed {
        Err(MeasureError::PointOnKnot)
    } else {
        Ok(())
    }
}

/// Plane-cut test for the `n`-th hull over `normals` Fibonacci directions.
/// Directions nearly tangent to a vertex are nudged off.
pub fn second_hull_sampled(
    k: &PolygonalKnot,
    p: &Point3,
    n: usize,
    normals: usize,
    tol: &ToleranceConfig,
) -> Result<HullMembership, MeasureError> {
    check_off_knot(k, p, tol)?;
    let us: Vec<Vec3> = k.vertices().iter().map(|v| v - p).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut min_seen = usize::MAX;
    for mut nu in fibonacci_sphere(normals) {
        while us.iter().any(|u| nu.dot(u).abs() <= 1e-12 * u.norm()) {
            nu = (nu + Vec3::new(rng.gen(), rng.gen(), rng.gen()) * 1e-6).normalize();
        }
        let signs: Vec<i8> = us.iter().map(|u| if nu.dot(u) > 0.0 { 1 } else { -1 }).collect();
        let c = crossings_from_signs(&signs);
        if c < 2 * n {
            return Ok(HullMembership::NotMember { normal: nu.into(), crossings: c });
        }
        min_seen = min_seen.min(c);
    }
    Ok(HullMembership::MemberSampled { normals, min_crossings: min_seen })
}

/// Exact minimum over planes through `p` in general position: the crossing
/// count is constant on faces of the great-circle arrangement of the
/// directions to the vertices, and every face has a vertex of the arrangement.
pub fn second_hull_exact(
    k: &PolygonalKnot,
    p: &Point3,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<HullMembership, MeasureError> {
    check_off_knot(k, p, tol)?;
    if k.n() > EXACT_HULL_MAX_VERTICES {
        return Err(MeasureError::DomainError(format!("exact mode needs at most {EXACT_HULL_MAX_VERTICES} vertices")));
    }
    let us: Vec<Vec3> = k.vertices().iter().map(|v| (v - p).normalize()).collect();
    let m = us.len();
    const ON: f64 = 1e-12;
    let mut poles: Vec<Vec3> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let w = us[i].cross(&us[j]);
            if w.norm() > ON {
                let w = w.normalize();
                poles.push(w);
                poles.push(-w);
            }
        }
    }
    if poles.is_empty() {
        // all vertices on one line through p
        poles.push(crate::geom3::any_perpendicular(&us[0]));
    }
    let best = poles
        .par_iter()
        .map(|w| {
            let through: Vec<&Vec3> = us.iter().filter(|u| u.dot(w).abs() <= ON).collect();
            let e1 = crate::geom3::any_perpendicular(w);
            let e2 = w.cross(&e1);
            // tangent-plane directions of the circles through w, and bisectors
            let mut angles: Vec<f64> = through
                .iter()
                .map(|u| {
                    let d = w.cross(u);
                    d.dot(&e2).atan2(d.dot(&e1)).rem_euclid(PI)
                })
                .flat_map(|a| [a, a + PI])
                .collect();
            angles.sort_by(f64::total_cmp);
            angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
            if angles.is_empty() {
                angles.push(0.0);
            }
            let mut best = (usize::MAX, *w);
            for i in 0..angles.len() {
                let next = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + 2.0 * PI };
                let mid = 0.5 * (angles[i] + next);
                let d = e1 * mid.cos() + e2 * mid.sin();
                let signs: Vec<i8> = us
                    .iter()
                    .map(|u| {
                        let h = u.dot(w);
                        let v = if h.abs() > ON { h } else { u.dot(&d) };
                        if v > 0.0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect();
                let c = crossings_from_signs(&signs);
                if c < best.0 {
                    best = (c, (w + d * 1e-6).normalize());
                }
            }
            best
        })
        .reduce(|| (usize::MAX, Vec3::z()), |a, b| if b.0 < a.0 { b } else { a });
    if best.0 < 2 * n {
        Ok(HullMembership::NotMember { normal: best.1.into(), crossings: best.0 })
    } else {
        Ok(HullMembership::ExactMember { min_crossings: best.0 })
    }
}

/// Strict local maxima of the height `v · x` along the polygon.
pub fn bridge_count(k: &PolygonalKnot, v: &Vec3, seed: u64) -> Result<usize, MeasureError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dir = v.normalize();
    for _ in 0..16 {
        let h: Vec<f64> = k.vertices().iter().map(|p| dir.dot(&p.coords)).collect();
        let n = h.len();
        let scale = k.diameter();
        if (0..n).all(|i| (h[(i + 1) % n] - h[i]).abs() > 1e-12 * scale) {
            return Ok((0..n).filter(|&i| h[i] > h[(i + n - 1) % n] && h[i] > h[(i + 1) % n]).count());
        }
        let jitter = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        dir = (dir + jitter * 1e-6).normalize();
    }
    Err(MeasureError::DegenerateDirection)
}

/// Largest bridge count over `count` sphere directions.
pub fn superbridge_estimate(k: &PolygonalKnot, count: usize) -> usize {
    fibonacci_sphere(count)
        .par_iter()
        .enumerate()
        .filter_map(|(i, v)| bridge_count(k, v, i as u64).ok())
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupercrossingWitness {
    pub floor: usize,
    pub direction: [f64; 3],
    pub crossings: usize,
    pub quadrisecant: usize,
}

/// Projects along a slightly tilted quadrisecant line, where the four points
/// pairwise cross, and reports a direction showing at least six crossings.
pub fn supercrossing_floor(k: &PolygonalKnot, tol: &ToleranceConfig) -> Result<SupercrossingWitness, MeasureError> {
    let quads = enumerate_quadrisecants(k, tol)?;
    if quads.is_empty() {
        return Err(MeasureError::NoQuadrisecants);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (qi, q) in quads.iter().enumerate() {
        let d = q.line.dir().into_inner();
        for tilt in [1e-4, 1e-5, 1e-3, 1e-6] {
            for _ in 0..8 {
                let r = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let dir = (d + (r - d * r.dot(&d)) * tilt).normalize();
                let Ok(dg) = diagram(&[k.vertices()], Projection::new(dir)) else { continue };
                if dg.crossings.len() >= 6 {
                    return Ok(SupercrossingWitness {
                        floor: 6,
                        direction: dir.into(),
                        crossings: dg.crossings.len(),
                        quadrisecant: qi,
                    });
                }
            }
        }
    }
    Err(MeasureError::DegenerateDirection)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub length: f64,
    pub total_curvature: f64,
    pub thickness: Thickness,
    pub ropelength: Option<f64>,
    pub distortion: DistortionInterval,
    /// Bridge counts along the coordinate axes.
    pub bridge_counts: [Option<usize>; 3],
    pub superbridge_estimate: usize,
    /// Hull test at the vertex centroid for `n = 2`.
    pub second_hull_centroid: Option<HullMembership>,
}

pub const SUPERBRIDGE_DIRECTIONS: usize = 500;
pub const DISTORTION_TOL: f64 = 0.01;

pub fn measure_report(k: &PolygonalKnot, tol: &ToleranceConfig) -> MeasureReport {
    let th = thickness(k.vertices(), SMOOTHING_WINDOW);
    let centroid = Point3::from(k.vertices().iter().map(|p| p.coords).sum::<Vec3>() / k.n() as f64);
    let axes = [Vec3::x(), Vec3::y(), Vec3::z()];
    MeasureReport {
        length: k.total_length(),
        total_curvature: total_curvature(k.vertices()),
        thickness: th,
        ropelength: ropelength(k, tol).ok(),
        distortion: distortion(k.vertices(), DISTORTION_TOL),
        bridge_counts: axes.map(|v| bridge_count(k, &v, 0).ok()),
        superbridge_estimate: superbridge_estimate(k, SUPERBRIDGE_DIRECTIONS),
        second_hull_centroid: second_hull_sampled(k, &centroid, 2, 1024, tol).ok(),
    }
}
