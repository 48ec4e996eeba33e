//! Trisecant families and quadrisecant enumeration for polygonal knots.
//!
//! Edge quadruples split into two cases. Pairwise non-adjacent edges go
//! through the quadric spanned by three of them; a quadruple with one or two
//! adjacent pairs lies in the plane of that pair, so its only candidate line
//! joins the points where the other two edges cross the plane. A quadruple
//! with three consecutive edges never carries a quadrisecant: the third edge
//! meets the plane of the first two only at their shared vertex.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom3::{
    line_quadric_params, quadric_through_lines, ruling_through_point, OrientedLine, Point3, Vec3,
};
use crate::knot::{check_static_genericity, GenericityReport, KnotPoint, PolygonalKnot};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Error)]
pub enum SecantError {
    #[error("knot is not generic ({} coplanar quadruples, {} collinear triples, {} quadric violations)",
        .0.coplanar_total, .0.collinear_total, .0.quadric_total)]
    NotGeneric(Box<GenericityReport>),
    #[error("line meets the knot in {} components (edges {:?})", .0.len(), .0)]
    FiveSecantDetected(Vec<usize>),
    #[error("knot has no unknotting-number metadata")]
    MissingMetadata,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Secant {
    pub a: KnotPoint,
    pub b: KnotPoint,
}

impl Secant {
    pub fn line(&self) -> OrientedLine {
        OrientedLine::through(&self.a.point, &self.b.point).expect("secant endpoints are distinct")
    }

    pub fn chord(&self) -> f64 {
        (self.b.point - self.a.point).norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrisecantOrder {
    Direct,
    Reversed,
}

/// Three knot points in order along the line oriented from `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trisecant {
    pub a: KnotPoint,
    pub b: KnotPoint,
    pub c: KnotPoint,
    pub order: TrisecantOrder,
}

impl Trisecant {
    /// Orders three collinear points along the line starting from `first`.
    pub fn from_first(k: &PolygonalKnot, first: KnotPoint, p: KnotPoint, q: KnotPoint) -> Self {
        let (b, c) = if (p.point - first.point).norm() <= (q.point - first.point).norm() { (p, q) } else { (q, p) };
        let sa = k.arclength_of(&first);
        let fwd = |x: &KnotPoint| (k.arclength_of(x) - sa).rem_euclid(k.total_length());
        let order = if fwd(&b) < fwd(&c) { TrisecantOrder::Direct } else { TrisecantOrder::Reversed };
        Self { a: first, b, c, order }
    }

    pub fn collinearity_residual(&self) -> f64 {
        let u = self.c.point - self.a.point;
        let v = self.b.point - self.a.point;
        u.cross(&v).norm() / u.norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTopology {
    ClosedInterval,
    HalfOpen,
    Point,
    Empty,
}

/// One connected component of the trisecants carried by an edge triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrisecantFamily {
    pub edges: [usize; 3],
    pub topology: FamilyTopology,
    /// Parameter interval on the sweep edge (`edges[2]` for skew triples, the
    /// first edge of the adjacent pair otherwise).
    pub window: (f64, f64),
    pub samples: Vec<Trisecant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DihedralClass {
    Simple,
    Flipped,
    Alternating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Essentiality {
    NotChecked,
    Certified,
    Inessential,
    Inconclusive,
}

/// Four knot points on a common line.
///
/// `points` are in knot order starting from the first point along the
/// canonically oriented `line`; `line_order[i]` is the index into `points` of
/// the `i`-th point along the line. `r`, `s`, `t` are the gaps between
/// consecutive line points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrisecant {
    pub points: [KnotPoint; 4],
    pub line: OrientedLine,
    pub line_order: [usize; 4],
    pub class: DihedralClass,
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub essential: Essentiality,
}

impl Quadrisecant {
    pub fn line_points(&self) -> [KnotPoint; 4] {
        self.line_order.map(|i| self.points[i])
    }

    /// Secants whose essentiality the class requires, as pairs of line
    /// positions: all three gaps for simple, the end gaps for flipped and the
    /// middle gap for alternating.
    pub fn required_secants(&self) -> Vec<(usize, usize)> {
        match self.class {
            DihedralClass::Simple => vec![(0, 1), (1, 2), (2, 3)],
            DihedralClass::Flipped => vec![(0, 1), (2, 3)],
            DihedralClass::Alternating => vec![(1, 2)],
        }
    }

    pub fn secant(&self, i: usize, j: usize) -> Secant {
        let lp = self.line_points();
        Secant { a: lp[i], b: lp[j] }
    }

    /// The four trisecants formed by dropping one point, each oriented from
    /// its first line point.
    pub fn sub_trisecants(&self, k: &PolygonalKnot) -> Vec<Trisecant> {
        let lp = self.line_points();
        (0..4)
            .map(|skip| {
                let rest: Vec<KnotPoint> = (0..4).filter(|&i| i != skip).map(|i| lp[i]).collect();
                Trisecant::from_first(k, rest[0], rest[1], rest[2])
            })
            .collect()
    }

    pub fn edges(&self) -> [usize; 4] {
        self.points.map(|p| p.edge)
    }
}

/// Dihedral class from the cyclic knot order and the line order of four
/// labels. The class is fixed by which label is knot-opposite to the first
/// line point: the second line point (alternating), the third (simple) or the
/// fourth (flipped).
pub fn classify_dihedral(knot_order: [usize; 4], line_order: [usize; 4]) -> DihedralClass {
    let pos_in_knot = |label: usize| knot_order.iter().position(|&x| x == label).expect("label in knot order");
    let first = pos_in_knot(line_order[0]);
    let opposite = knot_order[(first + 2) % 4];
    match line_order.iter().position(|&x| x == opposite).expect("label in line order") {
        1 => DihedralClass::Alternating,
        2 => DihedralClass::Simple,
        _ => DihedralClass::Flipped,
    }
}

/// Upper bound on the number of generic quadrisecants of an `n`-gon.
pub fn quadrisecant_upper_bound(n: usize) -> usize {
    if n < 6 {
        return 0;
    }
    n * (n - 3) * (n - 4) * (n - 5) / 12
}

/// Set of `u ∈ [lo, hi]` where `(al + be u) / (ga + de u) ∈ [0, 1]`, widened by
/// `slack`; the domain is split at a pole of the denominator.
fn mobius_window(al: f64, be: f64, ga: f64, de: f64, lo: f64, hi: f64, slack: f64) -> Vec<(f64, f64)> {
    let mut pieces = vec![(lo, hi)];
    if de != 0.0 {
        let root = -ga / de;
        if root > lo && root < hi {
            pieces = vec![(lo, root), (root, hi)];
        }
    }
    let mut out = Vec::new();
    for (a, b) in pieces {
        let mid = 0.5 * (a + b);
        let sign = (ga + de * mid).signum();
        if sign == 0.0 {
            continue;
        }
        // sign*(al + be u) >= 0 and sign*((ga - al) + (de - be) u) >= 0
        let mut iv = Some((a, b));
        for (c0, c1) in [(al, be), (ga - al, de - be)] {
            iv = iv.and_then(|(x, y)| half_line(sign * c0, sign * c1, x, y, slack));
        }
        if let Some(v) = iv {
            out.push(v);
        }
    }
    out
}

/// `{u ∈ [x, y] : c0 + c1 u >= -slack·(|c0| + |c1|)}`.
fn half_line(c0: f64, c1: f64, x: f64, y: f64, slack: f64) -> Option<(f64, f64)> {
    let c0 = c0 + slack * (c0.abs() + c1.abs());
    if c1 == 0.0 {
        return if c0 >= 0.0 { Some((x, y)) } else { None };
    }
    let r = -c0 / c1;
    let (a, b) = if c1 > 0.0 { (x.max(r), y) } else { (x, y.min(r)) };
    if a <= b {
        Some((a, b))
    } else {
        None
    }
}

fn intersect_windows(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(x0, x1) in a {
        for &(y0, y1) in b {
            let (lo, hi) = (x0.max(y0), x1.min(y1));
            if lo <= hi {
                out.push((lo, hi));
            }
        }
    }
    out
}

struct Edge {
    p: Point3,
    v: Vec3,
}

fn edges_of(k: &PolygonalKnot) -> Vec<Edge> {
    (0..k.n()).map(|i| Edge { p: k.vertex(i), v: k.edge_vector(i) }).collect()
}

/// Skew triple `(i, j, k)`: for `x(u)` on edge `k`, the transversal through
/// `x(u)` meets line `i` at `s(u)` and line `j` at `w(u)`, both Möbius in `u`.
struct SkewSweep {
    s: [f64; 4],
    w: [f64; 4],
}

impl SkewSweep {
    fn new(ei: &Edge, ej: &Edge, ek: &Edge) -> Self {
        let n0 = (ek.p - ej.p).cross(&ej.v);
        let n1 = ek.v.cross(&ej.v);
        let aib = ei.p - ej.p;
        let m0 = (ek.p - ei.p).cross(&ei.v);
        let m1 = ek.v.cross(&ei.v);
        let bia = ej.p - ei.p;
        Self {
            s: [-aib.dot(&n0), -aib.dot(&n1), ei.v.dot(&n0), ei.v.dot(&n1)],
            w: [-bia.dot(&m0), -bia.dot(&m1), ej.v.dot(&m0), ej.v.dot(&m1)],
        }
    }

    fn window(&self, slack: f64) -> Vec<(f64, f64)> {
        let [a, b, c, d] = self.s;
        let ws = mobius_window(a, b, c, d, 0.0, 1.0, slack);
        let [a, b, c, d] = self.w;
        let ww = mobius_window(a, b, c, d, 0.0, 1.0, slack);
        intersect_windows(&ws, &ww)
    }

    fn at(&self, u: f64) -> Option<(f64, f64)> {
        let [a, b, c, d] = self.s;
        let den_s = c + d * u;
        let [e, f, g, h] = self.w;
        let den_w = g + h * u;
        if den_s == 0.0 || den_w == 0.0 {
            return None;
        }
        Some(((a + b * u) / den_s, (e + f * u) / den_w))
    }
}

fn plane_hit(n: &Vec3, o: &Point3, e: &Edge) -> Option<f64> {
    let den = n.dot(&e.v);
    if den.abs() <= 1e-14 * n.norm() * e.v.norm() {
        return None;
    }
    Some(n.dot(&(o - e.p)) / den)
}

/// A candidate line with its hits `(edge, t)`.
#[derive(Clone, Debug)]
pub struct LineHits {
    pub line: OrientedLine,
    pub hits: Vec<(usize, f64, Point3)>,
}

/// Edge parameter and distance of the closest approach of `line` to edge `e`.
fn edge_hit(line: &OrientedLine, e: &Edge) -> Option<(f64, f64)> {
    let d = line.dir().into_inner();
    let w = line.base() - e.p;
    let a = d.dot(&d);
    let b = d.dot(&e.v);
    let c = e.v.dot(&e.v);
    let dd = d.dot(&w);
    let ee = e.v.dot(&w);
    let den = a * c - b * b;
    if den <= 1e-14 * a * c {
        return None;
    }
    let s = (b * ee - c * dd) / den;
    let t = (a * ee - b * dd) / den;
    let dist = ((line.base() + d * s) - (e.p + e.v * t)).norm();
    Some((t, dist))
}

fn accept_param(t: f64, tol: &ToleranceConfig) -> Option<f64> {
    if t >= -tol.tol_param && t < 1.0 - tol.tol_param {
        Some(t.max(0.0))
    } else {
        None
    }
}

/// Hits this close to an edge end, in edge parameter, are moved onto the
/// vertex so a line through a vertex is seen once, on the edge it starts.
const VERTEX_SNAP: f64 = 1e-8;

fn snap_hit(m: usize, t: f64, n: usize) -> Option<(usize, f64)> {
    if !(-VERTEX_SNAP..=1.0 + VERTEX_SNAP).contains(&t) {
        None
    } else if t >= 1.0 - VERTEX_SNAP {
        Some(((m + 1) % n, 0.0))
    } else if t <= VERTEX_SNAP {
        Some((m, 0.0))
    } else {
        Some((m, t))
    }
}

fn clip_line(line: OrientedLine, edges: &[usize], es: &[Edge], tol: &ToleranceConfig) -> Option<LineHits> {
    let mut hits = Vec::with_capacity(edges.len());
    for &m in edges {
        let (t, dist) = edge_hit(&line, &es[m])?;
        if dist > tol.tol_hit {
            return None;
        }
        let (m, t) = snap_hit(m, t, es.len())?;
        hits.push((m, t, es[m].p + es[m].v * t));
    }
    Some(LineHits { line, hits })
}

fn skew_triples(k: &PolygonalKnot) -> Vec<[usize; 3]> {
    let n = k.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if k.edges_adjacent(i, j) {
                continue;
            }
            for l in (j + 1)..n {
                if !k.edges_adjacent(i, l) && !k.edges_adjacent(j, l) {
                    out.push([i, j, l]);
                }
            }
        }
    }
    out
}

fn skew_candidates(k: &PolygonalKnot, es: &[Edge], tol: &ToleranceConfig, prefilter: bool) -> Vec<LineHits> {
    let n = k.n();
    let lines: Vec<OrientedLine> = es.iter().map(|e| OrientedLine::new(e.p, e.v).unwrap()).collect();
    skew_triples(k)
        .into_par_iter()
        .flat_map_iter(|[i, j, l]| {
            let mut out = Vec::new();
            if prefilter && SkewSweep::new(&es[i], &es[j], &es[l]).window(1e-6).is_empty() {
                return out;
            }
            let Ok(q) = quadric_through_lines(&lines[i], &lines[j], &lines[l], tol) else {
                return out;
            };
            let gens = [lines[i], lines[j], lines[l]];
            for m in (l + 1)..n {
                if k.edges_adjacent(m, i) || k.edges_adjacent(m, j) || k.edges_adjacent(m, l) {
                    continue;
                }
                for t in line_quadric_params(&q, &es[m].p, &es[m].v, tol).params() {
                    if !(t > -1e-6 && t < 1.0 + 1e-6) {
                        continue;
                    }
                    let p = es[m].p + es[m].v * t;
                    let Ok(line) = ruling_through_point(&q, &p, &gens, tol) else {
                        continue;
                    };
                    if let Some(h) = clip_line(line.unoriented(), &[i, j, l, m], es, tol) {
                        out.push(h);
                    }
                }
            }
            out
        })
        .collect()
}

fn plane_candidates(k: &PolygonalKnot, es: &[Edge], tol: &ToleranceConfig) -> Vec<LineHits> {
    let n = k.n();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let i1 = (i + 1) % n;
            let normal = es[i].v.cross(&es[i1].v);
            let origin = es[i1].p;
            let crossings: Vec<(usize, Point3)> = (0..n)
                .filter(|&m| !k.edges_adjacent(m, i) && !k.edges_adjacent(m, i1))
                .filter_map(|m| {
                    let t = plane_hit(&normal, &origin, &es[m])?;
                    accept_param(t, tol).map(|t| (m, es[m].p + es[m].v * t))
                })
                .collect();
            let mut out = Vec::new();
            for a in 0..crossings.len() {
                for b in (a + 1)..crossings.len() {
                    let (ma, pa) = crossings[a];
                    let (mb, pb) = crossings[b];
                    if (pb - pa).norm() <= tol.tol_hit {
                        continue;
                    }
                    let Ok(line) = OrientedLine::through(&pa, &pb) else { continue };
                    if let Some(h) = clip_line(line.unoriented(), &[i, i1, ma, mb], es, tol) {
                        out.push(h);
                    }
                }
            }
            out
        })
        .collect()
}

/// Raw candidate quadrisecant lines before merging, in deterministic order.
pub fn raw_candidates(k: &PolygonalKnot, tol: &ToleranceConfig, prefilter: bool) -> Vec<LineHits> {
    let t = k.tolerance(tol);
    let es = edges_of(k);
    let mut v = skew_candidates(k, &es, &t, prefilter);
    v.extend(plane_candidates(k, &es, &t));
    v
}

/// Candidates merged by canonical line, with coincident hits merged by
/// position. Hits sharing a closed edge with another hit are dropped.
pub fn merged_lines(k: &PolygonalKnot, tol: &ToleranceConfig, prefilter: bool) -> Vec<LineHits> {
    let t = k.tolerance(tol);
    let mut groups: Vec<LineHits> = Vec::new();
    for cand in raw_candidates(k, tol, prefilter) {
        let slot = groups.iter_mut().find(|g| g.line.same_line(&cand.line, t.tol_line));
        match slot {
            Some(g) => {
                for h in cand.hits {
                    if !g.hits.iter().any(|x| (x.2 - h.2).norm() <= 10.0 * t.tol_hit) {
                        g.hits.push(h);
                    }
                }
            }
            None => {
                let mut g = LineHits { line: cand.line, hits: Vec::new() };
                for h in cand.hits {
                    if !g.hits.iter().any(|x| (x.2 - h.2).norm() <= 10.0 * t.tol_hit) {
                        g.hits.push(h);
                    }
                }
                groups.push(g);
            }
        }
    }
    for g in groups.iter_mut() {
        let pts: Vec<KnotPoint> = g.hits.iter().map(|h| k.point(h.0, h.1)).collect();
        let keep: Vec<bool> = (0..pts.len())
            .map(|a| !(0..pts.len()).any(|b| b != a && k.share_closed_edge(&pts[a], &pts[b], t.tol_param)))
            .collect();
        let mut it = keep.iter();
        g.hits.retain(|_| *it.next().unwrap());
        g.hits.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.partial_cmp(&y.1).unwrap()));
    }
    groups.retain(|g| g.hits.len() >= 4);
    groups
}

/// Edge lists of lines meeting the knot in five or more points.
pub fn five_secant_witnesses(k: &PolygonalKnot, tol: &ToleranceConfig) -> Vec<Vec<usize>> {
    merged_lines(k, tol, true)
        .into_iter()
        .filter(|g| g.hits.len() >= 5)
        .map(|g| g.hits.iter().map(|h| h.0).collect())
        .collect()
}

fn build_quadrisecant(k: &PolygonalKnot, g: &LineHits) -> Quadrisecant {
    let line = g.line;
    let mut by_line: Vec<KnotPoint> = g.hits.iter().map(|h| k.point(h.0, h.1)).collect();
    by_line.sort_by(|a, b| line.param_of(&a.point).partial_cmp(&line.param_of(&b.point)).unwrap());
    let s0 = k.arclength_of(&by_line[0]);
    let mut by_knot = by_line.clone();
    by_knot.sort_by(|a, b| {
        let fa = (k.arclength_of(a) - s0).rem_euclid(k.total_length());
        let fb = (k.arclength_of(b) - s0).rem_euclid(k.total_length());
        fa.partial_cmp(&fb).unwrap()
    });
    let line_order = [0, 1, 2, 3].map(|i| by_knot.iter().position(|q| *q == by_line[i]).unwrap());
    let class = classify_dihedral([0, 1, 2, 3], line_order);
    let gap = |a: usize, b: usize| (by_line[b].point - by_line[a].point).norm();
    Quadrisecant {
        points: [by_knot[0], by_knot[1], by_knot[2], by_knot[3]],
        line,
        line_order,
        class,
        r: gap(0, 1),
        s: gap(1, 2),
        t: gap(2, 3),
        essential: Essentiality::NotChecked,
    }
}

fn sort_key(q: &Quadrisecant) -> Vec<(usize, u64)> {
    let mut v: Vec<(usize, u64)> = q.line_points().iter().map(|p| (p.edge, p.t.to_bits())).collect();
    v.sort();
    v
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub prefilter: bool,
    pub require_generic: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self { prefilter: true, require_generic: true }
    }
}

pub fn enumerate_quadrisecants(k: &PolygonalKnot, tol: &ToleranceConfig) -> Result<Vec<Quadrisecant>, SecantError> {
    enumerate_quadrisecants_with(k, tol, EnumerateOptions::default())
}

pub fn enumerate_quadrisecants_with(
    k: &PolygonalKnot,
    tol: &ToleranceConfig,
    opts: EnumerateOptions,
) -> Result<Vec<Quadrisecant>, SecantError> {
    if opts.require_generic {
        let rep = check_static_genericity(k, tol);
        if !rep.is_generic {
            return Err(SecantError::NotGeneric(Box::new(rep)));
        }
    }
    let groups = merged_lines(k, tol, opts.prefilter);
    if opts.require_generic {
        if let Some(g) = groups.iter().find(|g| g.hits.len() >= 5) {
            return Err(SecantError::FiveSecantDetected(g.hits.iter().map(|h| h.0).collect()));
        }
    }
    let mut out: Vec<Quadrisecant> = groups.iter().filter(|g| g.hits.len() == 4).map(|g| build_quadrisecant(k, g)).collect();
    out.sort_by_key(sort_key);
    Ok(out)
}

/// True iff the knot has at least `2u²` quadrisecants.
pub fn pannwitz_lower_check(k: &PolygonalKnot, quads: &[Quadrisecant]) -> Result<bool, SecantError> {
    let u = k.unknotting_number().ok_or(SecantError::MissingMetadata)? as usize;
    Ok(quads.len() >= 2 * u * u)
}

fn family_samples(window: (f64, f64), step: f64, open_hi: bool) -> Vec<f64> {
    let (a, b) = window;
    let mut us = vec![a];
    let mut m = (a / step).floor() as i64 + 1;
    while (m as f64) * step < b {
        us.push(m as f64 * step);
        m += 1;
    }
    if !open_hi && b > a {
        us.push(b);
    }
    us
}

fn skew_families(k: &PolygonalKnot, es: &[Edge], tol: &ToleranceConfig, [i, j, l]: [usize; 3]) -> Vec<TrisecantFamily> {
    let sweep = SkewSweep::new(&es[i], &es[j], &es[l]);
    let mut fams = Vec::new();
    for w in sweep.window(0.0) {
        let topology = if w.1 - w.0 <= tol.tol_param { FamilyTopology::Point } else { FamilyTopology::ClosedInterval };
        let mut samples = Vec::new();
        for u in family_samples(w, tol.family_step, false) {
            let Some((s, t)) = sweep.at(u) else { continue };
            let pts = [k.point(l, u.min(1.0)), k.point(i, s.clamp(0.0, 1.0)), k.point(j, t.clamp(0.0, 1.0))];
            if let Some(tri) = trisecant_from_points(k, pts, tol) {
                samples.push(tri);
            }
        }
        if !samples.is_empty() {
            fams.push(TrisecantFamily { edges: [i, j, l], topology, window: w, samples });
        }
    }
    fams
}

fn trisecant_from_points(k: &PolygonalKnot, pts: [KnotPoint; 3], tol: &ToleranceConfig) -> Option<Trisecant> {
    for a in 0..3 {
        for b in (a + 1)..3 {
            if k.share_closed_edge(&pts[a], &pts[b], tol.tol_param) {
                return None;
            }
        }
    }
    let line = OrientedLine::through(&pts[0].point, &pts[1].point).ok()?.unoriented();
    let mut by_line = pts.to_vec();
    by_line.sort_by(|a, b| line.param_of(&a.point).partial_cmp(&line.param_of(&b.point)).unwrap());
    Some(Trisecant::from_first(k, by_line[0], by_line[1], by_line[2]))
}

fn pencil_families(
    k: &PolygonalKnot,
    es: &[Edge],
    tol: &ToleranceConfig,
    i: usize,
    third: usize,
) -> Vec<TrisecantFamily> {
    let n = k.n();
    let i1 = (i + 1) % n;
    let normal = es[i].v.cross(&es[i1].v);
    let origin = es[i1].p;
    let Some(tp) = plane_hit(&normal, &origin, &es[third]) else { return vec![] };
    let Some(tp) = accept_param(tp, tol) else { return vec![] };
    let p = es[third].p + es[third].v * tp;
    // line through p and y(s) = v_i + s e_i meets v_{i+1} + w e_{i+1} where
    // n·((V - p) × (y - p)) + w n·(G × (y - p)) = 0
    let vp = origin - p;
    let y0 = es[i].p - p;
    let g = es[i1].v;
    let al = -normal.dot(&vp.cross(&y0));
    let be = -normal.dot(&vp.cross(&es[i].v));
    let ga = normal.dot(&g.cross(&y0));
    let de = normal.dot(&g.cross(&es[i].v));
    let mut fams = Vec::new();
    for w in mobius_window(al, be, ga, de, 0.0, 1.0, 0.0) {
        let open_hi = w.1 >= 1.0 - tol.tol_param;
        let topology = if w.1 - w.0 <= tol.tol_param {
            FamilyTopology::Point
        } else if open_hi {
            FamilyTopology::HalfOpen
        } else {
            FamilyTopology::ClosedInterval
        };
        let mut samples = Vec::new();
        for s in family_samples(w, tol.family_step, open_hi) {
            let den = ga + de * s;
            if den == 0.0 {
                continue;
            }
            let wv = (al + be * s) / den;
            let pts = [k.point(third, tp), k.point(i, s), k.point(i1, wv.clamp(0.0, 1.0))];
            if let Some(tri) = trisecant_from_points(k, pts, tol) {
                samples.push(tri);
            }
        }
        if !samples.is_empty() {
            let mut e = [i, i1, third];
            e.sort();
            fams.push(TrisecantFamily { edges: e, topology, window: w, samples });
        }
    }
    fams
}

/// All trisecant families, sampled every `family_step` along the sweep edge.
pub fn trisecant_families(k: &PolygonalKnot, tol: &ToleranceConfig) -> Result<Vec<TrisecantFamily>, SecantError> {
    let rep = check_static_genericity(k, tol);
    if !rep.is_generic {
        return Err(SecantError::NotGeneric(Box::new(rep)));
    }
    let t = k.tolerance(tol);
    let es = edges_of(k);
    let n = k.n();
    let mut fams: Vec<TrisecantFamily> =
        skew_triples(k).into_par_iter().flat_map_iter(|tr| skew_families(k, &es, &t, tr)).collect();
    let pencil: Vec<TrisecantFamily> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let i1 = (i + 1) % n;
            (0..n)
                .filter(|&m| !k.edges_adjacent(m, i) && !k.edges_adjacent(m, i1))
                .flat_map(|m| pencil_families(k, &es, &t, i, m))
                .collect::<Vec<_>>()
        })
        .collect();
    fams.extend(pencil);
    Ok(fams)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub samples: usize,
    pub covered_samples: usize,
    /// Arclength-weighted fraction of sample points that are the first point
    /// of some trisecant.
    pub fraction: f64,
    /// Sample points `(edge, t)` not covered, at most 64 listed.
    pub uncovered: Vec<(usize, f64)>,
}

fn is_first_point(k: &PolygonalKnot, es: &[Edge], a: &KnotPoint, tol: &ToleranceConfig) -> bool {
    let n = k.n();
    for j in 0..n {
        if j == a.edge {
            continue;
        }
        let e = &es[j];
        let normal = (e.p - a.point).cross(&e.v);
        if normal.norm() <= 1e-14 * e.v.norm() * (e.p - a.point).norm() {
            continue;
        }
        for m in 0..n {
            if m == a.edge || m == j {
                continue;
            }
            let Some(tz) = plane_hit(&normal, &a.point, &es[m]) else { continue };
            let Some(tz) = accept_param(tz, tol) else { continue };
            let z = k.point(m, tz);
            let dz = z.point - a.point;
            if dz.norm() <= tol.tol_hit {
                continue;
            }
            let Ok(line) = OrientedLine::new(a.point, dz) else { continue };
            let Some((ty, dist)) = edge_hit(&line, e) else { continue };
            if dist > 1e-6 * (1.0 + dz.norm()) {
                continue;
            }
            let Some(ty) = accept_param(ty, tol) else { continue };
            let y = k.point(j, ty);
            if (y.point - a.point).dot(&dz) <= 0.0 {
                continue;
            }
            if (y.point - z.point).norm() <= tol.tol_hit {
                continue;
            }
            if k.share_closed_edge(a, &y, tol.tol_param)
                || k.share_closed_edge(a, &z, tol.tol_param)
                || k.share_closed_edge(&y, &z, tol.tol_param)
            {
                continue;
            }
            return true;
        }
    }
    false
}

/// Fraction of the knot (sampled at edge midpoints of a `family_step` grid)
/// whose points start some trisecant.
pub fn trisecant_coverage(k: &PolygonalKnot, tol: &ToleranceConfig) -> CoverageReport {
    let t = k.tolerance(tol);
    let es = edges_of(k);
    let per_edge = (1.0 / t.family_step).round().max(1.0) as usize;
    let pts: Vec<(usize, f64)> =
        (0..k.n()).flat_map(|e| (0..per_edge).map(move |m| (e, (m as f64 + 0.5) / per_edge as f64))).collect();
    let flags: Vec<bool> = pts.par_iter().map(|&(e, u)| is_first_point(k, &es, &k.point(e, u), &t)).collect();
    let mut missing_len = 0.0;
    let mut uncovered = Vec::new();
    let mut covered_samples = 0;
    for (&(e, u), &f) in pts.iter().zip(&flags) {
        if f {
            covered_samples += 1;
        } else {
            missing_len += k.edge_length(e) / per_edge as f64;
            if uncovered.len() < 64 {
                uncovered.push((e, u));
            }
        }
    }
    let fraction = if covered_samples == 0 { 0.0 } else { (1.0 - missing_len / k.total_length()).max(0.0) };
    CoverageReport { samples: pts.len(), covered_samples, fraction, uncovered }
}

/// CSV report, one row per quadrisecant.
pub fn quadrisecants_csv(quads: &[Quadrisecant]) -> String {
    let mut s = String::from(
        "index,class,edge_a,t_a,edge_b,t_b,edge_c,t_c,edge_d,t_d,line_order,r,s,t,base_x,base_y,base_z,dir_x,dir_y,dir_z,essential\n",
    );
    for (i, q) in quads.iter().enumerate() {
        let cls = match q.class {
            DihedralClass::Simple => "simple",
            DihedralClass::Flipped => "flipped",
            DihedralClass::Alternating => "alternating",
        };
        let ess = match q.essential {
            Essentiality::NotChecked => "not_checked",
            Essentiality::Certified => "certified",
            Essentiality::Inessential => "inessential",
            Essentiality::Inconclusive => "inconclusive",
        };
        let labels = ["a", "b", "c", "d"];
        let order: String = q.line_order.iter().map(|&i| labels[i]).collect();
        let b = q.line.base();
        let d = q.line.dir();
        s.push_str(&format!("{i},{cls}"));
        for p in &q.points {
            s.push_str(&format!(",{},{:.12}", p.edge, p.t));
        }
        s.push_str(&format!(
            ",{order},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{ess}\n",
            q.r, q.s, q.t, b.x, b.y, b.z, d.x, d.y, d.z
        ));
    }
    s
}
