//! 3-D kernel: lines, segments, quadrics through skew lines, rulings and
//! transversal solvers.
//!
//! Lines meeting four given lines are computed two independent ways: through
//! the doubly-ruled quadric spanned by the first three lines, and through
//! Plücker coordinates. The two routes share nothing beyond the line type.

use nalgebra::{Isometry3, Matrix3, Matrix4, SMatrix, Unit, Vector3, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tolerance::ToleranceConfig;

pub type Point3 = nalgebra::Point3<f64>;
pub type Vec3 = Vector3<f64>;
pub type Dir3 = Unit<Vector3<f64>>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("ill-conditioned quadric solve (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("point is not on the quadric (residual {0:.3e})")]
    NotOnSurface(f64),
    #[error("tangent plane section does not split into two distinct lines")]
    DegenerateTangency,
}

pub type GeomResult<T> = Result<T, GeomError>;

/// An oriented line stored in canonical form: `base` is the point of the
/// line closest to the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    base: Point3,
    dir: Vec3,
}

impl OrientedLine {
    pub fn new(point: Point3, direction: Vec3) -> GeomResult<Self> {
        let n = direction.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(GeomError::DegenerateConfiguration("zero line direction".into()));
        }
        let dir = direction / n;
        let p = point.coords;
        let base = p - dir * p.dot(&dir);
        Ok(Self { base: Point3::from(base), dir })
    }

    pub fn through(p: &Point3, q: &Point3) -> GeomResult<Self> {
        Self::new(*p, q - p)
    }

    pub fn base(&self) -> Point3 {
        self.base
    }

    pub fn dir(&self) -> Dir3 {
        Unit::new_unchecked(self.dir)
    }

    pub fn point_at(&self, t: f64) -> Point3 {
        self.base + self.dir * t
    }

    /// Signed coordinate of the orthogonal projection of `p` on the line.
    pub fn param_of(&self, p: &Point3) -> f64 {
        (p - self.base).dot(&self.dir)
    }

    pub fn distance_to_point(&self, p: &Point3) -> f64 {
        let v = p - self.base;
        (v - self.dir * v.dot(&self.dir)).norm()
    }

    pub fn reversed(&self) -> Self {
        Self { base: self.base, dir: -self.dir }
    }

    /// Same line with the direction made lexicographically positive.
    pub fn unoriented(&self) -> Self {
        let d = self.dir;
        let flip = if d.x.abs() > 1e-12 {
            d.x < 0.0
        } else if d.y.abs() > 1e-12 {
            d.y < 0.0
        } else {
            d.z < 0.0
        };
        if flip {
            self.reversed()
        } else {
            *self
        }
    }

    /// Equality of the underlying point sets, ignoring orientation.
    pub fn same_line(&self, other: &Self, tol: f64) -> bool {
        let a = self.unoriented();
        let b = other.unoriented();
        let scale = 1.0f64.max(a.base.coords.norm()).max(b.base.coords.norm());
        (a.dir - b.dir).norm() <= tol && (a.base - b.base).norm() <= tol * scale
    }

    pub fn transformed(&self, iso: &Isometry3<f64>) -> Self {
        let p = iso.transform_point(&self.base);
        let d = iso.transform_vector(&self.dir);
        Self::new(p, d).expect("rigid motion preserves direction norm")
    }

    /// Parameters `(s, t)` of the mutually closest points on `self` and `other`,
    /// or `None` for parallel lines.
    pub fn closest_params(&self, other: &Self) -> Option<(f64, f64)> {
        closest_params_raw(&self.base, &self.dir, &other.base, &other.dir)
    }

    pub fn distance_to_line(&self, other: &Self) -> f64 {
        let c = self.dir.cross(&other.dir);
        let w = other.base - self.base;
        let cn = c.norm();
        if cn < 1e-14 {
            return (w - self.dir * w.dot(&self.dir)).norm();
        }
        w.dot(&c).abs() / cn
    }
}

fn closest_params_raw(p: &Point3, u: &Vec3, q: &Point3, v: &Vec3) -> Option<(f64, f64)> {
    let w = p - q;
    let a = u.dot(u);
    let b = u.dot(v);
    let c = v.dot(v);
    let d = u.dot(&w);
    let e = v.dot(&w);
    let den = a * c - b * b;
    if den <= 1e-14 * a * c {
        return None;
    }
    Some(((b * e - c * d) / den, (a * e - b * d) / den))
}

/// A straight segment `p0 -> p1` with positive length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub p0: Point3,
    pub p1: Point3,
}

impl Segment {
    pub fn new(p0: Point3, p1: Point3, tol: &ToleranceConfig) -> GeomResult<Self> {
        if (p1 - p0).norm() <= tol.tol_len {
            return Err(GeomError::DegenerateConfiguration("zero-length segment".into()));
        }
        Ok(Self { p0, p1 })
    }

    pub fn vector(&self) -> Vec3 {
        self.p1 - self.p0
    }

    pub fn length(&self) -> f64 {
        self.vector().norm()
    }

    pub fn point_at(&self, t: f64) -> Point3 {
        self.p0 + self.vector() * t
    }

    pub fn line(&self) -> OrientedLine {
        OrientedLine::new(self.p0, self.vector()).expect("segment has positive length")
    }

    pub fn distance_to_point(&self, p: &Point3) -> f64 {
        let v = self.vector();
        let t = ((p - self.p0).dot(&v) / v.norm_squared()).clamp(0.0, 1.0);
        (p - self.point_at(t)).norm()
    }

    pub fn distance_to_segment(&self, other: &Segment) -> f64 {
        segment_distance(&self.p0, &self.p1, &other.p0, &other.p1).0
    }
}

/// Distance between segments `[p0,p1]` and `[q0,q1]` with the parameters of
/// the closest points.
/// A unit vector perpendicular to `v`.
pub fn any_perpendicular(v: &Vec3) -> Vec3 {
    let u = v.normalize();
    let h = if u.x.abs() < 0.6 { Vec3::x() } else { Vec3::y() };
    u.cross(&h).normalize()
}

pub fn segment_distance(p0: &Point3, p1: &Point3, q0: &Point3, q1: &Point3) -> (f64, f64, f64) {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let (s, t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return ((p0 - q0).norm(), 0.0, 0.0);
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 1e-14 * a * e { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let cp = p0 + d1 * s;
    let cq = q0 + d2 * t;
    ((cp - cq).norm(), s, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadricKind {
    HyperboloidOneSheet,
    HyperbolicParaboloid,
    Degenerate,
}

/// Projective quadratic form `x̂ᵀ Q x̂` with `x̂ = (x, y, z, 1)`, normalized to
/// unit Frobenius norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadric {
    pub coeffs: Matrix4<f64>,
    pub kind: QuadricKind,
    /// Condition number of the null-space extraction that produced it.
    pub condition: f64,
}

fn hom(p: &Point3) -> Vector4<f64> {
    Vector4::new(p.x, p.y, p.z, 1.0)
}

fn hom_dir(d: &Vec3) -> Vector4<f64> {
    Vector4::new(d.x, d.y, d.z, 0.0)
}

impl Quadric {
    pub fn from_coeffs(coeffs: Matrix4<f64>, kind: QuadricKind) -> Self {
        let sym = (coeffs + coeffs.transpose()) * 0.5;
        let n = sym.norm();
        Self { coeffs: sym / n, kind, condition: 1.0 }
    }

    pub fn eval(&self, p: &Point3) -> f64 {
        let x = hom(p);
        x.dot(&(self.coeffs * x))
    }

    /// `|x̂ᵀQx̂| / |x̂|²`, a scale-free on-surface residual.
    pub fn residual(&self, p: &Point3) -> f64 {
        let x = hom(p);
        x.dot(&(self.coeffs * x)).abs() / x.norm_squared()
    }

    /// First-order distance from `p` to the surface, `|Q(p)| / |∇Q(p)|`; falls
    /// back to `sqrt(|Q(p)| / |Q|)` where the gradient vanishes.
    pub fn surface_distance(&self, p: &Point3) -> f64 {
        let x = hom(p);
        let qx = self.coeffs * x;
        let val = x.dot(&qx).abs();
        let grad = 2.0 * qx.fixed_rows::<3>(0).norm();
        if grad > 1e-300 && val / grad < (val / self.coeffs.norm()).sqrt() {
            val / grad
        } else {
            (val / self.coeffs.norm()).sqrt()
        }
    }

    pub fn transformed(&self, iso: &Isometry3<f64>) -> Self {
        // points map x -> M x, so the form becomes M^{-T} Q M^{-1}.
        let inv = iso.inverse().to_homogeneous();
        let c = inv.transpose() * self.coeffs * inv;
        Self { coeffs: c / c.norm(), kind: self.kind, condition: self.condition }
    }
}

/// Quadric form `xy - z` in the coefficient layout used throughout.
pub fn saddle_xy_minus_z() -> Quadric {
    let mut m = Matrix4::zeros();
    m[(0, 1)] = 0.5;
    m[(1, 0)] = 0.5;
    m[(2, 3)] = -0.5;
    m[(3, 2)] = -0.5;
    Quadric::from_coeffs(m, QuadricKind::HyperbolicParaboloid)
}

fn check_skew(l1: &OrientedLine, l2: &OrientedLine, tol: &ToleranceConfig) -> GeomResult<()> {
    let sin = l1.dir.cross(&l2.dir).norm();
    if sin <= tol.tol_dir {
        return Err(GeomError::DegenerateConfiguration("parallel generator lines".into()));
    }
    if l1.distance_to_line(l2) <= tol.tol_skew {
        return Err(GeomError::DegenerateConfiguration("intersecting generator lines".into()));
    }
    Ok(())
}

/// Centroid and RMS radius of a point cloud, used to precondition solves.
fn normalization(points: &[Point3]) -> (Vec3, f64) {
    let n = points.len() as f64;
    let c = points.iter().fold(Vec3::zeros(), |acc, p| acc + p.coords) / n;
    let s = (points.iter().map(|p| (p.coords - c).norm_squared()).sum::<f64>() / n).sqrt();
    (c, if s > 0.0 { s } else { 1.0 })
}

fn monomials(p: &Vec3) -> [f64; 10] {
    let (x, y, z) = (p.x, p.y, p.z);
    [x * x, y * y, z * z, x * y, x * z, y * z, x, y, z, 1.0]
}

fn form_from_monomials(c: &[f64]) -> Matrix4<f64> {
    Matrix4::new(
        c[0],
        c[3] / 2.0,
        c[4] / 2.0,
        c[6] / 2.0,
        c[3] / 2.0,
        c[1],
        c[5] / 2.0,
        c[7] / 2.0,
        c[4] / 2.0,
        c[5] / 2.0,
        c[2],
        c[8] / 2.0,
        c[6] / 2.0,
        c[7] / 2.0,
        c[8] / 2.0,
        c[9],
    )
}

/// The unique quadric containing three pairwise-skew lines.
pub fn quadric_through_lines(
    l1: &OrientedLine,
    l2: &OrientedLine,
    l3: &OrientedLine,
    tol: &ToleranceConfig,
) -> GeomResult<Quadric> {
    let lines = [l1, l2, l3];
    check_skew(l1, l2, tol)?;
    check_skew(l1, l3, tol)?;
    check_skew(l2, l3, tol)?;

    let span = lines.iter().map(|l| l.base.coords.norm()).fold(1.0f64, f64::max);
    let mut pts = Vec::with_capacity(9);
    for l in lines {
        for s in [-span, 0.0, span] {
            pts.push(l.point_at(s));
        }
    }
    let (c, sigma) = normalization(&pts);
    let mut a = SMatrix::<f64, 10, 10>::zeros();
    for (r, p) in pts.iter().enumerate() {
        let q = (p.coords - c) / sigma;
        for (k, v) in monomials(&q).iter().enumerate() {
            a[(r, k)] = *v;
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..10).collect();
    order.sort_by(|&i, &j| sv[i].partial_cmp(&sv[j]).unwrap());
    let null_idx = order[0];
    let second = sv[order[1]];
    let largest = sv[order[9]];
    let cond = if second > 0.0 { largest / second } else { f64::INFINITY };
    if !(cond <= tol.cond_max) {
        return Err(GeomError::IllConditioned(cond));
    }
    let coeffs: Vec<f64> = (0..10).map(|k| v_t[(null_idx, k)]).collect();
    let q_norm = form_from_monomials(&coeffs);
    // x' = T x with T = [[I/s, -c/s], [0, 1]]
    let mut t = Matrix4::identity() / sigma;
    t[(3, 3)] = 1.0;
    for k in 0..3 {
        t[(k, 3)] = -c[k] / sigma;
    }
    let q = t.transpose() * q_norm * t;

    let det = Matrix3::from_columns(&[l1.dir, l2.dir, l3.dir]).determinant();
    let kind = if det.abs() <= tol.tol_dir {
        QuadricKind::HyperbolicParaboloid
    } else {
        QuadricKind::HyperboloidOneSheet
    };
    let mut quad = Quadric::from_coeffs(q, kind);
    quad.condition = cond;
    Ok(quad)
}

fn orthonormal_complement(n: &Vec3) -> (Vec3, Vec3) {
    let n = n.normalize();
    let helper = if n.x.abs() < 0.6 { Vec3::x() } else if n.y.abs() < 0.6 { Vec3::y() } else { Vec3::z() };
    let e1 = n.cross(&helper).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

/// Directions of the two lines of `q` through its point `p`.
pub fn lines_through_point(q: &Quadric, p: &Point3, tol: &ToleranceConfig) -> GeomResult<[Vec3; 2]> {
    let res = q.residual(p);
    if res >= tol.tol_on_surface {
        return Err(GeomError::NotOnSurface(res));
    }
    let qp = q.coeffs * hom(p);
    let g = Vec3::new(qp[0], qp[1], qp[2]);
    if g.norm() < 1e-14 {
        return Err(GeomError::DegenerateTangency);
    }
    let (e1, e2) = orthonormal_complement(&g);
    let a = q.coeffs.fixed_view::<3, 3>(0, 0).into_owned();
    let al = e1.dot(&(a * e1));
    let be = e1.dot(&(a * e2));
    let ga = e2.dot(&(a * e2));
    let disc = be * be - al * ga;
    let scale = al * al + be * be + ga * ga;
    if !(disc > 1e-14 * scale) {
        return Err(GeomError::DegenerateTangency);
    }
    // roots of al c^2 + 2 be c s + ga s^2 = 0 in homogeneous form
    let w = -be - be.signum() * disc.sqrt();
    let dirs = [(w, al), (ga, w)];
    Ok(dirs.map(|(c, s)| (e1 * c + e2 * s).normalize()))
}

/// The line of the transversal ruling of `q` through `p`: the one of the two
/// lines through `p` that meets all three generators.
pub fn ruling_through_point(
    q: &Quadric,
    p: &Point3,
    generators: &[OrientedLine; 3],
    tol: &ToleranceConfig,
) -> GeomResult<OrientedLine> {
    let dirs = lines_through_point(q, p, tol)?;
    let mut best: Option<(f64, OrientedLine)> = None;
    for d in dirs {
        let line = OrientedLine::new(*p, d)?;
        let worst = generators.iter().map(|g| line.distance_to_line(g)).fold(0.0, f64::max);
        if best.as_ref().map_or(true, |(w, _)| worst < *w) {
            best = Some((worst, line));
        }
    }
    Ok(best.expect("two candidate lines").1)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadricHits {
    Empty,
    One(f64),
    Two(f64, f64),
    Contained,
}

impl QuadricHits {
    pub fn params(&self) -> Vec<f64> {
        match *self {
            QuadricHits::Empty | QuadricHits::Contained => vec![],
            QuadricHits::One(t) => vec![t],
            QuadricHits::Two(a, b) => vec![a, b],
        }
    }
}

/// Parameters `t` with `origin + t·dir` on the quadric.
pub fn line_quadric_params(q: &Quadric, origin: &Point3, dir: &Vec3, tol: &ToleranceConfig) -> QuadricHits {
    let o = hom(origin);
    let d = hom_dir(dir);
    let qd = q.coeffs * d;
    let a2 = d.dot(&qd);
    let a1 = 2.0 * o.dot(&qd);
    let a0 = o.dot(&(q.coeffs * o));
    let dn = dir.norm();
    let on = o.norm();
    let scale = dn * dn + on * dn + on * on;
    if a2.abs().max(a1.abs()).max(a0.abs()) <= tol.tol_contained * scale {
        return QuadricHits::Contained;
    }
    if a2.abs() <= 1e-12 * a1.abs() {
        return QuadricHits::One(-a0 / a1);
    }
    if a2.abs() <= tol.tol_contained * scale && a1.abs() <= tol.tol_contained * scale {
        return QuadricHits::Empty;
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    let dscale = a1 * a1 + (4.0 * a2 * a0).abs();
    if disc.abs() <= 1e-14 * dscale {
        return QuadricHits::One(-a1 / (2.0 * a2));
    }
    if disc < 0.0 {
        return QuadricHits::Empty;
    }
    let qv = -0.5 * (a1 + a1.signum() * disc.sqrt());
    let (t1, t2) = if qv != 0.0 { (qv / a2, a0 / qv) } else { (0.0, 0.0) };
    QuadricHits::Two(t1.min(t2), t1.max(t2))
}

/// Line/quadric intersection in the canonical parametrization of `l`.
pub fn line_quadric_intersection(q: &Quadric, l: &OrientedLine, tol: &ToleranceConfig) -> QuadricHits {
    line_quadric_params(q, &l.base, &l.dir, tol)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Transversals {
    Finite(Vec<OrientedLine>),
    Infinite,
}

impl Transversals {
    pub fn count(&self) -> Option<usize> {
        match self {
            Transversals::Finite(v) => Some(v.len()),
            Transversals::Infinite => None,
        }
    }
}

/// Lines meeting all four lines, via the quadric through the first three.
pub fn transversals_of_four_lines(lines: &[OrientedLine; 4], tol: &ToleranceConfig) -> GeomResult<Transversals> {
    let q = quadric_through_lines(&lines[0], &lines[1], &lines[2], tol)?;
    let gens = [lines[0], lines[1], lines[2]];
    let hits = line_quadric_intersection(&q, &lines[3], tol);
    if hits == QuadricHits::Contained {
        return Ok(Transversals::Infinite);
    }
    let mut out: Vec<OrientedLine> = Vec::new();
    for t in hits.params() {
        let p = lines[3].point_at(t);
        let l = ruling_through_point(&q, &p, &gens, tol)?;
        if !out.iter().any(|m| m.same_line(&l, tol.tol_line)) {
            out.push(l);
        }
    }
    Ok(Transversals::Finite(out))
}

/// Plücker coordinates `(d, m)` with `m = p × d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PluckerLine {
    pub d: Vec3,
    pub m: Vec3,
}

impl PluckerLine {
    pub fn from_line(l: &OrientedLine) -> Self {
        Self { d: l.dir, m: l.base.coords.cross(&l.dir) }
    }

    /// Zero iff the two lines are coplanar (meet or are parallel).
    pub fn reciprocal(&self, other: &Self) -> f64 {
        self.d.dot(&other.m) + self.m.dot(&other.d)
    }

    pub fn identity_residual(&self) -> f64 {
        self.d.dot(&self.m) / (self.d.norm() * self.m.norm()).max(1e-300)
    }

    pub fn to_line(&self) -> Option<OrientedLine> {
        let dn2 = self.d.norm_squared();
        if dn2 <= 1e-18 * (dn2 + self.m.norm_squared()) {
            return None;
        }
        let p = self.d.cross(&self.m) / dn2;
        OrientedLine::new(Point3::from(p), self.d).ok()
    }
}

/// Lines meeting all four lines, via four linear conditions inside the
/// Plücker quadric.
pub fn transversals_plucker(lines: &[OrientedLine; 4], tol: &ToleranceConfig) -> GeomResult<Transversals> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            check_skew(&lines[i], &lines[j], tol)?;
        }
    }
    let pts: Vec<Point3> = lines.iter().flat_map(|l| [l.point_at(-1.0), l.point_at(1.0)]).collect();
    let (c, sigma) = normalization(&pts);
    let normed: Vec<PluckerLine> = lines
        .iter()
        .map(|l| {
            let nl = OrientedLine::new(Point3::from((l.base.coords - c) / sigma), l.dir).unwrap();
            PluckerLine::from_line(&nl)
        })
        .collect();
    let mut a = SMatrix::<f64, 6, 6>::zeros();
    for (r, pl) in normed.iter().enumerate() {
        for k in 0..3 {
            a[(r, k)] = pl.m[k];
            a[(r, 3 + k)] = pl.d[k];
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| sv[j].partial_cmp(&sv[i]).unwrap());
    if sv[order[3]] <= 1e-10 * sv[order[0]] {
        // the first three are skew, so the fourth condition is implied by them
        return Ok(Transversals::Infinite);
    }
    let row = |k: usize| -> (Vec3, Vec3) {
        let r = order[k];
        (
            Vec3::new(v_t[(r, 0)], v_t[(r, 1)], v_t[(r, 2)]),
            Vec3::new(v_t[(r, 3)], v_t[(r, 4)], v_t[(r, 5)]),
        )
    };
    let u = row(4);
    let v = row(5);
    let klein = |x: &(Vec3, Vec3), y: &(Vec3, Vec3)| x.0.dot(&y.1) + x.1.dot(&y.0);
    let qa = klein(&u, &u);
    let qb = klein(&u, &v);
    let qc = klein(&v, &v);
    if qa.abs().max(qb.abs()).max(qc.abs()) <= 1e-10 {
        return Ok(Transversals::Infinite);
    }
    let disc = qb * qb - qa * qc;
    let scale = qb * qb + (qa * qc).abs();
    let mut roots: Vec<(f64, f64)> = Vec::new();
    if disc.abs() <= 1e-14 * scale {
        if qa.abs() >= qc.abs() {
            roots.push((-qb / qa, 1.0));
        } else {
            roots.push((1.0, -qb / qc));
        }
    } else if disc > 0.0 {
        let sq = disc.sqrt();
        if qa.abs() >= qc.abs() {
            roots.push(((-qb + sq) / qa, 1.0));
            roots.push(((-qb - sq) / qa, 1.0));
        } else {
            roots.push((1.0, (-qb + sq) / qc));
            roots.push((1.0, (-qb - sq) / qc));
        }
    }
    let mut out: Vec<OrientedLine> = Vec::new();
    for (lam, mu) in roots {
        let pl = PluckerLine { d: u.0 * lam + v.0 * mu, m: u.1 * lam + v.1 * mu };
        if let Some(l) = pl.to_line() {
            let back = OrientedLine::new(Point3::from(l.base.coords * sigma + c), l.dir)?;
            if !out.iter().any(|m| m.same_line(&back, tol.tol_line)) {
                out.push(back);
            }
        }
    }
    Ok(Transversals::Finite(out))
}

/// True when the two solvers' outputs describe the same set of lines.
pub fn same_line_sets(a: &Transversals, b: &Transversals, tol: f64) -> bool {
    match (a, b) {
        (Transversals::Infinite, Transversals::Infinite) => true,
        (Transversals::Finite(x), Transversals::Finite(y)) => {
            x.len() == y.len()
                && x.iter().all(|l| y.iter().any(|m| l.same_line(m, tol)))
                && y.iter().all(|l| x.iter().any(|m| l.same_line(m, tol)))
        }
        _ => false,
    }
}
