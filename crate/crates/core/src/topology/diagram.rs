//! Projections of closed polylines and their crossings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom3::{Point3, Vec3};

/// Orthogonal projection along `dir`; the viewer sits at `+dir`, so larger
/// height means closer to the viewer. `e1 × e2 = dir`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub dir: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
}

impl Projection {
    pub fn new(dir: Vec3) -> Self {
        let d = dir.normalize();
        let helper = if d.x.abs() < 0.6 { Vec3::x() } else { Vec3::y() };
        let e1 = helper.cross(&d).normalize();
        let e2 = d.cross(&e1);
        Self { dir: d, e1, e2 }
    }

    pub fn xy(&self, p: &Point3) -> [f64; 2] {
        [p.coords.dot(&self.e1), p.coords.dot(&self.e2)]
    }

    pub fn height(&self, p: &Point3) -> f64 {
        p.coords.dot(&self.dir)
    }
}

pub fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm2(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// Position on a component: segment index and parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Site {
    pub comp: usize,
    pub seg: usize,
    pub t: f64,
}

impl Site {
    pub fn key(&self) -> f64 {
        self.seg as f64 + self.t
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub over: Site,
    pub under: Site,
    /// Projected directions of the over and under strands.
    pub u_over: [f64; 2],
    pub u_under: [f64; 2],
    /// +1 for a right-handed crossing.
    pub sign: i32,
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pub proj: Projection,
    pub crossings: Vec<Crossing>,
    pub comp_sizes: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degenerate;

/// Crossings among closed polylines, or `Degenerate` when the projection has
/// a tangency, a vertex on a strand, or a true intersection within tolerance.
pub fn diagram(comps: &[&[Point3]], proj: Projection) -> Result<Diagram, Degenerate> {
    let segs: Vec<(usize, usize, [f64; 2], [f64; 2], f64, f64)> = comps
        .iter()
        .enumerate()
        .flat_map(|(c, pts)| {
            let n = pts.len();
            (0..n).map(move |i| {
                let p = &pts[i];
                let q = &pts[(i + 1) % n];
                (c, i, proj.xy(p), proj.xy(q), proj.height(p), proj.height(q))
            })
        })
        .collect();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for s in &segs {
        for p in [s.2, s.3] {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
    }
    let scale = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300);
    let eta = 1e-10 * scale;
    let mut crossings = Vec::new();
    for a in 0..segs.len() {
        let (ca, ia, p1, p2, hp1, hp2) = segs[a];
        let d1 = sub2(p2, p1);
        let l1 = norm2(d1);
        for b in (a + 1)..segs.len() {
            let (cb, ib, q1, q2, hq1, hq2) = segs[b];
            let d2 = sub2(q2, q1);
            let l2 = norm2(d2);
            let adjacent = ca == cb && {
                let n = comps[ca].len();
                (ia + 1) % n == ib || (ib + 1) % n == ia
            };
            if adjacent {
                if cross2(d1, d2).abs() <= 1e-12 * l1 * l2 {
                    let back = if (ia + 1) % comps[ca].len() == ib { d1[0] * d2[0] + d1[1] * d2[1] } else { 1.0 };
                    if back < 0.0 {
                        return Err(Degenerate);
                    }
                }
                continue;
            }
            // quick reject by bounding boxes
            if p1[0].max(p2[0]) + eta < q1[0].min(q2[0])
                || q1[0].max(q2[0]) + eta < p1[0].min(p2[0])
                || p1[1].max(p2[1]) + eta < q1[1].min(q2[1])
                || q1[1].max(q2[1]) + eta < p1[1].min(p2[1])
            {
                continue;
            }
            let den = cross2(d1, d2);
            let w = sub2(q1, p1);
            if den.abs() <= 1e-12 * l1 * l2 {
                // parallel in projection: fine unless they overlap
                if cross2(d1, w).abs() / l1 <= eta {
                    let t0 = (w[0] * d1[0] + w[1] * d1[1]) / (l1 * l1);
                    let t1 = t0 + (d2[0] * d1[0] + d2[1] * d1[1]) / (l1 * l1);
                    if t0.max(t1) >= -eta / l1 && t0.min(t1) <= 1.0 + eta / l1 {
                        return Err(Degenerate);
                    }
                }
                continue;
            }
            let t = cross2(w, d2) / den;
            let u = cross2(w, d1) / den;
            let mt = eta / l1;
            let mu = eta / l2;
            let near_t = t.abs() <= mt || (1.0 - t).abs() <= mt;
            let near_u = u.abs() <= mu || (1.0 - u).abs() <= mu;
            let inside_t = t > -mt && t < 1.0 + mt;
            let inside_u = u > -mu && u < 1.0 + mu;
            if inside_t && inside_u && (near_t || near_u) {
                return Err(Degenerate);
            }
            if !(t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0) {
                continue;
            }
            let ha = hp1 + (hp2 - hp1) * t;
            let hb = hq1 + (hq2 - hq1) * u;
            if (ha - hb).abs() <= eta {
                return Err(Degenerate);
            }
            let sa = Site { comp: ca, seg: ia, t };
            let sb = Site { comp: cb, seg: ib, t: u };
            let (over, under, u_over, u_under) = if ha > hb { (sa, sb, d1, d2) } else { (sb, sa, d2, d1) };
            let sign = if cross2(u_over, u_under) > 0.0 { 1 } else { -1 };
            crossings.push(Crossing { over, under, u_over, u_under, sign });
        }
    }
    Ok(Diagram { proj, crossings, comp_sizes: comps.iter().map(|c| c.len()).collect() })
}

/// Uniformly random unit vector.
pub fn random_direction(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Deterministic list of candidate projection directions for `seed`.
pub fn directions(seed: u64, count: usize) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_d1a6);
    (0..count).map(|_| random_direction(&mut rng)).collect()
}

/// Linking number from the crossings where component 0 passes over 1.
pub fn linking_from(d: &Diagram) -> i64 {
    d.crossings
        .iter()
        .filter(|c| c.over.comp == 0 && c.under.comp == 1)
        .map(|c| c.sign as i64)
        .sum()
}
