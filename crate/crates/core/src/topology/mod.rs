//! Knot diagrams, invariants and essentiality certificates.

pub mod alexander;
pub mod diagram;
pub mod groups;
pub mod theta;
pub mod wirtinger;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom3::{segment_distance, Point3};
use crate::knot::{KnotFamily, PolygonalKnot};
use alexander::{best_diagram, format_poly, Poly};
use diagram::{diagram, directions, linking_from, Projection};

pub use theta::{
    build_theta, certify_essential, essential_quadrisecant_check, parallel_with_zero_linking, shortest_essential_arc,
    CertifyOptions, EssentialityReport, EssentialityVerdict, KnotGroupCache, ParallelLoop, ThetaGraph, VerdictStatus,
    Witness,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("no generic projection found after {0} directions")]
    ProjectionDegenerate(usize),
    #[error("curves are not disjoint (distance {0:e})")]
    NotDisjoint(f64),
    #[error("cannot embed the secant arc: {0}")]
    CannotEmbed(String),
    #[error("offset curve collides with the knot")]
    OffsetCollision,
    #[error("no arc certified essential")]
    NoneCertified,
    #[error("invalid secant: {0}")]
    InvalidSecant(String),
    #[error("integer overflow in polynomial arithmetic")]
    Overflow,
}

const PROJECTION_TRIES: usize = 32;

/// Normalized Alexander polynomial and determinant `|Δ(−1)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotSignature {
    pub alexander: Vec<i128>,
    pub determinant: u64,
}

impl KnotSignature {
    pub fn unknot() -> Self {
        Self { alexander: vec![1], determinant: 1 }
    }

    pub fn is_unknot_like(&self) -> bool {
        *self == Self::unknot()
    }

    pub fn polynomial_string(&self) -> String {
        format_poly(&Poly(self.alexander.clone()))
    }
}

pub fn knot_signature(k: &PolygonalKnot, seed: u64) -> Result<KnotSignature, TopologyError> {
    signature_of(k.vertices(), seed)
}

pub fn signature_of(vertices: &[Point3], seed: u64) -> Result<KnotSignature, TopologyError> {
    let kd = best_diagram(vertices, seed, PROJECTION_TRIES).ok_or(TopologyError::ProjectionDegenerate(PROJECTION_TRIES))?;
    let p = kd.alexander().map_err(|_| TopologyError::Overflow)?;
    Ok(KnotSignature { determinant: p.eval(-1).unsigned_abs() as u64, alexander: p.0 })
}

/// Determinant expected for each built-in family.
pub fn expected_determinant(f: &KnotFamily) -> u64 {
    match *f {
        KnotFamily::RoundCircle => 1,
        KnotFamily::Torus { p, q } => {
            if p % 2 == 1 && q % 2 == 1 {
                1
            } else if p % 2 == 0 {
                q as u64
            } else {
                p as u64
            }
        }
        KnotFamily::HexagonalTrefoil => 3,
        KnotFamily::Figure8 => 5,
        KnotFamily::FiveTwo => 7,
    }
}

/// Linking number of two disjoint closed polylines.
pub fn linking_number(c1: &[Point3], c2: &[Point3], seed: u64) -> Result<i64, TopologyError> {
    let gap = min_distance(c1, c2);
    let scale = bbox_scale(c1).max(bbox_scale(c2));
    if gap <= 1e-12 * scale.max(1.0) {
        return Err(TopologyError::NotDisjoint(gap));
    }
    for dir in directions(seed, PROJECTION_TRIES) {
        if let Ok(d) = diagram(&[c1, c2], Projection::new(dir)) {
            return Ok(linking_from(&d));
        }
    }
    Err(TopologyError::ProjectionDegenerate(PROJECTION_TRIES))
}

pub(crate) fn min_distance(c1: &[Point3], c2: &[Point3]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..c1.len() {
        let (p0, p1) = (c1[i], c1[(i + 1) % c1.len()]);
        for j in 0..c2.len() {
            let (q0, q1) = (c2[j], c2[(j + 1) % c2.len()]);
            best = best.min(segment_distance(&p0, &p1, &q0, &q1).0);
        }
    }
    best
}

fn bbox_scale(c: &[Point3]) -> f64 {
    let mut lo = c[0].coords;
    let mut hi = c[0].coords;
    for p in c {
        lo = lo.inf(&p.coords);
        hi = hi.sup(&p.coords);
    }
    (hi - lo).amax()
}
