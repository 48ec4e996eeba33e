//! Quadrisecant approximation: the polygon through all quadrisecant points of
//! a knot, taken in knot order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom3::{OrientedLine, Point3};
use crate::knot::{KnotPoint, PolygonalKnot};
use crate::secants::{enumerate_quadrisecants, enumerate_quadrisecants_with, EnumerateOptions, Quadrisecant, SecantError};
use crate::tolerance::ToleranceConfig;
use crate::topology::{signature_of, KnotSignature, TopologyError};

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("knot has no quadrisecants")]
    NoQuadrisecants,
    #[error(transparent)]
    Secant(#[from] SecantError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

#[derive(Clone, Debug)]
pub struct QuadApprox {
    pub source: PolygonalKnot,
    pub quadrisecants: Vec<Quadrisecant>,
    /// All quadrisecant points, sorted by arclength, near-duplicates merged.
    pub cut_points: Vec<KnotPoint>,
    pub polyline: Vec<Point3>,
    pub embedded: bool,
    pub signature: Option<KnotSignature>,
    /// Quadrisecant lines of the approximation, when it is embedded.
    pub approx_lines: Vec<OrientedLine>,
}

impl QuadApprox {
    pub fn source_lines(&self) -> Vec<OrientedLine> {
        self.quadrisecants.iter().map(|q| q.line).collect()
    }

    /// The approximation as a knot, if embedded.
    pub fn knot(&self) -> Option<PolygonalKnot> {
        self.embedded.then(|| PolygonalKnot::new_unchecked(self.polyline.clone()).ok()).flatten()
    }
}

fn cut_points(k: &PolygonalKnot, quads: &[Quadrisecant], tol_len: f64) -> Vec<KnotPoint> {
    let mut pts: Vec<(f64, KnotPoint)> =
        quads.iter().flat_map(|q| q.points).map(|p| (k.arclength_of(&p), p)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total = k.total_length();
    let mut out: Vec<(f64, KnotPoint)> = Vec::with_capacity(pts.len());
    for (s, p) in pts {
        if out.last().map_or(true, |(last, _)| s - last > tol_len) {
            out.push((s, p));
        }
    }
    if out.len() > 1 && out[0].0 + total - out[out.len() - 1].0 <= tol_len {
        out.pop();
    }
    out.into_iter().map(|(_, p)| p).collect()
}

/// Lines meeting the polygon in four points. Cut points of an approximation
/// sit four to a line, so genericity is not required here.
fn quadrisecant_lines(k: &PolygonalKnot, tol: &ToleranceConfig) -> Result<Vec<OrientedLine>, SecantError> {
    let quads = enumerate_quadrisecants_with(k, tol, EnumerateOptions { prefilter: true, require_generic: false })?;
    let t = k.tolerance(tol);
    let mut lines: Vec<OrientedLine> = Vec::new();
    for q in quads {
        if !lines.iter().any(|l| l.same_line(&q.line, t.tol_line)) {
            lines.push(q.line);
        }
    }
    Ok(lines)
}

pub fn quadrisecant_approximation(k: &PolygonalKnot, tol: &ToleranceConfig) -> Result<QuadApprox, ApproxError> {
    let quads = enumerate_quadrisecants(k, tol)?;
    if quads.is_empty() {
        return Err(ApproxError::NoQuadrisecants);
    }
    let t = k.tolerance(tol);
    let cuts = cut_points(k, &quads, t.tol_len);
    let polyline: Vec<Point3> = cuts.iter().map(|p| p.point).collect();
    let embedded = polyline.len() >= 3
        && PolygonalKnot::new_unchecked(polyline.clone()).is_ok_and(|a| a.validate(tol).is_ok());
    let (signature, approx_lines) = if embedded {
        let a = PolygonalKnot::new_unchecked(polyline.clone()).expect("validated above");
        (Some(signature_of(&polyline, 0)?), quadrisecant_lines(&a, tol)?)
    } else {
        (None, Vec::new())
    };
    Ok(QuadApprox {
        source: k.clone(),
        quadrisecants: quads,
        cut_points: cuts,
        polyline,
        embedded,
        signature,
        approx_lines,
    })
}

/// Evidence for or against the approximation having the knot type of the
/// source. Equal signatures are necessary, not sufficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub embedded: bool,
    pub same_signature: bool,
    pub same_quadrisecant_set: bool,
    pub source_signature: KnotSignature,
    pub approx_signature: Option<KnotSignature>,
    pub source_quadrisecants: usize,
    pub approx_quadrisecants: usize,
    pub cut_points: usize,
}

/// Both line sets match one-to-one within `tol`.
pub fn same_line_set(a: &[OrientedLine], b: &[OrientedLine], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|l| b.iter().any(|m| l.same_line(m, tol)))
        && b.iter().all(|l| a.iter().any(|m| l.same_line(m, tol)))
}

pub fn conjecture_report(approx: &QuadApprox, tol: &ToleranceConfig) -> Result<ConjectureReport, ApproxError> {
    let source_signature = signature_of(approx.source.vertices(), 0)?;
    let t = approx.source.tolerance(tol);
    Ok(ConjectureReport {
        embedded: approx.embedded,
        same_signature: approx.signature.as_ref() == Some(&source_signature),
        same_quadrisecant_set: approx.embedded && same_line_set(&approx.source_lines(), &approx.approx_lines, t.tol_line),
        source_signature,
        approx_signature: approx.signature.clone(),
        source_quadrisecants: approx.quadrisecants.len(),
        approx_quadrisecants: approx.approx_lines.len(),
        cut_points: approx.cut_points.len(),
    })
}
