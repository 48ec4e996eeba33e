//! Single tolerance policy shared by every geometric predicate.
//!
//! Length-type tolerances are stored relative to a unit scene and are scaled
//! by the scene diameter through [`ToleranceConfig::scaled`] before use on a
//! concrete knot.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Unit-vector norm slack.
    pub tol_unit: f64,
    /// Minimum distance between lines treated as skew (length).
    pub tol_skew: f64,
    /// Minimum sine of the angle between lines treated as non-parallel.
    pub tol_dir: f64,
    /// Residual below which a point is on a normalized quadric.
    pub tol_quadric: f64,
    /// Residual accepted for `ruling_through_point` input points.
    pub tol_on_surface: f64,
    /// Line identity tolerance (direction and base point).
    pub tol_line: f64,
    /// Largest accepted condition number of the quadric null-space solve.
    pub cond_max: f64,
    /// Shortest admissible segment (length).
    pub tol_len: f64,
    /// Embeddedness margin (length).
    pub tol_embed: f64,
    /// Slack on edge parameters when clipping hits to `[0, 1)`.
    pub tol_param: f64,
    /// Distance below which a line is said to hit a segment (length).
    pub tol_hit: f64,
    /// Relative residual below which an edge is contained in a quadric.
    pub tol_contained: f64,
    /// Sampling step of trisecant families, as a fraction of an edge.
    pub family_step: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol_unit: 1e-12,
            tol_skew: 1e-9,
            tol_dir: 1e-9,
            tol_quadric: 1e-9,
            tol_on_surface: 1e-8,
            tol_line: 1e-7,
            cond_max: 1e12,
            tol_len: 1e-12,
            tol_embed: 1e-9,
            tol_param: 1e-10,
            tol_hit: 1e-8,
            tol_contained: 1e-9,
            family_step: 1.0 / 64.0,
        }
    }
}

impl ToleranceConfig {
    /// Copy with every length-type tolerance multiplied by `diameter`.
    pub fn scaled(&self, diameter: f64) -> Self {
        let d = if diameter.is_finite() && diameter > 0.0 { diameter } else { 1.0 };
        Self {
            tol_skew: self.tol_skew * d,
            tol_len: self.tol_len * d,
            tol_embed: self.tol_embed * d,
            tol_hit: self.tol_hit * d,
            ..*self
        }
    }
}
