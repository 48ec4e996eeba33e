//! Trisecants, quadrisecants and geometric measures of polygonal knots.
pub mod approx;
pub mod geom3;
pub mod knot;
pub mod measures;
pub mod secants;
pub mod tolerance;
pub mod topology;

pub use geom3::{OrientedLine, Point3, Quadric, Segment, Vec3};
pub use tolerance::ToleranceConfig;
