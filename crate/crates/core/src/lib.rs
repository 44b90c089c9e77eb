//! Thickness invariants of sampled curves, bounded-curvature shortest paths,
//! and structural checks on candidate ropelength minimizers.
//!
//! Curves are polylines in `R^n` with unit tangents at the samples
//! ([`Curve`]). The [`thickness`] module computes the ball radius, focal
//! distances, double critical chords and ropelength; [`planner`] solves the
//! shortest path problem with a curvature cap; [`extremal`] classifies
//! points and tests the necessary conditions on ropelength minimizers.

pub mod curvature;
pub mod curve;
pub mod document;
pub mod error;
pub mod extremal;
pub mod fixtures;
pub mod linalg;
pub mod optim;
pub mod planner;
pub mod runs;
pub mod thickness;

pub use curvature::{curvature_profile, verify_lemma1, CurvatureProfile, Lemma1Report};
pub use curve::Curve;
pub use document::{CurveDocument, Report};
pub use error::{Error, Result};
pub use planner::{BoundaryData, ClcPath, JCurve};
pub use thickness::{thickness_report, ObstacleSpec, ThicknessReport};
