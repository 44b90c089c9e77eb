//! Point classification, run decomposition and necessary-condition checks
//! for candidate extremal shapes, plus a curvature-capped ropelength search.

mod classify;
mod decompose;
mod fit;
mod relax;
mod checks;

pub use classify::{classify_points, KappaClass, PointClasses};
pub use decompose::{decompose_structure, reconstruct, ArcFit, RunKind, RunLabel, StructureReport, StructureRun};
pub use fit::{fit_circle, principal_plane, CircleFit};
pub use relax::{relax_ropelength, RelaxOptions, RelaxOutcome, TraceRow};
pub use checks::{
    check_theorem2, check_theorem2_with, check_theorem3, check_theorem3_with, FlankFacts, SegmentClause,
    Theorem2Verdict, Theorem3Status, Theorem3Verdict,
};
