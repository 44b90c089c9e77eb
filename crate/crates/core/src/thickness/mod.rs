//! Ball radius, focal distance, double critical pairs and ropelength.

pub mod ball;
pub mod critical;
pub mod obstacle;
pub mod report;

pub use ball::{geometric_focal_distance, rolling_ball_radius, BallRadius, FocalDistance};
pub use critical::{double_critical_pairs, mdc, CriticalOptions, CriticalPair, Mdc};
pub use obstacle::{obstacle_contains, pair_radius, ObstacleSpec};
pub use report::{
    analyze, semicontinuity_probe, thickness_report, SemicontinuityReport, ThicknessAnalysis, ThicknessOptions,
    ThicknessReport, ThicknessWitnesses,
};
