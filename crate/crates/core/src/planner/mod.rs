//! Shortest paths with bounded curvature between given points and tangents.

mod boundary;
mod csc;
mod jcurve;
mod oracle;
mod path;
mod verify;

use serde::Serialize;

pub use boundary::{BoundaryData, PlaneFrame};
pub use csc::{csc_candidates, SeedConfig, JOINT_TOL};
pub use jcurve::{shortest_to_target_in_complement, JCurve, JCurveKind};
pub use oracle::{discrete_shortest_oracle, within_relative, OracleMode, OracleOptions, OracleResult, MIN_SEGMENTS};
pub use path::{ArcPiece, ClcCheck, ClcPath, SegmentPiece};
pub use verify::{
    exterior_excursion, verify_prop2_containment, verify_theorem1_structure, ContainmentReport, ExcursionReport,
    RunVerdict, StructureVerdict, TurnLabel,
};

use crate::error::Result;

/// Relative margin by which the oracle must beat every CLC candidate before
/// the data are reported as lying in the constant-curvature regime.
pub const REGIME_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// The shortest candidate is a CLC path.
    Clc,
    /// No CLC path is competitive; the shortest curve is expected to have
    /// curvature equal to the cap throughout.
    ConstantCurvature,
}

#[derive(Debug, Clone, Copy)]
pub struct PlanOptions {
    pub seeds: SeedConfig,
    /// Run the discrete oracle as referee (coplanar data only).
    pub oracle: Option<OracleOptions>,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            seeds: SeedConfig::default(),
            oracle: Some(OracleOptions::default()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Plan {
    pub candidates: Vec<ClcPath>,
    pub regime: Regime,
    pub oracle: Option<OracleResult>,
    /// `q` lies in both end obstacles, so the oracle was consulted regardless.
    pub routed_to_oracle: bool,
}

impl Plan {
    pub fn best(&self) -> Option<&ClcPath> {
        self.candidates.first()
    }
}

/// Enumerates CLC candidates and, where possible, referees them with the
/// discrete oracle.
pub fn plan(b: &BoundaryData, opts: &PlanOptions) -> Result<Plan> {
    let candidates = csc_candidates(b, &opts.seeds)?;
    let routed = b.inside_both_obstacles();
    let coplanar = b.coplanar_frame(1e-9).is_some();
    let oracle_opts = match opts.oracle {
        Some(o) => Some(o),
        None if routed || candidates.is_empty() => Some(OracleOptions::default()),
        None => None,
    };
    let oracle = match oracle_opts {
        Some(o) if coplanar => Some(discrete_shortest_oracle(b, &o)?),
        _ => None,
    };
    let regime = match (candidates.first(), &oracle) {
        (None, _) => Regime::ConstantCurvature,
        (Some(best), Some(o)) if o.length < best.length * (1.0 - REGIME_MARGIN) => Regime::ConstantCurvature,
        _ => Regime::Clc,
    };
    Ok(Plan {
        candidates,
        regime,
        oracle,
        routed_to_oracle: routed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_plan() {
        let b = BoundaryData::new(vec![0.0, 0.0], vec![10.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0], 1.0).unwrap();
        let p = plan(&b, &PlanOptions::default()).unwrap();
        assert_eq!(p.regime, Regime::Clc);
        assert!((p.best().unwrap().length - 10.0).abs() < 1e-12);
    }

    #[test]
    fn reversal_at_a_point_is_constant_curvature() {
        let b = BoundaryData::new(vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0], vec![-1.0, 0.0], 1.0).unwrap();
        let p = plan(&b, &PlanOptions::default()).unwrap();
        assert_eq!(p.regime, Regime::ConstantCurvature);
        let o = p.oracle.unwrap();
        assert!(o.saturated_fraction(0.05) > 0.95, "{}", o.saturated_fraction(0.05));
    }
}
