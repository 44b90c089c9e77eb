//! Necessary-condition tests for candidate extremal shapes. A pass never
//! certifies extremality; a fail shows the candidate cannot be extremal.

use std::f64::consts::PI;

use serde::Serialize;

use super::classify::classify_points;
use super::decompose::{decompose_with, RunKind, RunLabel, StructureReport, StructureRun};
use crate::curve::Curve;
use crate::error::Result;
use crate::thickness::{analyze, ThicknessAnalysis, ThicknessOptions};

/// Facts about an arc run flanking a straight run.
#[derive(Debug, Clone, Serialize)]
pub struct FlankFacts {
    pub run: usize,
    pub label: RunLabel,
    pub kind: RunKind,
    pub length: f64,
    /// `π f_k (1 - tol)`
    pub required_length: f64,
    /// `|radius - f_k| / f_k`, when a circle could be fitted.
    pub radius_gap: Option<f64>,
    /// Planarity residual over `f_k`.
    pub planarity: Option<f64>,
    /// The end of the flank away from the straight run is critical.
    pub ends_at_critical: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentClause {
    pub run: usize,
    pub start: usize,
    pub count: usize,
    pub length: f64,
    pub meets_critical: bool,
    /// Flanking runs before and after; empty when the run meets a critical
    /// sample and the clause does not apply.
    pub flanks: Vec<FlankFacts>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Verdict {
    pub tol: f64,
    /// Tolerance used to label samples and build runs, `10 / N`. Kept
    /// independent of `tol` so that passing is monotone in `tol`.
    pub structure_tol: f64,
    pub min_kappa: f64,
    pub sup_kappa: f64,
    /// Some sample has `κ < sup κ (1 - tol)`. Without it the check passes
    /// vacuously.
    pub hypothesis: bool,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub r_o: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub half_mdc: f64,
    /// `|r_o - mdc / 2| / r_o`
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub thickness_gap: f64,
    pub thickness_pass: bool,
    pub segments: Vec<SegmentClause>,
    pub structure: StructureReport,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem3Status {
    /// `mdc / 2 <= r_o (1 + tol)`: nothing to check.
    NotTriggered,
    /// Triggered and the curvature is constant within tolerance.
    Consistent,
    /// Triggered with non-constant curvature.
    NotRelativelyExtremal,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem3Verdict {
    pub tol: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub r_o: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub half_mdc: f64,
    /// `max |κ_i - 1/r_o| · r_o`
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub status: Theorem3Status,
    pub pass: bool,
}

fn critical_near(report: &StructureReport, curve: &Curve, i: usize) -> bool {
    [-1isize, 0, 1]
        .iter()
        .filter_map(|&o| curve.offset_index(i, o))
        .any(|k| report.classes.critical[k])
}

fn flank_facts(curve: &Curve, report: &StructureReport, k: usize, before: bool, tol: f64) -> FlankFacts {
    let n = curve.len();
    let run: &StructureRun = &report.runs[k];
    let f_k = report.f_k;
    let far = if before { run.start } else { run.as_run().last(n) };
    let required_length = PI * f_k * (1.0 - tol);
    let radius_gap = run.fit.as_ref().map(|f| f.radius_gap / f_k);
    let planarity = run.fit.as_ref().map(|f| f.planarity_residual / f_k);
    let ends_at_critical = critical_near(report, curve, far);
    let shape_ok = run.label == RunLabel::Maximal
        && radius_gap.is_some_and(|g| g <= tol)
        && planarity.is_some_and(|p| p <= tol);
    FlankFacts {
        run: k,
        label: run.label,
        kind: run.kind,
        length: run.length,
        required_length,
        radius_gap,
        planarity,
        ends_at_critical,
        pass: shape_ok && (run.length >= required_length || ends_at_critical),
    }
}

/// Thickness equals half the minimal double critical distance, and every
/// straight run that meets no critical sample is flanked by arcs of radius
/// `f_k` that are at least half a turn long or end at a critical sample.
pub fn check_theorem2(curve: &Curve, tol: f64) -> Result<Theorem2Verdict> {
    let analysis = analyze(curve, &ThicknessOptions::default())?;
    Ok(check_theorem2_with(curve, &analysis, tol))
}

pub fn check_theorem2_with(curve: &Curve, analysis: &ThicknessAnalysis, tol: f64) -> Theorem2Verdict {
    let structure_tol = 10.0 / curve.len() as f64;
    let classes = classify_points(curve, analysis, structure_tol);
    let structure = decompose_with(curve, analysis, classes, structure_tol);
    let kappa = &analysis.profile.kappa;
    let sup_kappa = analysis.profile.sup_kappa;
    let min_kappa = kappa.iter().cloned().fold(f64::INFINITY, f64::min);
    let hypothesis = min_kappa < sup_kappa * (1.0 - tol);
    let r_o = analysis.report.r_o;
    let half_mdc = analysis.report.mdc / 2.0;
    let thickness_gap = (r_o - half_mdc).abs() / r_o;
    let thickness_pass = thickness_gap <= tol;

    let m = structure.runs.len();
    let segments: Vec<SegmentClause> = if hypothesis && m > 1 {
        structure
            .runs
            .iter()
            .enumerate()
            .filter(|(_, r)| r.label == RunLabel::Straight)
            .map(|(k, r)| {
                let meets_critical = r.critical_samples > 0;
                let flanks = if meets_critical {
                    Vec::new()
                } else {
                    let (prev, next) = structure.neighbours(k);
                    vec![
                        flank_facts(curve, &structure, prev, true, tol),
                        flank_facts(curve, &structure, next, false, tol),
                    ]
                };
                SegmentClause {
                    run: k,
                    start: r.start,
                    count: r.count,
                    length: r.length,
                    meets_critical,
                    pass: flanks.iter().all(|f| f.pass),
                    flanks,
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let pass = !hypothesis || (thickness_pass && segments.iter().all(|s| s.pass));
    Theorem2Verdict {
        tol,
        structure_tol,
        min_kappa,
        sup_kappa,
        hypothesis,
        r_o,
        half_mdc,
        thickness_gap,
        thickness_pass,
        segments,
        structure,
        pass,
    }
}

/// If `mdc / 2 > r_o (1 + tol)`, the curvature must be constant `1 / r_o`
/// within `tol / r_o`.
pub fn check_theorem3(curve: &Curve, tol: f64) -> Result<Theorem3Verdict> {
    let analysis = analyze(curve, &ThicknessOptions::default())?;
    Ok(check_theorem3_with(&analysis, tol))
}

pub fn check_theorem3_with(analysis: &ThicknessAnalysis, tol: f64) -> Theorem3Verdict {
    let r_o = analysis.report.r_o;
    let half_mdc = analysis.report.mdc / 2.0;
    let kappa = &analysis.profile.kappa;
    let dev: Vec<f64> = kappa.iter().map(|k| (k * r_o - 1.0).abs()).collect();
    let max_deviation = dev.iter().cloned().fold(0.0, f64::max);
    let mean_deviation = dev.iter().sum::<f64>() / dev.len() as f64;
    let status = if !(half_mdc > r_o * (1.0 + tol)) {
        Theorem3Status::NotTriggered
    } else if max_deviation <= tol {
        Theorem3Status::Consistent
    } else {
        Theorem3Status::NotRelativelyExtremal
    };
    Theorem3Verdict {
        tol,
        r_o,
        half_mdc,
        max_deviation,
        mean_deviation,
        status,
        pass: status != Theorem3Status::NotRelativelyExtremal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn stadium_passes_with_critical_segments() {
        let c = fixtures::stadium(1.0, 4.0, 2048).unwrap();
        let v = check_theorem2(&c, 0.02).unwrap();
        assert!(v.hypothesis);
        assert!(v.thickness_pass, "{}", v.thickness_gap);
        assert!(v.segments.iter().all(|s| s.meets_critical));
        assert!(v.pass);
    }

    #[test]
    fn circle_passes_vacuously() {
        let c = fixtures::circle(1.0, 1024).unwrap();
        let v = check_theorem2(&c, 10.0 / 1024.0).unwrap();
        assert!(!v.hypothesis);
        assert!(v.pass);
        let v3 = check_theorem3(&c, 10.0 / 1024.0).unwrap();
        assert_eq!(v3.status, Theorem3Status::NotTriggered);
    }

    #[test]
    fn rounded_square_fails_both() {
        let c = fixtures::rounded_square(1.0, 4.0, 2048).unwrap();
        let v = check_theorem2(&c, 0.02).unwrap();
        assert!(v.hypothesis);
        assert!(!v.thickness_pass);
        assert!(!v.pass);
        let v3 = check_theorem3(&c, 0.02).unwrap();
        assert_eq!(v3.status, Theorem3Status::NotRelativelyExtremal);
        assert!(!v3.pass);
    }

    #[test]
    fn stadium_does_not_trigger_constant_curvature_check() {
        let c = fixtures::stadium(1.0, 4.0, 2048).unwrap();
        let v3 = check_theorem3(&c, 0.02).unwrap();
        assert_eq!(v3.status, Theorem3Status::NotTriggered);
    }

    #[test]
    fn verdicts_are_monotone_in_tolerance() {
        let c = fixtures::rounded_square(1.0, 1.0, 1024).unwrap();
        let a = analyze(&c, &ThicknessOptions::default()).unwrap();
        let tols = [0.001, 0.01, 0.05, 0.2, 0.6, 2.0];
        let p2: Vec<bool> = tols.iter().map(|&t| check_theorem2_with(&c, &a, t).pass).collect();
        let p3: Vec<bool> = tols.iter().map(|&t| check_theorem3_with(&a, t).pass).collect();
        for w in p2.windows(2).chain(p3.windows(2)) {
            assert!(!w[0] || w[1], "{p2:?} {p3:?}");
        }
    }
}
