//! Decomposition of a closed curve into straight runs, arcs of maximal
//! curvature, and everything else.

use serde::Serialize;

use super::classify::{classify_points, PointClasses};
use super::fit::{fit_circle, CircleFit};
use crate::curvature::vertex_curvature;
use crate::curve::Curve;
use crate::error::Result;
use crate::linalg;
use crate::runs::{label_runs, run_length, Run};
use crate::thickness::ThicknessAnalysis;

/// Candidate shape of a run before validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RunLabel {
    Straight,
    Maximal,
    Between,
}

/// Validated shape of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RunKind {
    Segment,
    Arc,
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArcFit {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Orthonormal basis of the fitted plane.
    pub plane: [Vec<f64>; 2],
    pub planarity_residual: f64,
    pub radial_deviation: f64,
    /// `|radius - f_k|`.
    pub radius_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureRun {
    pub label: RunLabel,
    pub kind: RunKind,
    pub start: usize,
    pub count: usize,
    pub length: f64,
    /// Largest distance from the chord joining the run's ends, over the
    /// run length. Only for straight candidates.
    pub straightness: Option<f64>,
    /// Circle fit, for maximal candidates with at least three samples.
    pub fit: Option<ArcFit>,
    /// Number of samples in the run marked critical.
    pub critical_samples: usize,
}

impl StructureRun {
    pub fn as_run(&self) -> Run<RunLabel> {
        Run {
            label: self.label,
            start: self.start,
            count: self.count,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub tol: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub f_k: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub r_o: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub mdc: f64,
    pub samples: usize,
    pub runs: Vec<StructureRun>,
    #[serde(skip)]
    pub classes: PointClasses,
}

impl StructureReport {
    pub fn count(&self, kind: RunKind) -> usize {
        self.runs.iter().filter(|r| r.kind == kind).count()
    }

    /// Sequence of run kinds in order along the curve.
    pub fn kinds(&self) -> Vec<RunKind> {
        self.runs.iter().map(|r| r.kind).collect()
    }

    /// Neighbouring runs of run `k`, cyclically.
    pub fn neighbours(&self, k: usize) -> (usize, usize) {
        let m = self.runs.len();
        ((k + m - 1) % m, (k + 1) % m)
    }
}

fn straightness(curve: &Curve, run: &Run<RunLabel>, length: f64) -> f64 {
    let n = curve.len();
    let (a, b) = (curve.point(run.start), curve.point(run.last(n)));
    let chord = linalg::sub(b, a);
    let dev = match linalg::normalized(&chord) {
        Some(u) => run
            .indices(n)
            .map(|i| linalg::reject_norm(&linalg::sub(curve.point(i), a), &u))
            .fold(0.0, f64::max),
        None => run.indices(n).map(|i| linalg::dist(curve.point(i), a)).fold(0.0, f64::max),
    };
    if length > 0.0 {
        dev / length
    } else {
        0.0
    }
}

fn fit_run(curve: &Curve, run: &Run<RunLabel>, f_k: f64) -> Option<ArcFit> {
    let n = curve.len();
    if run.count < 3 {
        return None;
    }
    let pts: Vec<&[f64]> = run.indices(n).map(|i| curve.point(i)).collect();
    let CircleFit {
        center,
        radius,
        plane,
        planarity_residual,
        radial_deviation,
    } = fit_circle(&pts)?;
    Some(ArcFit {
        center,
        radius,
        plane,
        planarity_residual,
        radial_deviation,
        radius_gap: (radius - f_k).abs(),
    })
}

/// Per-sample labels from vertex curvature with the classification
/// thresholds. The windowed supremum used for classification spreads an
/// arc's curvature over the neighbouring window, so it would extend arcs into
/// adjacent straight runs. Short intermediate runs between a straight and a
/// maximal run are split at half the maximal curvature.
fn sample_labels(curve: &Curve, analysis: &ThicknessAnalysis, tol: f64) -> Vec<RunLabel> {
    let n = curve.len();
    let r_o = analysis.report.r_o;
    let vk = vertex_curvature(curve);
    let mut labels: Vec<RunLabel> = vk
        .iter()
        .map(|&k| {
            if r_o.is_infinite() || k * r_o <= tol {
                RunLabel::Straight
            } else if (k * r_o - 1.0).abs() <= tol {
                RunLabel::Maximal
            } else {
                RunLabel::Between
            }
        })
        .collect();
    let runs = label_runs(&labels, true);
    if runs.len() < 3 {
        return labels;
    }
    let blur = 2.0 * analysis.profile.window;
    for (k, run) in runs.iter().enumerate() {
        if run.label != RunLabel::Between || run_length(curve, run) > blur {
            continue;
        }
        let prev = runs[(k + runs.len() - 1) % runs.len()].label;
        let next = runs[(k + 1) % runs.len()].label;
        if prev == RunLabel::Between || next == RunLabel::Between {
            continue;
        }
        for i in run.indices(n) {
            labels[i] = if prev == next {
                prev
            } else if vk[i] * r_o < 0.5 {
                RunLabel::Straight
            } else {
                RunLabel::Maximal
            };
        }
    }
    labels
}

/// Splits a closed curve into maximal runs and validates each: straight runs
/// by chord deviation at most `tol` times their length, maximal runs by a
/// plane-then-circle fit with radius within `tol f_k` of `f_k` and
/// planarity residual below `tol f_k`.
pub fn decompose_structure(curve: &Curve, analysis: &ThicknessAnalysis, tol: f64) -> StructureReport {
    let classes = classify_points(curve, analysis, tol);
    decompose_with(curve, analysis, classes, tol)
}

pub(crate) fn decompose_with(
    curve: &Curve,
    analysis: &ThicknessAnalysis,
    classes: PointClasses,
    tol: f64,
) -> StructureReport {
    let n = curve.len();
    let f_k = analysis.report.f_k;
    let labels = sample_labels(curve, analysis, tol);
    let runs = label_runs(&labels, true)
        .into_iter()
        .map(|run| {
            let length = run_length(curve, &run);
            let critical_samples = run.indices(n).filter(|&i| classes.critical[i]).count();
            let (kind, straightness, fit) = match run.label {
                RunLabel::Straight => {
                    let dev = straightness(curve, &run, length);
                    let kind = if dev <= tol { RunKind::Segment } else { RunKind::Other };
                    (kind, Some(dev), None)
                }
                RunLabel::Maximal => {
                    let fit = fit_run(curve, &run, f_k);
                    let ok = fit
                        .as_ref()
                        .is_some_and(|f| f.radius_gap <= tol * f_k && f.planarity_residual < tol * f_k);
                    (if ok { RunKind::Arc } else { RunKind::Other }, None, fit)
                }
                RunLabel::Between => (RunKind::Other, None, None),
            };
            StructureRun {
                label: run.label,
                kind,
                start: run.start,
                count: run.count,
                length,
                straightness,
                fit,
                critical_samples,
            }
        })
        .collect();
    StructureReport {
        tol,
        f_k,
        r_o: analysis.report.r_o,
        mdc: analysis.report.mdc,
        samples: n,
        runs,
        classes,
    }
}

/// Replaces every sample of a validated run by its projection onto the
/// fitted primitive: the chord for segments, the circle for arcs. Other runs
/// are left as they are.
pub fn reconstruct(curve: &Curve, report: &StructureReport) -> Result<Curve> {
    let n = curve.len();
    let mut pts = curve.point_rows();
    for run in &report.runs {
        let r = run.as_run();
        match run.kind {
            RunKind::Segment => {
                let a = curve.point(r.start).to_vec();
                let b = curve.point(r.last(n)).to_vec();
                let d = linalg::sub(&b, &a);
                let dd = linalg::dot(&d, &d);
                if dd == 0.0 {
                    continue;
                }
                for i in r.indices(n) {
                    let t = linalg::dot(&linalg::sub(curve.point(i), &a), &d) / dd;
                    pts[i] = linalg::axpy(&a, t, &d);
                }
            }
            RunKind::Arc => {
                let Some(fit) = &run.fit else { continue };
                let c = CircleFit {
                    center: fit.center.clone(),
                    radius: fit.radius,
                    plane: fit.plane.clone(),
                    planarity_residual: 0.0,
                    radial_deviation: 0.0,
                };
                for i in r.indices(n) {
                    pts[i] = c.project(curve.point(i));
                }
            }
            RunKind::Other => {}
        }
    }
    Curve::new(&pts, curve.dim(), true, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::thickness::{analyze, ThicknessOptions};
    use std::f64::consts::PI;

    fn decompose(c: &Curve, tol: f64) -> StructureReport {
        let a = analyze(c, &ThicknessOptions::default()).unwrap();
        decompose_structure(c, &a, tol)
    }

    #[test]
    fn stadium_has_two_segments_and_two_arcs() {
        let c = fixtures::stadium(1.0, 4.0, 2048).unwrap();
        let s = decompose(&c, 10.0 / 2048.0);
        assert_eq!(s.runs.len(), 4, "{:?}", s.kinds());
        assert_eq!(s.count(RunKind::Segment), 2);
        assert_eq!(s.count(RunKind::Arc), 2);
        for r in s.runs.iter().filter(|r| r.kind == RunKind::Arc) {
            let f = r.fit.as_ref().unwrap();
            assert!((f.radius - 1.0).abs() < 1e-2);
            assert!(f.planarity_residual < 1e-12);
            assert!((r.length - PI).abs() < 2e-2, "{}", r.length);
        }
        for r in s.runs.iter().filter(|r| r.kind == RunKind::Segment) {
            assert!((r.length - 4.0).abs() < 2e-2, "{}", r.length);
        }
    }

    #[test]
    fn circle_is_one_arc() {
        let c = fixtures::circle(1.0, 1024).unwrap();
        let s = decompose(&c, 10.0 / 1024.0);
        assert_eq!(s.kinds(), vec![RunKind::Arc]);
        assert_eq!(s.runs[0].count, 1024);
    }

    #[test]
    fn ellipse_has_other_runs() {
        let c = fixtures::ellipse(2.0, 1.0, 1024).unwrap();
        let s = decompose(&c, 10.0 / 1024.0);
        assert!(s.count(RunKind::Other) > 0);
    }

    #[test]
    fn smooth_perturbation_keeps_decomposition() {
        let n = 1024;
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                let r = 1.0 + 1e-3 * (3.0 * a).cos();
                vec![r * a.cos(), r * a.sin()]
            })
            .collect();
        let noisy = Curve::new(&pts, 2, true, None).unwrap();
        let clean = fixtures::circle(1.0, n).unwrap();
        assert_eq!(decompose(&noisy, 0.05).kinds(), decompose(&clean, 0.05).kinds());
    }

    #[test]
    fn reconstruction_is_a_fixed_point_of_the_run_structure() {
        let c = fixtures::stadium(1.0, 4.0, 2048).unwrap();
        let tol = 10.0 / 2048.0;
        let s = decompose(&c, tol);
        let r = reconstruct(&c, &s).unwrap();
        let s2 = decompose(&r, tol);
        assert_eq!(s.kinds(), s2.kinds());
        for (a, b) in s.runs.iter().zip(&s2.runs) {
            assert_eq!((a.start, a.count), (b.start, b.count));
        }
    }
}
