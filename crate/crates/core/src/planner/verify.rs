use std::f64::consts::PI;

use serde::Serialize;

use crate::curvature::{self, vertex_curvature};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm};
use crate::runs::{label_runs, run_length};
use crate::thickness::pair_radius;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TurnLabel {
    /// Curvature below `Λ (1 - tol)`.
    SubMaximal,
    /// Curvature within `tol` of the cap.
    Maximal,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunVerdict {
    pub label: TurnLabel,
    pub start: usize,
    pub count: usize,
    pub length: f64,
    /// Largest distance of the run's points from their chord (sub-maximal runs).
    pub straight_deviation: f64,
    pub touches_endpoint: bool,
    pub adjacent_to_segment: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureVerdict {
    pub lambda: f64,
    pub tol: f64,
    pub runs: Vec<RunVerdict>,
    /// Largest vertex curvature relative to the cap.
    pub max_curvature_ratio: f64,
    pub curvature_within_cap: bool,
    /// No sub-maximal run at all, so the arc and segment checks are vacuous.
    pub constant_curvature: bool,
    /// Worst shortfall of an interior arc below `π / Λ`, relative.
    pub worst_arc_shortfall: f64,
    /// Worst straightness deviation relative to run length.
    pub worst_straightness: f64,
    pub pass: bool,
}

/// Checks the arc-segment-arc structure a shortest bounded-curvature path
/// must have: stretches below the curvature cap are straight, and every arc
/// at the cap that borders a straight stretch and does not contain an end
/// point has length at least `π / Λ`.
pub fn verify_theorem1_structure(curve: &Curve, lambda: f64, tol: f64) -> StructureVerdict {
    let n = curve.len();
    let kappa = vertex_curvature(curve);
    let closed = curve.is_closed();
    // end samples of an open curve carry no turning of their own
    let interior: Vec<usize> = if closed { (0..n).collect() } else { (1..n.saturating_sub(1)).collect() };
    let labels: Vec<TurnLabel> = interior
        .iter()
        .map(|&i| {
            if kappa[i] >= lambda * (1.0 - tol) {
                TurnLabel::Maximal
            } else {
                TurnLabel::SubMaximal
            }
        })
        .collect();
    let max_ratio = interior.iter().map(|&i| kappa[i] / lambda).fold(0.0, f64::max);
    let offset = if closed { 0 } else { 1 };
    let runs = label_runs(&labels, closed);
    let mut verdicts = Vec::with_capacity(runs.len());
    let mut worst_arc = 0.0_f64;
    let mut worst_straight = 0.0_f64;
    for (k, run) in runs.iter().enumerate() {
        let start = run.start + offset;
        let shifted = crate::runs::Run {
            label: run.label,
            start,
            count: run.count,
        };
        let length = run_length(curve, &shifted);
        let last = shifted.last(n);
        let touches_endpoint = !closed && (start <= 1 || last + 2 >= n);
        let neighbours = if runs.len() == 1 {
            vec![]
        } else if closed {
            vec![(k + runs.len() - 1) % runs.len(), (k + 1) % runs.len()]
        } else {
            [k.checked_sub(1), (k + 1 < runs.len()).then_some(k + 1)]
                .into_iter()
                .flatten()
                .collect()
        };
        let adjacent_to_segment = neighbours.iter().any(|&j| runs[j].label == TurnLabel::SubMaximal);
        let mut rv = RunVerdict {
            label: run.label,
            start,
            count: run.count,
            length,
            straight_deviation: 0.0,
            touches_endpoint,
            adjacent_to_segment,
            pass: true,
        };
        match run.label {
            TurnLabel::SubMaximal => {
                // include the flanking samples: the straight piece runs between them
                let lo = curve.offset_index(start, -1).unwrap_or(start);
                let hi = curve.offset_index(last, 1).unwrap_or(last);
                let mut idx = vec![lo];
                let mut j = lo;
                while j != hi {
                    j = (j + 1) % n;
                    idx.push(j);
                }
                let a = curve.point(lo);
                let b = curve.point(hi);
                let span: f64 = idx.windows(2).map(|w| linalg::dist(curve.point(w[0]), curve.point(w[1]))).sum();
                let dev = idx
                    .iter()
                    .map(|&i| point_segment_distance(curve.point(i), a, b))
                    .fold(0.0, f64::max);
                rv.straight_deviation = dev;
                let rel = if span > 0.0 { dev / span } else { 0.0 };
                worst_straight = worst_straight.max(rel);
                rv.pass = rel <= tol;
            }
            TurnLabel::Maximal => {
                if adjacent_to_segment && !touches_endpoint {
                    let need = PI / lambda;
                    let shortfall = (need - length) / need;
                    worst_arc = worst_arc.max(shortfall);
                    rv.pass = length >= need * (1.0 - tol);
                }
            }
        }
        verdicts.push(rv);
    }
    let within_cap = max_ratio <= 1.0 + tol;
    let constant = !labels.contains(&TurnLabel::SubMaximal);
    StructureVerdict {
        lambda,
        tol,
        pass: within_cap && verdicts.iter().all(|r| r.pass),
        runs: verdicts,
        max_curvature_ratio: max_ratio,
        curvature_within_cap: within_cap,
        constant_curvature: constant,
        worst_arc_shortfall: worst_arc,
        worst_straightness: worst_straight,
    }
}

fn point_segment_distance(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = linalg::sub(b, a);
    let ax = linalg::sub(x, a);
    let l2 = dot(&ab, &ab);
    if l2 == 0.0 {
        return norm(&ax);
    }
    let t = (dot(&ax, &ab) / l2).clamp(0.0, 1.0);
    linalg::dist(x, &linalg::axpy(a, t, &ab))
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentReport {
    pub lambda: f64,
    pub tol: f64,
    pub pairs_checked: usize,
    /// Pairs `(a, s)` with `γ(s)` inside `O_γ(a)(γ'(a), (1 - tol)/Λ)`.
    pub violations: usize,
    pub worst_pair: Option<(usize, usize)>,
    /// Smallest `Λ ρ(a, s)` over checked pairs.
    pub min_radius_ratio: f64,
    /// Pairs with `γ(s)` within `tol` of the obstacle boundary.
    pub contacts: usize,
    /// Samples that take part in at least one contact.
    pub contact_samples: usize,
}

impl ContainmentReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Checks that a curve with curvature at most `Λ` stays outside the
/// obstacle at each of its points within arclength `π / Λ`, and records
/// boundary contacts, which mark circular arcs of radius `1 / Λ`.
pub fn verify_prop2_containment(curve: &Curve, lambda: f64, tol: f64) -> Result<ContainmentReport> {
    let profile = curvature::curvature_profile(curve, curvature::default_window(curve))?;
    let cap = lambda * (1.0 + tol);
    if profile.sup_kappa > cap {
        return Err(Error::CurvatureAboveCap {
            found: profile.sup_kappa,
            cap,
        });
    }
    let n = curve.len();
    let reach = PI / lambda * (1.0 + crate::curve::WINDOW_SLACK);
    let mut report = ContainmentReport {
        lambda,
        tol,
        pairs_checked: 0,
        violations: 0,
        worst_pair: None,
        min_radius_ratio: f64::INFINITY,
        contacts: 0,
        contact_samples: 0,
    };
    let mut touched = vec![false; n];
    for a in 0..n {
        for s in 0..n {
            if s == a || curve.arc_between_samples(a, s) > reach {
                continue;
            }
            report.pairs_checked += 1;
            let ratio = pair_radius(curve.point(a), curve.tangent(a), curve.point(s)) * lambda;
            if ratio < report.min_radius_ratio {
                report.min_radius_ratio = ratio;
                report.worst_pair = Some((a, s));
            }
            if ratio < 1.0 - tol {
                report.violations += 1;
            }
            if (ratio - 1.0).abs() <= tol {
                report.contacts += 1;
                touched[a] = true;
                touched[s] = true;
            }
        }
    }
    report.contact_samples = touched.iter().filter(|t| **t).count();
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcursionReport {
    pub length: f64,
    pub radius: f64,
    /// Both end points lie on the sphere within `tol` (relative).
    pub endpoints_on_sphere: bool,
    /// Some sample lies strictly outside the ball.
    pub leaves_ball: bool,
    /// `length > π radius`
    pub exceeds_half_circle: bool,
}

/// Length of an open curve whose end points lie on the sphere `|x - c| = r`
/// and which leaves the ball; a curve of curvature at most `1 / r` doing so
/// is longer than `π r`.
pub fn exterior_excursion(curve: &Curve, center: &[f64], radius: f64, tol: f64) -> ExcursionReport {
    let n = curve.len();
    let on = |i: usize| (linalg::dist(curve.point(i), center) / radius - 1.0).abs() <= tol;
    let length = curve.length();
    ExcursionReport {
        length,
        radius,
        endpoints_on_sphere: on(0) && on(n - 1),
        leaves_ball: (0..n).any(|i| linalg::dist(curve.point(i), center) > radius * (1.0 + tol)),
        exceeds_half_circle: length > PI * radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::planner::ClcPath;

    #[test]
    fn long_arcs_pass() {
        let path = ClcPath::from_turns(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], 1.2 * PI, 3.0, &[0.0, -1.0], 1.1 * PI, 1.0, "LSR");
        let c = path.sample(800).unwrap();
        let v = verify_theorem1_structure(&c, 1.0, 0.05);
        assert!(v.pass, "{v:?}");
        assert!(!v.constant_curvature);
    }

    #[test]
    fn short_interior_arc_fails() {
        // segment, short arc, segment, arc: the middle arc is interior and short
        let mut pts = Vec::new();
        let h = 0.01;
        for k in 0..300 {
            pts.push(vec![k as f64 * h - 3.0, 0.0]);
        }
        let arc = 0.5 * PI;
        let steps = (arc / h) as usize;
        for k in 1..=steps {
            let a = k as f64 * h;
            pts.push(vec![a.sin(), 1.0 - a.cos()]);
        }
        let a = steps as f64 * h;
        let (p0, d0) = ([a.sin(), 1.0 - a.cos()], [a.cos(), a.sin()]);
        for k in 1..300 {
            let s = k as f64 * h;
            pts.push(vec![p0[0] + s * d0[0], p0[1] + s * d0[1]]);
        }
        let c = Curve::new(&pts, 2, false, None).unwrap();
        let v = verify_theorem1_structure(&c, 1.0, 0.05);
        assert!(!v.pass);
        let arc_run = v.runs.iter().find(|r| r.label == TurnLabel::Maximal).unwrap();
        assert!(!arc_run.pass && !arc_run.touches_endpoint);
        assert!((arc_run.length - 0.5 * PI).abs() < 0.05);
    }

    #[test]
    fn half_circle_is_all_contact() {
        let pts: Vec<Vec<f64>> = (0..=400)
            .map(|k| {
                let a = PI * k as f64 / 400.0;
                vec![a.sin(), 1.0 - a.cos()]
            })
            .collect();
        let c = Curve::new(&pts, 2, false, None).unwrap();
        let r = verify_prop2_containment(&c, 1.0, 1e-3).unwrap();
        assert!(r.pass());
        assert_eq!(r.contact_samples, 401);
    }

    #[test]
    fn segment_has_no_contacts() {
        let pts: Vec<Vec<f64>> = (0..50).map(|k| vec![0.1 * k as f64, 0.0, 0.0]).collect();
        let c = Curve::new(&pts, 3, false, None).unwrap();
        let r = verify_prop2_containment(&c, 1.0, 1e-3).unwrap();
        assert!(r.pass());
        assert_eq!(r.contacts, 0);
    }

    #[test]
    fn tight_curve_violates_precondition() {
        let c = fixtures::circle(0.5, 256).unwrap();
        assert!(matches!(verify_prop2_containment(&c, 1.0, 1e-2), Err(Error::CurvatureAboveCap { .. })));
    }

    #[test]
    fn offset_circle_excursion() {
        for eps in [0.2, 0.1, 0.05] {
            let c = fixtures::example1_offset_circle(eps, 2048).unwrap();
            let r = exterior_excursion(&c, &[0.0, 0.0], 1.0, 1e-9);
            assert!(r.endpoints_on_sphere && r.leaves_ball && r.exceeds_half_circle);
        }
    }
}
