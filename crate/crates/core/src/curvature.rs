//! Generalized curvature by windowed tangent-angle dilations.
//!
//! The curvature at a sample is the lim sup of `angle(t_x, t_y) / |x - y|` as
//! both parameters approach it. On a polyline it is approximated from below by
//! the largest pairwise dilation among samples inside an arclength window of
//! half-width `h` around the sample.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{Curve, WINDOW_SLACK};
use crate::error::{Error, Result};
use crate::linalg;

/// Default window half-width in units of the mean sample spacing.
pub const DEFAULT_WINDOW_SPACINGS: f64 = 5.0;

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureProfile {
    pub kappa: Vec<f64>,
    pub sup_kappa: f64,
    /// Sample attaining `sup_kappa` (smallest index on ties).
    pub argmax: usize,
    /// Analytic focal distance `1 / sup_kappa`, infinite for straight curves.
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub f_k: f64,
    pub window: f64,
}

pub fn default_window(curve: &Curve) -> f64 {
    DEFAULT_WINDOW_SPACINGS * curve.mean_spacing()
}

/// Samples within arclength `h` of sample `i`, ordered along the curve.
pub(crate) fn window_indices(curve: &Curve, i: usize, h: f64) -> Vec<usize> {
    let n = curve.len();
    let limit = h * (1.0 + WINDOW_SLACK);
    let mut back = Vec::new();
    let mut travelled = 0.0;
    let mut j = i;
    for _ in 0..n - 1 {
        let Some(prev) = curve.offset_index(j, -1) else { break };
        travelled += curve.segment_length(prev);
        if travelled > limit || prev == i {
            break;
        }
        back.push(prev);
        j = prev;
    }
    let mut fwd = Vec::new();
    travelled = 0.0;
    j = i;
    for _ in 0..n - 1 {
        let Some(next) = curve.offset_index(j, 1) else { break };
        travelled += curve.segment_length(j);
        if travelled > limit || next == i || back.contains(&next) {
            break;
        }
        fwd.push(next);
        j = next;
    }
    back.reverse();
    back.push(i);
    back.extend(fwd);
    back
}

/// Windowed curvature estimate at every sample.
pub fn curvature_profile(curve: &Curve, h: f64) -> Result<CurvatureProfile> {
    let spacing = curve.max_spacing();
    if !(h >= 2.0 * spacing * (1.0 - WINDOW_SLACK)) {
        return Err(Error::WindowTooSmall { h, spacing });
    }
    let kappa: Vec<f64> = (0..curve.len())
        .into_par_iter()
        .map(|i| {
            let win = window_indices(curve, i, h);
            let mut best = 0.0f64;
            for (a, &j) in win.iter().enumerate() {
                for &k in &win[a + 1..] {
                    best = best.max(curve.dilation_unchecked(j, k));
                }
            }
            best
        })
        .collect();
    let (argmax, sup_kappa) = kappa
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, k)| if k > acc.1 { (i, k) } else { acc });
    Ok(CurvatureProfile {
        f_k: if sup_kappa > 0.0 { 1.0 / sup_kappa } else { f64::INFINITY },
        kappa,
        sup_kappa,
        argmax,
        window: h,
    })
}

/// Turning angle between the two chords at each sample divided by the mean
/// of their lengths. Endpoints of an open curve copy their neighbour.
pub fn vertex_curvature(curve: &Curve) -> Vec<f64> {
    let n = curve.len();
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let (Some(a), Some(b)) = (curve.offset_index(i, -1), curve.offset_index(i, 1)) else {
            continue;
        };
        let p = curve.point(i);
        let d0 = linalg::sub(p, curve.point(a));
        let d1 = linalg::sub(curve.point(b), p);
        let (l0, l1) = (linalg::norm(&d0), linalg::norm(&d1));
        let turn = linalg::unit_angle(&linalg::scale(&d0, 1.0 / l0), &linalg::scale(&d1, 1.0 / l1));
        *slot = turn / (0.5 * (l0 + l1));
    }
    if !curve.is_closed() && n >= 3 {
        out[0] = out[1];
        out[n - 1] = out[n - 2];
    }
    out
}

/// Outcome of checking the equivalent curvature bounds on one curve.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub lambda: f64,
    pub tol: f64,
    /// Largest windowed dilation (the discrete sup of curvature).
    pub windowed_max: f64,
    pub windowed_ok: bool,
    /// Largest angle dilation over all sample pairs.
    pub pairwise_alpha_max: f64,
    pub pairwise_alpha_pair: Option<(usize, usize)>,
    pub pairwise_alpha_ok: bool,
    /// Largest excess of `|t_i - t_j| - lambda * arc(i, j)` over all pairs.
    pub pairwise_chord_excess: f64,
    pub pairwise_chord_ok: bool,
    /// True when the windowed and all-pairs angle checks agree.
    pub consistent: bool,
}

impl Lemma1Report {
    pub fn all_pass(&self) -> bool {
        self.windowed_ok && self.pairwise_alpha_ok && self.pairwise_chord_ok
    }
}

pub fn verify_lemma1(curve: &Curve, lambda: f64, tol: f64) -> Result<Lemma1Report> {
    let profile = curvature_profile(curve, default_window(curve))?;
    Ok(verify_lemma1_with(curve, &profile, lambda, tol))
}

pub fn verify_lemma1_with(curve: &Curve, profile: &CurvatureProfile, lambda: f64, tol: f64) -> Lemma1Report {
    let n = curve.len();
    // (max alpha dilation, i, j, max chord excess)
    let (alpha_max, ai, aj, chord_excess) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (0.0f64, i, i, f64::NEG_INFINITY);
            for j in i + 1..n {
                let arc = curve.arc_between_samples(i, j);
                let ti = curve.tangent(i);
                let tj = curve.tangent(j);
                let dil = linalg::unit_angle(ti, tj) / arc;
                if dil > best.0 {
                    best = (dil, i, j, best.3);
                }
                best.3 = best.3.max(linalg::dist(ti, tj) - lambda * arc);
            }
            best
        })
        .reduce(
            || (0.0, usize::MAX, usize::MAX, f64::NEG_INFINITY),
            |a, b| {
                let pick = if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) { b } else { a };
                (pick.0, pick.1, pick.2, a.3.max(b.3))
            },
        );
    let windowed_ok = profile.sup_kappa <= lambda + tol;
    let pairwise_alpha_ok = alpha_max <= lambda + tol;
    Lemma1Report {
        lambda,
        tol,
        windowed_max: profile.sup_kappa,
        windowed_ok,
        pairwise_alpha_max: alpha_max,
        pairwise_alpha_pair: (ai != aj && ai != usize::MAX).then_some((ai, aj)),
        pairwise_alpha_ok,
        pairwise_chord_excess: chord_excess,
        pairwise_chord_ok: chord_excess <= tol,
        consistent: windowed_ok == pairwise_alpha_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::PI;

    #[test]
    fn straight_segment_has_zero_curvature() {
        let pts: Vec<Vec<f64>> = (0..50).map(|k| vec![k as f64 * 0.1, 0.0]).collect();
        let c = Curve::new(&pts, 2, false, None).unwrap();
        let prof = curvature_profile(&c, default_window(&c)).unwrap();
        assert!(prof.kappa.iter().all(|&k| k == 0.0));
        assert!(prof.f_k.is_infinite());
    }

    #[test]
    fn unit_circle_curvature() {
        let c = fixtures::circle(1.0, 1024).unwrap();
        let prof = curvature_profile(&c, 0.1).unwrap();
        assert!((prof.sup_kappa - 1.0).abs() < 1e-2);
        assert!((prof.f_k - 1.0).abs() < 1e-2);
        assert!((prof.f_k * prof.sup_kappa - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stadium_curvature() {
        let c = fixtures::stadium(1.0, 4.0, 2048).unwrap();
        let prof = curvature_profile(&c, default_window(&c)).unwrap();
        assert!((prof.sup_kappa - 1.0).abs() < 2e-2);
        // midpoint of the bottom straight is sample 0
        assert!(prof.kappa[0] < 1e-12);
        assert!(prof.kappa[c.len() / 2] < 1e-12);
    }

    #[test]
    fn window_too_small() {
        let c = fixtures::circle(1.0, 64).unwrap();
        let err = curvature_profile(&c, c.mean_spacing()).unwrap_err();
        assert!(matches!(err, Error::WindowTooSmall { .. }));
    }

    #[test]
    fn dilation_bounds_on_circle_and_segment() {
        let c = fixtures::circle(1.0, 1024).unwrap();
        let ok = verify_lemma1(&c, 1.05, 1e-2).unwrap();
        assert!(ok.all_pass() && ok.consistent);
        let bad = verify_lemma1(&c, 0.5, 1e-2).unwrap();
        assert!(!bad.pairwise_alpha_ok);
        assert!(bad.consistent);

        let pts: Vec<Vec<f64>> = (0..20).map(|k| vec![k as f64, 0.0]).collect();
        let seg = Curve::new(&pts, 2, false, None).unwrap();
        assert!(verify_lemma1(&seg, 0.0, 0.0).unwrap().all_pass());
    }

    #[test]
    fn max_of_chain_bound() {
        let c = fixtures::ellipse(2.0, 1.0, 256).unwrap();
        for i in (0..c.len()).step_by(7) {
            for j in (i + 1..c.len()).step_by(11) {
                for k in (j + 1..c.len()).step_by(13) {
                    // along-arc order i < j < k on the shorter arc only
                    let arc_ik = c.arc_between_samples(i, k);
                    if (c.cum_arclength()[k] - c.cum_arclength()[i] - arc_ik).abs() > 1e-12 {
                        continue;
                    }
                    let lhs = c.dilation_alpha(i, k).unwrap();
                    let rhs = c.dilation_alpha(i, j).unwrap().max(c.dilation_alpha(j, k).unwrap());
                    assert!(lhs <= rhs + 1e-9, "{i} {j} {k}");
                }
            }
        }
    }

    #[test]
    fn polygon_curvature_converges() {
        let err = |n: usize| {
            let c = fixtures::circle(2.0, n).unwrap();
            let p = curvature_profile(&c, default_window(&c)).unwrap();
            (p.sup_kappa - 0.5).abs()
        };
        let (e1, e2, e3) = (err(64), err(128), err(256));
        assert!(e2 < e1 && e3 < e2);
        assert!(e3 < 1e-3);
    }

    #[test]
    fn vertex_curvature_of_polygon() {
        let c = fixtures::circle(1.0, 360).unwrap();
        let k = vertex_curvature(&c);
        let x = PI / 360.0;
        let expected = 2.0 * x / x.sin();
        assert!(k.iter().all(|v| (v - expected / 2.0).abs() < 1e-9));
    }
}
