//! Ball radius and geometric focal distance by pairwise minimization.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{Curve, WINDOW_SLACK};
use crate::thickness::obstacle::pair_radius;

/// Default neighbourhood for the pointwise focal distance, in mean spacings.
pub const DEFAULT_FOCAL_WINDOW_SPACINGS: f64 = 10.0;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BallRadius {
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub r_o: f64,
    /// Ordered pair `(i, j)`: the obstacle is based at `i`, the hit sample is `j`.
    pub witness: Option<(usize, usize)>,
}

/// Deterministic min-reduction keyed on value then index pair.
fn better(a: (f64, usize, usize), b: (f64, usize, usize)) -> (f64, usize, usize) {
    if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
        b
    } else {
        a
    }
}

/// `min` over ordered sample pairs of the pair radius. Pairs closer than
/// `exclusion_arc` along the curve are skipped (0 keeps every pair).
pub fn rolling_ball_radius(curve: &Curve, exclusion_arc: f64) -> BallRadius {
    let n = curve.len();
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = curve.point(i);
            let t = curve.tangent(i);
            let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
            for j in 0..n {
                if j == i || (exclusion_arc > 0.0 && curve.arc_between_samples(i, j) <= exclusion_arc) {
                    continue;
                }
                let r = pair_radius(p, t, curve.point(j));
                if r < best.0 {
                    best = (r, i, j);
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, usize::MAX, usize::MAX), better);
    BallRadius {
        r_o: best.0,
        witness: best.0.is_finite().then_some((best.1, best.2)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FocalDistance {
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub f_g: f64,
    pub witness: Option<usize>,
    /// Pointwise focal distance estimate at every sample.
    #[serde(serialize_with = "crate::document::ser_f64_vec")]
    pub pointwise: Vec<f64>,
    pub window: f64,
}

pub fn default_focal_window(curve: &Curve) -> f64 {
    DEFAULT_FOCAL_WINDOW_SPACINGS * curve.mean_spacing()
}

/// Geometric focal distance: the pair radius minimized over neighbours within
/// arclength `window` of each sample, then over samples.
pub fn geometric_focal_distance(curve: &Curve, window: f64) -> FocalDistance {
    let limit = window * (1.0 + WINDOW_SLACK);
    let pointwise: Vec<f64> = (0..curve.len())
        .into_par_iter()
        .map(|i| {
            let p = curve.point(i);
            let t = curve.tangent(i);
            let mut best = f64::INFINITY;
            for dir in [-1isize, 1] {
                let mut k = 1;
                while let Some(j) = curve.offset_index(i, dir * k) {
                    if j == i || curve.arc_between_samples(i, j) > limit || k as usize >= curve.len() {
                        break;
                    }
                    best = best.min(pair_radius(p, t, curve.point(j)));
                    k += 1;
                }
            }
            best
        })
        .collect();
    let (witness, f_g) = pointwise
        .iter()
        .copied()
        .enumerate()
        .fold((None, f64::INFINITY), |acc, (i, f)| if f < acc.1 { (Some(i), f) } else { acc });
    FocalDistance {
        f_g,
        witness,
        pointwise,
        window,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn circle_ball_radius() {
        let c = fixtures::circle(1.0, 1024).unwrap();
        let b = rolling_ball_radius(&c, 0.0);
        assert!(b.r_o <= 1.0 + 1e-12 && b.r_o >= 1.0 - 5e-3, "{}", b.r_o);
        assert!(b.witness.is_some());
    }

    #[test]
    fn straight_segment_is_infinite() {
        let pts: Vec<Vec<f64>> = (0..30).map(|k| vec![k as f64 * 0.5, 1.0]).collect();
        let c = Curve::new(&pts, 2, false, None).unwrap();
        let b = rolling_ball_radius(&c, 0.0);
        assert!(b.r_o.is_infinite() && b.witness.is_none());
        let f = geometric_focal_distance(&c, default_focal_window(&c));
        assert!(f.f_g.is_infinite() && f.witness.is_none());
    }

    #[test]
    fn stadium_ball_radius() {
        let c = fixtures::stadium(1.0, 4.0, 2048).unwrap();
        let b = rolling_ball_radius(&c, 0.0);
        assert!((b.r_o - 1.0).abs() < 1e-2, "{}", b.r_o);
    }

    #[test]
    fn focal_distance_of_circles() {
        let c = fixtures::circle(1.0, 1024).unwrap();
        let f = geometric_focal_distance(&c, default_focal_window(&c));
        assert!((f.f_g - 1.0).abs() < 1e-2);
        let c2 = fixtures::circle(2.0, 1024).unwrap();
        let f2 = geometric_focal_distance(&c2, default_focal_window(&c2));
        assert!((f2.f_g - 2.0).abs() < 2e-2);
    }

    #[test]
    fn exclusion_removes_near_pairs() {
        let c = fixtures::ellipse(2.0, 1.0, 512).unwrap();
        let all = rolling_ball_radius(&c, 0.0);
        let far = rolling_ball_radius(&c, 2.0);
        assert!(far.r_o >= all.r_o);
        let (i, j) = far.witness.unwrap();
        assert!(c.arc_between_samples(i, j) > 2.0);
    }
}
