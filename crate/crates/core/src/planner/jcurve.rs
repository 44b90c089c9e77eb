//! Shortest curve from `(p, v)` to a free end point `q` that stays outside
//! the obstacle `O_p(v, 1/Λ)`: a circular arc along the obstacle boundary
//! followed by the tangent segment to `q`.
//!
//! After rescaling to `Λ = 1` and writing `q - p = a v + h w` with `w ⊥ v`
//! and `h ≥ 0`, the relevant boundary circle has center `c = p + w`. With
//! `D = |q - c|` and `φ` the angle of `q - c` in the `(v, w)` frame, the arc
//! ends at angle `t = π/2 + φ - acos(1/D)` and the segment has length
//! `sqrt(D² - 1)`.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm};
use crate::thickness::obstacle_contains;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JCurveKind {
    Segment,
    Arc,
    ArcThenSegment,
}

#[derive(Debug, Clone, Serialize)]
pub struct JCurve {
    pub p: Vec<f64>,
    pub v: Vec<f64>,
    /// Unit vector orthogonal to `v` spanning the plane of the curve.
    pub w: Vec<f64>,
    pub radius: f64,
    pub arc_angle: f64,
    pub segment_length: f64,
    pub kind: JCurveKind,
    /// `q - p` points straight backwards: every rotation of the plane about
    /// `v` gives another shortest curve.
    pub rotational_family: bool,
}

impl JCurve {
    pub fn length(&self) -> f64 {
        self.radius * self.arc_angle + self.segment_length
    }

    fn arc_point(&self, t: f64) -> Vec<f64> {
        let (s, c) = t.sin_cos();
        self.p
            .iter()
            .zip(self.v.iter().zip(&self.w))
            .map(|(x, (a, b))| x + self.radius * (s * a + (1.0 - c) * b))
            .collect()
    }

    fn arc_tangent(&self, t: f64) -> Vec<f64> {
        let (s, c) = t.sin_cos();
        self.v.iter().zip(&self.w).map(|(a, b)| c * a + s * b).collect()
    }

    pub fn joint(&self) -> Vec<f64> {
        self.arc_point(self.arc_angle)
    }

    pub fn position_at(&self, s: f64) -> Vec<f64> {
        let la = self.radius * self.arc_angle;
        if s <= la {
            self.arc_point(s.max(0.0) / self.radius)
        } else {
            linalg::axpy(&self.joint(), s.min(self.length()) - la, &self.arc_tangent(self.arc_angle))
        }
    }

    pub fn tangent_at(&self, s: f64) -> Vec<f64> {
        let la = self.radius * self.arc_angle;
        self.arc_tangent(s.clamp(0.0, la) / self.radius)
    }

    pub fn end_point(&self) -> Vec<f64> {
        self.position_at(self.length())
    }

    pub fn sample(&self, n: usize) -> Result<Curve> {
        if n < 2 {
            return Err(Error::TooFewSamples {
                kind: "open",
                min: 2,
                found: n,
            });
        }
        let l = self.length();
        let pts: Vec<Vec<f64>> = (0..n).map(|k| self.position_at(l * k as f64 / (n - 1) as f64)).collect();
        let tans: Vec<Vec<f64>> = (0..n).map(|k| self.tangent_at(l * k as f64 / (n - 1) as f64)).collect();
        Curve::new(&pts, self.p.len(), false, Some(&tans))
    }

    /// No sample of the curve enters `O_p(v, radius (1 - margin))`.
    pub fn stays_in_complement(&self, samples: usize, margin: f64) -> bool {
        let l = self.length();
        (0..samples).all(|k| {
            let x = self.position_at(l * k as f64 / (samples - 1).max(1) as f64);
            !obstacle_contains(&self.p, &self.v, self.radius * (1.0 - margin), &x)
        })
    }
}

/// Shortest curve starting at `p` with unit tangent `v` and ending anywhere
/// at `q`, among curves avoiding `O_p(v, 1/Λ)`.
pub fn shortest_to_target_in_complement(p: &[f64], v: &[f64], q: &[f64], lambda: f64) -> Result<JCurve> {
    let n = p.len();
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    if v.len() != n || q.len() != n {
        return Err(Error::InvalidParameter("p, v and q must share one dimension".into()));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let v = linalg::normalized(v).ok_or_else(|| Error::InvalidParameter("start tangent is zero".into()))?;
    let radius = 1.0 / lambda;
    let d = linalg::scale(&linalg::sub(q, p), lambda);
    let dn = norm(&d);
    if dn == 0.0 {
        return Err(Error::TargetAtStart);
    }
    let a = dot(&d, &v);
    let qn = linalg::reject(&d, &v);
    let h = norm(&qn);
    let mut out = JCurve {
        p: p.to_vec(),
        v: v.clone(),
        w: Vec::new(),
        radius,
        arc_angle: 0.0,
        segment_length: 0.0,
        kind: JCurveKind::Segment,
        rotational_family: false,
    };
    if h <= 1e-12 * dn {
        if a > 0.0 {
            out.w = linalg::any_orthogonal(&v);
            out.segment_length = dn * radius;
            return Ok(out);
        }
        out.rotational_family = true;
        out.w = linalg::any_orthogonal(&v);
    } else {
        out.w = linalg::scale(&qn, 1.0 / h);
    }
    // in the (v, w) frame q = (a, h) and the circle center is (0, 1)
    let (x, y) = (a, h - 1.0);
    let big_d = x.hypot(y);
    if big_d < 1.0 - 1e-12 {
        return Err(Error::TargetInObstacle);
    }
    let phi = y.atan2(x);
    let mut t = FRAC_PI_2 + phi - (1.0 / big_d).min(1.0).acos();
    if t < 0.0 && t > -1e-12 {
        t = 0.0;
    }
    out.arc_angle = t.rem_euclid(TAU);
    let seg = (big_d * big_d - 1.0).max(0.0).sqrt();
    if seg <= 1e-12 {
        out.kind = JCurveKind::Arc;
    } else {
        out.kind = if out.arc_angle == 0.0 {
            JCurveKind::Segment
        } else {
            JCurveKind::ArcThenSegment
        };
        out.segment_length = seg * radius;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn boundary_target_is_pure_arc() {
        let j = shortest_to_target_in_complement(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 2.0], 1.0).unwrap();
        assert_eq!(j.kind, JCurveKind::Arc);
        assert!((j.length() - PI).abs() < 1e-12);
    }

    #[test]
    fn forward_target_is_segment() {
        let j = shortest_to_target_in_complement(&[0.0, 0.0], &[1.0, 0.0], &[2.5, 0.0], 1.0).unwrap();
        assert_eq!(j.kind, JCurveKind::Segment);
        assert!((j.length() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn tangent_construction() {
        let j = shortest_to_target_in_complement(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 3.0], 1.0).unwrap();
        assert_eq!(j.kind, JCurveKind::ArcThenSegment);
        assert!((j.arc_angle - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((j.segment_length - 3f64.sqrt()).abs() < 1e-12);
        let tp = j.joint();
        assert!((tp[0] - 3f64.sqrt() / 2.0).abs() < 1e-12 && (tp[1] - 1.5).abs() < 1e-12);
        let end = j.end_point();
        assert!(end[0].abs() < 1e-12 && (end[1] - 3.0).abs() < 1e-12);
        assert!(j.stays_in_complement(500, 1e-9));
    }

    #[test]
    fn dilation_equivariance() {
        let a = shortest_to_target_in_complement(&[0.0, 0.0], &[1.0, 0.0], &[-1.0, 2.5], 1.0).unwrap();
        let b = shortest_to_target_in_complement(&[0.0, 0.0], &[1.0, 0.0], &[-3.0, 7.5], 1.0 / 3.0).unwrap();
        assert!((b.length() / a.length() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn backwards_target_is_a_rotational_family() {
        let j = shortest_to_target_in_complement(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[-2.0, 0.0, 0.0], 1.0).unwrap();
        assert!(j.rotational_family);
        let end = j.end_point();
        assert!(linalg::dist(&end, &[-2.0, 0.0, 0.0]) < 1e-12);
    }

    #[test]
    fn rejects_inside_and_start() {
        assert!(matches!(
            shortest_to_target_in_complement(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], 1.0),
            Err(Error::TargetInObstacle)
        ));
        assert!(matches!(
            shortest_to_target_in_complement(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0], 1.0),
            Err(Error::TargetAtStart)
        ));
    }

    #[test]
    fn three_dimensional_target() {
        let j = shortest_to_target_in_complement(&[1.0, 1.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 1.0, 4.0], 1.0).unwrap();
        assert!((j.length() - (2.0 * PI / 3.0 + 3f64.sqrt())).abs() < 1e-12);
        assert!(linalg::dist(&j.end_point(), &[1.0, 1.0, 4.0]) < 1e-12);
    }
}
