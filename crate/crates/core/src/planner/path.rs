use serde::Serialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::linalg::{self, dist, dot, norm};
use crate::planner::BoundaryData;

/// Circular arc of the path's radius, starting at `start` with unit tangent
/// `tangent` and turning towards the unit normal `normal`.
#[derive(Debug, Clone, Serialize)]
pub struct ArcPiece {
    pub start: Vec<f64>,
    pub tangent: Vec<f64>,
    pub normal: Vec<f64>,
    pub center: Vec<f64>,
    /// Turning angle in `[0, 2π)`.
    pub angle: f64,
}

impl ArcPiece {
    fn new(start: Vec<f64>, tangent: Vec<f64>, normal: Vec<f64>, angle: f64, radius: f64) -> Self {
        let center = linalg::axpy(&start, radius, &normal);
        ArcPiece {
            start,
            tangent,
            normal,
            center,
            angle,
        }
    }

    pub fn point(&self, radius: f64, phi: f64) -> Vec<f64> {
        let (s, c) = phi.sin_cos();
        self.start
            .iter()
            .zip(self.tangent.iter().zip(&self.normal))
            .map(|(x, (t, n))| x + radius * (s * t + (1.0 - c) * n))
            .collect()
    }

    pub fn tangent_at(&self, phi: f64) -> Vec<f64> {
        let (s, c) = phi.sin_cos();
        self.tangent.iter().zip(&self.normal).map(|(t, n)| c * t + s * n).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentPiece {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub direction: Vec<f64>,
    pub length: f64,
}

/// Circle-line-circle path: arc, straight segment, arc, joined C¹, both arcs
/// of radius `1 / Λ`. Either arc or the segment may be degenerate.
#[derive(Debug, Clone, Serialize)]
pub struct ClcPath {
    pub radius: f64,
    pub first: ArcPiece,
    pub segment: SegmentPiece,
    pub second: ArcPiece,
    pub length: f64,
    /// Turn pattern, e.g. `LSR` in the plane, `CLC` otherwise.
    pub word: String,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClcCheck {
    /// Worst position (relative to the radius) or tangent mismatch at the two joints.
    pub joint_residual: f64,
    /// Worst mismatch against the boundary data.
    pub boundary_residual: f64,
    /// Worst deviation of `|center - start|` from the radius, relative.
    pub radius_error: f64,
}

impl ClcCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.joint_residual <= tol && self.boundary_residual <= tol && self.radius_error <= tol
    }
}

fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(std::f64::consts::TAU);
    if std::f64::consts::TAU - t < 1e-12 {
        0.0
    } else {
        t
    }
}

/// Removes the `t` component of `n` and normalizes; falls back to an
/// arbitrary normal when `n` is (nearly) parallel to `t`.
fn unit_normal(n: &[f64], t: &[f64]) -> Vec<f64> {
    let r = linalg::reject(n, t);
    if norm(&r) > 1e-9 {
        linalg::normalized(&r).unwrap()
    } else {
        linalg::any_orthogonal(t)
    }
}

impl ClcPath {
    /// Assembles the path from its turn data. `n1` is the first arc's normal
    /// (projected orthogonal to `v`), `n2` the second arc's normal at its
    /// start (projected orthogonal to the segment direction).
    #[allow(clippy::too_many_arguments)]
    pub fn from_turns(
        p: &[f64],
        v: &[f64],
        n1: &[f64],
        theta1: f64,
        seg_len: f64,
        n2: &[f64],
        theta2: f64,
        radius: f64,
        word: &str,
    ) -> Self {
        let theta1 = wrap_angle(theta1);
        let theta2 = wrap_angle(theta2);
        let n1 = unit_normal(n1, v);
        let first = ArcPiece::new(p.to_vec(), v.to_vec(), n1, theta1, radius);
        let a1 = first.point(radius, theta1);
        let dir = first.tangent_at(theta1);
        let a2 = linalg::axpy(&a1, seg_len, &dir);
        let n2 = unit_normal(n2, &dir);
        let second = ArcPiece::new(a2.clone(), dir.clone(), n2, theta2, radius);
        ClcPath {
            radius,
            length: radius * (theta1 + theta2) + seg_len,
            first,
            segment: SegmentPiece {
                start: a1,
                end: a2,
                direction: dir,
                length: seg_len,
            },
            second,
            word: word.to_string(),
        }
    }

    pub fn dim(&self) -> usize {
        self.first.start.len()
    }

    /// Arclengths of the two arcs.
    pub fn arc_lengths(&self) -> (f64, f64) {
        (self.radius * self.first.angle, self.radius * self.second.angle)
    }

    pub fn has_segment(&self, tol: f64) -> bool {
        self.segment.length > tol
    }

    pub fn end_point(&self) -> Vec<f64> {
        self.second.point(self.radius, self.second.angle)
    }

    pub fn end_tangent(&self) -> Vec<f64> {
        self.second.tangent_at(self.second.angle)
    }

    pub fn position_at(&self, s: f64) -> Vec<f64> {
        let (l1, _) = self.arc_lengths();
        if s <= l1 {
            self.first.point(self.radius, s.max(0.0) / self.radius)
        } else if s <= l1 + self.segment.length {
            linalg::axpy(&self.segment.start, s - l1, &self.segment.direction)
        } else {
            let phi = ((s - l1 - self.segment.length) / self.radius).min(self.second.angle);
            self.second.point(self.radius, phi)
        }
    }

    pub fn tangent_at(&self, s: f64) -> Vec<f64> {
        let (l1, _) = self.arc_lengths();
        if s <= l1 {
            self.first.tangent_at(s.max(0.0) / self.radius)
        } else if s <= l1 + self.segment.length {
            self.segment.direction.clone()
        } else {
            let phi = ((s - l1 - self.segment.length) / self.radius).min(self.second.angle);
            self.second.tangent_at(phi)
        }
    }

    /// `n` samples equally spaced in arclength with exact tangents.
    pub fn sample(&self, n: usize) -> Result<Curve> {
        if n < 2 {
            return Err(Error::TooFewSamples {
                kind: "open",
                min: 2,
                found: n,
            });
        }
        if self.length <= 0.0 {
            return Err(Error::InvalidParameter("path has zero length".into()));
        }
        let mut pts = Vec::with_capacity(n);
        let mut tans = Vec::with_capacity(n);
        for k in 0..n {
            let s = self.length * k as f64 / (n - 1) as f64;
            pts.push(self.position_at(s));
            tans.push(self.tangent_at(s));
        }
        Curve::new(&pts, self.dim(), false, Some(&tans))
    }

    pub fn check(&self, b: &BoundaryData) -> ClcCheck {
        let r = self.radius;
        let a1 = self.first.point(r, self.first.angle);
        let t1 = self.first.tangent_at(self.first.angle);
        let joint = [
            dist(&a1, &self.segment.start) / r,
            dist(&t1, &self.segment.direction),
            dist(&self.segment.end, &self.second.start) / r,
            dist(&self.segment.direction, &self.second.tangent),
            (dist(&linalg::axpy(&self.segment.start, self.segment.length, &self.segment.direction), &self.segment.end))
                / r,
        ];
        let boundary = [
            dist(&self.first.start, &b.p) / r,
            dist(&self.first.tangent, &b.v),
            dist(&self.end_point(), &b.q) / r,
            dist(&self.end_tangent(), &b.w),
        ];
        let radius_error = [&self.first, &self.second]
            .iter()
            .map(|a| {
                (dist(&a.center, &a.start) / r - 1.0)
                    .abs()
                    .max(dot(&a.normal, &a.tangent).abs())
                    .max((norm(&a.normal) - 1.0).abs())
            })
            .fold(0.0, f64::max);
        ClcCheck {
            joint_residual: joint.iter().cloned().fold(0.0, f64::max),
            boundary_residual: boundary.iter().cloned().fold(0.0, f64::max),
            radius_error,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_turn_then_segment() {
        let path = ClcPath::from_turns(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], PI, 3.0, &[0.0, 1.0], 0.0, 1.0, "LSL");
        let end = path.end_point();
        assert!((end[0] + 3.0).abs() < 1e-12 && (end[1] - 2.0).abs() < 1e-12);
        assert!((path.length - (PI + 3.0)).abs() < 1e-12);
        let b = BoundaryData::new(vec![0.0, 0.0], end, vec![1.0, 0.0], vec![-1.0, 0.0], 1.0).unwrap();
        assert!(path.check(&b).passes(1e-12));
        let c = path.sample(200).unwrap();
        assert!((c.length() - path.length).abs() < 1e-3);
    }

    #[test]
    fn full_turn_wraps_to_zero() {
        let path = ClcPath::from_turns(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], 2.0 * PI, 1.0, &[0.0, 1.0], -1e-15, 1.0, "LSL");
        assert_eq!(path.first.angle, 0.0);
        assert_eq!(path.second.angle, 0.0);
        assert!((path.length - 1.0).abs() < 1e-15);
    }

    #[test]
    fn position_is_continuous_at_joints() {
        let path = ClcPath::from_turns(
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0],
            1.0,
            2.0,
            &[0.0, 1.0, 0.0],
            2.0,
            0.5,
            "CLC",
        );
        let (l1, _) = path.arc_lengths();
        for s in [l1, l1 + 2.0] {
            let a = path.position_at(s - 1e-9);
            let b = path.position_at(s + 1e-9);
            assert!(dist(&a, &b) < 1e-8);
            let ta = path.tangent_at(s - 1e-9);
            let tb = path.tangent_at(s + 1e-9);
            assert!(dist(&ta, &tb) < 1e-8);
        }
    }
}
