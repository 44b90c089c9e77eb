use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm, reject};

/// Boundary data `(p, q; v, w; Λ)` of the bounded-curvature shortest path
/// problem: start and end points, unit tangents there, and the curvature cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryData {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub lambda: f64,
}

/// Orthonormal frame of a 2-plane through `origin`.
#[derive(Debug, Clone)]
pub struct PlaneFrame {
    pub origin: Vec<f64>,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
}

impl PlaneFrame {
    pub fn project_point(&self, x: &[f64]) -> [f64; 2] {
        let d = linalg::sub(x, &self.origin);
        [dot(&d, &self.e1), dot(&d, &self.e2)]
    }

    pub fn project_vector(&self, x: &[f64]) -> [f64; 2] {
        [dot(x, &self.e1), dot(x, &self.e2)]
    }

    pub fn lift_point(&self, x: [f64; 2]) -> Vec<f64> {
        self.origin
            .iter()
            .zip(self.e1.iter().zip(&self.e2))
            .map(|(o, (a, b))| o + x[0] * a + x[1] * b)
            .collect()
    }

    pub fn lift_vector(&self, x: [f64; 2]) -> Vec<f64> {
        self.e1.iter().zip(&self.e2).map(|(a, b)| x[0] * a + x[1] * b).collect()
    }
}

impl BoundaryData {
    /// Validates dimensions and normalizes the tangents.
    pub fn new(p: Vec<f64>, q: Vec<f64>, v: Vec<f64>, w: Vec<f64>, lambda: f64) -> Result<Self> {
        let n = p.len();
        if n < 2 {
            return Err(Error::Dimension(n));
        }
        if q.len() != n || v.len() != n || w.len() != n {
            return Err(Error::InvalidParameter(format!(
                "boundary vectors must share dimension {n} (q: {}, v: {}, w: {})",
                q.len(),
                v.len(),
                w.len()
            )));
        }
        if p.iter().chain(&q).chain(&v).chain(&w).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite boundary data".into()));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        let v = linalg::normalized(&v).ok_or_else(|| Error::InvalidParameter("start tangent is zero".into()))?;
        let w = linalg::normalized(&w).ok_or_else(|| Error::InvalidParameter("end tangent is zero".into()))?;
        Ok(BoundaryData { p, q, v, w, lambda })
    }

    /// Re-validates deserialized data.
    pub fn validated(self) -> Result<Self> {
        BoundaryData::new(self.p, self.q, self.v, self.w, self.lambda)
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn radius(&self) -> f64 {
        1.0 / self.lambda
    }

    /// Length scale used for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.radius().max(linalg::dist(&self.p, &self.q))
    }

    /// The same problem traversed backwards: `(q, p; -w, -v; Λ)`.
    pub fn reversed(&self) -> Self {
        BoundaryData {
            p: self.q.clone(),
            q: self.p.clone(),
            v: linalg::scale(&self.w, -1.0),
            w: linalg::scale(&self.v, -1.0),
            lambda: self.lambda,
        }
    }

    /// Dilation by `factor` about the origin; the curvature cap scales inversely.
    pub fn dilated(&self, factor: f64) -> Self {
        BoundaryData {
            p: linalg::scale(&self.p, factor),
            q: linalg::scale(&self.q, factor),
            v: self.v.clone(),
            w: self.w.clone(),
            lambda: self.lambda / factor,
        }
    }

    /// A plane through `p` spanned by `v` and the dominant remaining direction
    /// among `q - p` and `w`. Exact when the data are coplanar.
    pub fn best_plane(&self) -> PlaneFrame {
        let d = linalg::sub(&self.q, &self.p);
        let rd = reject(&d, &self.v);
        let rw = reject(&self.w, &self.v);
        let cand = if norm(&rd) / self.scale() >= norm(&rw) { rd } else { rw };
        let e2 = if norm(&cand) > 1e-12 * self.scale().max(1.0) {
            linalg::normalized(&cand).unwrap()
        } else {
            linalg::any_orthogonal(&self.v)
        };
        PlaneFrame {
            origin: self.p.clone(),
            e1: self.v.clone(),
            e2,
        }
    }

    /// The plane containing all data, if `q - p` and `w` lie in a common
    /// 2-plane with `v` (relative tolerance `tol`).
    pub fn coplanar_frame(&self, tol: f64) -> Option<PlaneFrame> {
        let f = self.best_plane();
        let d = linalg::sub(&self.q, &self.p);
        let off = |x: &[f64]| {
            let [a, b] = f.project_vector(x);
            x.iter()
                .zip(f.e1.iter().zip(&f.e2))
                .map(|(xi, (u, v))| (xi - a * u - b * v).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        if off(&d) <= tol * self.scale() && off(&self.w) <= tol {
            Some(f)
        } else {
            None
        }
    }

    /// `q` lies in the open obstacle at `(p, v)` and `p` in the one at `(q, -w)`.
    pub fn inside_both_obstacles(&self) -> bool {
        let r = self.radius();
        let mw = linalg::scale(&self.w, -1.0);
        crate::thickness::obstacle_contains(&self.p, &self.v, r, &self.q)
            && crate::thickness::obstacle_contains(&self.q, &mw, r, &self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_validates() {
        let b = BoundaryData::new(vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 3.0], 2.0).unwrap();
        assert_eq!(b.v, vec![1.0, 0.0]);
        assert_eq!(b.w, vec![0.0, 1.0]);
        assert_eq!(b.radius(), 0.5);
        assert!(BoundaryData::new(vec![0.0, 0.0], vec![1.0], vec![1.0, 0.0], vec![1.0, 0.0], 1.0).is_err());
        assert!(BoundaryData::new(vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0], 1.0).is_err());
        assert!(BoundaryData::new(vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn coplanarity() {
        let b = BoundaryData::new(
            vec![0.0, 0.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            1.0,
        )
        .unwrap();
        let f = b.coplanar_frame(1e-9).unwrap();
        let q2 = f.project_point(&b.q);
        assert!((q2[0] - 1.0).abs() < 1e-12 && (q2[1].abs() - 2.0).abs() < 1e-12);
        let lifted = f.lift_point(q2);
        assert!(linalg::dist(&lifted, &b.q) < 1e-12);
        let skew = BoundaryData::new(
            vec![0.0, 0.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
            1.0,
        )
        .unwrap();
        assert!(skew.coplanar_frame(1e-9).is_none());
    }

    #[test]
    fn reversal_is_an_involution() {
        let b = BoundaryData::new(vec![0.0, 1.0], vec![3.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], 1.0).unwrap();
        assert_eq!(b.reversed().reversed(), b);
    }
}
