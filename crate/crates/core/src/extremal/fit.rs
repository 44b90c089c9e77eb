//! Best-fit plane and circle of a point set in `R^n`.

use nalgebra::{DMatrix, Matrix3, Vector3};

use crate::linalg;

#[derive(Debug, Clone)]
pub struct CircleFit {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Orthonormal basis of the fitted plane.
    pub plane: [Vec<f64>; 2],
    /// Largest distance of a point from the plane.
    pub planarity_residual: f64,
    /// Largest `| |x - center| - radius |` over the points, in the plane.
    pub radial_deviation: f64,
}

impl CircleFit {
    /// Nearest point on the fitted circle.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let d = linalg::sub(x, &self.center);
        let a = linalg::dot(&d, &self.plane[0]);
        let b = linalg::dot(&d, &self.plane[1]);
        let r = a.hypot(b);
        if r == 0.0 {
            return linalg::axpy(&self.center, self.radius, &self.plane[0]);
        }
        let s = self.radius / r;
        self.center
            .iter()
            .zip(self.plane[0].iter().zip(&self.plane[1]))
            .map(|(c, (u, v))| c + s * (a * u + b * v))
            .collect()
    }
}

/// Principal plane through the centroid: returns the centroid, two
/// orthonormal directions of largest spread, and the largest out-of-plane
/// distance.
pub fn principal_plane(points: &[&[f64]]) -> (Vec<f64>, [Vec<f64>; 2], f64) {
    let n = points[0].len();
    let m = points.len() as f64;
    let mut mean = vec![0.0; n];
    for p in points {
        for (a, b) in mean.iter_mut().zip(p.iter()) {
            *a += b / m;
        }
    }
    let mut cov = DMatrix::<f64>::zeros(n, n);
    for p in points {
        let d = linalg::sub(p, &mean);
        for i in 0..n {
            for j in 0..n {
                cov[(i, j)] += d[i] * d[j];
            }
        }
    }
    let eig = cov.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let col = |k: usize| -> Vec<f64> { eig.eigenvectors.column(order[k]).iter().cloned().collect() };
    let e1 = col(0);
    let e2 = linalg::normalized(&linalg::reject(&col(1), &e1)).unwrap_or_else(|| linalg::any_orthogonal(&e1));
    let resid = points
        .iter()
        .map(|p| {
            let d = linalg::sub(p, &mean);
            let r = linalg::reject(&linalg::reject(&d, &e1), &e2);
            linalg::norm(&r)
        })
        .fold(0.0, f64::max);
    (mean, [e1, e2], resid)
}

/// Algebraic circle fit in the principal plane refined by Gauss-Newton on
/// the geometric distances. Needs at least three points.
pub fn fit_circle(points: &[&[f64]]) -> Option<CircleFit> {
    if points.len() < 3 {
        return None;
    }
    let (origin, plane, planarity) = principal_plane(points);
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|p| {
            let d = linalg::sub(p, &origin);
            (linalg::dot(&d, &plane[0]), linalg::dot(&d, &plane[1]))
        })
        .collect();
    // x² + y² + D x + E y + F = 0
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for &(x, y) in &xy {
        let row = Vector3::new(x, y, 1.0);
        ata += row * row.transpose();
        atb += row * (-(x * x + y * y));
    }
    let sol = ata.lu().solve(&atb)?;
    let (mut cx, mut cy) = (-sol[0] / 2.0, -sol[1] / 2.0);
    let r2 = cx * cx + cy * cy - sol[2];
    if !(r2 > 0.0) || !r2.is_finite() {
        return None;
    }
    let mut r = r2.sqrt();
    for _ in 0..20 {
        let mut jtj = Matrix3::<f64>::zeros();
        let mut jtr = Vector3::<f64>::zeros();
        for &(x, y) in &xy {
            let d = (x - cx).hypot(y - cy);
            if d == 0.0 {
                continue;
            }
            let res = d - r;
            let j = Vector3::new(-(x - cx) / d, -(y - cy) / d, -1.0);
            jtj += j * j.transpose();
            jtr += j * res;
        }
        let Some(step) = jtj.lu().solve(&(-jtr)) else { break };
        cx += step[0];
        cy += step[1];
        r += step[2];
        if step.norm() <= 1e-14 * r.max(1.0) {
            break;
        }
    }
    let center: Vec<f64> = origin
        .iter()
        .zip(plane[0].iter().zip(&plane[1]))
        .map(|(o, (u, v))| o + cx * u + cy * v)
        .collect();
    let radial = xy
        .iter()
        .map(|&(x, y)| ((x - cx).hypot(y - cy) - r).abs())
        .fold(0.0, f64::max);
    Some(CircleFit {
        center,
        radius: r.abs(),
        plane,
        planarity_residual: planarity,
        radial_deviation: radial,
    })
}
