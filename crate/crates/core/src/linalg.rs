//! Small helpers over `&[f64]` vectors of arbitrary dimension.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

/// Angle between two unit vectors, `2 asin(|u - v| / 2)`.
///
/// Well conditioned near both 0 and pi, unlike `acos(u . v)`.
pub fn unit_angle(u: &[f64], v: &[f64]) -> f64 {
    let c = (dist(u, v) * 0.5).min(1.0);
    2.0 * c.asin()
}

/// Component of `d` orthogonal to the unit vector `t`.
pub fn reject(d: &[f64], t: &[f64]) -> Vec<f64> {
    let a = dot(d, t);
    d.iter().zip(t).map(|(x, y)| x - a * y).collect()
}

/// Norm of the component of `d` orthogonal to the unit vector `t`.
///
/// Computed from the explicit rejection rather than `sqrt(|d|^2 - (d.t)^2)`
/// so that nearly tangent chords keep their relative accuracy.
pub fn reject_norm(d: &[f64], t: &[f64]) -> f64 {
    let a = dot(d, t);
    d.iter()
        .zip(t)
        .map(|(x, y)| {
            let r = x - a * y;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Some unit vector orthogonal to the unit vector `v` (n >= 2).
pub fn any_orthogonal(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut best: Option<Vec<f64>> = None;
    let mut best_norm = -1.0;
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        let r = reject(&e, v);
        let rn = norm(&r);
        if rn > best_norm + 1e-12 {
            best_norm = rn;
            best = Some(r);
        }
    }
    let r = best.expect("dimension >= 1");
    scale(&r, 1.0 / best_norm)
}

/// Solve a small dense system by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}
