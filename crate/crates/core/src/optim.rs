//! Small unconstrained optimizers shared by the planner and the oracle.

use crate::linalg::{dot, solve_dense};

#[derive(Debug, Clone, Copy)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iter: usize,
    /// Stop when the gradient infinity norm falls below this value.
    pub grad_tol: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        LbfgsOptions {
            memory: 8,
            max_iter: 500,
            grad_tol: 1e-10,
        }
    }
}

/// Limited-memory BFGS with a backtracking Armijo line search.
///
/// `f(x, grad)` returns the objective and fills the gradient.
pub fn lbfgs<F>(mut f: F, x0: &[f64], opts: &LbfgsOptions) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut g = vec![0.0; n];
    let mut fx = f(&x, &mut g);
    let mut hist_s: Vec<Vec<f64>> = Vec::new();
    let mut hist_y: Vec<Vec<f64>> = Vec::new();
    let mut xn = vec![0.0; n];
    let mut gn = vec![0.0; n];
    for _ in 0..opts.max_iter {
        if !fx.is_finite() || g.iter().fold(0.0_f64, |m, v| m.max(v.abs())) < opts.grad_tol {
            break;
        }
        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let m = hist_s.len();
        let mut alpha = vec![0.0; m];
        for k in (0..m).rev() {
            let rho = 1.0 / dot(&hist_y[k], &hist_s[k]);
            alpha[k] = rho * dot(&hist_s[k], &d);
            for (di, yi) in d.iter_mut().zip(&hist_y[k]) {
                *di -= alpha[k] * yi;
            }
        }
        if m > 0 {
            let gamma = dot(&hist_s[m - 1], &hist_y[m - 1]) / dot(&hist_y[m - 1], &hist_y[m - 1]);
            d.iter_mut().for_each(|v| *v *= gamma);
        } else {
            let gn = dot(&g, &g).sqrt();
            d.iter_mut().for_each(|v| *v /= gn.max(1.0));
        }
        for k in 0..m {
            let rho = 1.0 / dot(&hist_y[k], &hist_s[k]);
            let beta = rho * dot(&hist_y[k], &d);
            for (di, si) in d.iter_mut().zip(&hist_s[k]) {
                *di += (alpha[k] - beta) * si;
            }
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
            hist_s.clear();
            hist_y.clear();
        }
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            for i in 0..n {
                xn[i] = x[i] + step * d[i];
            }
            let fnew = f(&xn, &mut gn);
            if fnew.is_finite() && fnew <= fx + 1e-4 * step * slope {
                let s: Vec<f64> = (0..n).map(|i| xn[i] - x[i]).collect();
                let y: Vec<f64> = (0..n).map(|i| gn[i] - g[i]).collect();
                if dot(&s, &y) > 1e-16 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
                    if hist_s.len() == opts.memory {
                        hist_s.remove(0);
                        hist_y.remove(0);
                    }
                    hist_s.push(s);
                    hist_y.push(y);
                }
                x.copy_from_slice(&xn);
                g.copy_from_slice(&gn);
                fx = fnew;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, fx)
}

/// Limited-memory BFGS restricted to the box `lower <= x <= upper`.
///
/// Variables sitting on a bound with the gradient pushing outward are frozen
/// for the step; the search path is projected onto the box. Infinite bounds
/// are allowed.
pub fn lbfgs_box<F>(mut f: F, x0: &[f64], lower: &[f64], upper: &[f64], opts: &LbfgsOptions) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let project = |x: &mut [f64]| {
        for i in 0..n {
            x[i] = x[i].clamp(lower[i], upper[i]);
        }
    };
    let mut x = x0.to_vec();
    project(&mut x);
    let mut g = vec![0.0; n];
    let mut fx = f(&x, &mut g);
    let mut hist_s: Vec<Vec<f64>> = Vec::new();
    let mut hist_y: Vec<Vec<f64>> = Vec::new();
    let mut xn = vec![0.0; n];
    let mut gn = vec![0.0; n];
    let mut active = vec![false; n];
    for _ in 0..opts.max_iter {
        for i in 0..n {
            active[i] = (x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0);
        }
        let pg_max = (0..n).filter(|&i| !active[i]).fold(0.0_f64, |m, i| m.max(g[i].abs()));
        if !fx.is_finite() || pg_max < opts.grad_tol {
            break;
        }
        let mut d: Vec<f64> = (0..n).map(|i| if active[i] { 0.0 } else { -g[i] }).collect();
        let m = hist_s.len();
        let mut alpha = vec![0.0; m];
        for k in (0..m).rev() {
            let rho = 1.0 / dot(&hist_y[k], &hist_s[k]);
            alpha[k] = rho * dot(&hist_s[k], &d);
            for (di, yi) in d.iter_mut().zip(&hist_y[k]) {
                *di -= alpha[k] * yi;
            }
        }
        if m > 0 {
            let gamma = dot(&hist_s[m - 1], &hist_y[m - 1]) / dot(&hist_y[m - 1], &hist_y[m - 1]);
            d.iter_mut().for_each(|v| *v *= gamma);
        } else {
            let gn = dot(&d, &d).sqrt();
            d.iter_mut().for_each(|v| *v /= gn.max(1.0));
        }
        for k in 0..m {
            let rho = 1.0 / dot(&hist_y[k], &hist_s[k]);
            let beta = rho * dot(&hist_y[k], &d);
            for (di, si) in d.iter_mut().zip(&hist_s[k]) {
                *di += (alpha[k] - beta) * si;
            }
        }
        for i in 0..n {
            if active[i] {
                d[i] = 0.0;
            }
        }
        if dot(&g, &d) >= 0.0 {
            let gn = (0..n).filter(|&i| !active[i]).map(|i| g[i] * g[i]).sum::<f64>().sqrt();
            d = (0..n).map(|i| if active[i] { 0.0 } else { -g[i] / gn.max(1.0) }).collect();
            hist_s.clear();
            hist_y.clear();
        }
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            for i in 0..n {
                xn[i] = x[i] + step * d[i];
            }
            project(&mut xn);
            let decrease: f64 = (0..n).map(|i| g[i] * (xn[i] - x[i])).sum();
            if decrease >= 0.0 {
                step *= 0.5;
                continue;
            }
            let fnew = f(&xn, &mut gn);
            if fnew.is_finite() && fnew <= fx + 1e-4 * decrease {
                let s: Vec<f64> = (0..n).map(|i| xn[i] - x[i]).collect();
                let y: Vec<f64> = (0..n).map(|i| gn[i] - g[i]).collect();
                if dot(&s, &y) > 1e-16 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
                    if hist_s.len() == opts.memory {
                        hist_s.remove(0);
                        hist_y.remove(0);
                    }
                    hist_s.push(s);
                    hist_y.push(y);
                }
                x.copy_from_slice(&xn);
                g.copy_from_slice(&gn);
                fx = fnew;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, fx)
}

/// Levenberg-Marquardt on a residual map with a forward-difference Jacobian.
/// Returns the final point and residual norm.
pub fn levenberg_marquardt<F>(mut residual: F, x0: &[f64], max_iter: usize, tol: f64) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = residual(&x);
    let mut cost = dot(&r, &r);
    let mut mu = 1e-3;
    for _ in 0..max_iter {
        if cost.sqrt() < tol {
            break;
        }
        let m = r.len();
        let mut jac = vec![vec![0.0; n]; m];
        for k in 0..n {
            let h = 1e-7 * x[k].abs().max(1.0);
            let mut xp = x.clone();
            xp[k] += h;
            let rp = residual(&xp);
            for i in 0..m {
                jac[i][k] = (rp[i] - r[i]) / h;
            }
        }
        let mut jtj = vec![vec![0.0; n]; n];
        let mut jtr = vec![0.0; n];
        for i in 0..m {
            for a in 0..n {
                jtr[a] += jac[i][a] * r[i];
                for b in 0..n {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }
        let diag_max = (0..n).map(|a| jtj[a][a]).fold(0.0_f64, f64::max).max(1e-300);
        let mut improved = false;
        for _ in 0..16 {
            let mut a = jtj.clone();
            for (k, row) in a.iter_mut().enumerate() {
                row[k] += mu * diag_max;
            }
            let Some(step) = solve_dense(a, jtr.iter().map(|v| -v).collect()) else {
                mu *= 10.0;
                continue;
            };
            let xn: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
            let rn = residual(&xn);
            let cn = dot(&rn, &rn);
            if cn.is_finite() && cn < cost {
                x = xn;
                r = rn;
                cost = cn;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (x, cost.sqrt())
}
