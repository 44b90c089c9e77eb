//! Double critical pairs: chords normal to the curve at both ends.
//!
//! On the torus of parameter pairs `(s, t)` the two orthogonality conditions
//! `g_s = (γ(s) - γ(t)) · γ'(s)` and `g_t = (γ(s) - γ(t)) · γ'(t)` are scanned
//! on the sample grid. Cells where both change sign are refined by a damped
//! Gauss-Newton (Levenberg-Marquardt) iteration on the piecewise-linear
//! interpolants of positions and tangents. Degenerate families (antipodal
//! pairs of a circle, facing parallel segments) have a rank-deficient
//! Jacobian; the damped iteration still lands on the zero set.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{Curve, WINDOW_SLACK};
use crate::error::{Error, Result};
use crate::linalg::{self, dot};

pub const DEFAULT_ORTHOGONALITY_TOL: f64 = 1e-8;
const MAX_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Serialize)]
pub struct CriticalPair {
    /// Refined arclength parameters, `s < t`.
    pub s: f64,
    pub t: f64,
    /// Samples nearest to `s` and `t`.
    pub i: usize,
    pub j: usize,
    pub point_s: Vec<f64>,
    pub point_t: Vec<f64>,
    pub chord: f64,
    /// `|(γ(s) - γ(t)) · γ'(s)| / chord` with the unit tangent.
    pub residual_s: f64,
    pub residual_t: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct CriticalOptions {
    /// Scan step in arclength; `None` scans every sample.
    pub grid_step: Option<f64>,
    /// Orthogonality residual tolerance relative to the chord length.
    pub tol: f64,
    /// Minimum arclength separation of a pair; `None` derives it from the
    /// focal distance estimate.
    pub exclusion: Option<f64>,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        CriticalOptions {
            grid_step: None,
            tol: DEFAULT_ORTHOGONALITY_TOL,
            exclusion: None,
        }
    }
}

/// Arclength separation below which two parameters count as the same strand:
/// `pi * f_k`, relaxed by the adaptive tolerance `10 / N`.
pub fn default_exclusion(curve: &Curve, f_k: f64) -> f64 {
    let f = if f_k.is_finite() { f_k } else { curve.length() };
    std::f64::consts::PI * f * (1.0 - 10.0 / curve.len() as f64)
}

struct Eval {
    g: [f64; 2],
    jac: [[f64; 2]; 2],
    chord: f64,
    tn_s: f64,
    tn_t: f64,
}

fn frame(curve: &Curve, s: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let (k, u) = curve.locate(s);
    let k1 = (k + 1) % curve.len();
    let len = curve.segment_length(k);
    let (a, b) = (curve.point(k), curve.point(k1));
    let (ta, tb) = (curve.tangent(k), curve.tangent(k1));
    let p = a.iter().zip(b).map(|(x, y)| x + u * (y - x)).collect();
    let t = ta.iter().zip(tb).map(|(x, y)| x + u * (y - x)).collect();
    let dp = a.iter().zip(b).map(|(x, y)| (y - x) / len).collect();
    let dt = ta.iter().zip(tb).map(|(x, y)| (y - x) / len).collect();
    (p, t, dp, dt)
}

fn evaluate(curve: &Curve, s: f64, t: f64) -> Eval {
    let (ps, ts, dps, dts) = frame(curve, s);
    let (pt, tt, dpt, dtt) = frame(curve, t);
    let d = linalg::sub(&ps, &pt);
    Eval {
        g: [dot(&d, &ts), dot(&d, &tt)],
        jac: [
            [dot(&dps, &ts) + dot(&d, &dts), -dot(&dpt, &ts)],
            [dot(&dps, &tt), -dot(&dpt, &tt) + dot(&d, &dtt)],
        ],
        chord: linalg::norm(&d),
        tn_s: linalg::norm(&ts),
        tn_t: linalg::norm(&tt),
    }
}

fn residuals(e: &Eval) -> (f64, f64) {
    if e.chord == 0.0 {
        return (f64::INFINITY, f64::INFINITY);
    }
    (e.g[0].abs() / (e.tn_s * e.chord), e.g[1].abs() / (e.tn_t * e.chord))
}

/// Levenberg-Marquardt on `(g_s, g_t)`; returns the final parameters.
fn refine(curve: &Curve, mut s: f64, mut t: f64) -> (f64, f64) {
    let mut e = evaluate(curve, s, t);
    let mut cost = e.g[0] * e.g[0] + e.g[1] * e.g[1];
    let mut mu = 1e-3;
    for _ in 0..MAX_ITERATIONS {
        let (r_s, r_t) = residuals(&e);
        if r_s.max(r_t) < 1e-14 {
            break;
        }
        let j = e.jac;
        let jtj = [
            [j[0][0] * j[0][0] + j[1][0] * j[1][0], j[0][0] * j[0][1] + j[1][0] * j[1][1]],
            [j[0][1] * j[0][0] + j[1][1] * j[1][0], j[0][1] * j[0][1] + j[1][1] * j[1][1]],
        ];
        let jtg = [
            j[0][0] * e.g[0] + j[1][0] * e.g[1],
            j[0][1] * e.g[0] + j[1][1] * e.g[1],
        ];
        let scale = jtj[0][0].max(jtj[1][1]).max(1e-300);
        let mut improved = false;
        for _ in 0..12 {
            let a = jtj[0][0] + mu * scale;
            let d = jtj[1][1] + mu * scale;
            let b = jtj[0][1];
            let det = a * d - b * b;
            if det == 0.0 || !det.is_finite() {
                mu *= 10.0;
                continue;
            }
            let ds = -(d * jtg[0] - b * jtg[1]) / det;
            let dt = -(a * jtg[1] - b * jtg[0]) / det;
            let (ns, nt) = (s + ds, t + dt);
            let ne = evaluate(curve, ns, nt);
            let ncost = ne.g[0] * ne.g[0] + ne.g[1] * ne.g[1];
            if ncost < cost {
                s = ns;
                t = nt;
                e = ne;
                cost = ncost;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (s, t)
}

fn nearest_sample(curve: &Curve, s: f64) -> usize {
    let (k, u) = curve.locate(s);
    if u < 0.5 {
        k
    } else {
        (k + 1) % curve.len()
    }
}

/// All double critical pairs of a closed curve found by the grid scan.
pub fn double_critical_pairs(curve: &Curve, opts: &CriticalOptions) -> Result<Vec<CriticalPair>> {
    if !curve.is_closed() {
        return Err(Error::NotClosed);
    }
    let n = curve.len();
    let spacing = curve.mean_spacing();
    let stride = match opts.grid_step {
        Some(step) if step < spacing * (1.0 - 1e-9) => {
            return Err(Error::InvalidParameter(format!(
                "grid step {step} is below the sample spacing {spacing}"
            )))
        }
        Some(step) => ((step / spacing).round() as usize).clamp(1, n / 3),
        None => 1,
    };
    let exclusion = match opts.exclusion {
        Some(x) => x,
        None => {
            let prof = crate::curvature::curvature_profile(curve, crate::curvature::default_window(curve))?;
            default_exclusion(curve, prof.f_k)
        }
    };
    let nodes: Vec<usize> = (0..n).step_by(stride).collect();
    let m = nodes.len();
    let cum = curve.cum_arclength();
    let node_param = |a: usize| if a == m { curve.length() } else { cum[nodes[a]] };
    let coarse = exclusion * (1.0 - WINDOW_SLACK) - 2.0 * stride as f64 * curve.max_spacing();

    // (g_s, g_t, chord) along row `a` of the node grid
    let row = |a: usize| -> Vec<(f64, f64, f64)> {
        let i = nodes[a % m];
        let (pi, ti) = (curve.point(i), curve.tangent(i));
        (0..=m)
            .map(|b| {
                let j = nodes[b % m];
                let d = linalg::sub(pi, curve.point(j));
                (dot(&d, ti), dot(&d, curve.tangent(j)), linalg::norm(&d))
            })
            .collect()
    };

    let mut found: Vec<(f64, f64)> = (0..m)
        .into_par_iter()
        .flat_map_iter(|a| {
            let r0 = row(a);
            let r1 = row(a + 1);
            let s_mid = 0.5 * (node_param(a) + node_param(a + 1));
            let mut hits = Vec::new();
            for b in a + 1..m {
                let t_mid = 0.5 * (node_param(b) + node_param(b + 1));
                if curve.arc_between(s_mid, t_mid) < coarse {
                    continue;
                }
                let corners = [r0[b], r0[b + 1], r1[b], r1[b + 1]];
                let band = 1e-12 * corners.iter().map(|c| c.2).fold(0.0, f64::max);
                let straddles = |f: fn(&(f64, f64, f64)) -> f64| {
                    let lo = corners.iter().map(f).fold(f64::INFINITY, f64::min);
                    let hi = corners.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
                    lo <= band && hi >= -band
                };
                if !(straddles(|c| c.0) && straddles(|c| c.1)) {
                    continue;
                }
                let (s, t) = refine(curve, s_mid, t_mid);
                let e = evaluate(curve, s, t);
                let (rs, rt) = residuals(&e);
                let (s, t) = if rs.max(rt) <= opts.tol {
                    (s, t)
                } else {
                    // fall back to the best grid corner of the cell
                    let cand = [(a, b), (a, b + 1), (a + 1, b), (a + 1, b + 1)];
                    let best = cand
                        .iter()
                        .map(|&(x, y)| {
                            let (ps, pt) = (node_param(x), node_param(y));
                            let (r1, r2) = residuals(&evaluate(curve, ps, pt));
                            (r1.max(r2), ps, pt)
                        })
                        .min_by(|x, y| x.0.total_cmp(&y.0))
                        .unwrap();
                    (best.1, best.2)
                };
                hits.push((s.rem_euclid(curve.length()), t.rem_euclid(curve.length())));
            }
            hits
        })
        .collect();

    let mut pairs = Vec::new();
    for (s, t) in found.drain(..) {
        let (s, t) = if s <= t { (s, t) } else { (t, s) };
        let e = evaluate(curve, s, t);
        let (rs, rt) = residuals(&e);
        if !(rs <= opts.tol && rt <= opts.tol) || e.chord <= 0.0 {
            continue;
        }
        if curve.arc_between(s, t) < exclusion * (1.0 - WINDOW_SLACK) {
            continue;
        }
        pairs.push(CriticalPair {
            s,
            t,
            i: nearest_sample(curve, s),
            j: nearest_sample(curve, t),
            point_s: curve.position_at(s),
            point_t: curve.position_at(t),
            chord: e.chord,
            residual_s: rs,
            residual_t: rt,
        });
    }
    pairs.sort_by(|x, y| x.s.total_cmp(&y.s).then(x.t.total_cmp(&y.t)));

    // merge representatives of the same root found from neighbouring cells
    let thr = 0.25 * stride as f64 * spacing;
    let mut kept: Vec<CriticalPair> = Vec::with_capacity(pairs.len());
    for p in pairs {
        let dup = kept
            .iter()
            .rev()
            .take_while(|k| p.s - k.s < thr)
            .any(|k| curve.arc_between(k.t, p.t) < thr);
        if !dup {
            kept.push(p);
        }
    }
    Ok(kept)
}

#[derive(Debug, Clone, Serialize)]
pub struct Mdc {
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub value: f64,
    pub witness: Option<CriticalPair>,
    pub pairs: Vec<CriticalPair>,
}

/// Minimal double critical distance, infinite when no pair is found.
pub fn mdc(curve: &Curve, opts: &CriticalOptions) -> Result<Mdc> {
    let pairs = double_critical_pairs(curve, opts)?;
    Ok(mdc_from_pairs(pairs))
}

pub fn mdc_from_pairs(pairs: Vec<CriticalPair>) -> Mdc {
    let witness = pairs
        .iter()
        .min_by(|a, b| a.chord.total_cmp(&b.chord))
        .cloned();
    Mdc {
        value: witness.as_ref().map_or(f64::INFINITY, |w| w.chord),
        witness,
        pairs,
    }
}
