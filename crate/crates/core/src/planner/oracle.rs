//! Discrete shortest-path oracle, independent of the closed-form planner.
//!
//! The path is an `M`-segment polyline whose interior segments have length
//! `h` and whose two end segments are much shorter (see [`END_WEIGHT`]). The first
//! segment points along `v`; joint `k` turns by `δ_k = Λ b_k u_k` with
//! `|u_k| <= 1`, where `b_k` is the mean length of the two adjacent segments. Length `L`
//! is minimized subject to hitting `q` (and, in [`OracleMode::Both`],
//! leaving along `w`) by an augmented Lagrangian with box-constrained L-BFGS
//! inner solves. Deterministic and seeded random bang-coast-bang starts are
//! solved on a coarse polyline first; the best few are carried to full
//! resolution and solved again. Only coplanar boundary data are supported.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::optim::{lbfgs_box, LbfgsOptions};
use crate::planner::BoundaryData;

pub const MIN_SEGMENTS: usize = 16;
const FEASIBLE_TOL: f64 = 1e-8;
/// Resolution of the first stage.
const COARSE_SEGMENTS: usize = 32;
/// Coarse solutions carried to full resolution.
const REFINED_STARTS: usize = 3;
/// Coarse lengths closer than this (relative) count as one local minimum.
const DUPLICATE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleMode {
    /// Both end directions clamped.
    Both,
    /// Only the start direction clamped; the end direction is free.
    StartOnly,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleOptions {
    pub segments: usize,
    /// Pseudorandom restarts on top of the deterministic ones.
    pub restarts: usize,
    pub seed: u64,
    /// Inner L-BFGS iterations per augmented Lagrangian round.
    pub iters: usize,
    pub mode: OracleMode,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            segments: 256,
            restarts: 8,
            seed: 0,
            iters: 60,
            mode: OracleMode::Both,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    /// Polyline vertices, `segments + 1` of them, in the input coordinates.
    pub points: Vec<Vec<f64>>,
    pub length: f64,
    /// Interior segment length.
    pub segment_length: f64,
    /// Signed turning angle at each interior joint.
    pub turning: Vec<f64>,
    /// Per-joint turning budget `Λ b_k`.
    pub turn_budgets: Vec<f64>,
    /// `max_k |δ_k| / (Λ b_k)`; at most 1 by construction.
    pub max_turn_ratio: f64,
    /// Norm of the violated end conditions, relative to the radius.
    pub constraint_residual: f64,
    /// Total signed turning of the winner.
    pub total_turning: f64,
    /// Starts that met the end conditions, counted at the coarse stage when
    /// one is used.
    pub feasible_restarts: usize,
    pub total_restarts: usize,
}

impl OracleResult {
    pub fn curve(&self) -> Result<Curve> {
        let dim = self.points[0].len();
        Curve::new(&self.points, dim, false, None)
    }

    /// Fraction of joints whose turn is within `tol` (relative) of the budget.
    pub fn saturated_fraction(&self, tol: f64) -> f64 {
        let n = self.turning.len().max(1);
        self.turning
            .iter()
            .zip(&self.turn_budgets)
            .filter(|(d, b)| d.abs() >= *b * (1.0 - tol))
            .count() as f64
            / n as f64
    }
}

/// Length of the two end segments in units of `h`. Joint `k` may turn by the
/// mean length of its two segments, so short end segments put the first and
/// last joints nearly at `p` and `q`, the polyline is close to inscribed in
/// its arcs, and the end joints lose only `END_WEIGHT h / 2` of budget.
const END_WEIGHT: f64 = 1.0 / 16.0;

/// Length of segment `k` in units of `h`.
fn weight(k: usize, m: usize) -> f64 {
    if k == 0 || k + 1 == m {
        END_WEIGHT
    } else {
        1.0
    }
}

/// `L / h`.
fn inner(m: usize) -> f64 {
    (m - 2) as f64 + 2.0 * END_WEIGHT
}

/// Turning budget of joint `k` in units of `h`.
fn joint_budget(k: usize, m: usize) -> f64 {
    0.5 * (weight(k - 1, m) + weight(k, m))
}

struct Problem {
    m: usize,
    target: [f64; 2],
    heading: Option<f64>,
}

struct Trace {
    pos: [f64; 2],
    heading: f64,
}

impl Problem {
    fn inner(&self) -> f64 {
        inner(self.m)
    }

    fn headings(&self, x: &[f64], phi: &mut [f64]) {
        let h = x[0] / self.inner();
        phi[0] = 0.0;
        for k in 1..self.m {
            phi[k] = phi[k - 1] + h * joint_budget(k, self.m) * x[k];
        }
    }

    fn trace(&self, x: &[f64], phi: &mut [f64]) -> Trace {
        self.headings(x, phi);
        let h = x[0] / self.inner();
        let (mut px, mut py) = (0.0, 0.0);
        for (k, &a) in phi.iter().enumerate() {
            let (s, c) = a.sin_cos();
            let w = weight(k, self.m);
            px += w * c;
            py += w * s;
        }
        Trace {
            pos: [h * px, h * py],
            heading: phi[self.m - 1],
        }
    }

    fn constraints(&self, t: &Trace) -> Vec<f64> {
        let mut c = vec![t.pos[0] - self.target[0], t.pos[1] - self.target[1]];
        if let Some(hd) = self.heading {
            c.push(t.heading - hd);
        }
        c
    }

    /// Augmented Lagrangian `L + λ·c + μ/2 |c|²` and its gradient.
    fn lagrangian(&self, x: &[f64], grad: &mut [f64], lam: &[f64], mu: f64, phi: &mut [f64]) -> f64 {
        let m = self.m;
        let l = x[0];
        let t = self.trace(x, phi);
        let c = self.constraints(&t);
        let g: Vec<f64> = c.iter().zip(lam).map(|(ci, li)| li + mu * ci).collect();
        let gh = if self.heading.is_some() { g[2] } else { 0.0 };
        let h = l / inner(m);
        // suffix sums of the weighted perpendicular directions
        let (mut sx, mut sy) = (0.0, 0.0);
        let mut dl_turn = 0.0;
        for k in (1..m).rev() {
            let (s, c) = phi[k].sin_cos();
            let w = weight(k, m);
            sx -= w * s;
            sy += w * c;
            let d_delta = h * (g[0] * sx + g[1] * sy) + gh;
            let a = joint_budget(k, m);
            grad[k] = d_delta * h * a;
            dl_turn += d_delta * a * x[k] / inner(m);
        }
        grad[0] = 1.0 + (g[0] * t.pos[0] + g[1] * t.pos[1]) / l + dl_turn;
        let pen: f64 = c.iter().zip(lam).map(|(ci, li)| li * ci + 0.5 * mu * ci * ci).sum();
        l + pen
    }

    /// Augmented Lagrangian rounds from `x0`.
    fn solve(&self, x0: Vec<f64>, iters: usize) -> Solved {
        let mut x = x0;
        let nc = if self.heading.is_some() { 3 } else { 2 };
        let mut lam = vec![0.0; nc];
        let mut mu = 10.0;
        let mut phi = vec![0.0; self.m];
        let mut prev = f64::INFINITY;
        let opts = LbfgsOptions {
            memory: 10,
            max_iter: iters,
            grad_tol: 1e-10,
        };
        let mut lower = vec![-1.0; self.m];
        let mut upper = vec![1.0; self.m];
        lower[0] = 1e-9;
        upper[0] = f64::INFINITY;
        let mut viol = f64::INFINITY;
        for _ in 0..40 {
            let (xn, _) = lbfgs_box(|x, g| self.lagrangian(x, g, &lam, mu, &mut phi), &x, &lower, &upper, &opts);
            x = xn;
            let t = self.trace(&x, &mut phi);
            let c = self.constraints(&t);
            viol = norm(&c);
            if viol < 0.1 * FEASIBLE_TOL {
                break;
            }
            for (li, ci) in lam.iter_mut().zip(&c) {
                *li += mu * ci;
            }
            if viol > 0.25 * prev {
                mu = (mu * 10.0).min(1e9);
            }
            prev = viol;
        }
        Solved {
            x,
            viol,
            heading: self.heading,
        }
    }
}

struct Solved {
    x: Vec<f64>,
    viol: f64,
    heading: Option<f64>,
}

/// Bang-coast-bang start: turn `alpha1` with sign `s1`, go straight, turn
/// `alpha2` with sign `s2`, all at full budget.
fn initial_guess(m: usize, s1: f64, alpha1: f64, s2: f64, alpha2: f64, straight: f64) -> Vec<f64> {
    let mut l = alpha1 + alpha2 + straight;
    let mut h = l / inner(m);
    let joints = |a: f64, h: f64| if a > 0.0 { (a / h).ceil() as usize } else { 0 };
    while joints(alpha1, h) + joints(alpha2, h) + 2 > m {
        l *= 1.5;
        h = l / inner(m);
    }
    let mut x = vec![0.0; m];
    x[0] = l;
    let k1 = joints(alpha1, h);
    let k2 = joints(alpha2, h);
    x[1..=k1].fill(s1 * (alpha1 / (k1 as f64 * h)).min(1.0));
    x[m - k2..].fill(s2 * (alpha2 / (k2 as f64 * h)).min(1.0));
    x
}

/// Carries a solution to `m` segments keeping the turn per unit length.
fn upsample(x: &[f64], m: usize) -> Vec<f64> {
    let mc = x.len();
    let mut out = vec![0.0; m];
    out[0] = x[0];
    for (k, u) in out.iter_mut().enumerate().skip(1) {
        let j = ((k as f64 * mc as f64 / m as f64).round() as usize).clamp(1, mc - 1);
        *u = x[j];
    }
    out
}

/// Shortest `M`-segment polyline for the (coplanar) boundary data.
pub fn discrete_shortest_oracle(b: &BoundaryData, opts: &OracleOptions) -> Result<OracleResult> {
    let m = opts.segments;
    if m < MIN_SEGMENTS {
        return Err(Error::InvalidParameter(format!("oracle needs at least {MIN_SEGMENTS} segments, got {m}")));
    }
    let frame = match opts.mode {
        OracleMode::Both => b.coplanar_frame(1e-9),
        OracleMode::StartOnly => {
            let mut fb = b.clone();
            fb.w = b.v.clone();
            fb.coplanar_frame(1e-9)
        }
    }
    .ok_or_else(|| Error::InvalidParameter("oracle requires coplanar boundary data".into()))?;
    let lam = b.lambda;
    let q2 = frame.project_point(&b.q);
    let target = [q2[0] * lam, q2[1] * lam];
    let w2 = frame.project_vector(&b.w);
    let psi_w = w2[1].atan2(w2[0]);
    let dist = target[0].hypot(target[1]);
    let straight = dist.max(0.5);

    let mut starts: Vec<(f64, f64, f64, f64)> = Vec::new();
    let second = |s1: f64, a1: f64, s2: f64| match opts.mode {
        OracleMode::Both => (s2 * (psi_w - s1 * a1)).rem_euclid(TAU),
        OracleMode::StartOnly => 0.0,
    };
    let firsts: &[f64] = match opts.mode {
        OracleMode::Both => &[PI / 3.0, PI, 5.0 * PI / 3.0],
        OracleMode::StartOnly => &[PI / 6.0, PI / 2.0, PI, 1.5 * PI],
    };
    let signs2: &[f64] = match opts.mode {
        OracleMode::Both => &[1.0, -1.0],
        OracleMode::StartOnly => &[1.0],
    };
    for &s1 in &[1.0, -1.0] {
        for &s2 in signs2 {
            for &a1 in firsts {
                starts.push((s1, a1, s2, second(s1, a1, s2)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let s1 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let s2 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let a1 = rng.gen_range(0.0..TAU);
        starts.push((s1, a1, s2, second(s1, a1, s2)));
    }

    let heading = |&(s1, a1, s2, a2): &(f64, f64, f64, f64)| match opts.mode {
        OracleMode::Both => Some(s1 * a1 + s2 * a2),
        OracleMode::StartOnly => None,
    };
    let solve_all = |m: usize, guesses: Vec<(Vec<f64>, Option<f64>)>| -> Vec<Solved> {
        let mut out: Vec<_> = guesses
            .into_iter()
            .map(|(x0, hd)| Problem { m, target, heading: hd }.solve(x0, opts.iters))
            .filter(|s| s.viol <= FEASIBLE_TOL && s.x[0].is_finite())
            .collect();
        // stable: ties keep the earlier start
        out.sort_by(|a, b| a.x[0].total_cmp(&b.x[0]));
        out
    };
    let full = |m: usize| {
        starts
            .iter()
            .map(|st| (initial_guess(m, st.0, st.1, st.2, st.3, straight), heading(st)))
            .collect::<Vec<_>>()
    };
    let (solutions, feasible) = if m >= 2 * COARSE_SEGMENTS {
        let coarse = solve_all(COARSE_SEGMENTS, full(COARSE_SEGMENTS));
        let feasible = coarse.len();
        // starts that reached the same local minimum are refined once
        let mut distinct: Vec<Solved> = Vec::new();
        for s in coarse {
            if distinct.len() < REFINED_STARTS
                && distinct.iter().all(|d| !within_relative(s.x[0], d.x[0], DUPLICATE_TOL))
            {
                distinct.push(s);
            }
        }
        let refined = solve_all(
            m,
            distinct
                .into_iter()
                .map(|s| (upsample(&s.x, m), s.heading))
                .collect(),
        );
        if refined.is_empty() {
            let all = solve_all(m, full(m));
            let n = all.len();
            (all, n)
        } else {
            (refined, feasible)
        }
    } else {
        let all = solve_all(m, full(m));
        let n = all.len();
        (all, n)
    };
    let Solved { x, viol, .. } = solutions
        .into_iter()
        .next()
        .ok_or_else(|| Error::Infeasible("no oracle restart met the end conditions".into()))?;
    let h = x[0] / inner(m);
    let budgets: Vec<f64> = (1..m).map(|k| h * joint_budget(k, m)).collect();
    let turning: Vec<f64> = budgets.iter().zip(&x[1..]).map(|(b, u)| b * u).collect();
    let mut pts2 = vec![[0.0, 0.0]];
    let mut cur = 0.0;
    for k in 0..m {
        if k > 0 {
            cur += turning[k - 1];
        }
        let step = h * weight(k, m);
        let last = *pts2.last().unwrap();
        pts2.push([last[0] + step * cur.cos(), last[1] + step * cur.sin()]);
    }
    let points: Vec<Vec<f64>> = pts2
        .iter()
        .map(|pt| frame.lift_point([pt[0] / lam, pt[1] / lam]))
        .collect();
    let max_turn_ratio = x[1..].iter().fold(0.0_f64, |a, u| a.max(u.abs()));
    Ok(OracleResult {
        points,
        length: x[0] / lam,
        segment_length: h / lam,
        turning,
        turn_budgets: budgets,
        max_turn_ratio,
        constraint_residual: viol,
        total_turning: cur,
        feasible_restarts: feasible,
        total_restarts: starts.len(),
    })
}

/// `true` if `a` and `b` differ by less than `tol` relative to `b`.
pub fn within_relative(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs()
}
