//! Curvature-capped ropelength descent by random local bump moves.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::{curvature_profile, default_window};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::linalg;
use crate::thickness::rolling_ball_radius;

#[derive(Debug, Clone, Copy)]
pub struct RelaxOptions {
    /// Curvature cap `Λ_cap`.
    pub cap: f64,
    pub steps: usize,
    pub seed: u64,
    /// Allowed relative decrease of `r_o` in one accepted step.
    pub r_o_tol: f64,
    /// Hard floor on `r_o`.
    pub min_r_o: Option<f64>,
    /// Relative slack on the cap for discretization noise; defaults to `10 / N`.
    pub cap_slack: Option<f64>,
    /// Candidate moves drawn per step; the best admissible one is kept.
    pub candidates: usize,
}

impl RelaxOptions {
    pub fn new(cap: f64, steps: usize, seed: u64) -> Self {
        RelaxOptions {
            cap,
            steps,
            seed,
            r_o_tol: 1e-3,
            min_r_o: None,
            cap_slack: None,
            candidates: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub length: f64,
    pub r_o: f64,
    pub ropelength: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct RelaxOutcome {
    pub curve: Curve,
    /// Row 0 is the input; row `k` is the state after step `k`.
    pub trace: Vec<TraceRow>,
    pub accepted: usize,
}

impl RelaxOutcome {
    pub fn initial_ropelength(&self) -> f64 {
        self.trace[0].ropelength
    }

    pub fn final_ropelength(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |r| r.ropelength)
    }
}

struct State {
    curve: Curve,
    sup_kappa: f64,
    r_o: f64,
    /// Sample where the ball radius is attained.
    witness: Option<usize>,
    length: f64,
}

impl State {
    fn measure(curve: Curve) -> Result<State> {
        let profile = curvature_profile(&curve, default_window(&curve))?;
        let ball = rolling_ball_radius(&curve, 0.0);
        Ok(State {
            length: curve.length(),
            sup_kappa: profile.sup_kappa,
            r_o: ball.r_o,
            witness: ball.witness.map(|(i, _)| i),
            curve,
        })
    }

    fn ropelength(&self) -> f64 {
        self.length / self.r_o
    }
}

/// Unit displacement direction at sample `i`: toward the local center of
/// curvature, or any normal where the curve is straight.
fn normal_direction(curve: &Curve, i: usize) -> Vec<f64> {
    let n = curve.len();
    let prev = curve.point((i + n - 1) % n);
    let next = curve.point((i + 1) % n);
    let lap: Vec<f64> = prev
        .iter()
        .zip(next)
        .zip(curve.point(i))
        .map(|((a, b), c)| a + b - 2.0 * c)
        .collect();
    let t = curve.tangent(i);
    let lap = linalg::reject(&lap, t);
    if linalg::norm(&lap) > 1e-12 * curve.mean_spacing() {
        linalg::normalized(&lap).unwrap()
    } else {
        linalg::any_orthogonal(t)
    }
}

/// `(1 - x²)³` on `|x| < 1`.
fn bump(x: f64) -> f64 {
    let y = 1.0 - x * x;
    if y > 0.0 {
        y * y * y
    } else {
        0.0
    }
}

fn propose(curve: &Curve, center: usize, half_width: usize, amplitude: f64) -> Result<Curve> {
    let n = curve.len();
    let mut pts = curve.point_rows();
    let w = half_width as isize;
    for off in -w..=w {
        let h = bump(off as f64 / w as f64);
        if h == 0.0 {
            continue;
        }
        let i = (center as isize + off).rem_euclid(n as isize) as usize;
        let d = normal_direction(curve, i);
        pts[i] = linalg::axpy(&pts[i], amplitude * h, &d);
    }
    Curve::new(&pts, curve.dim(), true, None)
}

/// Random bump moves along the curve normals. A move is kept only if the
/// windowed curvature stays below the cap, `r_o` drops by at most `r_o_tol`
/// relative (and stays above `min_r_o`), and ropelength strictly decreases,
/// so the trace is non-increasing. Deterministic given the seed.
pub fn relax_ropelength(curve: &Curve, opts: &RelaxOptions) -> Result<RelaxOutcome> {
    if !curve.is_closed() {
        return Err(Error::NotClosed);
    }
    if !(opts.cap > 0.0) {
        return Err(Error::InvalidParameter(format!("curvature cap must be positive, got {}", opts.cap)));
    }
    let n = curve.len();
    let slack = opts.cap_slack.unwrap_or(10.0 / n as f64);
    let limit = opts.cap * (1.0 + slack);
    let mut state = State::measure(curve.clone())?;
    if state.sup_kappa > limit {
        return Err(Error::CurvatureAboveCap {
            found: state.sup_kappa,
            cap: opts.cap,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut trace = Vec::with_capacity(opts.steps + 1);
    let row = |step, s: &State, accepted| TraceRow {
        step,
        length: s.length,
        r_o: s.r_o,
        ropelength: s.ropelength(),
        accepted,
    };
    trace.push(row(0, &state, true));
    let min_w = 3.max(n / 16);
    let max_w = (n / 4).max(min_w + 1);
    let mut amplitude = 0.05 * state.curve.mean_spacing() * (n as f64).sqrt();
    let mut accepted = 0;
    let tries = opts.candidates.max(1);
    for step in 1..=opts.steps {
        // Draw all moves first so the random stream does not depend on
        // which candidates turn out admissible.
        let moves: Vec<(usize, usize, f64)> = (0..tries)
            .map(|_| {
                let center = match state.witness {
                    Some(w) if rng.gen_bool(0.5) => w,
                    _ => rng.gen_range(0..n),
                };
                let half_width = rng.gen_range(min_w..max_w);
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                (center, half_width, sign * rng.gen_range(0.1..1.0) * amplitude)
            })
            .collect();
        let best = moves
            .par_iter()
            .map(|&(c, w, a)| {
                let next = propose(&state.curve, c, w, a).and_then(State::measure).ok()?;
                let ok = next.sup_kappa <= limit
                    && next.r_o >= state.r_o * (1.0 - opts.r_o_tol)
                    && opts.min_r_o.is_none_or(|m| next.r_o >= m)
                    && next.ropelength() < state.ropelength();
                ok.then_some(next)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .min_by(|a, b| a.ropelength().total_cmp(&b.ropelength()));
        let ok = best.is_some();
        if let Some(next) = best {
            state = next;
            accepted += 1;
            amplitude *= 1.2;
        } else {
            amplitude *= 0.97;
        }
        amplitude = amplitude.clamp(1e-9 * state.r_o, 0.5 * state.r_o);
        trace.push(row(step, &state, ok));
    }
    Ok(RelaxOutcome {
        curve: state.curve,
        trace,
        accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn trace_is_non_increasing_and_deterministic() {
        let c = fixtures::bumped_circle(0.03, 1.0, 128).unwrap();
        let o = RelaxOptions::new(1.5, 200, 7);
        let a = relax_ropelength(&c, &o).unwrap();
        let b = relax_ropelength(&c, &o).unwrap();
        assert!(a.trace.windows(2).all(|w| w[1].ropelength <= w[0].ropelength));
        assert!(a.final_ropelength() < a.initial_ropelength());
        assert_eq!(a.curve.point_rows(), b.curve.point_rows());
    }

    #[test]
    fn cap_below_curvature_is_an_error() {
        let c = fixtures::circle(1.0, 128).unwrap();
        assert!(matches!(
            relax_ropelength(&c, &RelaxOptions::new(0.5, 10, 0)),
            Err(Error::CurvatureAboveCap { .. })
        ));
    }

    #[test]
    fn exact_circle_barely_moves() {
        let c = fixtures::circle(1.0, 128).unwrap();
        let out = relax_ropelength(&c, &RelaxOptions::new(1.5, 300, 0)).unwrap();
        let drop = out.initial_ropelength() - out.final_ropelength();
        assert!(drop <= 1e-2 * out.initial_ropelength(), "{drop}");
    }
}
