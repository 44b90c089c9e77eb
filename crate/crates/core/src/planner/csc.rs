//! Enumeration of CLC paths meeting given boundary data.
//!
//! In the plane the four turn words are solved in closed form from the two
//! turning circles. In higher dimensions the joint equations are solved by
//! Levenberg-Marquardt from several seeds: the planar solutions in the best
//! fitting plane, tilted copies of them, and pseudorandom starts.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{self, dist, norm};
use crate::optim::levenberg_marquardt;
use crate::planner::{BoundaryData, ClcPath, PlaneFrame};

/// Residual threshold (relative to the radius) for accepting a solve.
pub const JOINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeedConfig {
    /// Number of deterministic seeds derived from planar solutions (n ≥ 3).
    pub deterministic: usize,
    /// Number of pseudorandom seeds (n ≥ 3).
    pub random: usize,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for SeedConfig {
    fn default() -> Self {
        SeedConfig {
            deterministic: 8,
            random: 8,
            seed: 0,
            max_iter: 200,
        }
    }
}

fn rot90(x: [f64; 2]) -> [f64; 2] {
    [-x[1], x[0]]
}

fn angle(x: [f64; 2]) -> f64 {
    x[1].atan2(x[0])
}

/// A planar solution in local coordinates: turn signs (+1 left), arc angles,
/// segment length and segment direction.
#[derive(Debug, Clone, Copy)]
struct PlanarWord {
    s1: f64,
    s2: f64,
    theta1: f64,
    seg: f64,
    theta2: f64,
    u: [f64; 2],
}

impl PlanarWord {
    fn name(&self) -> String {
        let c = |s: f64| if s > 0.0 { 'L' } else { 'R' };
        format!("{}S{}", c(self.s1), c(self.s2))
    }
}

/// The four classical turn words for planar data with turning radius `r`.
fn planar_words(p: [f64; 2], v: [f64; 2], q: [f64; 2], w: [f64; 2], r: f64) -> Vec<PlanarWord> {
    let mut out = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            let jv = rot90(v);
            let jw = rot90(w);
            let c1 = [p[0] + r * s1 * jv[0], p[1] + r * s1 * jv[1]];
            let c2 = [q[0] + r * s2 * jw[0], q[1] + r * s2 * jw[1]];
            let e = [c2[0] - c1[0], c2[1] - c1[1]];
            let d = e[0].hypot(e[1]);
            let (u, seg) = if s1 == s2 {
                if d <= 1e-14 * r {
                    // concentric turning circles: a single arc reaches q
                    (w, 0.0)
                } else {
                    ([e[0] / d, e[1] / d], d)
                }
            } else {
                if d < 2.0 * r * (1.0 - 1e-14) {
                    continue;
                }
                let seg = (d * d - 4.0 * r * r).max(0.0).sqrt();
                let psi = (2.0 * s1 * r).atan2(seg);
                let (sn, cs) = psi.sin_cos();
                let e = [e[0] / d, e[1] / d];
                ([cs * e[0] - sn * e[1], sn * e[0] + cs * e[1]], seg)
            };
            let theta1 = (s1 * (angle(u) - angle(v))).rem_euclid(TAU);
            let theta2 = (s2 * (angle(w) - angle(u))).rem_euclid(TAU);
            out.push(PlanarWord {
                s1,
                s2,
                theta1,
                seg,
                theta2,
                u,
            });
        }
    }
    out
}

fn lift_word(frame: &PlaneFrame, b: &BoundaryData, word: &PlanarWord) -> ClcPath {
    let v2 = frame.project_vector(&b.v);
    let n1 = frame.lift_vector({
        let j = rot90(v2);
        [word.s1 * j[0], word.s1 * j[1]]
    });
    let n2 = frame.lift_vector({
        let j = rot90(word.u);
        [word.s2 * j[0], word.s2 * j[1]]
    });
    ClcPath::from_turns(
        &b.p,
        &b.v,
        &n1,
        word.theta1,
        word.seg,
        &n2,
        word.theta2,
        b.radius(),
        &word.name(),
    )
}

/// Joint equations in units where the radius is 1 and `p` is the origin.
///
/// `x = [a1 (n), a2 (n), θ1, θ2, ℓ]`; the first arc turns towards the
/// projection of `a1` orthogonal to `v`, the second arc is traced backwards
/// from `q` along `-w`, turning towards the projection of `a2` orthogonal to `w`.
struct JointSystem<'a> {
    v: &'a [f64],
    w: &'a [f64],
    d: Vec<f64>,
}

struct JointState {
    n1: Vec<f64>,
    m2: Vec<f64>,
    theta1: f64,
    theta2: f64,
    seg: f64,
}

impl JointSystem<'_> {
    fn unpack(&self, x: &[f64]) -> Option<JointState> {
        let n = self.v.len();
        let n1 = linalg::normalized(&linalg::reject(&x[..n], self.v))?;
        let m2 = linalg::normalized(&linalg::reject(&x[n..2 * n], self.w))?;
        Some(JointState {
            n1,
            m2,
            theta1: x[2 * n],
            theta2: x[2 * n + 1],
            seg: x[2 * n + 2],
        })
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let n = self.v.len();
        let Some(st) = self.unpack(x) else {
            return vec![1e6; 2 * n];
        };
        let (s1, c1) = st.theta1.sin_cos();
        let (s2, c2) = st.theta2.sin_cos();
        let mut r = vec![0.0; 2 * n];
        for k in 0..n {
            let t1 = c1 * self.v[k] + s1 * st.n1[k];
            let t2 = c2 * self.w[k] - s2 * st.m2[k];
            let a1 = s1 * self.v[k] + (1.0 - c1) * st.n1[k];
            let a2 = self.d[k] - s2 * self.w[k] + (1.0 - c2) * st.m2[k];
            r[k] = t1 - t2;
            r[n + k] = a2 - a1 - st.seg * t1;
        }
        r
    }
}

fn solve_general(b: &BoundaryData, cfg: &SeedConfig) -> Vec<ClcPath> {
    let n = b.dim();
    let r = b.radius();
    let sys = JointSystem {
        v: &b.v,
        w: &b.w,
        d: linalg::scale(&linalg::sub(&b.q, &b.p), b.lambda),
    };
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    let frame = b.best_plane();
    let words = planar_words(
        frame.project_point(&b.p),
        frame.project_vector(&b.v),
        frame.project_point(&b.q),
        frame.project_vector(&b.w),
        1.0 / b.lambda,
    );
    // direction out of the fitted plane, used to tilt the planar seeds
    let e3 = (0..n)
        .map(|k| {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            linalg::reject(&linalg::reject(&e, &frame.e1), &frame.e2)
        })
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .and_then(|e| linalg::normalized(&e));
    let v2 = frame.project_vector(&b.v);
    let w2 = frame.project_vector(&b.w);
    for tilt in [0.0, 1.0] {
        for wd in &words {
            if seeds.len() >= cfg.deterministic {
                break;
            }
            let mut a1 = frame.lift_vector({
                let j = rot90(v2);
                [wd.s1 * j[0], wd.s1 * j[1]]
            });
            let mut a2 = frame.lift_vector({
                let j = rot90(w2);
                [wd.s2 * j[0], wd.s2 * j[1]]
            });
            if tilt > 0.0 {
                if let Some(e3) = &e3 {
                    a1 = linalg::add(&a1, e3);
                    a2 = linalg::add(&a2, e3);
                }
            }
            let mut x = a1;
            x.extend(a2);
            x.extend([wd.theta1, wd.theta2, wd.seg * b.lambda]);
            seeds.push(x);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let span = norm(&sys.d).max(1.0);
    for _ in 0..cfg.random {
        let mut x: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        x.push(rng.gen_range(0.0..TAU));
        x.push(rng.gen_range(0.0..TAU));
        x.push(span * rng.gen_range(0.5..1.5));
        seeds.push(x);
    }
    let mut out = Vec::new();
    for x0 in seeds {
        let (x, res) = levenberg_marquardt(|x| sys.residual(x), &x0, cfg.max_iter, 1e-13);
        if res > JOINT_TOL {
            continue;
        }
        let Some(st) = sys.unpack(&x) else { continue };
        if st.seg < -JOINT_TOL {
            continue;
        }
        // second arc normal at its start, pointing to its center q + m2
        let (s2, c2) = st.theta2.sin_cos();
        let n2: Vec<f64> = (0..n).map(|k| s2 * b.w[k] + c2 * st.m2[k]).collect();
        let path = ClcPath::from_turns(
            &b.p,
            &b.v,
            &st.n1,
            st.theta1,
            st.seg.max(0.0) * r,
            &n2,
            st.theta2,
            r,
            "CLC",
        );
        if path.check(b).passes(1e-8) {
            out.push(path);
        }
    }
    out
}

fn same_path(a: &ClcPath, b: &ClcPath, scale: f64) -> bool {
    if (a.length - b.length).abs() > 1e-9 * scale {
        return false;
    }
    (0..=16).all(|k| {
        let f = k as f64 / 16.0;
        dist(&a.position_at(f * a.length), &b.position_at(f * b.length)) <= 1e-7 * scale
    })
}

/// All distinct CLC paths for the boundary data, shortest first.
pub fn csc_candidates(b: &BoundaryData, cfg: &SeedConfig) -> Result<Vec<ClcPath>> {
    let mut all = if b.dim() == 2 {
        let frame = PlaneFrame {
            origin: vec![0.0, 0.0],
            e1: vec![1.0, 0.0],
            e2: vec![0.0, 1.0],
        };
        let p = [b.p[0], b.p[1]];
        let q = [b.q[0], b.q[1]];
        planar_words(p, [b.v[0], b.v[1]], q, [b.w[0], b.w[1]], b.radius())
            .iter()
            .map(|wd| lift_word(&frame, b, wd))
            .filter(|path| path.check(b).passes(1e-8))
            .collect()
    } else {
        solve_general(b, cfg)
    };
    all.sort_by(|x, y| x.length.total_cmp(&y.length).then_with(|| x.word.cmp(&y.word)));
    let scale = b.scale();
    let mut out: Vec<ClcPath> = Vec::new();
    for path in all {
        if !out.iter().any(|o| same_path(o, &path, scale)) {
            out.push(path);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn bd(p: [f64; 2], q: [f64; 2], v: [f64; 2], w: [f64; 2]) -> BoundaryData {
        BoundaryData::new(p.to_vec(), q.to_vec(), v.to_vec(), w.to_vec(), 1.0).unwrap()
    }

    #[test]
    fn straight_data_gives_one_segment() {
        let b = bd([0.0, 0.0], [10.0, 0.0], [1.0, 0.0], [1.0, 0.0]);
        let c = csc_candidates(&b, &SeedConfig::default()).unwrap();
        assert!((c[0].length - 10.0).abs() < 1e-12);
        assert_eq!(c[0].first.angle, 0.0);
        assert_eq!(c[0].second.angle, 0.0);
        assert!(c.iter().filter(|x| (x.length - 10.0).abs() < 1e-9).count() == 1);
    }

    #[test]
    fn u_turn_words() {
        // p = q with reversed heading: LSL and RSR each use 3π/2 + 2 + 3π/2 ... of turning
        let b = bd([0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [-1.0, 0.0]);
        let c = csc_candidates(&b, &SeedConfig::default()).unwrap();
        assert_eq!(c.len(), 2);
        for path in &c {
            assert!((path.length - (3.0 * PI + 2.0)).abs() < 1e-12);
            assert!(path.check(&b).passes(1e-12));
        }
    }

    #[test]
    fn every_word_meets_boundary_data() {
        let b = bd([0.0, 0.0], [3.0, 4.0], [0.0, 1.0], [1.0, 0.0]);
        let c = csc_candidates(&b, &SeedConfig::default()).unwrap();
        assert_eq!(c.len(), 4);
        for path in &c {
            assert!(path.check(&b).passes(1e-12), "{:?}", path.check(&b));
        }
        assert!(c.windows(2).all(|w| w[0].length <= w[1].length));
    }

    #[test]
    fn spatial_solve_matches_planar_for_coplanar_data() {
        let b2 = bd([0.0, 0.0], [5.0, 2.0], [0.0, 1.0], [1.0, 0.0]);
        let planar = csc_candidates(&b2, &SeedConfig::default()).unwrap();
        let b3 = BoundaryData::new(
            vec![0.0, 0.0, 0.0],
            vec![5.0, 2.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            1.0,
        )
        .unwrap();
        let spatial = csc_candidates(&b3, &SeedConfig::default()).unwrap();
        assert!(!spatial.is_empty());
        assert!((spatial[0].length - planar[0].length).abs() < 1e-8);
        for path in &spatial {
            assert!(path.check(&b3).passes(1e-8));
        }
    }

    #[test]
    fn skew_data_in_three_dimensions() {
        let b = BoundaryData::new(
            vec![0.0, 0.0, 0.0],
            vec![4.0, 3.0, 2.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
            1.0,
        )
        .unwrap();
        let c = csc_candidates(&b, &SeedConfig::default()).unwrap();
        assert!(!c.is_empty());
        for path in &c {
            assert!(path.check(&b).passes(1e-8));
        }
    }
}
