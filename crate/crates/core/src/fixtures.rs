//! Analytic test curves sampled with exact tangents.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::curve::Curve;
use crate::document::CurveDocument;
use crate::error::{Error, Result};
use crate::planner::{self, BoundaryData};

/// Fixture kinds understood by [`generate_fixture`].
pub const FIXTURE_KINDS: &[&str] = &[
    "circle",
    "ellipse",
    "stadium",
    "rounded_square",
    "clc",
    "example1_offset_circle",
    "torus_knot_sample",
    "bumped_circle",
];

enum Piece {
    Line { start: [f64; 2], dir: [f64; 2], len: f64 },
    Arc { center: [f64; 2], radius: f64, start_angle: f64, sweep: f64 },
}

impl Piece {
    fn len(&self) -> f64 {
        match self {
            Piece::Line { len, .. } => *len,
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    fn eval(&self, s: f64) -> ([f64; 2], [f64; 2]) {
        match self {
            Piece::Line { start, dir, .. } => ([start[0] + s * dir[0], start[1] + s * dir[1]], *dir),
            Piece::Arc { center, radius, start_angle, sweep } => {
                let sign = sweep.signum();
                let a = start_angle + sign * s / radius;
                (
                    [center[0] + radius * a.cos(), center[1] + radius * a.sin()],
                    [-sign * a.sin(), sign * a.cos()],
                )
            }
        }
    }
}

fn sample_closed_pieces(pieces: &[Piece], n: usize) -> Result<Curve> {
    let total: f64 = pieces.iter().map(Piece::len).sum();
    let mut pts = Vec::with_capacity(n);
    let mut tans = Vec::with_capacity(n);
    let mut piece = 0;
    let mut offset = 0.0;
    for k in 0..n {
        let s = total * k as f64 / n as f64;
        while piece + 1 < pieces.len() && s >= offset + pieces[piece].len() {
            offset += pieces[piece].len();
            piece += 1;
        }
        let (p, t) = pieces[piece].eval(s - offset);
        pts.push(p.to_vec());
        tans.push(t.to_vec());
    }
    Curve::new(&pts, 2, true, Some(&tans))
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
    }
}

fn check_samples(n: usize, min: usize) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("need at least {min} samples, got {n}")))
    }
}

/// Regular `n`-gon inscribed in the circle of radius `r` about the origin.
pub fn circle(r: f64, n: usize) -> Result<Curve> {
    check_positive("radius", r)?;
    check_samples(n, 3)?;
    let (pts, tans): (Vec<_>, Vec<_>) = (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            (vec![r * a.cos(), r * a.sin()], vec![-a.sin(), a.cos()])
        })
        .unzip();
    Curve::new(&pts, 2, true, Some(&tans))
}

/// Ellipse with semi-axes `a` (x) and `b` (y), sampled uniformly in arclength.
pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Curve> {
    check_positive("semi-axis a", a)?;
    check_positive("semi-axis b", b)?;
    check_samples(n, 3)?;
    let dense = 64 * n;
    let speed = |t: f64| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
    // cumulative arclength on a dense parameter grid (Simpson per cell)
    let mut table = Vec::with_capacity(dense + 1);
    table.push(0.0);
    let dt = 2.0 * PI / dense as f64;
    for k in 0..dense {
        let t0 = k as f64 * dt;
        let seg = dt / 6.0 * (speed(t0) + 4.0 * speed(t0 + 0.5 * dt) + speed(t0 + dt));
        table.push(table[k] + seg);
    }
    let total = table[dense];
    let mut pts = Vec::with_capacity(n);
    let mut tans = Vec::with_capacity(n);
    let mut cell = 0;
    for k in 0..n {
        let s = total * k as f64 / n as f64;
        while cell + 1 < dense && table[cell + 1] <= s {
            cell += 1;
        }
        // Newton on the cell-local Simpson model starting from linear interpolation
        let mut t = cell as f64 * dt + dt * (s - table[cell]) / (table[cell + 1] - table[cell]);
        for _ in 0..3 {
            let t0 = cell as f64 * dt;
            let h = t - t0;
            let partial = h / 6.0 * (speed(t0) + 4.0 * speed(t0 + 0.5 * h) + speed(t));
            t -= (table[cell] + partial - s) / speed(t);
        }
        pts.push(vec![a * t.cos(), b * t.sin()]);
        let tv = [-a * t.sin(), b * t.cos()];
        let tn = (tv[0] * tv[0] + tv[1] * tv[1]).sqrt();
        tans.push(vec![tv[0] / tn, tv[1] / tn]);
    }
    Curve::new(&pts, 2, true, Some(&tans))
}

/// Two semicircles of radius `r` joined by two parallel straights of length
/// `straight`. Sample 0 is the midpoint of the lower straight.
pub fn stadium(r: f64, straight: f64, n: usize) -> Result<Curve> {
    check_positive("radius", r)?;
    check_positive("straight length", straight)?;
    check_samples(n, 3)?;
    let h = straight / 2.0;
    let pieces = [
        Piece::Line { start: [0.0, -r], dir: [1.0, 0.0], len: h },
        Piece::Arc { center: [h, 0.0], radius: r, start_angle: -PI / 2.0, sweep: PI },
        Piece::Line { start: [h, r], dir: [-1.0, 0.0], len: straight },
        Piece::Arc { center: [-h, 0.0], radius: r, start_angle: PI / 2.0, sweep: PI },
        Piece::Line { start: [-h, -r], dir: [1.0, 0.0], len: h },
    ];
    sample_closed_pieces(&pieces, n)
}

/// Square with sides of straight length `straight` and quarter-circle corners
/// of radius `r`. Sample 0 is the midpoint of the lower side.
pub fn rounded_square(r: f64, straight: f64, n: usize) -> Result<Curve> {
    check_positive("radius", r)?;
    check_positive("straight length", straight)?;
    check_samples(n, 3)?;
    let h = straight / 2.0;
    let e = h + r;
    let pieces = [
        Piece::Line { start: [0.0, -e], dir: [1.0, 0.0], len: h },
        Piece::Arc { center: [h, -h], radius: r, start_angle: -PI / 2.0, sweep: PI / 2.0 },
        Piece::Line { start: [e, -h], dir: [0.0, 1.0], len: straight },
        Piece::Arc { center: [h, h], radius: r, start_angle: 0.0, sweep: PI / 2.0 },
        Piece::Line { start: [h, e], dir: [-1.0, 0.0], len: straight },
        Piece::Arc { center: [-h, h], radius: r, start_angle: PI / 2.0, sweep: PI / 2.0 },
        Piece::Line { start: [-e, h], dir: [0.0, -1.0], len: straight },
        Piece::Arc { center: [-h, -h], radius: r, start_angle: PI, sweep: PI / 2.0 },
        Piece::Line { start: [-h, -e], dir: [1.0, 0.0], len: h },
    ];
    sample_closed_pieces(&pieces, n)
}

/// Exact length of the part of the circle `(x - eps)^2 + y^2 = 1` outside
/// the closed unit disc.
pub fn example1_exterior_length(eps: f64) -> f64 {
    2.0 * (-eps / 2.0).acos()
}

/// Open arc: the part of the unit circle centred at `(eps, 0)` that lies
/// outside the closed unit disc about the origin.
pub fn example1_offset_circle(eps: f64, n: usize) -> Result<Curve> {
    check_positive("eps", eps)?;
    if eps >= 2.0 {
        return Err(Error::InvalidParameter("eps must be below 2 for the circles to meet".into()));
    }
    check_samples(n, 2)?;
    let alpha = (-eps / 2.0).acos();
    let (pts, tans): (Vec<_>, Vec<_>) = (0..n)
        .map(|k| {
            let a = -alpha + 2.0 * alpha * k as f64 / (n - 1) as f64;
            (vec![eps + a.cos(), a.sin()], vec![-a.sin(), a.cos()])
        })
        .unzip();
    Curve::new(&pts, 2, false, Some(&tans))
}

/// Unit circle with an outward radial bump `a (1 - (θ/w)²)³` of
/// angular half-width `w` centred at angle 0.
pub fn bumped_circle(a: f64, w: f64, n: usize) -> Result<Curve> {
    check_positive("bump half-width", w)?;
    if !a.is_finite() || a <= -1.0 {
        return Err(Error::InvalidParameter(format!("bump amplitude must exceed -1, got {a}")));
    }
    check_samples(n, 3)?;
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            let t = if t > PI { t - 2.0 * PI } else { t };
            let x = t / w;
            let h = if x.abs() < 1.0 { (1.0 - x * x).powi(3) } else { 0.0 };
            let r = 1.0 + a * h;
            vec![r * t.cos(), r * t.sin()]
        })
        .collect();
    Curve::new(&pts, 2, true, None)
}

/// `(p, q)` torus knot on the torus with radii `big_r > small_r`, sampled
/// uniformly in the angle parameter.
pub fn torus_knot(p: u32, q: u32, big_r: f64, small_r: f64, n: usize) -> Result<Curve> {
    check_positive("major radius", big_r)?;
    check_positive("minor radius", small_r)?;
    if small_r >= big_r || p == 0 || q == 0 {
        return Err(Error::InvalidParameter("torus knot needs p, q >= 1 and R > r".into()));
    }
    check_samples(n, 3)?;
    let (p, q) = (p as f64, q as f64);
    let (pts, tans): (Vec<_>, Vec<_>) = (0..n)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / n as f64;
            let rad = big_r + small_r * (q * phi).cos();
            let drad = -small_r * q * (q * phi).sin();
            let pos = vec![rad * (p * phi).cos(), rad * (p * phi).sin(), small_r * (q * phi).sin()];
            let d = [
                drad * (p * phi).cos() - rad * p * (p * phi).sin(),
                drad * (p * phi).sin() + rad * p * (p * phi).cos(),
                small_r * q * (q * phi).cos(),
            ];
            let dn = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            (pos, d.iter().map(|x| x / dn).collect::<Vec<_>>())
        })
        .unzip();
    Curve::new(&pts, 3, true, Some(&tans))
}

type Params = BTreeMap<String, f64>;

fn param(params: &Params, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn count(params: &Params, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(&x) if x >= 0.0 && x.fract() == 0.0 => Ok(x as usize),
        Some(&x) => Err(Error::InvalidParameter(format!("{key} must be a non-negative integer, got {x}"))),
    }
}

/// Builds a named fixture. Recognized parameters (with defaults):
///
/// * `circle`: `r` (1), `n` (1024)
/// * `ellipse`: `a` (2), `b` (1), `n` (2048)
/// * `stadium`, `rounded_square`: `r` (1), `l` (4), `n` (2048)
/// * `example1_offset_circle`: `eps` (0.05), `n` (1024)
/// * `bumped_circle`: `a` (0.03), `w` (1), `n` (256)
/// * `torus_knot_sample`: `p` (2), `q` (3), `R` (2), `r` (1), `n` (1024)
/// * `clc`: planar boundary data `px py qx qy` (0 0 10 0), headings
///   `vtheta wtheta` in radians (0 0), `lambda` (1), `n` (512)
pub fn generate_fixture(kind: &str, params: &Params) -> Result<CurveDocument> {
    let curve = match kind {
        "circle" => circle(param(params, "r", 1.0), count(params, "n", 1024)?)?,
        "ellipse" => ellipse(param(params, "a", 2.0), param(params, "b", 1.0), count(params, "n", 2048)?)?,
        "stadium" => stadium(param(params, "r", 1.0), param(params, "l", 4.0), count(params, "n", 2048)?)?,
        "rounded_square" => {
            rounded_square(param(params, "r", 1.0), param(params, "l", 4.0), count(params, "n", 2048)?)?
        }
        "example1_offset_circle" => {
            example1_offset_circle(param(params, "eps", 0.05), count(params, "n", 1024)?)?
        }
        "bumped_circle" => bumped_circle(param(params, "a", 0.03), param(params, "w", 1.0), count(params, "n", 256)?)?,
        "torus_knot_sample" => torus_knot(
            count(params, "p", 2)? as u32,
            count(params, "q", 3)? as u32,
            param(params, "R", 2.0),
            param(params, "r", 1.0),
            count(params, "n", 1024)?,
        )?,
        "clc" => {
            let vt = param(params, "vtheta", 0.0);
            let wt = param(params, "wtheta", 0.0);
            let b = BoundaryData::new(
                vec![param(params, "px", 0.0), param(params, "py", 0.0)],
                vec![param(params, "qx", 10.0), param(params, "qy", 0.0)],
                vec![vt.cos(), vt.sin()],
                vec![wt.cos(), wt.sin()],
                param(params, "lambda", 1.0),
            )?;
            let cands = planner::csc_candidates(&b, &planner::SeedConfig::default())?;
            let best = cands
                .first()
                .ok_or_else(|| Error::InvalidParameter("no CLC path for these boundary data".into()))?;
            best.sample(count(params, "n", 512)?)?
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    let mut doc = CurveDocument::from_curve(&curve);
    doc.name = Some(kind.to_string());
    doc.generator = Some(params.clone());
    Ok(doc)
}
