//! Forbidden regions swept by balls tangent to a line element.
//!
//! `O_p(v, r)` is the union of the open balls of radius `r` centred at
//! `p + r w` over all unit `w` orthogonal to `v`. Writing `d = x - p` and
//! `d_n` for the part of `d` orthogonal to `v`, the closest admissible centre
//! lies along `d_n`, so
//!
//! ```text
//! min_w |x - p - r w|^2 = |d|^2 - 2 r |d_n| + r^2
//! ```
//!
//! and `x` is in the region exactly when `|d|^2 < 2 r |d_n|`. Solving for the
//! threshold radius gives the pair radius `|d|^2 / (2 |d_n|)`, the smallest
//! `r` whose region contains `x`; every ball-radius quantity in this crate is
//! a minimum of it over some set of sample pairs.

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleSpec {
    pub base: Vec<f64>,
    pub tangent: Vec<f64>,
    pub radius: f64,
}

impl ObstacleSpec {
    pub fn new(base: Vec<f64>, tangent: Vec<f64>, radius: f64) -> Result<Self> {
        if base.len() != tangent.len() || base.len() < 2 {
            return Err(Error::InvalidParameter("base and tangent must share a dimension >= 2".into()));
        }
        if (linalg::norm(&tangent) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("obstacle tangent must be a unit vector".into()));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!("obstacle radius must be positive, got {radius}")));
        }
        Ok(ObstacleSpec { base, tangent, radius })
    }

    /// Strict membership of `x` in the open region.
    pub fn contains(&self, x: &[f64]) -> bool {
        obstacle_contains(&self.base, &self.tangent, self.radius, x)
    }
}

pub fn obstacle_contains(base: &[f64], tangent: &[f64], radius: f64, x: &[f64]) -> bool {
    let d = linalg::sub(x, base);
    linalg::dot(&d, &d) < 2.0 * radius * linalg::reject_norm(&d, tangent)
}

/// Smallest radius `r` with `x` in `O_base(tangent, r)`; infinite when `x`
/// lies on the tangent line.
pub fn pair_radius(base: &[f64], tangent: &[f64], x: &[f64]) -> f64 {
    let mut d2 = 0.0;
    let mut a = 0.0;
    for ((xi, bi), ti) in x.iter().zip(base).zip(tangent) {
        let d = xi - bi;
        d2 += d * d;
        a += d * ti;
    }
    let mut n2 = 0.0;
    for ((xi, bi), ti) in x.iter().zip(base).zip(tangent) {
        let r = (xi - bi) - a * ti;
        n2 += r * r;
    }
    let dn = n2.sqrt();
    if dn > 0.0 {
        d2 / (2.0 * dn)
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_x() -> ObstacleSpec {
        ObstacleSpec::new(vec![0.0, 0.0], vec![1.0, 0.0], 1.0).unwrap()
    }

    #[test]
    fn membership_examples() {
        let o = unit_x();
        assert!(o.contains(&[0.0, 1.0]));
        assert!(!o.contains(&[2.0, 0.0]));
        assert!(o.contains(&[0.6, 0.8]));
        // the boundary circle itself is not in the open region
        assert!(!o.contains(&[1.0, 1.0]));
    }

    #[test]
    fn closed_form_matches_sampled_centres() {
        // brute force over w on the unit sphere of v-perp in R^3
        let o = ObstacleSpec::new(vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], 1.0).unwrap();
        let pts = [[0.6, 0.8, 0.0], [0.3, 0.2, -0.5], [1.5, 0.1, 0.1], [0.0, -0.2, 1.7], [-0.5, 0.6, 0.6]];
        for x in pts {
            let mut inside = false;
            for k in 0..20000 {
                let a = 2.0 * PI * k as f64 / 20000.0;
                let c = [0.0, a.cos(), a.sin()];
                if linalg::dist(&x, &c) < 1.0 {
                    inside = true;
                    break;
                }
            }
            assert_eq!(inside, o.contains(&x), "{x:?}");
        }
    }

    #[test]
    fn pair_radius_is_membership_threshold() {
        let x = [0.6, 0.8];
        let r = pair_radius(&[0.0, 0.0], &[1.0, 0.0], &x);
        assert!((r - 0.625).abs() < 1e-15);
        assert!(obstacle_contains(&[0.0, 0.0], &[1.0, 0.0], r * (1.0 + 1e-12), &x));
        assert!(!obstacle_contains(&[0.0, 0.0], &[1.0, 0.0], r * (1.0 - 1e-12), &x));
        assert!(pair_radius(&[0.0, 0.0], &[1.0, 0.0], &[3.0, 0.0]).is_infinite());
    }

    #[test]
    fn invalid_specs() {
        assert!(ObstacleSpec::new(vec![0.0, 0.0], vec![2.0, 0.0], 1.0).is_err());
        assert!(ObstacleSpec::new(vec![0.0, 0.0], vec![1.0, 0.0], 0.0).is_err());
    }
}
