use serde::Serialize;

use crate::curvature::{self, CurvatureProfile};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::thickness::ball::{self, BallRadius, FocalDistance};
use crate::thickness::critical::{self, CriticalOptions, CriticalPair, Mdc};

#[derive(Debug, Clone, Copy)]
pub struct ThicknessOptions {
    /// Curvature window half-width; defaults to 5 mean spacings.
    pub window: Option<f64>,
    /// Focal-distance neighbourhood; defaults to 10 mean spacings.
    pub focal_window: Option<f64>,
    /// Arclength exclusion for the ball radius pair scan (0 keeps all pairs).
    pub exclusion_arc: f64,
    pub critical: CriticalOptions,
}

impl Default for ThicknessOptions {
    fn default() -> Self {
        ThicknessOptions {
            window: None,
            focal_window: None,
            exclusion_arc: 0.0,
            critical: CriticalOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicknessWitnesses {
    /// Chord achieving the minimal double critical distance.
    pub mdc_pair: Option<CriticalPair>,
    pub sup_kappa_sample: usize,
    pub f_g_sample: Option<usize>,
    /// Ordered pair achieving the ball radius (obstacle base, hit sample).
    pub r_o_pair: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicknessReport {
    pub samples: usize,
    pub low_resolution: bool,
    pub length: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub f_k: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub f_g: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub mdc: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub r_o: f64,
    /// `min(f_k, mdc / 2)`
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub thickness: f64,
    /// `length / r_o`
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub ropelength: f64,
    /// `|r_o - thickness|`
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub agreement_gap: f64,
    /// `|f_k - f_g|`
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub focal_gap: f64,
    /// Adaptive agreement tolerance `10 / N`, relative to `r_o`.
    pub agreement_tol: f64,
    pub critical_pairs: usize,
    pub witnesses: ThicknessWitnesses,
}

impl ThicknessReport {
    /// One-sided discrete thickness-formula check: `r_o <= f_g + tol` and
    /// `r_o <= mdc / 2 + tol` with `tol = agreement_tol * r_o`.
    pub fn formula_bounds_hold(&self) -> bool {
        let tol = self.agreement_tol * self.r_o;
        self.r_o <= self.f_g + tol && self.r_o <= self.mdc / 2.0 + tol
    }
}

/// Everything computed on the way to a [`ThicknessReport`].
#[derive(Debug, Clone)]
pub struct ThicknessAnalysis {
    pub report: ThicknessReport,
    pub profile: CurvatureProfile,
    pub focal: FocalDistance,
    pub ball: BallRadius,
    pub mdc: Mdc,
}

impl ThicknessAnalysis {
    /// Rows `(sample, s, kappa, f_g)` for plotting.
    pub fn per_sample_rows<'a>(&'a self, curve: &'a Curve) -> impl Iterator<Item = Vec<f64>> + 'a {
        (0..curve.len()).map(move |i| {
            vec![
                i as f64,
                curve.cum_arclength()[i],
                self.profile.kappa[i],
                self.focal.pointwise[i],
            ]
        })
    }
}

pub fn thickness_report(curve: &Curve) -> Result<ThicknessReport> {
    Ok(analyze(curve, &ThicknessOptions::default())?.report)
}

pub fn analyze(curve: &Curve, opts: &ThicknessOptions) -> Result<ThicknessAnalysis> {
    if !curve.is_closed() {
        return Err(Error::NotClosed);
    }
    let profile = curvature::curvature_profile(curve, opts.window.unwrap_or_else(|| curvature::default_window(curve)))?;
    let focal = ball::geometric_focal_distance(
        curve,
        opts.focal_window.unwrap_or_else(|| ball::default_focal_window(curve)),
    );
    let ball = ball::rolling_ball_radius(curve, opts.exclusion_arc);
    let crit = CriticalOptions {
        exclusion: Some(
            opts.critical
                .exclusion
                .unwrap_or_else(|| critical::default_exclusion(curve, profile.f_k)),
        ),
        ..opts.critical
    };
    let mdc = critical::mdc(curve, &crit)?;
    let thickness = profile.f_k.min(mdc.value / 2.0);
    let report = ThicknessReport {
        samples: curve.len(),
        low_resolution: curve.is_low_resolution(),
        length: curve.length(),
        f_k: profile.f_k,
        f_g: focal.f_g,
        mdc: mdc.value,
        r_o: ball.r_o,
        thickness,
        ropelength: curve.length() / ball.r_o,
        agreement_gap: (ball.r_o - thickness).abs(),
        focal_gap: (profile.f_k - focal.f_g).abs(),
        agreement_tol: 10.0 / curve.len() as f64,
        critical_pairs: mdc.pairs.len(),
        witnesses: ThicknessWitnesses {
            mdc_pair: mdc.witness.clone(),
            sup_kappa_sample: profile.argmax,
            f_g_sample: focal.witness,
            r_o_pair: ball.witness,
        },
    };
    Ok(ThicknessAnalysis {
        report,
        profile,
        focal,
        ball,
        mdc,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SemicontinuityReport {
    /// Ball radius of each sequence member; the last entry is the limit.
    #[serde(serialize_with = "crate::document::ser_f64_vec")]
    pub r_o: Vec<f64>,
    #[serde(serialize_with = "crate::document::ser_f64_vec")]
    pub mdc: Vec<f64>,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub limit_r_o: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub limit_mdc: f64,
    /// `tail_sup_r_o[m] = max_{k >= m} r_o[k]` over the non-limit members.
    #[serde(serialize_with = "crate::document::ser_f64_vec")]
    pub tail_sup_r_o: Vec<f64>,
    /// `tail_inf_mdc[m] = min_{k >= m} mdc[k]` over the non-limit members.
    #[serde(serialize_with = "crate::document::ser_f64_vec")]
    pub tail_inf_mdc: Vec<f64>,
    pub tail_start: usize,
    pub tol: f64,
    /// `tail_sup_r_o[tail_start] <= limit_r_o + tol`
    pub r_o_bound_holds: bool,
    /// `tail_inf_mdc[tail_start] >= limit_mdc - tol`
    pub mdc_bound_holds: bool,
}

/// Measures upper semicontinuity of the ball radius and lower semicontinuity
/// of the minimal double critical distance along a sequence whose last member
/// is taken as the limit.
pub fn semicontinuity_probe(curves: &[Curve], tail_start: Option<usize>, tol: f64) -> Result<SemicontinuityReport> {
    if curves.len() < 2 {
        return Err(Error::InvalidParameter("semicontinuity probe needs at least two curves".into()));
    }
    let mut r_o = Vec::with_capacity(curves.len());
    let mut mdcs = Vec::with_capacity(curves.len());
    for c in curves {
        let a = analyze(c, &ThicknessOptions::default())?;
        r_o.push(a.report.r_o);
        mdcs.push(a.report.mdc);
    }
    let k = curves.len() - 1;
    let mut tail_sup = vec![f64::NEG_INFINITY; k];
    let mut tail_inf = vec![f64::INFINITY; k];
    for m in (0..k).rev() {
        let next_sup = if m + 1 < k { tail_sup[m + 1] } else { f64::NEG_INFINITY };
        let next_inf = if m + 1 < k { tail_inf[m + 1] } else { f64::INFINITY };
        tail_sup[m] = r_o[m].max(next_sup);
        tail_inf[m] = mdcs[m].min(next_inf);
    }
    let start = tail_start.unwrap_or(k - 1).min(k - 1);
    Ok(SemicontinuityReport {
        limit_r_o: r_o[k],
        limit_mdc: mdcs[k],
        r_o_bound_holds: tail_sup[start] <= r_o[k] + tol,
        mdc_bound_holds: tail_inf[start] >= mdcs[k] - tol,
        tail_sup_r_o: tail_sup,
        tail_inf_mdc: tail_inf,
        tail_start: start,
        tol,
        r_o,
        mdc: mdcs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::PI;

    #[test]
    fn circle_report() {
        let c = fixtures::circle(1.0, 1024).unwrap();
        let r = thickness_report(&c).unwrap();
        assert!((r.thickness - 1.0).abs() < 1e-2);
        assert!((r.ropelength - 2.0 * PI).abs() < 0.07);
        assert!(r.formula_bounds_hold());
        assert!(r.ropelength >= 2.0 * PI - 0.07);
    }

    #[test]
    fn stadium_report() {
        let c = fixtures::stadium(1.0, 4.0, 2048).unwrap();
        let r = thickness_report(&c).unwrap();
        assert!((r.thickness - 1.0).abs() < 1e-2);
        assert!((r.ropelength - (2.0 * PI + 8.0)).abs() < 0.15);
        assert!(r.formula_bounds_hold());
    }

    #[test]
    fn ropelength_is_scale_invariant() {
        let c = fixtures::circle(1.0, 512).unwrap();
        let a = thickness_report(&c).unwrap();
        let b = thickness_report(&c.scaled(3.0).unwrap()).unwrap();
        assert!(((a.ropelength - b.ropelength) / a.ropelength).abs() < 1e-6);
    }

    #[test]
    fn open_curve_rejected() {
        let c = fixtures::example1_offset_circle(0.1, 64).unwrap();
        assert!(matches!(thickness_report(&c), Err(Error::NotClosed)));
    }

    #[test]
    fn constant_sequence_is_exact() {
        let c = fixtures::circle(1.0, 256).unwrap();
        let rep = semicontinuity_probe(&[c.clone(), c.clone(), c], None, 1e-9).unwrap();
        assert!(rep.r_o_bound_holds && rep.mdc_bound_holds);
        assert!((rep.tail_sup_r_o[0] - rep.limit_r_o).abs() < 1e-9);
        assert!(semicontinuity_probe(&[fixtures::circle(1.0, 16).unwrap()], None, 0.0).is_err());
    }

    #[test]
    fn shrinking_circles() {
        let mut seq: Vec<Curve> = (1..=10)
            .map(|m| fixtures::circle(1.0 + 1.0 / m as f64, 256).unwrap())
            .collect();
        seq.push(fixtures::circle(1.0, 256).unwrap());
        let rep = semicontinuity_probe(&seq, None, 0.05).unwrap();
        assert!(!rep.r_o_bound_holds);
        let rep = semicontinuity_probe(&seq, None, 0.1 + 1e-9).unwrap();
        assert!(rep.r_o_bound_holds);
        for m in 0..10 {
            let bound = 1.0 + 1.0 / (m + 1) as f64;
            assert!((rep.tail_sup_r_o[m] - bound).abs() < 1e-6);
        }
    }

    #[test]
    fn shrinking_bump() {
        // radial bump of amplitude 1/m^2 converging to the unit circle
        let bumped = |amp: f64| {
            let n = 512;
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / n as f64;
                    let r = 1.0 + amp * (3.0 * a).cos();
                    vec![r * a.cos(), r * a.sin()]
                })
                .collect();
            Curve::new(&pts, 2, true, None).unwrap()
        };
        let mut seq: Vec<Curve> = (2..=8).map(|m| bumped(1.0 / (m * m) as f64)).collect();
        seq.push(bumped(0.0));
        let rep = semicontinuity_probe(&seq, None, 1e-3).unwrap();
        assert!(rep.r_o_bound_holds);
        assert!(rep.r_o.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }
}
