use serde::Serialize;

use crate::curve::Curve;
use crate::thickness::ThicknessAnalysis;

/// Curvature class of a sample relative to the ball radius `r_o`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KappaClass {
    /// `κ ≤ tol / r_o`
    Zero,
    /// `|κ - 1/r_o| ≤ tol / r_o`
    Maximal,
    /// Anything else.
    Between,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointClasses {
    pub labels: Vec<KappaClass>,
    /// Sample lies at an end of a chord achieving the minimal double
    /// critical distance (within `(1 + tol) mdc`).
    pub critical: Vec<bool>,
    /// For critical samples, the sample nearest the other end of the chord.
    pub partner: Vec<Option<usize>>,
    pub tol: f64,
    #[serde(serialize_with = "crate::document::ser_f64")]
    pub r_o: f64,
}

impl PointClasses {
    pub fn count(&self, class: KappaClass) -> usize {
        self.labels.iter().filter(|l| **l == class).count()
    }

    pub fn critical_count(&self) -> usize {
        self.critical.iter().filter(|c| **c).count()
    }
}

/// The two samples bracketing arclength `s`.
fn bracket(curve: &Curve, s: f64) -> (usize, usize) {
    let (k, _) = curve.locate(s);
    let next = curve.offset_index(k, 1).unwrap_or(k);
    (k, next)
}

/// Labels every sample by its curvature class and marks minimal double
/// critical samples. A sample may be both critical and carry a curvature label.
pub fn classify_points(curve: &Curve, analysis: &ThicknessAnalysis, tol: f64) -> PointClasses {
    let n = curve.len();
    let r_o = analysis.report.r_o;
    let inv = if r_o.is_finite() { 1.0 / r_o } else { 0.0 };
    let labels = analysis
        .profile
        .kappa
        .iter()
        .map(|&k| {
            if r_o.is_infinite() || k * r_o <= tol {
                KappaClass::Zero
            } else if (k - inv).abs() <= tol * inv {
                KappaClass::Maximal
            } else {
                KappaClass::Between
            }
        })
        .collect();
    let mut critical = vec![false; n];
    let mut partner = vec![None; n];
    let mdc = analysis.mdc.value;
    if mdc.is_finite() {
        for pair in analysis.mdc.pairs.iter().filter(|p| p.chord <= mdc * (1.0 + tol)) {
            for (here, there) in [(pair.s, pair.j), (pair.t, pair.i)] {
                let (a, b) = bracket(curve, here);
                for k in [a, b] {
                    critical[k] = true;
                    partner[k].get_or_insert(there);
                }
            }
        }
    }
    PointClasses {
        labels,
        critical,
        partner,
        tol,
        r_o,
    }
}
