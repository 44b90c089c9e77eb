use proptest::prelude::*;

use thickcurve::extremal::{classify_points, decompose_structure, relax_ropelength, KappaClass, RelaxOptions};
use thickcurve::fixtures;
use thickcurve::planner::{csc_candidates, SeedConfig};
use thickcurve::thickness::{analyze, ThicknessOptions};
use thickcurve::{thickness_report, BoundaryData, Curve};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn shape(kind: u8, n: usize) -> Curve {
    match kind % 4 {
        0 => fixtures::ellipse(1.5, 1.0, n),
        1 => fixtures::stadium(1.0, 2.0, n),
        2 => fixtures::rounded_square(1.0, 1.0, n),
        _ => fixtures::bumped_circle(0.05, 1.0, n),
    }
    .unwrap()
}

fn reversed(c: &Curve) -> Curve {
    let mut pts = c.point_rows();
    let mut tans: Vec<Vec<f64>> = c.tangent_rows().into_iter().map(|t| t.iter().map(|x| -x).collect()).collect();
    pts.reverse();
    tans.reverse();
    Curve::new(&pts, c.dim(), c.is_closed(), Some(&tans)).unwrap()
}

fn rotation2(a: f64) -> Vec<Vec<f64>> {
    vec![vec![a.cos(), -a.sin()], vec![a.sin(), a.cos()]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn similarity_scales_radii_and_keeps_ropelength(
        kind in 0u8..4, angle in 0.0..6.3f64, scale in 0.2..5.0f64, dx in -10.0..10.0f64, dy in -10.0..10.0f64,
    ) {
        let c = shape(kind, 160);
        let moved = c.similarity(scale, &rotation2(angle), &[dx, dy]).unwrap();
        let a = thickness_report(&c).unwrap();
        let b = thickness_report(&moved).unwrap();
        prop_assert!(rel(b.r_o, scale * a.r_o) < 1e-9);
        prop_assert!(rel(b.f_k, scale * a.f_k) < 1e-9);
        prop_assert!(rel(b.mdc, scale * a.mdc) < 1e-6);
        prop_assert!(rel(b.ropelength, a.ropelength) < 1e-9);
    }

    #[test]
    fn reversal_keeps_thickness(kind in 0u8..4) {
        let c = shape(kind, 160);
        let a = thickness_report(&c).unwrap();
        let b = thickness_report(&reversed(&c)).unwrap();
        prop_assert!(rel(b.r_o, a.r_o) < 1e-12);
        prop_assert!(rel(b.f_k, a.f_k) < 1e-12);
        prop_assert!(rel(b.mdc, a.mdc) < 1e-6);
    }

    #[test]
    fn ball_radius_is_below_both_formula_terms(kind in 0u8..4, n in 120usize..240) {
        let r = thickness_report(&shape(kind, n)).unwrap();
        prop_assert!(r.formula_bounds_hold(), "r_o {} f_g {} mdc {}", r.r_o, r.f_g, r.mdc);
        prop_assert!(r.thickness <= r.f_k);
    }

    #[test]
    fn labels_partition_samples_and_widen_with_tol(kind in 0u8..4, t1 in 0.01..0.2f64, t2 in 0.01..0.2f64) {
        let c = shape(kind, 200);
        let an = analyze(&c, &ThicknessOptions::default()).unwrap();
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        let a = classify_points(&c, &an, lo);
        let b = classify_points(&c, &an, hi);
        let total = a.count(KappaClass::Zero) + a.count(KappaClass::Maximal) + a.count(KappaClass::Between);
        prop_assert_eq!(total, c.len());
        for (x, y) in a.labels.iter().zip(&b.labels) {
            if *x != KappaClass::Between {
                prop_assert_eq!(x, y);
            }
        }
        prop_assert!(b.critical_count() >= a.critical_count());
        let s = decompose_structure(&c, &an, hi);
        prop_assert_eq!(s.runs.iter().map(|r| r.count).sum::<usize>(), c.len());
    }

    #[test]
    fn planner_is_symmetric_under_path_reversal(
        qx in 4.0..10.0f64, qy in -6.0..6.0f64, a in 0.0..6.3f64, b in 0.0..6.3f64, lambda in 0.5..2.0f64,
    ) {
        let v = vec![a.cos(), a.sin()];
        let w = vec![b.cos(), b.sin()];
        let fwd = BoundaryData::new(vec![0.0, 0.0], vec![qx, qy], v.clone(), w.clone(), lambda).unwrap();
        let neg = |u: &[f64]| u.iter().map(|x| -x).collect::<Vec<_>>();
        let back = BoundaryData::new(vec![qx, qy], vec![0.0, 0.0], neg(&w), neg(&v), lambda).unwrap();
        let f = csc_candidates(&fwd, &SeedConfig::default()).unwrap();
        let r = csc_candidates(&back, &SeedConfig::default()).unwrap();
        prop_assert!(!f.is_empty() && !r.is_empty());
        prop_assert!(rel(f[0].length, r[0].length) < 1e-9);
        prop_assert!(f[0].length >= qx.hypot(qy) * (1.0 - 1e-12));
        prop_assert!(f[0].check(&fwd).passes(1e-8));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn relaxation_never_increases_ropelength(seed in 0u64..1000) {
        let c = fixtures::bumped_circle(0.03, 1.0, 96).unwrap();
        let out = relax_ropelength(&c, &RelaxOptions::new(1.5, 40, seed)).unwrap();
        for w in out.trace.windows(2) {
            prop_assert!(w[1].ropelength <= w[0].ropelength);
        }
        prop_assert!(out.final_ropelength() <= out.initial_ropelength());
    }
}
