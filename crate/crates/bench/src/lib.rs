//! Shared inputs for the criterion benchmarks.

use thickcurve::fixtures;
use thickcurve::planner::BoundaryData;
use thickcurve::Curve;

pub fn circle(n: usize) -> Curve {
    fixtures::circle(1.0, n).expect("valid circle")
}

pub fn stadium(n: usize) -> Curve {
    fixtures::stadium(1.0, 4.0, n).expect("valid stadium")
}

pub fn trefoil(n: usize) -> Curve {
    fixtures::torus_knot(2, 3, 2.0, 1.0, n).expect("valid torus knot")
}

/// Planar boundary data with a left turn and a reversal of heading.
pub fn planar_data() -> BoundaryData {
    BoundaryData::new(vec![0.0, 0.0], vec![6.0, 3.0], vec![0.0, 1.0], vec![-1.0, 0.0], 1.0).expect("valid data")
}

pub fn spatial_data() -> BoundaryData {
    BoundaryData::new(
        vec![0.0, 0.0, 0.0],
        vec![4.0, 3.0, 2.0],
        vec![1.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0],
        1.0,
    )
    .expect("valid data")
}
