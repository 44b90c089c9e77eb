//! Maximal runs of equal labels along a sampled curve.

use serde::Serialize;

use crate::curve::Curve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Run<T> {
    pub label: T,
    /// First sample of the run.
    pub start: usize,
    /// Number of samples in the run.
    pub count: usize,
}

impl<T: Copy> Run<T> {
    /// Sample indices of the run in order, wrapping modulo `n`.
    pub fn indices(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.count).map(move |k| (self.start + k) % n)
    }

    pub fn last(&self, n: usize) -> usize {
        (self.start + self.count - 1) % n
    }

    pub fn contains(&self, i: usize, n: usize) -> bool {
        (i + n - self.start) % n < self.count
    }
}

/// Splits `labels` into maximal runs. For closed curves a run crossing the
/// seam is merged, so the first run may start at a non-zero index.
pub fn label_runs<T: PartialEq + Copy>(labels: &[T], closed: bool) -> Vec<Run<T>> {
    let n = labels.len();
    if n == 0 {
        return Vec::new();
    }
    if closed && labels.iter().all(|l| *l == labels[0]) {
        return vec![Run {
            label: labels[0],
            start: 0,
            count: n,
        }];
    }
    let offset = if closed {
        (0..n).find(|&i| labels[i] != labels[(i + n - 1) % n]).unwrap_or(0)
    } else {
        0
    };
    let mut runs: Vec<Run<T>> = Vec::new();
    for k in 0..n {
        let i = (offset + k) % n;
        match runs.last_mut() {
            Some(r) if r.label == labels[i] => r.count += 1,
            _ => runs.push(Run {
                label: labels[i],
                start: i,
                count: 1,
            }),
        }
    }
    runs
}

/// Arclength attributed to a run: the edges between its samples plus half of
/// each edge connecting it to a neighbouring run.
pub fn run_length<T: Copy>(curve: &Curve, run: &Run<T>) -> f64 {
    let n = curve.len();
    if curve.is_closed() && run.count >= n {
        return curve.length();
    }
    let mut len = 0.0;
    for k in 0..run.count.saturating_sub(1) {
        len += curve.segment_length((run.start + k) % n);
    }
    if let Some(prev) = curve.offset_index(run.start, -1) {
        len += 0.5 * curve.segment_length(prev);
    }
    let last = run.last(n);
    if curve.offset_index(last, 1).is_some() {
        len += 0.5 * curve.segment_length(last);
    }
    len
}
