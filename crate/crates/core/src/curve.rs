//! Arclength-sampled polylines in R^n with unit tangents.

use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm};

/// Relative slack applied to window and exclusion comparisons so that samples
/// sitting exactly on a window boundary are classified the same way under
/// rigid motions and rescaling.
pub(crate) const WINDOW_SLACK: f64 = 1e-9;

/// Closed curves with fewer samples than this are flagged as low resolution.
pub const LOW_RESOLUTION_SAMPLES: usize = 8;

/// A discretized curve: ordered samples, unit tangents and cumulative chord
/// length. Closed curves wrap their index arithmetic modulo the sample count.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    dim: usize,
    closed: bool,
    points: Vec<f64>,
    tangents: Vec<f64>,
    cum: Vec<f64>,
    length: f64,
}

impl Curve {
    /// Builds a curve from rows of coordinates. Missing tangents are estimated
    /// by centered chord differences (one-sided at the ends of open curves).
    pub fn new(
        points: &[Vec<f64>],
        dim: usize,
        closed: bool,
        tangents: Option<&[Vec<f64>]>,
    ) -> Result<Self> {
        let mut flat = Vec::with_capacity(points.len() * dim);
        for (row, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::RowLength {
                    row,
                    expected: dim,
                    found: p.len(),
                });
            }
            flat.extend_from_slice(p);
        }
        let flat_t = match tangents {
            Some(ts) => {
                if ts.len() != points.len() {
                    return Err(Error::TangentCount {
                        expected: points.len(),
                        found: ts.len(),
                    });
                }
                let mut out = Vec::with_capacity(ts.len() * dim);
                for (row, t) in ts.iter().enumerate() {
                    if t.len() != dim {
                        return Err(Error::RowLength {
                            row,
                            expected: dim,
                            found: t.len(),
                        });
                    }
                    out.extend_from_slice(t);
                }
                Some(out)
            }
            None => None,
        };
        Self::from_flat(flat, dim, closed, flat_t)
    }

    /// Same as [`Curve::new`] with row-major flat coordinate storage.
    pub fn from_flat(
        points: Vec<f64>,
        dim: usize,
        closed: bool,
        tangents: Option<Vec<f64>>,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(dim));
        }
        let n = points.len() / dim;
        let min = if closed { 3 } else { 2 };
        if n < min {
            return Err(Error::TooFewSamples {
                kind: if closed { "closed" } else { "open" },
                min,
                found: n,
            });
        }
        if let Some(i) = (0..n).find(|&i| points[i * dim..(i + 1) * dim].iter().any(|x| !x.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        let mut cum = Vec::with_capacity(n);
        cum.push(0.0);
        for i in 1..n {
            let d = linalg::dist(&points[(i - 1) * dim..i * dim], &points[i * dim..(i + 1) * dim]);
            if d == 0.0 {
                return Err(Error::DuplicatePoint(i - 1, i));
            }
            cum.push(cum[i - 1] + d);
        }
        let mut length = cum[n - 1];
        if closed {
            let d = linalg::dist(&points[(n - 1) * dim..], &points[..dim]);
            if d == 0.0 {
                return Err(Error::DuplicatePoint(n - 1, 0));
            }
            length += d;
        }
        let mut curve = Curve {
            dim,
            closed,
            points,
            tangents: Vec::new(),
            cum,
            length,
        };
        curve.tangents = match tangents {
            Some(mut t) => {
                if t.len() != n * dim {
                    return Err(Error::TangentCount {
                        expected: n,
                        found: t.len() / dim,
                    });
                }
                for i in 0..n {
                    let ti = &mut t[i * dim..(i + 1) * dim];
                    let tn = norm(ti);
                    if !(tn > 0.0) || !tn.is_finite() {
                        return Err(Error::ZeroTangent(i));
                    }
                    if (tn - 1.0).abs() > 1e-12 {
                        ti.iter_mut().for_each(|x| *x /= tn);
                    }
                }
                t
            }
            None => curve.estimate_tangents()?,
        };
        Ok(curve)
    }

    fn estimate_tangents(&self) -> Result<Vec<f64>> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * self.dim);
        for i in 0..n {
            let (a, b) = if self.closed {
                ((i + n - 1) % n, (i + 1) % n)
            } else if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            let d = linalg::sub(self.point(b), self.point(a));
            let t = linalg::normalized(&d).ok_or(Error::ZeroTangent(i))?;
            out.extend(t);
        }
        Ok(out)
    }

    /// Copy of this curve with tangents re-estimated from the samples.
    pub fn with_estimated_tangents(&self) -> Result<Self> {
        let mut c = self.clone();
        c.tangents = c.estimate_tangents()?;
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.cum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cum.is_empty()
    }

    pub fn is_low_resolution(&self) -> bool {
        self.closed && self.len() < LOW_RESOLUTION_SAMPLES
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn tangent(&self, i: usize) -> &[f64] {
        &self.tangents[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    pub fn tangents(&self) -> impl Iterator<Item = &[f64]> {
        self.tangents.chunks_exact(self.dim)
    }

    pub fn point_rows(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }

    pub fn tangent_rows(&self) -> Vec<Vec<f64>> {
        self.tangents().map(<[f64]>::to_vec).collect()
    }

    /// Cumulative chord length at each sample, starting at 0.
    pub fn cum_arclength(&self) -> &[f64] {
        &self.cum
    }

    /// Total chord length, including the closing chord of a closed curve.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.len()
        } else {
            self.len() - 1
        }
    }

    pub fn segment_length(&self, k: usize) -> f64 {
        let n = self.len();
        if k + 1 < n {
            self.cum[k + 1] - self.cum[k]
        } else {
            self.length - self.cum[k]
        }
    }

    pub fn mean_spacing(&self) -> f64 {
        self.length / self.segment_count() as f64
    }

    pub fn max_spacing(&self) -> f64 {
        (0..self.segment_count())
            .map(|k| self.segment_length(k))
            .fold(0.0, f64::max)
    }

    /// Index of `i + offset` with wrap-around for closed curves; `None` when
    /// it falls off an open curve.
    pub fn offset_index(&self, i: usize, offset: isize) -> Option<usize> {
        let n = self.len() as isize;
        let j = i as isize + offset;
        if self.closed {
            Some(j.rem_euclid(n) as usize)
        } else if (0..n).contains(&j) {
            Some(j as usize)
        } else {
            None
        }
    }

    /// Arclength between two parameter values: along the arc for open curves,
    /// along the shorter arc for closed ones.
    pub fn arc_between(&self, s: f64, t: f64) -> f64 {
        let d = (s - t).abs();
        if self.closed {
            let d = d.rem_euclid(self.length);
            d.min(self.length - d)
        } else {
            d
        }
    }

    pub fn arc_between_samples(&self, i: usize, j: usize) -> f64 {
        self.arc_between(self.cum[i], self.cum[j])
    }

    /// Angle between the unit tangents at `i` and `j` divided by the
    /// arclength separating them.
    pub fn dilation_alpha(&self, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Err(Error::SameIndex(i));
        }
        Ok(self.dilation_unchecked(i, j))
    }

    pub(crate) fn dilation_unchecked(&self, i: usize, j: usize) -> f64 {
        linalg::unit_angle(self.tangent(i), self.tangent(j)) / self.arc_between_samples(i, j)
    }

    /// `|t_i - t_j| / arclength`, the chord version of the dilation.
    pub fn dilation_chord(&self, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Err(Error::SameIndex(i));
        }
        Ok(linalg::dist(self.tangent(i), self.tangent(j)) / self.arc_between_samples(i, j))
    }

    /// Segment index and fraction containing parameter `s`
    /// (wrapped for closed curves, clamped for open ones).
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let n = self.len();
        let s = if self.closed {
            s.rem_euclid(self.length)
        } else {
            s.clamp(0.0, self.length)
        };
        let k = match self.cum.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(k) => k,
            Err(k) => k - 1,
        };
        let k = if !self.closed && k >= n - 1 { n - 2 } else { k };
        let seg = self.segment_length(k);
        let u = ((s - self.cum[k]) / seg).clamp(0.0, 1.0);
        (k, u)
    }

    fn next(&self, k: usize) -> usize {
        (k + 1) % self.len()
    }

    /// Piecewise-linear position at parameter `s`.
    pub fn position_at(&self, s: f64) -> Vec<f64> {
        let (k, u) = self.locate(s);
        let a = self.point(k);
        let b = self.point(self.next(k));
        a.iter().zip(b).map(|(x, y)| x + u * (y - x)).collect()
    }

    /// Linearly interpolated (unnormalized) tangent at parameter `s`.
    pub fn tangent_at(&self, s: f64) -> Vec<f64> {
        let (k, u) = self.locate(s);
        let a = self.tangent(k);
        let b = self.tangent(self.next(k));
        a.iter().zip(b).map(|(x, y)| x + u * (y - x)).collect()
    }

    /// Resamples to `m` samples equally spaced in cumulative chord length.
    /// Tangents are interpolated and renormalized.
    pub fn resample(&self, m: usize) -> Result<Curve> {
        let min = if self.closed { 3 } else { 2 };
        if m < min {
            return Err(Error::TooFewSamples {
                kind: if self.closed { "closed" } else { "open" },
                min,
                found: m,
            });
        }
        let step = if self.closed {
            self.length / m as f64
        } else {
            self.length / (m - 1) as f64
        };
        let mut pts = Vec::with_capacity(m * self.dim);
        let mut tans = Vec::with_capacity(m * self.dim);
        for k in 0..m {
            let s = if !self.closed && k == m - 1 {
                self.length
            } else {
                k as f64 * step
            };
            let (p, t) = if !self.closed && k == m - 1 {
                (self.point(self.len() - 1).to_vec(), self.tangent(self.len() - 1).to_vec())
            } else {
                (self.position_at(s), self.tangent_at(s))
            };
            let t = match linalg::normalized(&t) {
                Some(t) => t,
                None => {
                    // Interpolated tangent vanished (cusp between opposite
                    // tangents); fall back to the chord direction.
                    let (seg, _) = self.locate(s);
                    let d = linalg::sub(self.point(self.next(seg)), self.point(seg));
                    linalg::normalized(&d).ok_or(Error::ZeroTangent(k))?
                }
            };
            pts.extend(p);
            tans.extend(t);
        }
        Curve::from_flat(pts, self.dim, self.closed, Some(tans))
    }

    /// Applies `x -> scale * R x + shift` to the samples and `t -> R t` to the
    /// tangents. `rotation` must be orthogonal with rows of length `dim`.
    pub fn similarity(&self, scale: f64, rotation: &[Vec<f64>], shift: &[f64]) -> Result<Curve> {
        let apply = |x: &[f64]| -> Vec<f64> { rotation.iter().map(|row| dot(row, x)).collect() };
        let mut pts = Vec::with_capacity(self.points.len());
        let mut tans = Vec::with_capacity(self.points.len());
        for (p, t) in self.points().zip(self.tangents()) {
            let rp = apply(p);
            pts.extend(rp.iter().zip(shift).map(|(x, s)| scale * x + s));
            tans.extend(apply(t));
        }
        Curve::from_flat(pts, rotation.len(), self.closed, Some(tans))
    }

    /// Uniform rescaling about the origin.
    pub fn scaled(&self, factor: f64) -> Result<Curve> {
        let pts = self.points.iter().map(|x| x * factor).collect();
        Curve::from_flat(pts, self.dim, self.closed, Some(self.tangents.clone()))
    }

    /// Embeds the curve into a higher dimension by zero padding.
    pub fn embedded(&self, dim: usize) -> Result<Curve> {
        if dim < self.dim {
            return Err(Error::Dimension(dim));
        }
        let pad = |src: &[f64]| -> Vec<f64> {
            src.chunks_exact(self.dim)
                .flat_map(|c| c.iter().copied().chain(std::iter::repeat_n(0.0, dim - self.dim)))
                .collect()
        };
        Curve::from_flat(pad(&self.points), dim, self.closed, Some(pad(&self.tangents)))
    }
}
