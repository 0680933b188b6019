use super::LinearizeError;

/// Secant approximation of a convex scalar function by ordered breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PwlCurve {
    points: Vec<(f64, f64)>,
}

impl PwlCurve {
    /// Build from explicit breakpoints. `x` must be strictly increasing and
    /// the secant slopes nondecreasing.
    pub fn from_points(points: Vec<(f64, f64)>) -> Result<Self, LinearizeError> {
        if points.len() < 2 {
            return Err(LinearizeError::NoSegments);
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(LinearizeError::DegenerateDomain { lo: w[0].0, hi: w[1].0 });
            }
        }
        if let Some(&(x, _)) = points.iter().find(|p| !p.1.is_finite() || !p.0.is_finite()) {
            return Err(LinearizeError::NonFinite { x });
        }
        let curve = Self { points };
        let slopes: Vec<f64> = curve.segments().map(|s| s.slope).collect();
        let scale = slopes.iter().fold(1.0f64, |m, s| m.max(s.abs()));
        for (k, w) in slopes.windows(2).enumerate() {
            if w[1] < w[0] - 1e-9 * scale {
                return Err(LinearizeError::NotConvex {
                    x: curve.points[k + 1].0,
                    before: w[0],
                    after: w[1],
                });
            }
        }
        Ok(curve)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Value at the left end of the domain.
    pub fn start_value(&self) -> f64 {
        self.points[0].1
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.points.windows(2).map(|w| Segment {
            width: w[1].0 - w[0].0,
            slope: (w[1].1 - w[0].1) / (w[1].0 - w[0].0),
        })
    }

    pub fn evaluate(&self, x: f64) -> Result<f64, LinearizeError> {
        let (lo, hi) = self.domain();
        let tol = 1e-9 * (hi - lo).abs().max(1.0);
        if !(x >= lo - tol && x <= hi + tol) {
            return Err(LinearizeError::OutOfDomain { x, lo, hi });
        }
        let k = self.points[1..]
            .iter()
            .position(|p| x <= p.0)
            .unwrap_or(self.points.len() - 2);
        let (x0, y0) = self.points[k];
        let (x1, y1) = self.points[k + 1];
        if x == x1 {
            return Ok(y1);
        }
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    /// Map the x axis through `x -> x * factor`, keeping y values.
    pub fn rescale_x(&self, factor: f64) -> PwlCurve {
        PwlCurve {
            points: self.points.iter().map(|&(x, y)| (x * factor, y)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub width: f64,
    pub slope: f64,
}

/// Sample `f` at `segments + 1` uniformly spaced breakpoints on `[lo, hi]`.
pub fn pwl_approximate(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    segments: usize,
) -> Result<PwlCurve, LinearizeError> {
    if segments == 0 {
        return Err(LinearizeError::NoSegments);
    }
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(LinearizeError::DegenerateDomain { lo, hi });
    }
    let step = (hi - lo) / segments as f64;
    let points = (0..=segments)
        .map(|k| {
            let x = if k == segments { hi } else { lo + step * k as f64 };
            (x, f(x))
        })
        .collect();
    PwlCurve::from_points(points)
}

pub fn pwl_evaluate(curve: &PwlCurve, x: f64) -> Result<f64, LinearizeError> {
    curve.evaluate(x)
}
