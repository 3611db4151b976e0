//! Monotone cubic Hermite interpolation with exponential tails.
//!
//! Inside the knot range the curve is a Fritsch–Carlson PCHIP: slopes are a
//! weighted harmonic mean of the neighbouring secants (zero at local extrema)
//! so each cubic segment stays inside the range of its two knots. Outside the
//! range the curve continues with exponential tails that match the value and
//! the derivative of the boundary knot:
//!
//! ```text
//! f(x) = f_L exp(k_L (x - x_L))            x < x_L,  k_L = m_1 / f_L
//! f(x) = 1 - (1 - f_R) exp(k_R (x_R - x))  x > x_R,  k_R = m_n / (1 - f_R)
//! ```
//!
//! so the curve tends to 0 on the left and 1 on the right.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("degenerate knots: {0}")]
    DegenerateKnots(String),
    #[error("knot {index} has value {value}, expected a probability in [0, 1]")]
    InvalidValue { index: usize, value: f64 },
    #[error("knot values decrease between x = {x0} and x = {x1}")]
    NonMonotone { x0: f64, x1: f64 },
}

fn secants(knots: &[(f64, f64)]) -> Result<(Vec<f64>, Vec<f64>), CurveError> {
    if knots.len() < 2 {
        return Err(CurveError::DegenerateKnots(format!(
            "need at least 2 knots, got {}",
            knots.len()
        )));
    }
    if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(CurveError::DegenerateKnots("non-finite knot".into()));
    }
    let mut h = Vec::with_capacity(knots.len() - 1);
    let mut delta = Vec::with_capacity(knots.len() - 1);
    for w in knots.windows(2) {
        let step = w[1].0 - w[0].0;
        if step <= 0.0 {
            return Err(CurveError::DegenerateKnots(format!(
                "x must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
        h.push(step);
        delta.push((w[1].1 - w[0].1) / step);
    }
    Ok((h, delta))
}

/// Three-point one-sided endpoint slope, limited to keep the end segment monotone.
///
/// `h0`/`d0` belong to the end interval, `h1`/`d1` to its neighbour.
fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// Fritsch–Carlson slopes for knots with strictly increasing `x`.
pub fn compute_slopes(knots: &[(f64, f64)]) -> Result<Vec<f64>, CurveError> {
    let (h, delta) = secants(knots)?;
    let n = knots.len();
    if n == 2 {
        return Ok(vec![delta[0]; 2]);
    }

    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        let (d_prev, d_next) = (delta[k - 1], delta[k]);
        if d_prev * d_next <= 0.0 {
            continue;
        }
        let (h_prev, h_next) = (h[k - 1], h[k]);
        let w1 = 2.0 * h_next + h_prev;
        let w2 = h_next + 2.0 * h_prev;
        m[k] = (w1 + w2) / (w1 / d_prev + w2 / d_next);
    }
    m[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    Ok(m)
}

/// Exponential continuation beyond a boundary knot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tail {
    pub x: f64,
    pub value: f64,
    /// Decay rate `k`; zero when the tail is constant.
    pub rate: f64,
}

/// Smooth monotone win-expectancy curve over the whole score-differential axis.
#[derive(Debug, Clone, PartialEq)]
pub struct WeCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
    // per segment: a_k (cubic) and b_k (quadratic) coefficients in powers of (x - x_k)
    cubic: Vec<f64>,
    quadratic: Vec<f64>,
    left: Tail,
    right: Tail,
}

/// Builds the interpolating curve. Knot values must be probabilities and non-decreasing.
///
/// A boundary value of exactly 0 (left) or 1 (right) gives a constant tail at
/// that value, the limit of the exponential formula.
pub fn build_curve(knots: &[(f64, f64)]) -> Result<WeCurve, CurveError> {
    let slopes = compute_slopes(knots)?;
    for (index, &(_, y)) in knots.iter().enumerate() {
        if !(0.0..=1.0).contains(&y) {
            return Err(CurveError::InvalidValue { index, value: y });
        }
    }
    if let Some(w) = knots.windows(2).find(|w| w[1].1 < w[0].1) {
        return Err(CurveError::NonMonotone {
            x0: w[0].0,
            x1: w[1].0,
        });
    }

    let (xs, ys): (Vec<f64>, Vec<f64>) = knots.iter().copied().unzip();
    let segments = knots.len() - 1;
    let mut cubic = Vec::with_capacity(segments);
    let mut quadratic = Vec::with_capacity(segments);
    for k in 0..segments {
        let h = xs[k + 1] - xs[k];
        let delta = (ys[k + 1] - ys[k]) / h;
        cubic.push((slopes[k] + slopes[k + 1] - 2.0 * delta) / (h * h));
        quadratic.push((3.0 * delta - 2.0 * slopes[k] - slopes[k + 1]) / h);
    }

    let n = xs.len();
    let (f_l, d_l) = (ys[0], slopes[0]);
    let (f_r, d_r) = (ys[n - 1], slopes[n - 1]);
    let left = Tail {
        x: xs[0],
        value: f_l,
        rate: if f_l > 0.0 { d_l / f_l } else { 0.0 },
    };
    let right = Tail {
        x: xs[n - 1],
        value: f_r,
        rate: if f_r < 1.0 { d_r / (1.0 - f_r) } else { 0.0 },
    };

    Ok(WeCurve {
        xs,
        ys,
        slopes,
        cubic,
        quadratic,
        left,
        right,
    })
}

impl WeCurve {
    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn left_tail(&self) -> Tail {
        self.left
    }

    pub fn right_tail(&self) -> Tail {
        self.right
    }

    /// `(a_k, b_k)` of segment `k`, or `None` past the last segment.
    pub fn segment_coefficients(&self, k: usize) -> Option<(f64, f64)> {
        Some((*self.cubic.get(k)?, *self.quadratic.get(k)?))
    }

    /// Evaluates the curve at `x`. Knots are reproduced exactly.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.left.x {
            let Tail { x: x_l, value, rate } = self.left;
            return (value * (rate * (x - x_l)).exp()).min(value);
        }
        if x > self.right.x {
            let Tail { x: x_r, value, rate } = self.right;
            return (1.0 - (1.0 - value) * (rate * (x_r - x)).exp()).max(value);
        }
        if x == self.xs[n - 1] {
            return self.ys[n - 1];
        }
        if x.is_nan() {
            return f64::NAN;
        }

        let k = self.xs.partition_point(|&xk| xk <= x).saturating_sub(1).min(n - 2);
        let t = x - self.xs[k];
        let (y0, y1) = (self.ys[k], self.ys[k + 1]);
        let v = ((self.cubic[k] * t + self.quadratic[k]) * t + self.slopes[k]) * t + y0;
        // rounding only; the exact cubic never leaves [y0, y1] on monotone data
        v.clamp(y0.min(y1), y0.max(y1))
    }
}
