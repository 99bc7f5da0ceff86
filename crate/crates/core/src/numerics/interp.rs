//! Monotone cubic interpolation and inversion of tabulated monotone maps.

use crate::error::{Error, Result};

/// Result of inverting a monotone table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub x: f64,
    /// `y` fell outside the tabulated range and `x` was clamped to an end.
    pub clamped: bool,
}

/// Cubic Hermite value on `[x0, x1]` from end values and slopes.
pub fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d1
}

/// Derivative of [`hermite`] with respect to `x`.
pub fn hermite_slope(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    (6.0 * t2 - 6.0 * t) * y0 / h
        + (3.0 * t2 - 4.0 * t + 1.0) * d0
        + (-6.0 * t2 + 6.0 * t) * y1 / h
        + (3.0 * t2 - 2.0 * t) * d1
}

/// Solves `hermite(..., x) = y` for `x` in `[x0, x1]`, assuming the cubic is
/// monotone there and `y` lies between `y0` and `y1`.
pub fn hermite_inverse(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, y: f64) -> f64 {
    let increasing = y1 >= y0;
    let (mut lo, mut hi) = (x0, x1);
    // secant start, then Newton steps safeguarded by bisection
    let mut x = if y1 != y0 { x0 + (y - y0) / (y1 - y0) * (x1 - x0) } else { 0.5 * (x0 + x1) };
    for _ in 0..100 {
        let r = hermite(x0, x1, y0, y1, d0, d1, x) - y;
        if r == 0.0 {
            return x;
        }
        if (r < 0.0) == increasing {
            lo = x;
        } else {
            hi = x;
        }
        let s = hermite_slope(x0, x1, y0, y1, d0, d1, x);
        let newton = x - r / s;
        x = if s != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    x
}

/// Shape-preserving slopes (Fritsch-Carlson / PCHIP) for a monotone table.
pub fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a * b <= 0.0 {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

/// Index of the first violation of strict monotonicity, if any.
fn monotone_direction(y: &[f64]) -> Result<bool> {
    let increasing = y[1] > y[0];
    for (k, w) in y.windows(2).enumerate() {
        let ok = if increasing { w[1] > w[0] } else { w[1] < w[0] };
        if !ok || !w[1].is_finite() {
            return Err(Error::NonMonotone(k + 1));
        }
    }
    Ok(increasing)
}

/// Finds `x` with `y(x) = y` on a strictly monotone table, using the
/// shape-preserving cubic through the points. Out-of-range `y` clamps to the
/// nearest table end and sets [`Inversion::clamped`].
pub fn invert_monotone(table_x: &[f64], table_y: &[f64], y: f64) -> Result<Inversion> {
    if table_x.len() != table_y.len() {
        return Err(Error::LengthMismatch { expected: table_x.len(), got: table_y.len() });
    }
    if table_x.len() < 2 {
        return Err(Error::Empty("interpolation table needs at least two points"));
    }
    if let Some(k) = table_x.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NonMonotone(k + 1));
    }
    let increasing = monotone_direction(table_y)?;
    let slopes = pchip_slopes(table_x, table_y);
    Ok(invert_with_slopes(table_x, table_y, &slopes, increasing, y))
}

/// Inversion against a table whose slopes are already known.
pub(crate) fn invert_with_slopes(
    x: &[f64],
    y: &[f64],
    slopes: &[f64],
    increasing: bool,
    target: f64,
) -> Inversion {
    let n = x.len();
    let (first, last) = (y[0], y[n - 1]);
    let below = if increasing { target < first } else { target > first };
    let above = if increasing { target > last } else { target < last };
    if below {
        return Inversion { x: x[0], clamped: true };
    }
    if above {
        return Inversion { x: x[n - 1], clamped: true };
    }
    let k = if increasing {
        y.partition_point(|&v| v <= target)
    } else {
        y.partition_point(|&v| v >= target)
    }
    .clamp(1, n - 1)
        - 1;
    let xv = hermite_inverse(x[k], x[k + 1], y[k], y[k + 1], slopes[k], slopes[k + 1], target);
    Inversion { x: xv.clamp(x[k], x[k + 1]), clamped: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
        let x: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let y = x.iter().map(|&v| f(v)).collect();
        (x, y)
    }

    #[test]
    fn identity_table() {
        let (x, y) = table(11, 0.0, 1.0, |v| v);
        let r = invert_monotone(&x, &y, 0.3).unwrap();
        assert!((r.x - 0.3).abs() < 1e-14);
        assert!(!r.clamped);
    }

    #[test]
    fn log_table_at_zero() {
        let (x, y) = table(2001, 0.1, 10.0, f64::ln);
        assert!((invert_monotone(&x, &y, 0.0).unwrap().x - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hyperbolic_table() {
        let f = |v: f64| 2.0 * (2.0 * v - 1.0).atanh();
        let (x, y) = table(4001, 1e-3, 1.0 - 1e-3, f);
        let r = invert_monotone(&x, &y, 2.0 * 0.6f64.atanh()).unwrap();
        assert!((r.x - 0.8).abs() < 1e-8, "{}", r.x);
    }

    #[test]
    fn decreasing_table_and_clamping() {
        let (x, y) = table(101, 0.0, 1.0, |v| -v * v - v);
        let r = invert_monotone(&x, &y, -0.75).unwrap();
        assert!((r.x - 0.5).abs() < 1e-5);
        let c = invert_monotone(&x, &y, 1.0).unwrap();
        assert!(c.clamped && c.x == 0.0);
        let c = invert_monotone(&x, &y, -5.0).unwrap();
        assert!(c.clamped && c.x == 1.0);
    }

    #[test]
    fn non_monotone_rejected() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [0.0, 1.0, 0.5, 2.0];
        assert_eq!(invert_monotone(&x, &y, 0.2), Err(Error::NonMonotone(2)));
    }

    #[test]
    fn round_trip_through_interpolant() {
        let (x, y) = table(64, 0.5, 4.0, |v| v.powi(3) + v);
        let s = pchip_slopes(&x, &y);
        for k in 0..200 {
            let target = y[0] + (y[63] - y[0]) * k as f64 / 199.0;
            let inv = invert_monotone(&x, &y, target).unwrap();
            let seg = x.partition_point(|&v| v <= inv.x).clamp(1, 63) - 1;
            let back = hermite(x[seg], x[seg + 1], y[seg], y[seg + 1], s[seg], s[seg + 1], inv.x);
            assert!((back - target).abs() <= 1e-8 * target.abs().max(1.0));
        }
    }
}
