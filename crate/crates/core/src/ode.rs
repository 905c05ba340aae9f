//! Classic fixed-step fourth-order Runge-Kutta.

use std::ops::{Add, Mul};

use crate::error::Result;

/// One RK4 step of `ẏ = f(s, y)` from `(s, y)` with step `h`.
pub fn rk4_step<S, F>(f: &F, s: f64, y: S, h: f64) -> Result<S>
where
    S: Copy + Add<Output = S> + Mul<f64, Output = S>,
    F: Fn(f64, S) -> Result<S>,
{
    let k1 = f(s, y)?;
    let k2 = f(s + 0.5 * h, y + k1 * (0.5 * h))?;
    let k3 = f(s + 0.5 * h, y + k2 * (0.5 * h))?;
    let k4 = f(s + h, y + k3 * h)?;
    Ok(y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

/// Splits `[0, span]` into the smallest number of equal steps not longer than `step`.
pub fn step_count(span: f64, step: f64) -> usize {
    if span == 0.0 {
        return 0;
    }
    ((span.abs() / step).ceil() as usize).max(1)
}

/// Integrates from `s0` to `s1` with equal steps no longer than `step`,
/// returning every grid point including both ends.
pub fn rk4_trajectory<S, F>(f: &F, s0: f64, y0: S, s1: f64, step: f64) -> Result<Vec<(f64, S)>>
where
    S: Copy + Add<Output = S> + Mul<f64, Output = S>,
    F: Fn(f64, S) -> Result<S>,
{
    let n = step_count(s1 - s0, step);
    let mut out = Vec::with_capacity(n + 1);
    out.push((s0, y0));
    if n == 0 {
        return Ok(out);
    }
    let h = (s1 - s0) / n as f64;
    let mut y = y0;
    for i in 0..n {
        let s = s0 + i as f64 * h;
        y = rk4_step(f, s, y, h)?;
        out.push((s0 + (i + 1) as f64 * h, y));
    }
    Ok(out)
}

/// Like [`rk4_trajectory`] but keeps only the end point.
pub fn rk4_integrate<S, F>(f: &F, s0: f64, y0: S, s1: f64, step: f64) -> Result<S>
where
    S: Copy + Add<Output = S> + Mul<f64, Output = S>,
    F: Fn(f64, S) -> Result<S>,
{
    let n = step_count(s1 - s0, step);
    if n == 0 {
        return Ok(y0);
    }
    let h = (s1 - s0) / n as f64;
    let mut y = y0;
    for i in 0..n {
        y = rk4_step(f, s0 + i as f64 * h, y, h)?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Clone, Copy)]
    struct Scalar(f64);
    impl Add for Scalar {
        type Output = Scalar;
        fn add(self, o: Scalar) -> Scalar {
            Scalar(self.0 + o.0)
        }
    }
    impl Mul<f64> for Scalar {
        type Output = Scalar;
        fn mul(self, o: f64) -> Scalar {
            Scalar(self.0 * o)
        }
    }

    #[test]
    fn fourth_order_on_exponential() {
        let f = |_s: f64, y: Scalar| Ok(y);
        let err = |n: usize| {
            let y = rk4_integrate(&f, 0.0, Scalar(1.0), 1.0, 1.0 / n as f64).unwrap();
            (y.0 - 1f64.exp()).abs()
        };
        let ratio = err(16) / err(32);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn trajectory_has_both_ends() {
        let f = |_s: f64, _y: Scalar| Ok(Scalar(1.0));
        let tr = rk4_trajectory(&f, 0.0, Scalar(0.0), 2.0, 0.3).unwrap();
        assert_eq!(tr.len(), 8);
        assert!((tr.last().unwrap().0 - 2.0).abs() < 1e-15);
        assert!((tr.last().unwrap().1 .0 - 2.0).abs() < 1e-14);
        assert_eq!(step_count(0.0, 0.1), 0);
    }
}
