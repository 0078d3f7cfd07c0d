//! Trapezoid quadrature on a symmetric interval with step halving.
//!
//! For integrands analytic in a strip and negligible at the endpoints the
//! trapezoid rule converges geometrically, so the difference between two
//! successive halvings is a safe error estimate.

use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: C64,
    pub err_est: f64,
    pub step: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct TrapezoidOptions {
    /// Largest admissible starting step.
    pub initial_step: f64,
    /// Absolute tolerance on successive estimates.
    pub tol: f64,
    pub max_halvings: usize,
}

impl Default for TrapezoidOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.25,
            tol: 1e-14,
            max_halvings: 14,
        }
    }
}

/// `∫_{-half}^{half} f(x) dx`; at least one halving is always performed.
pub fn trapezoid(f: impl Fn(f64) -> C64, half: f64, opts: TrapezoidOptions) -> Result<QuadResult> {
    let mut n = ((2.0 * half / opts.initial_step).ceil() as usize).max(2);
    let mut h = 2.0 * half / n as f64;
    let mut abs_sum = 0.0;
    let mut sum = C64::new(0.0, 0.0);
    for i in 0..=n {
        let v = f(-half + i as f64 * h);
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        sum += v * w;
        abs_sum += v.norm() * w;
    }
    let mut evaluations = n + 1;
    let mut estimate = sum * h;
    let mut last_diff = f64::INFINITY;
    for _ in 0..opts.max_halvings {
        let mut mid = C64::new(0.0, 0.0);
        for i in 0..n {
            let v = f(-half + (i as f64 + 0.5) * h);
            mid += v;
            abs_sum += v.norm();
        }
        evaluations += n;
        sum += mid;
        n *= 2;
        h /= 2.0;
        let next = sum * h;
        let diff = (next - estimate).norm();
        let rounding = 16.0 * f64::EPSILON * abs_sum * h;
        estimate = next;
        last_diff = diff;
        if diff <= opts.tol.max(rounding) {
            return Ok(QuadResult {
                value: estimate,
                err_est: diff + rounding,
                step: h,
                evaluations,
            });
        }
    }
    Err(Error::Quadrature {
        achieved: last_diff,
    })
}
