//! Dormand–Prince 5(4) with step-size control and landing on level
//! crossings of a scalar event function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorOptions {
    pub atol: f64,
    pub rtol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl IntegratorOptions {
    pub fn with_max_step(max_step: f64) -> Self {
        Self { max_step, ..Self::default() }
    }
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { atol: 1e-9, rtol: 1e-9, max_step: 0.01, min_step: 1e-14, max_steps: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Largest scaled local error estimate over accepted steps.
    pub max_error: f64,
    pub accepted: usize,
    pub rejected: usize,
}

/// Scalar function whose crossings of `levels` are step boundaries.
pub struct Events<'a> {
    pub function: &'a dyn Fn(&[f64]) -> f64,
    pub levels: &'a [f64],
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (c, k) in terms {
        for (o, v) in out.iter_mut().zip(k.iter()) {
            *o += h * c * v;
        }
    }
    out
}

/// One step; returns the fifth-order state and the scaled error norm.
fn step(rhs: &dyn Fn(&[f64]) -> Vec<f64>, y: &[f64], h: f64, opts: &IntegratorOptions) -> (Vec<f64>, f64) {
    let k1 = rhs(y);
    let k2 = rhs(&combine(y, h, &[(A21, &k1)]));
    let k3 = rhs(&combine(y, h, &[(A31, &k1), (A32, &k2)]));
    let k4 = rhs(&combine(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(&combine(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = rhs(&combine(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let y_new = combine(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = rhs(&y_new);
    let mut err: f64 = 0.0;
    for i in 0..y.len() {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
        err = err.max(e.abs() / scale);
    }
    (y_new, err)
}

fn crossed(levels: &[f64], a: f64, b: f64) -> Option<f64> {
    levels.iter().copied().find(|&l| (a - l) * (b - l) < 0.0)
}

/// Integrates the autonomous system `y' = rhs(y)` from `y0` over
/// `[0, t_end]`. When an event level is crossed inside a step, the step is
/// shortened by bisection so that it ends just past the level.
pub fn dopri5(
    rhs: &dyn Fn(&[f64]) -> Vec<f64>,
    y0: &[f64],
    t_end: f64,
    opts: &IntegratorOptions,
    events: Option<&Events>,
) -> Result<Solution> {
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter { name: "duration", reason: format!("must be finite and >= 0, got {t_end}") });
    }
    if !(opts.max_step > 0.0) || !(opts.atol > 0.0) {
        return Err(Error::InvalidParameter { name: "tolerance", reason: "atol and max_step must be positive".into() });
    }
    let mut sol = Solution { times: vec![0.0], states: vec![y0.to_vec()], max_error: 0.0, accepted: 0, rejected: 0 };
    let mut t = 0.0;
    let mut y = y0.to_vec();
    let mut h = opts.max_step.min(t_end);
    while t < t_end {
        if sol.accepted + sol.rejected >= opts.max_steps {
            return Err(Error::StepUnderflow { t, state: y });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h < opts.min_step && !last {
            return Err(Error::StepUnderflow { t, state: y });
        }
        let (mut y_new, err) = step(rhs, &y, h, opts);
        if !(err <= 1.0) {
            sol.rejected += 1;
            let factor = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.2, 0.9) } else { 0.2 };
            h *= factor;
            if h < opts.min_step {
                return Err(Error::StepUnderflow { t, state: y });
            }
            continue;
        }
        let mut h_taken = h;
        let mut err_taken = err;
        if let Some(ev) = events {
            let e0 = (ev.function)(&y);
            let e1 = (ev.function)(&y_new);
            if let Some(level) = crossed(ev.levels, e0, e1) {
                let (mut lo, mut hi) = (0.0, 1.0);
                let mut best = (y_new.clone(), err);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let (ym, em) = step(rhs, &y, mid * h, opts);
                    if ((ev.function)(&ym) - level) * (e0 - level) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                        best = (ym, em);
                    }
                    if (hi - lo) * h < opts.min_step {
                        break;
                    }
                }
                h_taken = hi * h;
                y_new = best.0;
                err_taken = best.1;
            }
        }
        t = if last && h_taken == h { t_end } else { t + h_taken };
        y = y_new;
        sol.accepted += 1;
        sol.max_error = sol.max_error.max(err_taken);
        sol.times.push(t);
        sol.states.push(y.clone());
        let factor = if err > 0.0 { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) } else { 5.0 };
        h = (h * factor).min(opts.max_step);
    }
    Ok(sol)
}
