//! Adaptive fifth-order integrator with dense output.
//!
//! Dormand-Prince 5(4) pair with the standard quartic interpolant per
//! accepted step. The right-hand side is partial: it returns None on states
//! it cannot evaluate (for the shooting system, a nonpositive profile), and
//! the step is rejected as if the error estimate had failed. Integration in
//! either direction is supported.

use crate::error::{Error, Result};

/// State vector of the reduced second-order system.
pub type State = [f64; 2];

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Integrator controls.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; defaults to a hundredth of the span.
    pub h0: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h0: None,
            max_steps: 100_000,
        }
    }
}

/// One accepted step with its interpolant coefficients.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    cont: [State; 5],
}

impl DenseStep {
    /// Quartic interpolant, valid for t between `t0` and `t0 + h`.
    pub fn eval(&self, t: f64) -> State {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut y = [0.0; 2];
        for i in 0..2 {
            y[i] = self.cont[0][i]
                + s * (self.cont[1][i]
                    + s1 * (self.cont[2][i]
                        + s * (self.cont[3][i] + s1 * self.cont[4][i])));
        }
        y
    }
}

/// Accepted-step history of one integration.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub steps: Vec<DenseStep>,
    pub t_start: f64,
    pub t_end: f64,
    pub y_end: State,
    pub accepted: usize,
    pub rejected: usize,
}

impl OdeSolution {
    /// Evaluates the dense interpolant; t is clamped to the covered span.
    pub fn eval(&self, t: f64) -> State {
        let dir = (self.t_end - self.t_start).signum();
        let idx = self
            .steps
            .partition_point(|s| (s.t0 + s.h - t) * dir < 0.0)
            .min(self.steps.len() - 1);
        self.steps[idx].eval(t)
    }
}

/// Integrates from `t0` to `t_end` (either direction) with dense output.
pub fn integrate<F>(mut rhs: F, t0: f64, t_end: f64, y0: State, opts: &OdeOptions) -> Result<OdeSolution>
where
    F: FnMut(f64, &State) -> Option<State>,
{
    let span = t_end - t0;
    assert!(span != 0.0, "empty integration span");
    let dir = span.signum();
    let mut h = opts.h0.unwrap_or(span / 100.0);
    if h == 0.0 || h.signum() != dir {
        h = span / 100.0;
    }
    if h.abs() > span.abs() {
        h = span;
    }
    let h_min = 1e-14 * span.abs().max(t0.abs()).max(1.0);
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y).ok_or(Error::SingularIntegration { theta: t })?;
    let mut steps = Vec::new();
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut invalid_since_accept = false;
    let mut just_rejected = false;
    while (t - t_end) * dir < -h_min {
        if accepted + rejected > opts.max_steps {
            return Err(Error::StepFailure { theta: t, step: h });
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        match attempt_step(&mut rhs, t, &y, &k1, h, opts) {
            Some(attempt) if attempt.err <= 1.0 => {
                steps.push(DenseStep {
                    t0: t,
                    h,
                    cont: attempt.cont,
                });
                t += h;
                y = attempt.y_new;
                k1 = attempt.k_last;
                accepted += 1;
                invalid_since_accept = false;
                let mut fac = (0.9 * attempt.err.max(1e-12).powf(-0.2)).clamp(0.2, 5.0);
                if just_rejected {
                    fac = fac.min(1.0);
                }
                just_rejected = false;
                h *= fac;
            }
            Some(attempt) => {
                rejected += 1;
                just_rejected = true;
                let fac = if attempt.err.is_finite() {
                    (0.9 * attempt.err.powf(-0.2)).clamp(0.2, 0.9)
                } else {
                    0.2
                };
                h *= fac;
            }
            None => {
                rejected += 1;
                just_rejected = true;
                invalid_since_accept = true;
                h *= 0.5;
            }
        }
        if h.abs() < h_min {
            return Err(if invalid_since_accept {
                Error::SingularIntegration { theta: t }
            } else {
                Error::StepFailure { theta: t, step: h }
            });
        }
    }
    if steps.is_empty() {
        return Err(Error::StepFailure { theta: t0, step: h });
    }
    Ok(OdeSolution {
        steps,
        t_start: t0,
        t_end: t,
        y_end: y,
        accepted,
        rejected,
    })
}

struct StepAttempt {
    y_new: State,
    k_last: State,
    err: f64,
    cont: [State; 5],
}

fn attempt_step<F>(
    rhs: &mut F,
    t: f64,
    y: &State,
    k1: &State,
    h: f64,
    opts: &OdeOptions,
) -> Option<StepAttempt>
where
    F: FnMut(f64, &State) -> Option<State>,
{
    let stage = |ks: &[&State], a: &[f64]| -> State {
        let mut out = *y;
        for (k, &ai) in ks.iter().zip(a) {
            out[0] += h * ai * k[0];
            out[1] += h * ai * k[1];
        }
        out
    };
    let k2 = rhs(t + C[1] * h, &stage(&[k1], &A2))?;
    let k3 = rhs(t + C[2] * h, &stage(&[k1, &k2], &A3))?;
    let k4 = rhs(t + C[3] * h, &stage(&[k1, &k2, &k3], &A4))?;
    let k5 = rhs(t + C[4] * h, &stage(&[k1, &k2, &k3, &k4], &A5))?;
    let k6 = rhs(t + C[5] * h, &stage(&[k1, &k2, &k3, &k4, &k5], &A6))?;
    let y_new = stage(&[k1, &k2, &k3, &k4, &k5, &k6], &B);
    let k7 = rhs(t + h, &y_new)?;
    let ks = [k1, &k2, &k3, &k4, &k5, &k6, &k7];
    let mut err_sq = 0.0;
    for i in 0..2 {
        let mut e = 0.0;
        for (k, &ei) in ks.iter().zip(&E) {
            e += ei * k[i];
        }
        e *= h;
        let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
        err_sq += (e / sc) * (e / sc);
    }
    let err = (err_sq / 2.0).sqrt();
    let mut cont = [[0.0; 2]; 5];
    for i in 0..2 {
        let ydiff = y_new[i] - y[i];
        let bspl = h * k1[i] - ydiff;
        let mut dsum = 0.0;
        for (k, &di) in ks.iter().zip(&D) {
            dsum += di * k[i];
        }
        cont[0][i] = y[i];
        cont[1][i] = ydiff;
        cont[2][i] = bspl;
        cont[3][i] = ydiff - h * k7[i] - bspl;
        cont[4][i] = h * dsum;
    }
    Some(StepAttempt {
        y_new,
        k_last: k7,
        err,
        cont,
    })
}
