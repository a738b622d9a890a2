//! Adaptive Dormand–Prince 5(4) integration of `u'' = F(t, u, u')`.

use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::io::Table;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RkOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; chosen from the interval when `None`.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
    /// Stop at the first sign change of `u`.
    pub stop_at_zero: bool,
}

impl Default for RkOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            initial_step: None,
            max_steps: 2_000_000,
            stop_at_zero: false,
        }
    }
}

impl RkOptions {
    pub fn stopping(mut self) -> Self {
        self.stop_at_zero = true;
        self
    }

    /// Same options with a tighter tolerance, for witness revalidation.
    pub fn refined(mut self, factor: f64) -> Self {
        self.rtol /= factor;
        self.atol /= factor;
        self
    }
}

/// A zero of `u` located by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub t: f64,
    /// `u'` at the crossing.
    pub slope: f64,
    /// `u` and `u'` vanish together (within tolerance).
    pub tangential: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub crossings: Vec<Crossing>,
    pub accepted: usize,
    pub rejected: usize,
    /// Integration ended at a crossing before `t_end`.
    pub stopped_early: bool,
}

impl Trajectory {
    pub fn crossing_times(&self) -> Vec<f64> {
        self.crossings.iter().map(|c| c.t).collect()
    }

    pub fn end(&self) -> (f64, f64, f64) {
        let k = self.t.len() - 1;
        (self.t[k], self.u[k], self.du[k])
    }

    /// Linear interpolation of `u` at `t` inside the integrated range.
    pub fn u_at(&self, t: f64) -> Option<f64> {
        interp(&self.t, &self.u, t)
    }

    pub fn du_at(&self, t: f64) -> Option<f64> {
        interp(&self.t, &self.du, t)
    }

    pub fn to_table(&self) -> Table {
        let mut table = Table::new(vec!["t".into(), "u".into(), "du".into()]);
        for i in 0..self.t.len() {
            table.push(vec![self.t[i], self.u[i], self.du[i]]);
        }
        table
    }

    /// CSV with header `t,u,du`.
    pub fn to_csv(&self) -> String {
        self.to_table().to_csv()
    }
}

fn interp(ts: &[f64], ys: &[f64], t: f64) -> Option<f64> {
    if ts.is_empty() || t < ts[0] || t > ts[ts.len() - 1] {
        return None;
    }
    let k = ts.partition_point(|&s| s < t);
    if k == 0 {
        return Some(ys[0]);
    }
    let (t0, t1) = (ts[k - 1], ts[k]);
    if t1 == t0 {
        return Some(ys[k]);
    }
    let w = (t - t0) / (t1 - t0);
    Some(ys[k - 1] + w * (ys[k] - ys[k - 1]))
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
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

type State = [f64; 2];

fn axpy(y: State, h: f64, terms: &[(f64, State)]) -> State {
    let mut out = y;
    for &(c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One Dormand–Prince step; returns the fifth-order update and the error estimate.
fn dp_step<F: Fn(f64, f64, f64) -> f64>(rhs: &F, t: f64, y: State, h: f64) -> (State, State) {
    let f = |t: f64, y: State| -> State { [y[1], rhs(t, y[0], y[1])] };
    let k1 = f(t, y);
    let k2 = f(t + C2 * h, axpy(y, h, &[(A21, k1)]));
    let k3 = f(t + C3 * h, axpy(y, h, &[(A31, k1), (A32, k2)]));
    let k4 = f(t + C4 * h, axpy(y, h, &[(A41, k1), (A42, k2), (A43, k3)]));
    let k5 = f(
        t + C5 * h,
        axpy(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]),
    );
    let k6 = f(
        t + h,
        axpy(
            y,
            h,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        ),
    );
    let y5 = axpy(y, h, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
    let k7 = f(t + h, y5);
    let err = axpy(
        [0.0, 0.0],
        h,
        &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
    );
    (y5, err)
}

fn error_norm(y: State, y_new: State, err: State, opts: &RkOptions) -> f64 {
    let mut acc = 0.0;
    for i in 0..2 {
        let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
        acc += (err[i] / sc).powi(2);
    }
    (acc / 2.0).sqrt()
}

fn bisect_crossing<F: Fn(f64, f64, f64) -> f64>(rhs: &F, t: f64, y: State, h: f64) -> (f64, State) {
    let s0 = y[0].signum();
    let (mut lo, mut hi) = (0.0, h);
    let mut y_hi = dp_step(rhs, t, y, h).0;
    let tol = |t: f64| 1e-10f64.max(4.0 * f64::EPSILON * t.abs());
    while hi - lo > tol(t + hi) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let ym = dp_step(rhs, t, y, mid).0;
        if ym[0] == 0.0 {
            return (t + mid, ym);
        }
        if ym[0].signum() == s0 {
            lo = mid;
        } else {
            hi = mid;
            y_hi = ym;
        }
    }
    (t + hi, y_hi)
}

/// Integrates `u'' = rhs(t, u, u')` from `(t0, u0, du0)` to `t_end`.
pub fn integrate<F>(
    rhs: F,
    t0: f64,
    u0: f64,
    du0: f64,
    t_end: f64,
    opts: &RkOptions,
) -> Result<Trajectory>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(CurvError::InvalidArgument(format!(
            "integration interval [{t0}, {t_end}] is empty or not finite"
        )));
    }
    if !(opts.rtol > 0.0 && opts.atol >= 0.0) {
        return Err(CurvError::InvalidArgument(
            "tolerances must be positive".into(),
        ));
    }
    let mut t = t0;
    let mut y: State = [u0, du0];
    let mut h = opts
        .initial_step
        .unwrap_or(1e-3 * (t_end - t0).min(t0.abs().max(1.0)))
        .min(t_end - t0);
    let mut traj = Trajectory {
        t: vec![t0],
        u: vec![u0],
        du: vec![du0],
        crossings: Vec::new(),
        accepted: 0,
        rejected: 0,
        stopped_early: false,
    };
    while t < t_end {
        if traj.accepted + traj.rejected >= opts.max_steps {
            return Err(CurvError::StepBudget {
                steps: opts.max_steps,
                t,
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= 8.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(CurvError::StepUnderflow { t });
        }
        let (y_new, err) = dp_step(&rhs, t, y, h);
        let e = error_norm(y, y_new, err, opts);
        if !e.is_finite() || !y_new[0].is_finite() || !y_new[1].is_finite() {
            traj.rejected += 1;
            h *= 0.2;
            continue;
        }
        if e > 1.0 {
            traj.rejected += 1;
            h *= (0.9 * e.powf(-0.2)).max(0.2);
            continue;
        }
        traj.accepted += 1;
        let t_new = if last { t_end } else { t + h };
        let changed = y[0] != 0.0 && (y_new[0] == 0.0 || y_new[0].signum() != y[0].signum());
        if changed {
            let (tc, yc) = if y_new[0] == 0.0 {
                (t_new, y_new)
            } else {
                bisect_crossing(&rhs, t, y, t_new - t)
            };
            let slope_scale = opts.atol + opts.rtol * y[1].abs().max(1.0);
            traj.crossings.push(Crossing {
                t: tc,
                slope: yc[1],
                tangential: yc[1].abs() <= slope_scale,
            });
            if opts.stop_at_zero {
                traj.t.push(tc);
                traj.u.push(yc[0]);
                traj.du.push(yc[1]);
                traj.stopped_early = tc < t_end;
                return Ok(traj);
            }
        }
        t = t_new;
        y = y_new;
        traj.t.push(t);
        traj.u.push(y[0]);
        traj.du.push(y[1]);
        let grow = if e == 0.0 {
            5.0
        } else {
            (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= grow;
    }
    Ok(traj)
}
