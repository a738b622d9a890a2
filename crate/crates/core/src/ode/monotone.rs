use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{OdeForm, OdeSpec};
use crate::error::{CurvError, Result};
use crate::expr::parse;
use crate::io::Table;

type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Ordered lower and upper barriers.
#[derive(Clone)]
pub struct SubSuperPair {
    u_minus: Profile,
    u_plus: Profile,
}

impl std::fmt::Debug for SubSuperPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SubSuperPair")
    }
}

impl SubSuperPair {
    pub fn new(
        u_minus: impl Fn(f64) -> f64 + Send + Sync + 'static,
        u_plus: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            u_minus: Arc::new(u_minus),
            u_plus: Arc::new(u_plus),
        }
    }

    /// Barriers given as expressions in `t`.
    pub fn parse(u_minus: &str, u_plus: &str) -> Result<Self> {
        let lo = parse(u_minus, 0)?;
        let hi = parse(u_plus, 0)?;
        Ok(Self::new(move |t| lo.eval(&[t]), move |t| hi.eval(&[t])))
    }

    pub fn u_minus(&self, t: f64) -> f64 {
        (self.u_minus)(t)
    }

    pub fn u_plus(&self, t: f64) -> f64 {
        (self.u_plus)(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryValues {
    pub left: f64,
    pub right: f64,
}

/// Declared constants of `-a² ≤ R ≤ -C/t^α` for `t ≥ t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBounds {
    pub a: f64,
    pub c: f64,
    pub alpha: f64,
}

impl CurvatureBounds {
    pub fn validate(&self, n: usize) -> Result<()> {
        let nn = n as f64 * (n as f64 - 1.0);
        if !(self.a > 0.0 && self.c > 0.0 && self.alpha > 0.0) {
            return Err(CurvError::InvalidArgument(
                "a, C and alpha must be positive".into(),
            ));
        }
        if self.alpha > 2.0 {
            return Err(CurvError::InvalidArgument(format!(
                "hypothesis alpha <= 2 violated (alpha = {})",
                self.alpha
            )));
        }
        if self.alpha == 2.0 && !(self.c > nn) {
            return Err(CurvError::InvalidArgument(format!(
                "hypothesis C > n(n-1) = {nn} violated for alpha = 2 (C = {})",
                self.c
            )));
        }
        Ok(())
    }

    /// Checks the declared bounds on `R` at the grid points.
    pub fn check_curvature(&self, spec: &OdeSpec, grid: &[f64]) -> Result<()> {
        for &t in grid {
            let r = spec.curvature(t);
            let tol = 1e-12 * r.abs().max(1.0);
            if r < -self.a * self.a - tol {
                return Err(CurvError::InvalidArgument(format!(
                    "hypothesis R >= -a^2 violated at t = {t} (R = {r})"
                )));
            }
            if r > -self.c / t.powf(self.alpha) + tol {
                return Err(CurvError::InvalidArgument(format!(
                    "hypothesis R <= -C/t^alpha violated at t = {t} (R = {r})"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotoneOptions {
    /// Grid points including both ends.
    pub points: usize,
    /// Stop when the largest update falls below `tol` times the solution scale.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MonotoneOptions {
    fn default() -> Self {
        Self {
            points: 801,
            tol: 1e-14,
            max_iter: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneSolution {
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub iterations: usize,
    /// Max-norm of the discrete equation residual.
    pub residual: f64,
    /// Max-norm of the continuous residual with a fourth-order `u''` applied
    /// to the discrete solution; second order in the grid spacing.
    pub consistency_residual: f64,
    /// Every iterate stayed inside the bracket and increased pointwise.
    pub bracketed_and_monotone: bool,
}

impl MonotoneSolution {
    pub fn to_table(&self) -> Table {
        let mut table = Table::new(vec!["t".into(), "u".into()]);
        for (t, u) in self.t.iter().zip(&self.u) {
            table.push(vec![*t, *u]);
        }
        table
    }

    pub fn min(&self) -> f64 {
        self.u.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `G(u) = R u - R(g) u^q`, so the equation reads `k u'' + G(u) = 0`.
fn nonlinearity(spec: &OdeSpec, t: f64, u: f64) -> f64 {
    spec.residual(t, u, 0.0)
}

fn discrete_residuals(spec: &OdeSpec, t: &[f64], u: &[f64], h: f64) -> Vec<f64> {
    let k = spec.constants().ode_coefficient();
    (1..t.len() - 1)
        .map(|i| k * (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h) + nonlinearity(spec, t[i], u[i]))
        .collect()
}

fn thomas(sub: f64, diag: &[f64], sup: f64, rhs: &mut [f64]) {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut b = diag[0];
    c[0] = sup / b;
    rhs[0] /= b;
    for i in 1..m {
        b = diag[i] - sub * c[i - 1];
        c[i] = sup / b;
        rhs[i] = (rhs[i] - sub * rhs[i - 1]) / b;
    }
    for i in (0..m - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

/// Monotone iteration for the full-form boundary value problem on `[t0, T]`,
/// started from `u_minus`.
pub fn monotone_solve(
    spec: &OdeSpec,
    pair: &SubSuperPair,
    bc: BoundaryValues,
    hyps: &CurvatureBounds,
    opts: &MonotoneOptions,
) -> Result<MonotoneSolution> {
    if spec.form() != OdeForm::Eq31 {
        return Err(CurvError::InvalidArgument(format!(
            "monotone solve needs form eq31, got {}",
            spec.form().tag()
        )));
    }
    hyps.validate(spec.n())?;
    if opts.points < 5 {
        return Err(CurvError::InvalidArgument(
            "at least 5 grid points are needed".into(),
        ));
    }
    let m = opts.points;
    let (t0, t1) = (spec.t0(), spec.t_end());
    let h = (t1 - t0) / (m - 1) as f64;
    let t: Vec<f64> = (0..m)
        .map(|i| if i == m - 1 { t1 } else { t0 + h * i as f64 })
        .collect();
    hyps.check_curvature(spec, &t)?;
    let lo: Vec<f64> = t.iter().map(|&s| pair.u_minus(s)).collect();
    let hi: Vec<f64> = t.iter().map(|&s| pair.u_plus(s)).collect();
    for i in 0..m {
        if !(lo[i] > 0.0) {
            return Err(CurvError::NonPositive {
                quantity: "u_minus",
                t: t[i],
                value: lo[i],
            });
        }
        if !(lo[i] <= hi[i]) {
            return Err(CurvError::OrderingViolated { t: t[i] });
        }
    }
    let scale = hi.iter().copied().fold(0.0, f64::max);
    let slack = 1e-12 * scale;
    if !(lo[0] - slack <= bc.left && bc.left <= hi[0] + slack)
        || !(lo[m - 1] - slack <= bc.right && bc.right <= hi[m - 1] + slack)
    {
        return Err(CurvError::InvalidArgument(
            "boundary values must lie between u_minus and u_plus".into(),
        ));
    }

    let k = spec.constants().ode_coefficient();
    let barrier_tol = 1e-9 * scale.max(1.0);
    let mut start = lo.clone();
    start[0] = bc.left;
    start[m - 1] = bc.right;
    for (i, r) in discrete_residuals(spec, &t, &start, h)
        .into_iter()
        .enumerate()
    {
        if r < -barrier_tol {
            return Err(CurvError::NotABarrier {
                role: "subsolution",
                t: t[i + 1],
                residual: r,
            });
        }
    }
    let mut top = hi.clone();
    top[0] = bc.left;
    top[m - 1] = bc.right;
    for (i, r) in discrete_residuals(spec, &t, &top, h)
        .into_iter()
        .enumerate()
    {
        if r > barrier_tol {
            return Err(CurvError::NotABarrier {
                role: "supersolution",
                t: t[i + 1],
                residual: r,
            });
        }
    }

    // Shift dominating -G'(u) on the bracket; G' is smallest at u_plus.
    let q = spec.constants().nonlin_exp;
    let lambda: Vec<f64> = (0..m)
        .map(|i| {
            let r = spec.curvature(t[i]);
            let slope = if q == 0.0 {
                r
            } else {
                r - spec.r_g() * q * hi[i].powf(q - 1.0)
            };
            (-slope).max(0.0)
        })
        .collect();
    let diag: Vec<f64> = (1..m - 1).map(|i| 2.0 * k / (h * h) + lambda[i]).collect();
    let off = -k / (h * h);

    let mut u = start;
    let mut iterations = 0;
    loop {
        if iterations >= opts.max_iter {
            let res = discrete_residuals(spec, &t, &u, h)
                .into_iter()
                .fold(0.0, |a: f64, r| a.max(r.abs()));
            return Err(CurvError::NotConverged {
                iterations,
                residual: res,
            });
        }
        iterations += 1;
        let mut rhs: Vec<f64> = (1..m - 1)
            .map(|i| nonlinearity(spec, t[i], u[i]) + lambda[i] * u[i])
            .collect();
        rhs[0] -= off * u[0];
        rhs[m - 3] -= off * u[m - 1];
        thomas(off, &diag, off, &mut rhs);
        let mut change: f64 = 0.0;
        for i in 1..m - 1 {
            let new = rhs[i - 1];
            if new < lo[i] - slack || new > hi[i] + slack {
                return Err(CurvError::LeftBracket {
                    iterate: iterations,
                    t: t[i],
                });
            }
            if new < u[i] - slack {
                return Err(CurvError::NotMonotone {
                    iterate: iterations,
                    t: t[i],
                });
            }
            change = change.max((new - u[i]).abs());
            u[i] = new;
        }
        if change <= opts.tol * scale {
            break;
        }
    }
    let residual = discrete_residuals(spec, &t, &u, h)
        .into_iter()
        .fold(0.0, |a: f64, r| a.max(r.abs()));
    let consistency_residual = (2..m - 2)
        .map(|i| {
            let d2 = (-u[i + 2] + 16.0 * u[i + 1] - 30.0 * u[i] + 16.0 * u[i - 1] - u[i - 2])
                / (12.0 * h * h);
            (k * d2 + nonlinearity(spec, t[i], u[i])).abs()
        })
        .fold(0.0, f64::max);
    Ok(MonotoneSolution {
        t,
        u,
        iterations,
        residual,
        consistency_residual,
        bracketed_and_monotone: true,
    })
}
