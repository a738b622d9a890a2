//! Radial ODE solvers and comparison certificates.
//!
//! The prescribed-curvature equation `(4n/(n+1)) u'' + R u = R(g) u^((n-3)/(n+1))`
//! is integrated as an initial value problem ([`shoot`]) or solved between an
//! ordered sub/supersolution pair ([`monotone_solve`]). Certificates integrate
//! the equality case of a differential inequality and report the zero crossing,
//! decay bound or ray length that the inequality forces.

mod average;
mod certificates;
mod monotone;
mod oscillation;
pub mod rk;
mod verdict;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dims::DimensionConstants;
use crate::error::{CurvError, Result};
use crate::expr::{parse, Expr};

pub use average::{average_over_base, AveragedKind, AveragedProfile, Weight};
pub use certificates::{barrier_certificate_33, comparison_certificate, CertificateParams};
pub use monotone::{
    monotone_solve, BoundaryValues, CurvatureBounds, MonotoneOptions, MonotoneSolution,
    SubSuperPair,
};
pub use oscillation::oscillation_certificate;
pub use rk::{Crossing, RkOptions, Trajectory};
pub use verdict::{DecayWitness, Verdict, VerdictKind};

/// Which reading of the radial equation a spec uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OdeForm {
    /// `(4n/(n+1)) u'' + R u = R(g) u^q`.
    Eq13,
    /// Same equation with `R(g) = -n(n-1)`.
    Eq31,
    /// Linear comparison form `u'' + R(t) u = 0`.
    Averaged,
}

impl OdeForm {
    pub fn tag(self) -> &'static str {
        match self {
            OdeForm::Eq13 => "eq13",
            OdeForm::Eq31 => "eq31",
            OdeForm::Averaged => "averaged",
        }
    }
}

impl std::str::FromStr for OdeForm {
    type Err = CurvError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq13" => Ok(OdeForm::Eq13),
            "eq31" => Ok(OdeForm::Eq31),
            "averaged" => Ok(OdeForm::Averaged),
            other => Err(CurvError::InvalidArgument(format!(
                "unknown ODE form '{other}' (expected eq13, eq31 or averaged)"
            ))),
        }
    }
}

pub type CurvatureFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct OdeSpec {
    n: usize,
    r: CurvatureFn,
    r_source: Option<String>,
    r_g: f64,
    t0: f64,
    t_end: f64,
    form: OdeForm,
}

impl fmt::Debug for OdeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OdeSpec")
            .field("n", &self.n)
            .field("r", &self.r_source.as_deref().unwrap_or("<fn>"))
            .field("r_g", &self.r_g)
            .field("t0", &self.t0)
            .field("t_end", &self.t_end)
            .field("form", &self.form)
            .finish()
    }
}

impl OdeSpec {
    pub fn new(
        n: usize,
        r: impl Fn(f64) -> f64 + Send + Sync + 'static,
        r_g: f64,
        t0: f64,
        t_end: f64,
        form: OdeForm,
    ) -> Result<Self> {
        if n < 2 {
            return Err(CurvError::DimensionTooSmall {
                required: 2,
                got: n,
            });
        }
        if !(t0 > 0.0 && t_end > t0 && t_end.is_finite()) {
            return Err(CurvError::InvalidArgument(format!(
                "domain [{t0}, {t_end}] must satisfy 0 < t0 < T < inf"
            )));
        }
        if !r_g.is_finite() {
            return Err(CurvError::InvalidArgument("R(g) must be finite".into()));
        }
        let nf = n as f64;
        if form == OdeForm::Eq31 && r_g != -nf * (nf - 1.0) {
            return Err(CurvError::InvalidArgument(format!(
                "form eq31 needs R(g) = -n(n-1) = {}, got {r_g}",
                -nf * (nf - 1.0)
            )));
        }
        Ok(Self {
            n,
            r: Arc::new(r),
            r_source: None,
            r_g,
            t0,
            t_end,
            form,
        })
    }

    /// `R` given as an expression in `t`.
    pub fn from_expr(
        n: usize,
        r: &str,
        r_g: f64,
        t0: f64,
        t_end: f64,
        form: OdeForm,
    ) -> Result<Self> {
        let expr: Expr = parse(r, 0)?;
        let mut spec = Self::new(n, move |t| expr.eval(&[t]), r_g, t0, t_end, form)?;
        spec.r_source = Some(r.to_string());
        Ok(spec)
    }

    /// Eq31 spec, which fixes `R(g) = -n(n-1)`.
    pub fn eq31(
        n: usize,
        r: impl Fn(f64) -> f64 + Send + Sync + 'static,
        t0: f64,
        t_end: f64,
    ) -> Result<Self> {
        let nf = n as f64;
        Self::new(n, r, -nf * (nf - 1.0), t0, t_end, OdeForm::Eq31)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r_g(&self) -> f64 {
        self.r_g
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn form(&self) -> OdeForm {
        self.form
    }

    pub fn r_source(&self) -> Option<&str> {
        self.r_source.as_deref()
    }

    pub fn constants(&self) -> DimensionConstants {
        DimensionConstants::new(self.n)
    }

    pub fn curvature(&self, t: f64) -> f64 {
        (self.r)(t)
    }

    /// `u^q`, continued to `u ≤ 0` as `sign(u)|u|^q` (and `1` when `q = 0`)
    /// so that trajectories can be followed through a crossing.
    fn nonlinear(&self, u: f64) -> f64 {
        let q = self.constants().nonlin_exp;
        if q == 0.0 {
            1.0
        } else {
            u.signum() * u.abs().powf(q)
        }
    }

    /// `u''` as a function of `(t, u)`.
    pub fn second_derivative(&self, t: f64, u: f64) -> f64 {
        match self.form {
            OdeForm::Averaged => -self.curvature(t) * u,
            OdeForm::Eq13 | OdeForm::Eq31 => {
                let k = self.constants().ode_coefficient();
                (self.r_g * self.nonlinear(u) - self.curvature(t) * u) / k
            }
        }
    }

    /// Residual of the equation for a given `(u, u'')`.
    pub fn residual(&self, t: f64, u: f64, d2u: f64) -> f64 {
        match self.form {
            OdeForm::Averaged => d2u + self.curvature(t) * u,
            OdeForm::Eq13 | OdeForm::Eq31 => {
                let k = self.constants().ode_coefficient();
                k * d2u + self.curvature(t) * u - self.r_g * self.nonlinear(u)
            }
        }
    }
}

/// Integrates the spec from `u(t0) = u0`, `u'(t0) = du0` to `T`.
pub fn shoot(spec: &OdeSpec, u0: f64, du0: f64, opts: &RkOptions) -> Result<Trajectory> {
    if !(u0 > 0.0) {
        return Err(CurvError::InvalidArgument(format!(
            "u0 must be positive, got {u0}"
        )));
    }
    if !du0.is_finite() {
        return Err(CurvError::InvalidArgument("du0 must be finite".into()));
    }
    let r0 = spec.curvature(spec.t0);
    if !r0.is_finite() {
        return Err(CurvError::OutOfDomain {
            t: spec.t0,
            min: spec.t0,
        });
    }
    rk::integrate(
        |t, u, _| spec.second_derivative(t, u),
        spec.t0,
        u0,
        du0,
        spec.t_end,
        opts,
    )
}

/// Which proof a transform belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    /// `u = t^α v` for `t² u'' + (c/4) u ≤ 0`.
    Euler,
    /// `U = t^α v` for the base-averaged equation of the `t^(2/(n+1))` end.
    AveragedPower,
    /// `U = f^α v` for the base-averaged equation of a warped end.
    WarpPower,
}

/// Substitution exponents and constants of a comparison argument; the
/// defining relation is verified on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTransform {
    pub kind: TransformKind,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub c: f64,
}

const RELATION_TOL: f64 = 1e-12;

fn check_relation(name: &str, defect: f64) -> Result<()> {
    if defect.abs() > RELATION_TOL {
        return Err(CurvError::InvalidArgument(format!(
            "transform relation {name} fails by {defect:e}"
        )));
    }
    Ok(())
}

impl ComparisonTransform {
    /// `u = t^α v` with `β = 2α < 1` and `δ² = (c-1)/4`.
    pub fn euler(c: f64, alpha: f64) -> Result<Self> {
        if !(c > 1.0) {
            return Err(CurvError::InvalidArgument(format!("needs c > 1, got {c}")));
        }
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(CurvError::InvalidArgument(format!(
                "needs 0 < alpha < 1/2, got {alpha}"
            )));
        }
        let delta = ((c - 1.0) / 4.0).sqrt();
        let t = Self {
            kind: TransformKind::Euler,
            alpha,
            beta: 2.0 * alpha,
            delta,
            epsilon: 0.0,
            c,
        };
        t.verify()?;
        Ok(t)
    }

    /// `U = t^α v` with `α = -(n-1)/2`; `epsilon` is the coefficient of the
    /// nonlinear term.
    pub fn averaged_power(n: usize, epsilon: f64) -> Result<Self> {
        if n < 3 {
            return Err(CurvError::DimensionTooSmall {
                required: 3,
                got: n,
            });
        }
        let t = Self {
            kind: TransformKind::AveragedPower,
            alpha: -(n as f64 - 1.0) / 2.0,
            beta: n as f64 / (n as f64 + 1.0) - (n as f64 - 1.0),
            delta: 0.0,
            epsilon,
            c: n as f64,
        };
        t.verify()?;
        Ok(t)
    }

    /// `U = f^α v` with `n + 2α = 1`; `delta` is the constant of the resulting
    /// inequality `(f v')' ≤ -δ v / f`.
    pub fn warp_power(n: usize, delta: f64) -> Result<Self> {
        if n < 3 {
            return Err(CurvError::DimensionTooSmall {
                required: 3,
                got: n,
            });
        }
        let t = Self {
            kind: TransformKind::WarpPower,
            alpha: (1.0 - n as f64) / 2.0,
            beta: 0.0,
            delta,
            epsilon: 0.0,
            c: n as f64,
        };
        t.verify()?;
        Ok(t)
    }

    pub fn verify(&self) -> Result<()> {
        match self.kind {
            TransformKind::Euler => {
                check_relation("beta = 2 alpha", self.beta - 2.0 * self.alpha)?;
                check_relation(
                    "delta^2 = (c-1)/4",
                    self.delta * self.delta - (self.c - 1.0) / 4.0,
                )?;
                let a = self.alpha;
                check_relation(
                    "alpha(alpha-1) + c/4 = (alpha-1/2)^2 + delta^2",
                    a * (a - 1.0) + self.c / 4.0 - (a - 0.5).powi(2) - self.delta * self.delta,
                )
            }
            TransformKind::AveragedPower => {
                let n = self.c;
                let p = (n + 3.0) / (n - 1.0);
                check_relation("alpha - 2 - p alpha = 0", self.alpha - 2.0 - p * self.alpha)?;
                check_relation(
                    "beta = n/(n+1) + 2 alpha",
                    self.beta - (n / (n + 1.0) + 2.0 * self.alpha),
                )?;
                if !(self.beta - 2.0 < -1.0) {
                    return Err(CurvError::InvalidArgument(
                        "power beta - 2 must be below -1".into(),
                    ));
                }
                if !(averaged_quadratic(n, self.alpha) > 0.0) {
                    return Err(CurvError::InvalidArgument(
                        "q(alpha) must be positive".into(),
                    ));
                }
                Ok(())
            }
            TransformKind::WarpPower => {
                check_relation("n + 2 alpha = 1", self.c + 2.0 * self.alpha - 1.0)
            }
        }
    }
}

/// `q(α) = α² - α/(n+1) - (n-1)/(4(n+1))`.
pub fn averaged_quadratic(n: f64, alpha: f64) -> f64 {
    alpha * alpha - alpha / (n + 1.0) - (n - 1.0) / (4.0 * (n + 1.0))
}
