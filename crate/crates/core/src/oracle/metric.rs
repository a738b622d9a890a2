use nalgebra::DMatrix;

use super::dd::Dd;
use crate::error::{CurvError, Result};
use crate::expr::{Expr, Scalar};
use crate::polar::{ConformalFactorField, PolarWarpField};
use crate::warp::{BaseGeometry, BaseKind, WarpProfile};

pub const DEFAULT_STEP: f64 = 1e-3;

/// Coordinate chart of the base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseChart {
    /// Identity components on the torus.
    Flat,
    /// Geodesic polar chart `dψ² + s_K(ψ)² dΩ²` of constant sectional curvature `K`,
    /// coordinates `(ψ, θ1, ..., θ_{n-1})`.
    SpaceForm { curvature: f64 },
}

impl BaseChart {
    /// Diagonal entries of `g` at `x`.
    fn diagonal<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let n = x.len();
        match *self {
            BaseChart::Flat => vec![S::from_f64(1.0); n],
            BaseChart::SpaceForm { curvature } => {
                let psi = x[0];
                let s = if curvature > 0.0 {
                    let k = curvature.sqrt();
                    (psi * S::from_f64(k)).sin() / S::from_f64(k)
                } else if curvature < 0.0 {
                    let k = (-curvature).sqrt();
                    (psi * S::from_f64(k)).sinh() / S::from_f64(k)
                } else {
                    psi
                };
                let mut out = Vec::with_capacity(n);
                out.push(S::from_f64(1.0));
                let mut w = s * s;
                for xk in &x[1..n] {
                    out.push(w);
                    let st = xk.sin();
                    w = w * st * st;
                }
                out
            }
        }
    }
}

/// Warp source accepted by [`assemble_metric`].
#[derive(Debug, Clone, Copy)]
pub enum WarpSource<'a> {
    Radial(&'a WarpProfile),
    Polar(&'a PolarWarpField),
}

/// Component evaluator for `u^(4/(n-1)) (dt² + f(t,x)² g(x))` in a fixed chart.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGrid {
    n: usize,
    warp: Expr,
    chart: BaseChart,
    conformal: Option<Expr>,
    domain_min: f64,
    step: f64,
}

/// Builds the component evaluator. Abstract-constant bases are realized by
/// the space form with the same scalar curvature.
pub fn assemble_metric(
    f: WarpSource<'_>,
    base: &BaseGeometry,
    conformal: Option<&ConformalFactorField>,
    h: f64,
) -> Result<MetricGrid> {
    let n = base.n();
    let (warp, domain_min) = match f {
        WarpSource::Radial(p) => (p.expr().clone(), p.domain_min()),
        WarpSource::Polar(p) => {
            if p.n() != n {
                return Err(CurvError::IncompatibleGrid(format!(
                    "warp field has {} base coordinates, base has dimension {n}",
                    p.n()
                )));
            }
            (p.field().expr().clone(), 0.0)
        }
    };
    let chart = match base.kind() {
        BaseKind::TorusGrid(_) => BaseChart::Flat,
        BaseKind::SphereAnalytic { radius } => BaseChart::SpaceForm {
            curvature: 1.0 / (radius * radius),
        },
        BaseKind::AbstractConstant => BaseChart::SpaceForm {
            curvature: base.scalar_curvature() / (n as f64 * (n as f64 - 1.0)),
        },
    };
    let x_dependent =
        warp.depends_on_base() || conformal.is_some_and(|u| u.field().depends_on_base());
    if x_dependent && chart != BaseChart::Flat {
        return Err(CurvError::InvalidBase(format!(
            "x-dependent data needs a torus base, got {}",
            base.kind().tag()
        )));
    }
    MetricGrid::new(
        n,
        warp,
        chart,
        conformal.map(|u| u.field().expr().clone()),
        domain_min,
        h,
    )
}

impl MetricGrid {
    pub fn new(
        n: usize,
        warp: Expr,
        chart: BaseChart,
        conformal: Option<Expr>,
        domain_min: f64,
        step: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(CurvError::DimensionTooSmall {
                required: 2,
                got: n,
            });
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(CurvError::InvalidArgument(format!(
                "step must be positive, got {step}"
            )));
        }
        for e in std::iter::once(&warp).chain(conformal.as_ref()) {
            if e.max_var().is_some_and(|v| v > n) {
                return Err(CurvError::InvalidArgument(
                    "expression references a coordinate beyond the base dimension".into(),
                ));
            }
        }
        Ok(Self {
            n,
            warp,
            chart,
            conformal,
            domain_min,
            step,
        })
    }

    pub fn with_step(&self, step: f64) -> Result<Self> {
        Self::new(
            self.n,
            self.warp.clone(),
            self.chart,
            self.conformal.clone(),
            self.domain_min,
            step,
        )
    }

    /// Total dimension `n + 1`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn chart(&self) -> BaseChart {
        self.chart
    }

    /// Flattened row-major components at `p = (t, x1..xn)`.
    pub(crate) fn components_dd(&self, p: &[Dd]) -> Result<Vec<Dd>> {
        let dim = self.dim();
        let t = p[0].to_f64();
        if !(t > self.domain_min) {
            return Err(CurvError::OutOfDomain {
                t,
                min: self.domain_min,
            });
        }
        let f = self.warp.eval(p);
        if !(f.to_f64() > 0.0) {
            return Err(CurvError::NonPositive {
                quantity: "f",
                t,
                value: f.to_f64(),
            });
        }
        let scale = match &self.conformal {
            None => Dd::ONE,
            Some(u) => {
                let uv = u.eval(p);
                if !(uv.to_f64() > 0.0) {
                    return Err(CurvError::NonPositive {
                        quantity: "u",
                        t,
                        value: uv.to_f64(),
                    });
                }
                uv.powf(Dd::new(4.0) / Dd::new(self.n as f64 - 1.0))
            }
        };
        let diag = self.chart.diagonal(&p[1..]);
        let f2 = f * f;
        let mut out = vec![Dd::ZERO; dim * dim];
        out[0] = scale;
        for (k, g) in diag.into_iter().enumerate() {
            out[(k + 1) * dim + k + 1] = scale * f2 * g;
        }
        Ok(out)
    }

    /// Components as a symmetric matrix.
    pub fn components(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(p)?;
        let pd: Vec<Dd> = p.iter().map(|&v| Dd::new(v)).collect();
        let c = self.components_dd(&pd)?;
        let dim = self.dim();
        Ok(DMatrix::from_fn(dim, dim, |i, j| c[i * dim + j].to_f64()))
    }

    pub(crate) fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(CurvError::InvalidArgument(format!(
                "point has {} coordinates, metric has dimension {}",
                p.len(),
                self.dim()
            )));
        }
        if !(p[0] - 2.0 * self.step > self.domain_min) {
            return Err(CurvError::OutOfDomain {
                t: p[0],
                min: self.domain_min + 2.0 * self.step,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warp::parse_profile;

    #[test]
    fn identity_block_for_constant_warp() {
        let base = BaseGeometry::torus(3, 8).unwrap();
        let f = parse_profile("1").unwrap();
        let m = assemble_metric(WarpSource::Radial(&f), &base, None, 1e-3).unwrap();
        let g = m.components(&[1.0, 0.1, 0.2, 0.3]).unwrap();
        assert_eq!(g, DMatrix::identity(4, 4));
    }

    #[test]
    fn constant_conformal_scaling() {
        let base = BaseGeometry::torus(3, 8).unwrap();
        let f = parse_profile("t").unwrap();
        let u = ConformalFactorField::parse("3", 3).unwrap();
        let m = assemble_metric(WarpSource::Radial(&f), &base, Some(&u), 1e-3).unwrap();
        let g = m.components(&[2.0, 0.1, 0.2, 0.3]).unwrap();
        assert!((g[(0, 0)] - 9.0).abs() < 1e-14);
        assert!((g[(2, 2)] - 36.0).abs() < 1e-13);
        assert_eq!(g[(0, 1)], 0.0);
        assert_eq!(g, g.transpose());
    }

    #[test]
    fn space_form_chart() {
        let base = BaseGeometry::sphere(3, 1.0).unwrap();
        let f = parse_profile("1").unwrap();
        let m = assemble_metric(WarpSource::Radial(&f), &base, None, 1e-3).unwrap();
        let g = m.components(&[1.0, 0.7, 1.1, 0.3]).unwrap();
        assert!((g[(2, 2)] - 0.7f64.sin().powi(2)).abs() < 1e-15);
        assert!((g[(3, 3)] - (0.7f64.sin() * 1.1f64.sin()).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn rejects_x_dependence_on_analytic_bases() {
        let base = BaseGeometry::sphere(3, 1.0).unwrap();
        let f = PolarWarpField::parse("2+cos(x1)", 3).unwrap();
        assert!(assemble_metric(WarpSource::Polar(&f), &base, None, 1e-3).is_err());
    }

    #[test]
    fn points_too_close_to_the_boundary() {
        let base = BaseGeometry::torus(3, 8).unwrap();
        let f = parse_profile("t").unwrap().with_domain_min(1.0).unwrap();
        let m = assemble_metric(WarpSource::Radial(&f), &base, None, 1e-3).unwrap();
        assert!(m.components(&[1.001, 0.0, 0.0, 0.0]).is_err());
    }
}
