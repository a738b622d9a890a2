//! Polar-type metrics `dt² + f(t,x)² g(x)` and conformal deformations of them.
//!
//! Time derivatives come from the expression tree; base derivatives come
//! from the torus grid. Over analytic bases only x-independent data is
//! accepted, and every slice collapses to a single value.

use crate::dims::DimensionConstants;
use crate::error::{CurvError, Result};
use crate::field::Field;
use crate::grid::BaseGrid;
use crate::warp::{BaseGeometry, WarpProfile};

/// Positive warping function of `(t, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarWarpField {
    field: Field,
}

impl PolarWarpField {
    pub fn parse(source: &str, n: usize) -> Result<Self> {
        Ok(Self {
            field: Field::parse(source, n)?,
        })
    }

    pub fn from_profile(f: &WarpProfile, n: usize) -> Self {
        Self {
            field: f.as_field(n),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    pub fn depends_on_base(&self) -> bool {
        self.field.depends_on_base()
    }
}

/// Conformal factor `u(t, x) > 0`; the deformed metric is `u^(4/(n-1)) ḡ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalFactorField {
    field: Field,
    bound: Option<f64>,
}

impl ConformalFactorField {
    pub fn parse(source: &str, n: usize) -> Result<Self> {
        Ok(Self {
            field: Field::parse(source, n)?,
            bound: None,
        })
    }

    pub fn from_field(field: Field) -> Self {
        Self { field, bound: None }
    }

    /// Records a claimed uniform bound on `u`.
    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

/// `μ = f^((n-2)/2)` on one t-slice.
#[derive(Debug, Clone, PartialEq)]
pub struct MuField {
    n: usize,
    t: f64,
    values: Vec<f64>,
}

impl MuField {
    pub fn from_warp(f: &PolarWarpField, base: &BaseGeometry, t: f64) -> Result<Self> {
        base.require_dimension(3)?;
        let fs = warp_slice(f, base, t)?;
        Self::from_values(base.n(), t, &fs)
    }

    pub fn from_values(n: usize, t: f64, f: &[f64]) -> Result<Self> {
        if n < 3 {
            return Err(CurvError::DimensionTooSmall {
                required: 3,
                got: n,
            });
        }
        let p = (n as f64 - 2.0) / 2.0;
        let mut values = Vec::with_capacity(f.len());
        for &v in f {
            if !(v > 0.0) {
                return Err(CurvError::NonPositive {
                    quantity: "f",
                    t,
                    value: v,
                });
            }
            values.push((p * v.ln()).exp());
        }
        Ok(Self { n, t, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Recovers `f = μ^(2/(n-2))`.
    pub fn warp_values(&self) -> Vec<f64> {
        let q = 2.0 / (self.n as f64 - 2.0);
        self.values.iter().map(|m| (q * m.ln()).exp()).collect()
    }
}

enum Slice<'a> {
    Grid(&'a BaseGrid),
    Analytic,
}

fn slice_kind<'a>(base: &'a BaseGeometry, fields: &[&Field]) -> Result<Slice<'a>> {
    match base.grid() {
        Some(g) => {
            for f in fields {
                if f.n() != g.n() {
                    return Err(CurvError::IncompatibleGrid(format!(
                        "field has {} base coordinates, grid has {}",
                        f.n(),
                        g.n()
                    )));
                }
            }
            Ok(Slice::Grid(g))
        }
        None => {
            if fields.iter().any(|f| f.depends_on_base()) {
                return Err(CurvError::InvalidBase(format!(
                    "x-dependent fields need a torus grid, base is {}",
                    base.kind().tag()
                )));
            }
            Ok(Slice::Analytic)
        }
    }
}

fn sample(field: &Field, slice: &Slice, t: f64, which: u8) -> Vec<f64> {
    let eval = |x: &[f64]| match which {
        0 => field.value(t, x),
        1 => field.dt(t, x),
        _ => field.dtt(t, x),
    };
    match slice {
        Slice::Grid(g) => g.sample(eval),
        Slice::Analytic => vec![eval(&[])],
    }
}

fn positive(values: Vec<f64>, quantity: &'static str, t: f64) -> Result<Vec<f64>> {
    if let Some(&value) = values.iter().find(|v| !(**v > 0.0)) {
        return Err(CurvError::NonPositive { quantity, t, value });
    }
    Ok(values)
}

fn warp_slice(f: &PolarWarpField, base: &BaseGeometry, t: f64) -> Result<Vec<f64>> {
    let slice = slice_kind(base, &[f.field()])?;
    positive(sample(f.field(), &slice, t, 0), "f", t)
}

fn pick(values: &[f64], point: Option<usize>) -> Result<f64> {
    if values.len() == 1 {
        return Ok(values[0]);
    }
    let idx = point.ok_or_else(|| {
        CurvError::InvalidArgument("a base grid point is required on a torus base".into())
    })?;
    values
        .get(idx)
        .copied()
        .ok_or_else(|| CurvError::InvalidArgument(format!("grid point {idx} out of range")))
}

/// `R(μ^(4/(n-2)) g) = c_n⁻¹ μ^(-(n+2)/(n-2)) [c_n R(g) μ - Δ_g μ]` on a slice.
pub fn conformal_base_curvature(mu: &MuField, base: &BaseGeometry) -> Result<Vec<f64>> {
    base.require_dimension(3)?;
    let c = DimensionConstants::new(base.n()).c_n;
    let n = base.n() as f64;
    let e = -(n + 2.0) / (n - 2.0);
    let lap = match base.grid() {
        Some(g) => {
            if mu.values.len() != g.len() {
                return Err(CurvError::IncompatibleGrid(format!(
                    "mu has {} samples, grid has {}",
                    mu.values.len(),
                    g.len()
                )));
            }
            g.laplacian(&mu.values)
        }
        None => {
            if mu.values.len() != 1 {
                return Err(CurvError::InvalidBase(format!(
                    "non-constant mu needs a torus grid, base is {}",
                    base.kind().tag()
                )));
            }
            vec![0.0]
        }
    };
    let rg = base.scalar_curvature();
    Ok(mu
        .values
        .iter()
        .zip(&lap)
        .map(|(&m, &l)| (e * m.ln()).exp() * (c * rg * m - l) / c)
        .collect())
}

/// Scalar curvature of the slice metric `f(t,·)² g`. Dimension two uses
/// `R(e^(2w) g) = e^(-2w) (R(g) - 2 Δ w)` with `w = ln f`.
fn slice_metric_curvature(
    f: &[f64],
    base: &BaseGeometry,
    slice: &Slice,
    t: f64,
) -> Result<Vec<f64>> {
    let rg = base.scalar_curvature();
    match slice {
        Slice::Analytic => Ok(vec![rg / (f[0] * f[0])]),
        Slice::Grid(g) if base.n() == 2 => {
            let w: Vec<f64> = f.iter().map(|v| v.ln()).collect();
            let lap = g.laplacian(&w);
            Ok(f.iter()
                .zip(&lap)
                .map(|(&v, &l)| (rg - 2.0 * l) / (v * v))
                .collect())
        }
        Slice::Grid(_) => conformal_base_curvature(&MuField::from_values(base.n(), t, f)?, base),
    }
}

/// `R̄ = R(f² g) - (2n f f_tt + n(n-1) f_t²) / f²` over a whole slice.
pub fn polar_scalar_curvature_slice(
    f: &PolarWarpField,
    base: &BaseGeometry,
    t: f64,
) -> Result<Vec<f64>> {
    let slice = slice_kind(base, &[f.field()])?;
    let fv = positive(sample(f.field(), &slice, t, 0), "f", t)?;
    let ft = sample(f.field(), &slice, t, 1);
    let ftt = sample(f.field(), &slice, t, 2);
    let n = base.n() as f64;
    if let Slice::Analytic = slice {
        let (v, d1, d2) = (fv[0], ft[0], ftt[0]);
        let r = (base.scalar_curvature() - 2.0 * n * v * d2 - n * (n - 1.0) * d1 * d1) / (v * v);
        return Ok(vec![r]);
    }
    let rs = slice_metric_curvature(&fv, base, &slice, t)?;
    Ok((0..fv.len())
        .map(|i| {
            rs[i] - (2.0 * n * fv[i] * ftt[i] + n * (n - 1.0) * ft[i] * ft[i]) / (fv[i] * fv[i])
        })
        .collect())
}

pub fn polar_scalar_curvature(
    f: &PolarWarpField,
    base: &BaseGeometry,
    t: f64,
    point: Option<usize>,
) -> Result<f64> {
    pick(&polar_scalar_curvature_slice(f, base, t)?, point)
}

/// `Δ u = u_tt + (n/f) f_t u_t + ((n-2)/f³)⟨∇f, ∇u⟩ + Δ_g u / f²` over a slice.
pub fn polar_laplacian_slice(
    f: &PolarWarpField,
    u: &ConformalFactorField,
    base: &BaseGeometry,
    t: f64,
) -> Result<Vec<f64>> {
    let slice = slice_kind(base, &[f.field(), u.field()])?;
    let fv = positive(sample(f.field(), &slice, t, 0), "f", t)?;
    let ft = sample(f.field(), &slice, t, 1);
    let uv = sample(u.field(), &slice, t, 0);
    let ut = sample(u.field(), &slice, t, 1);
    let utt = sample(u.field(), &slice, t, 2);
    let n = base.n() as f64;
    let (cross, lap) = match slice {
        Slice::Grid(g) => (g.grad_dot(&fv, &uv), g.laplacian(&uv)),
        Slice::Analytic => (vec![0.0], vec![0.0]),
    };
    Ok((0..fv.len())
        .map(|i| {
            let f = fv[i];
            utt[i] + n / f * ft[i] * ut[i] + (n - 2.0) / (f * f * f) * cross[i] + lap[i] / (f * f)
        })
        .collect())
}

pub fn polar_laplacian(
    f: &PolarWarpField,
    u: &ConformalFactorField,
    base: &BaseGeometry,
    t: f64,
    point: Option<usize>,
) -> Result<f64> {
    pick(&polar_laplacian_slice(f, u, base, t)?, point)
}

/// Curvature of `u^(4/(n-1)) ḡ` solved from the conformal equation, over a slice.
pub fn conformal_scalar_curvature_slice(
    u: &ConformalFactorField,
    f: &PolarWarpField,
    base: &BaseGeometry,
    t: f64,
) -> Result<Vec<f64>> {
    let slice = slice_kind(base, &[f.field(), u.field()])?;
    let uv = positive(sample(u.field(), &slice, t, 0), "u", t)?;
    let rbar = polar_scalar_curvature_slice(f, base, t)?;
    let lap = polar_laplacian_slice(f, u, base, t)?;
    let c = DimensionConstants::new(base.n()).c_np1;
    let n = base.n() as f64;
    let e = (n + 3.0) / (n - 1.0);
    Ok((0..uv.len())
        .map(|i| (c * rbar[i] * uv[i] - lap[i]) / (c * (e * uv[i].ln()).exp()))
        .collect())
}

pub fn conformal_scalar_curvature(
    u: &ConformalFactorField,
    f: &PolarWarpField,
    base: &BaseGeometry,
    t: f64,
    point: Option<usize>,
) -> Result<f64> {
    pick(&conformal_scalar_curvature_slice(u, f, base, t)?, point)
}

/// Left side of `Δu - c R̄ u + c R_c u^((n+3)/(n-1))`, for consistency checks.
pub fn conformal_equation_residual(
    u: &ConformalFactorField,
    f: &PolarWarpField,
    base: &BaseGeometry,
    t: f64,
    r_c: &[f64],
) -> Result<Vec<f64>> {
    let slice = slice_kind(base, &[f.field(), u.field()])?;
    let uv = positive(sample(u.field(), &slice, t, 0), "u", t)?;
    let rbar = polar_scalar_curvature_slice(f, base, t)?;
    let lap = polar_laplacian_slice(f, u, base, t)?;
    let c = DimensionConstants::new(base.n()).c_np1;
    let n = base.n() as f64;
    let e = (n + 3.0) / (n - 1.0);
    Ok((0..uv.len())
        .map(|i| lap[i] - c * rbar[i] * uv[i] + c * r_c[i] * (e * uv[i].ln()).exp())
        .collect())
}

/// `∫ f² R̄` on a slice computed directly and through the Green's-identity form
/// `-c_n⁻¹ ∫|∇μ|²/μ² + ∫R(g) - n (∫f²)'' - n(n-3) ∫f_t²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceAverage {
    pub direct: f64,
    pub via_identity: f64,
}

pub fn slice_average_identity(
    f: &PolarWarpField,
    base: &BaseGeometry,
    t: f64,
) -> Result<SliceAverage> {
    base.require_dimension(3)?;
    let grid = base
        .grid()
        .ok_or_else(|| CurvError::InvalidBase("the identity check needs a torus grid".into()))?;
    let slice = Slice::Grid(grid);
    let fv = positive(sample(f.field(), &slice, t, 0), "f", t)?;
    let ft = sample(f.field(), &slice, t, 1);
    let ftt = sample(f.field(), &slice, t, 2);
    let rbar = polar_scalar_curvature_slice(f, base, t)?;
    let direct = grid.integrate(
        &fv.iter()
            .zip(&rbar)
            .map(|(a, r)| a * a * r)
            .collect::<Vec<_>>(),
    );

    let n = base.n() as f64;
    let mu = MuField::from_values(base.n(), t, &fv)?;
    let grad2 = grid.grad_dot(mu.values(), mu.values());
    let c = DimensionConstants::new(base.n()).c_n;
    let dirichlet: Vec<f64> = grad2
        .iter()
        .zip(mu.values())
        .map(|(g, m)| g / (m * m))
        .collect();
    let f2_tt: Vec<f64> = (0..fv.len())
        .map(|i| 2.0 * (ft[i] * ft[i] + fv[i] * ftt[i]))
        .collect();
    let ft2: Vec<f64> = ft.iter().map(|d| d * d).collect();
    let via_identity = -grid.integrate(&dirichlet) / c + base.scalar_curvature() * base.volume()
        - n * grid.integrate(&f2_tt)
        - n * (n - 3.0) * grid.integrate(&ft2);
    Ok(SliceAverage {
        direct,
        via_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Stencil;
    use crate::warp::{parse_profile, warped_scalar_curvature};

    fn torus(n: usize, m: usize) -> BaseGeometry {
        BaseGeometry::torus(n, m).unwrap()
    }

    #[test]
    fn constant_mu_gives_flat_or_scaled_curvature() {
        let base = torus(3, 8);
        let f = PolarWarpField::parse("2", 3).unwrap();
        let mu = MuField::from_warp(&f, &base, 1.0).unwrap();
        assert!(conformal_base_curvature(&mu, &base)
            .unwrap()
            .iter()
            .all(|&r| r == 0.0));
        let sphere = BaseGeometry::sphere(3, 1.0).unwrap();
        let mu = MuField::from_warp(&f, &sphere, 1.0).unwrap();
        let r = conformal_base_curvature(&mu, &sphere).unwrap();
        assert!((r[0] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn mu_round_trip() {
        let base = torus(4, 8);
        let f = PolarWarpField::parse("t*(2+cos(x1)*sin(x4))", 4).unwrap();
        let mu = MuField::from_warp(&f, &base, 1.3).unwrap();
        let back = mu.warp_values();
        let direct = f.field().slice(base.grid().unwrap(), 1.3).unwrap();
        for (a, b) in back.iter().zip(&direct) {
            assert!((a - b).abs() <= 1e-12 * b);
        }
        assert!(
            MuField::from_warp(&PolarWarpField::parse("1", 2).unwrap(), &torus(2, 8), 1.0).is_err()
        );
    }

    #[test]
    fn linear_warp_on_torus() {
        let base = torus(3, 8);
        let f = PolarWarpField::parse("t", 3).unwrap();
        let r = polar_scalar_curvature(&f, &base, 2.0, Some(17)).unwrap();
        assert!((r + 6.0 / 4.0).abs() < 1e-14);
    }

    #[test]
    fn reduces_to_warped_formula() {
        let sphere = BaseGeometry::sphere(3, 1.3).unwrap();
        for src in ["t*ln(t)", "exp(t)", "t^2+1", "cosh(t)"] {
            let p = parse_profile(src).unwrap();
            let f = PolarWarpField::from_profile(&p, 3);
            for t in [1.5, 3.0, 7.0] {
                let a = polar_scalar_curvature(&f, &sphere, t, None).unwrap();
                let b = warped_scalar_curvature(&p, &sphere, t).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
        let flat = torus(3, 8);
        let p = parse_profile("t*ln(t)").unwrap();
        let f = PolarWarpField::from_profile(&p, 3);
        let slice = polar_scalar_curvature_slice(&f, &flat, 2.0).unwrap();
        let b = warped_scalar_curvature(&p, &flat, 2.0).unwrap();
        assert!(slice.iter().all(|a| (a - b).abs() <= 1e-12 * b.abs()));
    }

    #[test]
    fn laplacian_reductions() {
        let base = torus(2, 16).kind().clone();
        let grid = match base {
            crate::warp::BaseKind::TorusGrid(g) => g.with_stencil(Stencil::Spectral),
            _ => unreachable!(),
        };
        let base = BaseGeometry::torus_with_grid(grid.clone()).unwrap();
        let f = PolarWarpField::parse("1", 2).unwrap();
        let u = ConformalFactorField::parse("t^3 + sin(2*x2)", 2).unwrap();
        for idx in [0, 9, 100] {
            let x = grid.coords(idx);
            let v = polar_laplacian(&f, &u, &base, 1.5, Some(idx)).unwrap();
            assert!((v - (9.0 - 4.0 * (2.0 * x[1]).sin())).abs() < 1e-11);
        }
        let c = ConformalFactorField::parse("3", 2).unwrap();
        let g = PolarWarpField::parse("t*(2+cos(x1))", 2).unwrap();
        assert!(polar_laplacian_slice(&g, &c, &base, 1.0)
            .unwrap()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn constant_conformal_factor_scales_curvature() {
        let sphere = BaseGeometry::sphere(3, 1.0).unwrap();
        let f = PolarWarpField::parse("t", 3).unwrap();
        let one = ConformalFactorField::parse("1", 3).unwrap();
        let lam = ConformalFactorField::parse("2", 3).unwrap();
        let g = PolarWarpField::parse("t^2", 3).unwrap();
        let rbar = polar_scalar_curvature(&g, &sphere, 1.7, None).unwrap();
        assert_eq!(
            conformal_scalar_curvature(&one, &g, &sphere, 1.7, None).unwrap(),
            rbar
        );
        let rc = conformal_scalar_curvature(&lam, &g, &sphere, 1.7, None).unwrap();
        assert!((rc - 2f64.powf(-2.0) * rbar).abs() < 1e-13 * rbar.abs());
        assert!(conformal_scalar_curvature(&one, &f, &sphere, 1.0, None).is_ok());
    }

    #[test]
    fn rearranged_equation_closes() {
        let base = torus(3, 8);
        let f = PolarWarpField::parse("t*(2+cos(x1))", 3).unwrap();
        let u = ConformalFactorField::parse("1+0.5*sin(x1)*exp(-t)", 3).unwrap();
        let rc = conformal_scalar_curvature_slice(&u, &f, &base, 1.2).unwrap();
        let res = conformal_equation_residual(&u, &f, &base, 1.2, &rc).unwrap();
        let scale = rc.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        assert!(res.iter().all(|r| r.abs() < 1e-10 * scale));
    }

    #[test]
    fn abstract_base_rejects_base_dependence() {
        let base = BaseGeometry::abstract_constant(3, -6.0, 1.0).unwrap();
        let f = PolarWarpField::parse("t*(2+cos(x1))", 3).unwrap();
        assert!(matches!(
            polar_scalar_curvature(&f, &base, 1.0, None),
            Err(CurvError::InvalidBase(_))
        ));
    }

    #[test]
    fn green_identity_average() {
        let run = |m: usize| {
            let base = torus(3, m);
            let f = PolarWarpField::parse("(1+t)*exp(0.3*sin(x1)+0.2*cos(x2))", 3).unwrap();
            let s = slice_average_identity(&f, &base, 1.4).unwrap();
            (s.direct - s.via_identity).abs() / s.direct.abs()
        };
        let (e16, e32) = (run(16), run(32));
        assert!(e16 < 1e-2, "{e16}");
        assert!(e32 < e16 / 3.0, "{e16} {e32}");
    }
}
