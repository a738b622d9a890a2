//! Warped products `dt² + f(t)² g` over a compact base.

use std::f64::consts::PI;

use crate::dims::DimensionConstants;
use crate::error::{CurvError, Result};
use crate::expr::{parse, Expr};
use crate::field::Field;
use crate::grid::BaseGrid;
use crate::io::Table;
use crate::sampling::probe_grid;

/// Value and first two derivatives of a function of `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Warping function `f(t)` with symbolic derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpProfile {
    source: String,
    expr: Expr,
    d1: Expr,
    d2: Expr,
    domain_min: f64,
}

pub fn parse_profile(source: &str) -> Result<WarpProfile> {
    WarpProfile::parse(source)
}

impl WarpProfile {
    pub fn parse(source: &str) -> Result<Self> {
        let expr = parse(source, 0)?;
        let mut p = Self::from_expr(expr);
        p.source = source.trim().to_string();
        Ok(p)
    }

    pub fn from_expr(expr: Expr) -> Self {
        let d1 = expr.derivative(0);
        let d2 = d1.derivative(0);
        Self {
            source: expr.to_string(),
            expr,
            d1,
            d2,
            domain_min: 0.0,
        }
    }

    pub fn constant(lambda: f64) -> Self {
        Self::from_expr(Expr::constant(lambda))
    }

    /// Restricts the domain to `t > t_min`.
    pub fn with_domain_min(mut self, t_min: f64) -> Result<Self> {
        if !(t_min >= 0.0 && t_min.is_finite()) {
            return Err(CurvError::InvalidArgument(format!(
                "domain minimum must be a finite nonnegative number, got {t_min}"
            )));
        }
        self.domain_min = t_min;
        Ok(self)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.d1
    }

    pub fn second_derivative_expr(&self) -> &Expr {
        &self.d2
    }

    pub fn domain_min(&self) -> f64 {
        self.domain_min
    }

    pub fn is_constant(&self) -> bool {
        self.expr.as_const().is_some()
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if t > self.domain_min && t.is_finite() {
            Ok(())
        } else {
            Err(CurvError::OutOfDomain {
                t,
                min: self.domain_min,
            })
        }
    }

    /// `f(t)`, required to be positive.
    pub fn value(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let v = self.expr.eval(&[t]);
        if v > 0.0 {
            Ok(v)
        } else {
            Err(CurvError::NonPositive {
                quantity: "f",
                t,
                value: v,
            })
        }
    }

    pub fn jet(&self, t: f64) -> Result<Jet> {
        Ok(Jet {
            value: self.value(t)?,
            d1: self.d1.eval(&[t]),
            d2: self.d2.eval(&[t]),
        })
    }

    /// Unchecked evaluation, for finite-difference comparisons.
    pub fn eval_raw(&self, t: f64) -> f64 {
        self.expr.eval(&[t])
    }

    pub fn as_field(&self, n: usize) -> Field {
        Field::from_expr(self.expr.clone(), n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BaseKind {
    AbstractConstant,
    TorusGrid(BaseGrid),
    SphereAnalytic { radius: f64 },
}

impl BaseKind {
    pub fn tag(&self) -> &'static str {
        match self {
            BaseKind::AbstractConstant => "abstract-constant",
            BaseKind::TorusGrid(_) => "torus-grid",
            BaseKind::SphereAnalytic { .. } => "sphere-analytic",
        }
    }
}

/// Compact base `(N, g)` reduced to dimension, constant scalar curvature and volume.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseGeometry {
    n: usize,
    scalar_curvature: f64,
    volume: f64,
    kind: BaseKind,
}

impl BaseGeometry {
    fn check_n(n: usize) -> Result<()> {
        if n < 2 {
            return Err(CurvError::DimensionTooSmall {
                required: 2,
                got: n,
            });
        }
        Ok(())
    }

    pub fn abstract_constant(n: usize, scalar_curvature: f64, volume: f64) -> Result<Self> {
        Self::check_n(n)?;
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(CurvError::InvalidBase(format!(
                "volume must be positive, got {volume}"
            )));
        }
        if !scalar_curvature.is_finite() {
            return Err(CurvError::InvalidBase(
                "scalar curvature must be finite".into(),
            ));
        }
        Ok(Self {
            n,
            scalar_curvature,
            volume,
            kind: BaseKind::AbstractConstant,
        })
    }

    /// Round sphere of radius `radius`, with `R(g) = n(n-1)/radius²`.
    pub fn sphere(n: usize, radius: f64) -> Result<Self> {
        Self::check_n(n)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(CurvError::InvalidBase(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        let nf = n as f64;
        Ok(Self {
            n,
            scalar_curvature: nf * (nf - 1.0) / (radius * radius),
            volume: unit_sphere_volume(n) * radius.powi(n as i32),
            kind: BaseKind::SphereAnalytic { radius },
        })
    }

    /// Flat torus `(R / 2πZ)^n` discretized with `m` points per axis.
    pub fn torus(n: usize, m: usize) -> Result<Self> {
        Self::torus_with_grid(BaseGrid::new(n, m)?)
    }

    pub fn torus_with_grid(grid: BaseGrid) -> Result<Self> {
        Self::check_n(grid.n())?;
        Ok(Self {
            n: grid.n(),
            scalar_curvature: 0.0,
            volume: grid.volume(),
            kind: BaseKind::TorusGrid(grid),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scalar_curvature(&self) -> f64 {
        self.scalar_curvature
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    pub fn grid(&self) -> Option<&BaseGrid> {
        match &self.kind {
            BaseKind::TorusGrid(g) => Some(g),
            _ => None,
        }
    }

    pub fn constants(&self) -> DimensionConstants {
        DimensionConstants::new(self.n)
    }

    pub fn require_dimension(&self, required: usize) -> Result<()> {
        if self.n < required {
            return Err(CurvError::DimensionTooSmall {
                required,
                got: self.n,
            });
        }
        Ok(())
    }
}

/// Volume of the unit n-sphere.
pub fn unit_sphere_volume(n: usize) -> f64 {
    let (mut v, start) = if n.is_multiple_of(2) {
        (2.0, 0)
    } else {
        (2.0 * PI, 1)
    };
    let mut k = start;
    while k < n {
        k += 2;
        v *= 2.0 * PI / (k as f64 - 1.0);
    }
    v
}

/// `R = (R(g) - 2n f f'' - n(n-1) f'^2) / f^2` for `dt² + f² g`.
pub fn warped_scalar_curvature(f: &WarpProfile, base: &BaseGeometry, t: f64) -> Result<f64> {
    let j = f.jet(t)?;
    let n = base.n() as f64;
    Ok(
        (base.scalar_curvature() - 2.0 * n * j.value * j.d2 - n * (n - 1.0) * j.d1 * j.d1)
            / (j.value * j.value),
    )
}

/// Closed form of the curvature of `dt² + (t ln t)² g` when `R(g) = -n(n-1)`.
pub fn cone_log_curvature(n: usize, t: f64) -> f64 {
    let n = n as f64;
    let l = t.ln();
    let bracket =
        n * (n - 1.0) * (l + 1.0).powi(2) / (l * l) + 2.0 * n / l + n * (n - 1.0) / (l * l);
    -bracket / (t * t)
}

/// Curvature of `u = t^alpha` over a scalar-flat base.
pub fn power_law_curvature(alpha: f64, n: usize, t: f64) -> f64 {
    debug_assert!(t > 0.0 && n >= 2);
    DimensionConstants::new(n).ode_coefficient() * alpha * (1.0 - alpha) / (t * t)
}

#[derive(Debug, Clone, PartialEq)]
enum USource {
    Warp(WarpProfile),
    Direct(WarpProfile),
}

/// `u = f^((n+1)/2)`, the unknown of the prescribed-curvature ODE.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutedProfile {
    source: USource,
    n: usize,
    exponent: f64,
}

pub fn substitute_u(f: &WarpProfile, n: usize) -> Result<SubstitutedProfile> {
    SubstitutedProfile::from_warp(f, n)
}

impl SubstitutedProfile {
    pub fn from_warp(f: &WarpProfile, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(CurvError::DimensionTooSmall {
                required: 2,
                got: n,
            });
        }
        for t in probe_grid(f.domain_min()) {
            f.value(t)?;
        }
        Ok(Self {
            source: USource::Warp(f.clone()),
            n,
            exponent: DimensionConstants::new(n).subst_exp,
        })
    }

    /// Uses `u` as given; the warping function is recovered through the inverse map.
    pub fn from_u(u: &WarpProfile, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(CurvError::DimensionTooSmall {
                required: 2,
                got: n,
            });
        }
        Ok(Self {
            source: USource::Direct(u.clone()),
            n,
            exponent: DimensionConstants::new(n).subst_exp,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn warp(&self) -> Option<&WarpProfile> {
        match &self.source {
            USource::Warp(f) => Some(f),
            USource::Direct(_) => None,
        }
    }

    pub fn domain_min(&self) -> f64 {
        match &self.source {
            USource::Warp(p) | USource::Direct(p) => p.domain_min(),
        }
    }

    pub fn jet(&self, t: f64) -> Result<Jet> {
        match &self.source {
            USource::Direct(u) => u.jet(t).map_err(rename_u),
            USource::Warp(f) => {
                let j = f.jet(t)?;
                let p = self.exponent;
                let lf = j.value.ln();
                Ok(Jet {
                    value: (p * lf).exp(),
                    d1: p * j.d1 * ((p - 1.0) * lf).exp(),
                    d2: p * ((p - 2.0) * lf).exp() * ((p - 1.0) * j.d1 * j.d1 + j.value * j.d2),
                })
            }
        }
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t)?.value)
    }

    /// Inverse map `u^(2/(n+1))`.
    pub fn warp_value(&self, t: f64) -> Result<f64> {
        let u = self.value(t)?;
        Ok((u.ln() / self.exponent).exp())
    }
}

fn rename_u(e: CurvError) -> CurvError {
    match e {
        CurvError::NonPositive { t, value, .. } => CurvError::NonPositive {
            quantity: "u",
            t,
            value,
        },
        other => other,
    }
}

/// The three terms of `(4n/(n+1)) u'' + R u - R(g) u^((n-3)/(n+1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTerms {
    pub second_order: f64,
    pub curvature: f64,
    pub base: f64,
}

impl OdeTerms {
    pub fn residual(&self) -> f64 {
        self.second_order + self.curvature - self.base
    }

    /// Largest term magnitude, the natural scale for relative residuals.
    pub fn scale(&self) -> f64 {
        self.second_order
            .abs()
            .max(self.curvature.abs())
            .max(self.base.abs())
    }
}

pub fn ode_terms(
    u: &SubstitutedProfile,
    r: impl Fn(f64) -> f64,
    base: &BaseGeometry,
    t: f64,
) -> Result<OdeTerms> {
    let j = u.jet(t).map_err(rename_u)?;
    if !(j.value > 0.0) {
        return Err(CurvError::NonPositive {
            quantity: "u",
            t,
            value: j.value,
        });
    }
    let d = DimensionConstants::new(u.n());
    Ok(OdeTerms {
        second_order: d.ode_coefficient() * j.d2,
        curvature: r(t) * j.value,
        base: base.scalar_curvature() * (d.nonlin_exp * j.value.ln()).exp(),
    })
}

pub fn ode_residual(
    u: &SubstitutedProfile,
    r: impl Fn(f64) -> f64,
    base: &BaseGeometry,
    t: f64,
) -> Result<f64> {
    Ok(ode_terms(u, r, base, t)?.residual())
}

/// `Δ u = u_tt + n (f'/f) u_t + Δ_g u / f²` at `(t, x)`; `point` indexes the
/// base grid and is required when `u` depends on the base.
pub fn warped_laplacian(
    f: &WarpProfile,
    u: &Field,
    base: &BaseGeometry,
    t: f64,
    point: Option<usize>,
) -> Result<f64> {
    let j = f.jet(t)?;
    let n = base.n() as f64;
    let (x, base_lap) = if u.depends_on_base() {
        let grid = base.grid().ok_or_else(|| {
            CurvError::InvalidBase(format!(
                "u depends on the base but the {} base has no Laplacian",
                base.kind().tag()
            ))
        })?;
        let idx = point.ok_or_else(|| {
            CurvError::InvalidArgument("a base grid point is required for x-dependent u".into())
        })?;
        if idx >= grid.len() {
            return Err(CurvError::InvalidArgument(format!(
                "grid point {idx} out of range"
            )));
        }
        let lap = grid.laplacian(&u.slice(grid, t)?);
        (grid.coords(idx), lap[idx])
    } else {
        let x = match (base.grid(), point) {
            (Some(g), Some(i)) if i < g.len() => g.coords(i),
            _ => vec![0.0; base.n()],
        };
        (x, 0.0)
    };
    let (_, ut, utt) = u.jet(t, &x);
    Ok(utt + n * j.d1 / j.value * ut + base_lap / (j.value * j.value))
}

/// Sampled curvature `R(t_i)` or `R(t_i, x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    t_grid: Vec<f64>,
    /// Row-major, `t_grid.len() × points`.
    values: Vec<f64>,
    coords: Option<Vec<Vec<f64>>>,
}

impl CurvatureProfile {
    pub fn new(t_grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_increasing(&t_grid)?;
        if values.len() != t_grid.len() {
            return Err(CurvError::Malformed(format!(
                "{} values for {} samples",
                values.len(),
                t_grid.len()
            )));
        }
        Ok(Self {
            t_grid,
            values,
            coords: None,
        })
    }

    pub fn with_coords(t_grid: Vec<f64>, coords: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        check_increasing(&t_grid)?;
        if values.len() != t_grid.len() * coords.len() {
            return Err(CurvError::Malformed(format!(
                "{} values for a {}×{} grid",
                values.len(),
                t_grid.len(),
                coords.len()
            )));
        }
        Ok(Self {
            t_grid,
            values,
            coords: Some(coords),
        })
    }

    /// Samples `warped_scalar_curvature` along `t_grid`.
    pub fn sample(f: &WarpProfile, base: &BaseGeometry, t_grid: Vec<f64>) -> Result<Self> {
        for &t in &t_grid {
            if t <= f.domain_min() {
                return Err(CurvError::OutOfDomain {
                    t,
                    min: f.domain_min(),
                });
            }
        }
        let values = t_grid
            .iter()
            .map(|&t| warped_scalar_curvature(f, base, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(t_grid, values)
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    pub fn to_table(&self) -> Table {
        match &self.coords {
            None => {
                let mut t = Table::new(vec!["t".into(), "R".into()]);
                for (&ti, &r) in self.t_grid.iter().zip(&self.values) {
                    t.push(vec![ti, r]);
                }
                t
            }
            Some(coords) => {
                let dim = coords.first().map_or(0, Vec::len);
                let mut cols = vec!["t".to_string()];
                cols.extend((1..=dim).map(|k| format!("x{k}")));
                cols.push("R".into());
                let mut t = Table::new(cols);
                for (i, &ti) in self.t_grid.iter().enumerate() {
                    for (j, x) in coords.iter().enumerate() {
                        let mut row = vec![ti];
                        row.extend_from_slice(x);
                        row.push(self.values[i * coords.len() + j]);
                        t.push(row);
                    }
                }
                t
            }
        }
    }

    pub fn to_csv(&self) -> String {
        self.to_table().to_csv()
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let table = Table::from_csv(text)?;
        match table.columns.as_slice() {
            [t, r] if t == "t" && r == "R" => {
                let t_grid = table.rows.iter().map(|r| r[0]).collect();
                let values = table.rows.iter().map(|r| r[1]).collect();
                Self::new(t_grid, values)
            }
            cols if cols.len() > 2 && cols[0] == "t" && cols[cols.len() - 1] == "R" => {
                let mut t_grid: Vec<f64> = Vec::new();
                let mut coords: Vec<Vec<f64>> = Vec::new();
                let dim = cols.len() - 2;
                for row in &table.rows {
                    if t_grid.last() != Some(&row[0]) {
                        t_grid.push(row[0]);
                    }
                    if t_grid.len() == 1 {
                        coords.push(row[1..=dim].to_vec());
                    }
                }
                let values = table.rows.iter().map(|r| r[dim + 1]).collect();
                Self::with_coords(t_grid, coords, values)
            }
            _ => Err(CurvError::Malformed(format!(
                "unexpected curvature header '{}'",
                table.columns.join(",")
            ))),
        }
    }
}

fn check_increasing(t: &[f64]) -> Result<()> {
    if t.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CurvError::Malformed(
            "t grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere3() -> BaseGeometry {
        BaseGeometry::sphere(3, 1.0).unwrap()
    }

    #[test]
    fn profile_derivatives() {
        let f = parse_profile("t").unwrap();
        assert_eq!(
            f.jet(2.0).unwrap(),
            Jet {
                value: 2.0,
                d1: 1.0,
                d2: 0.0
            }
        );
        let g = parse_profile("t*ln(t)").unwrap();
        assert!((g.jet(2.0).unwrap().d2 - 0.5).abs() < 1e-15);
        assert!(parse_profile("ln(t").is_err());
    }

    #[test]
    fn positivity_and_domain_are_checked_lazily() {
        let f = parse_profile("t - 1").unwrap();
        assert!(f.value(2.0).is_ok());
        assert!(matches!(f.value(0.5), Err(CurvError::NonPositive { .. })));
        let g = parse_profile("t").unwrap().with_domain_min(1.0).unwrap();
        assert!(matches!(g.value(1.0), Err(CurvError::OutOfDomain { .. })));
    }

    #[test]
    fn sphere_volumes() {
        assert!((unit_sphere_volume(1) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_volume(2) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-13);
        let s = BaseGeometry::sphere(3, 2.0).unwrap();
        assert_eq!(s.scalar_curvature(), 6.0 / 4.0);
        assert!(BaseGeometry::sphere(1, 1.0).is_err());
        assert!(BaseGeometry::abstract_constant(3, 0.0, 0.0).is_err());
    }

    #[test]
    fn golden_curvatures() {
        let r = |src: &str, base: &BaseGeometry, t: f64| {
            warped_scalar_curvature(&parse_profile(src).unwrap(), base, t).unwrap()
        };
        assert_eq!(r("1", &sphere3(), 3.0), 6.0);
        assert!(r("t", &sphere3(), 5.0).abs() < 1e-14);
        let torus = BaseGeometry::abstract_constant(3, 0.0, 1.0).unwrap();
        assert!((r("exp(t)", &torus, 1.7) + 12.0).abs() < 1e-12);
        let hyp = BaseGeometry::abstract_constant(3, -6.0, 1.0).unwrap();
        let e = std::f64::consts::E;
        let v = r("t*ln(t)", &hyp, e);
        assert!((v + 36.0 / (e * e)).abs() < 1e-13);
        assert!((cone_log_curvature(3, e) - v).abs() < 1e-13);
    }

    #[test]
    fn substitution_chain_rule() {
        let f = parse_profile("t^(1/4)").unwrap();
        let u = substitute_u(&f, 3).unwrap();
        let j = u.jet(4.0).unwrap();
        assert!((j.value - 2.0).abs() < 1e-14);
        assert!((j.d1 - 0.25).abs() < 1e-14);
        assert!((j.d2 + 0.25 * 4f64.powf(-1.5)).abs() < 1e-14);
        assert!((u.warp_value(4.0).unwrap() - f.value(4.0).unwrap()).abs() < 1e-14);
        assert!(substitute_u(&parse_profile("t - 2").unwrap(), 3).is_err());
    }

    #[test]
    fn residual_examples() {
        let flat = BaseGeometry::abstract_constant(3, 0.0, 1.0).unwrap();
        let u = substitute_u(&parse_profile("t^(1/4)").unwrap(), 3).unwrap();
        let res = ode_residual(&u, |t| 0.75 / (t * t), &flat, 2.5).unwrap();
        assert!(res.abs() < 1e-12);
        let hyp = BaseGeometry::abstract_constant(3, -6.0, 1.0).unwrap();
        let six = SubstitutedProfile::from_u(&WarpProfile::constant(6.0), 3).unwrap();
        assert_eq!(ode_residual(&six, |_| -1.0, &hyp, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn power_law() {
        assert_eq!(power_law_curvature(0.5, 3, 2.0), 0.1875);
        assert_eq!(power_law_curvature(0.0, 5, 2.0), 0.0);
        assert_eq!(power_law_curvature(1.0, 5, 2.0), 0.0);
        let flat = BaseGeometry::abstract_constant(3, 0.0, 1.0).unwrap();
        let f = parse_profile("t^(1/8)").unwrap();
        let r = warped_scalar_curvature(&f, &flat, 3.0).unwrap();
        assert!((r * 9.0 - 9.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn laplacian_examples() {
        let flat = BaseGeometry::abstract_constant(3, 0.0, 1.0).unwrap();
        let f = parse_profile("t").unwrap();
        let u = Field::parse("t^2", 3).unwrap();
        assert!((warped_laplacian(&f, &u, &flat, 1.3, None).unwrap() - 8.0).abs() < 1e-13);
        let f = parse_profile("exp(t)").unwrap();
        let u = Field::parse("exp(-3*t)", 3).unwrap();
        assert!(warped_laplacian(&f, &u, &flat, 0.7, None).unwrap().abs() < 1e-15);
        let xdep = Field::parse("sin(x1)", 3).unwrap();
        assert!(warped_laplacian(&f, &xdep, &flat, 0.7, Some(0)).is_err());
    }

    #[test]
    fn laplacian_with_base_dependence() {
        let torus = BaseGeometry::torus(2, 16).unwrap();
        let f = WarpProfile::constant(1.0);
        let u = Field::parse("t^3 + cos(x1)", 2).unwrap();
        let grid = torus
            .grid()
            .unwrap()
            .clone()
            .with_stencil(crate::grid::Stencil::Spectral);
        let torus = BaseGeometry::torus_with_grid(grid.clone()).unwrap();
        for idx in [0, 5, 37] {
            let x = grid.coords(idx);
            let v = warped_laplacian(&f, &u, &torus, 2.0, Some(idx)).unwrap();
            assert!((v - (12.0 - x[0].cos())).abs() < 1e-12);
        }
    }

    #[test]
    fn curvature_csv_round_trip() {
        let f = parse_profile("exp(t)").unwrap();
        let base = BaseGeometry::abstract_constant(3, 0.0, 1.0).unwrap();
        let p =
            CurvatureProfile::sample(&f, &base, crate::sampling::log_space(1.0, 10.0, 7).unwrap())
                .unwrap();
        let back = CurvatureProfile::from_csv(&p.to_csv()).unwrap();
        assert_eq!(p, back);
        let q = CurvatureProfile::with_coords(
            vec![1.0, 2.0],
            vec![vec![0.0, 0.5], vec![1.0, 0.5]],
            vec![1.0, 2.0, 3.0, 4.0],
        )
        .unwrap();
        assert!(q.to_csv().starts_with("t,x1,x2,R\n"));
        assert_eq!(CurvatureProfile::from_csv(&q.to_csv()).unwrap(), q);
        assert!(CurvatureProfile::new(vec![2.0, 1.0], vec![0.0, 0.0]).is_err());
    }
}
