use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::field::Field;
use crate::grid::BaseGrid;
use crate::io::Table;
use crate::polar::PolarWarpField;
use crate::warp::{BaseGeometry, BaseKind};

/// Weight multiplying `u` under the base integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    One,
    FSquared,
    FPowN,
}

/// `U = ∫ u`, `F = ∫ f²` or `𝓕 = ∫ fⁿ u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AveragedKind {
    U,
    F,
    CalF,
}

impl AveragedKind {
    pub fn tag(self) -> &'static str {
        match self {
            AveragedKind::U => "U",
            AveragedKind::F => "F",
            AveragedKind::CalF => "calF",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragedProfile {
    pub kind: AveragedKind,
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Difference to the same quadrature on every second grid point; zero
    /// for analytic bases.
    pub quadrature_error: Vec<f64>,
}

impl AveragedProfile {
    pub fn to_table(&self) -> Table {
        let mut table = Table::new(vec!["t".into(), self.kind.tag().into(), "quad_err".into()]);
        for i in 0..self.t_grid.len() {
            table.push(vec![
                self.t_grid[i],
                self.values[i],
                self.quadrature_error[i],
            ]);
        }
        table
    }
}

fn coarse_integral(grid: &BaseGrid, values: &[f64]) -> Option<f64> {
    let m = grid.points_per_axis();
    if !m.is_multiple_of(2) || m / 2 < 2 {
        return None;
    }
    let mut acc = 0.0;
    for (idx, v) in values.iter().enumerate() {
        if grid.multi_index(idx).iter().all(|&i| i % 2 == 0) {
            acc += v;
        }
    }
    Some(acc * (2.0 * grid.spacing()).powi(grid.n() as i32))
}

/// Integrates `weight · u` over the base at every `t` of the grid. With
/// weight `f²` the integrand is `f²` alone.
pub fn average_over_base(
    u: &Field,
    f: Option<&PolarWarpField>,
    base: &BaseGeometry,
    weight: Weight,
    t_grid: &[f64],
) -> Result<AveragedProfile> {
    let n = base.n();
    if u.n() != n || f.is_some_and(|f| f.n() != n) {
        return Err(CurvError::IncompatibleGrid(format!(
            "fields must live on the {n}-dimensional base"
        )));
    }
    if weight != Weight::One && f.is_none() {
        return Err(CurvError::InvalidArgument(
            "weighted averages need a warp field".into(),
        ));
    }
    let kind = match weight {
        Weight::One => AveragedKind::U,
        Weight::FSquared => AveragedKind::F,
        Weight::FPowN => AveragedKind::CalF,
    };
    let integrand = |t: f64, x: &[f64]| -> Result<f64> {
        let fv = f.map(|f| f.field().value(t, x)).unwrap_or(1.0);
        if !(fv > 0.0) {
            return Err(CurvError::NonPositive {
                quantity: "f",
                t,
                value: fv,
            });
        }
        let uv = u.value(t, x);
        let value = match weight {
            Weight::One => uv,
            Weight::FSquared => return Ok(fv * fv),
            Weight::FPowN => fv.powi(n as i32) * uv,
        };
        if !(uv > 0.0) {
            return Err(CurvError::NonPositive {
                quantity: "u",
                t,
                value: uv,
            });
        }
        Ok(value)
    };
    let mut values = Vec::with_capacity(t_grid.len());
    let mut errors = Vec::with_capacity(t_grid.len());
    match base.kind() {
        BaseKind::TorusGrid(grid) => {
            for &t in t_grid {
                let samples = (0..grid.len())
                    .map(|i| integrand(t, &grid.coords(i)))
                    .collect::<Result<Vec<_>>>()?;
                let fine = grid.integrate(&samples);
                let err = coarse_integral(grid, &samples).map_or(0.0, |c| (fine - c).abs());
                values.push(fine);
                errors.push(err);
            }
        }
        BaseKind::AbstractConstant | BaseKind::SphereAnalytic { .. } => {
            if u.depends_on_base() || f.is_some_and(|f| f.depends_on_base()) {
                return Err(CurvError::InvalidBase(format!(
                    "x-dependent integrands need a torus base, got {}",
                    base.kind().tag()
                )));
            }
            let origin = vec![0.0; n];
            for &t in t_grid {
                values.push(base.volume() * integrand(t, &origin)?);
                errors.push(0.0);
            }
        }
    }
    Ok(AveragedProfile {
        kind,
        t_grid: t_grid.to_vec(),
        values,
        quadrature_error: errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_integrand_gives_volume() {
        let base = BaseGeometry::torus(3, 8).unwrap();
        let u = Field::parse("1", 3).unwrap();
        let p = average_over_base(&u, None, &base, Weight::One, &[3.0, 4.0]).unwrap();
        for v in p.values {
            assert!((v - (2.0 * PI).powi(3)).abs() < 1e-10);
        }
    }

    #[test]
    fn weighted_by_f_cubed() {
        let base = BaseGeometry::torus(3, 8).unwrap();
        let u = Field::parse("1/t", 3).unwrap();
        let f = PolarWarpField::parse("t", 3).unwrap();
        let p = average_over_base(&u, Some(&f), &base, Weight::FPowN, &[2.0, 5.0]).unwrap();
        assert_eq!(p.kind, AveragedKind::CalF);
        assert!((p.values[1] / ((2.0 * PI).powi(3) * 25.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn separable_integrand() {
        let base = BaseGeometry::torus(2, 16).unwrap();
        let u = Field::parse("t*(2+cos(x1))*(3+sin(x2))", 2).unwrap();
        let p = average_over_base(&u, None, &base, Weight::One, &[1.5]).unwrap();
        let expected = 1.5 * (2.0 * 2.0 * PI) * (3.0 * 2.0 * PI);
        assert!((p.values[0] / expected - 1.0).abs() < 1e-12);
        assert!(p.quadrature_error[0] < 1e-9);
    }

    #[test]
    fn analytic_base_scales_by_volume() {
        let base = BaseGeometry::abstract_constant(3, -6.0, 2.5).unwrap();
        let u = Field::parse("t^2", 3).unwrap();
        let p = average_over_base(&u, None, &base, Weight::One, &[3.0]).unwrap();
        assert!((p.values[0] - 22.5).abs() < 1e-12);
        let ux = Field::parse("t+x1", 3).unwrap();
        assert!(average_over_base(&ux, None, &base, Weight::One, &[3.0]).is_err());
    }
}
