use crate::error::{CurvError, Result};
use crate::expr::{parse, Expr};
use crate::grid::BaseGrid;

/// Scalar function of `(t, x1..xn)` with exact t-derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    source: String,
    n: usize,
    expr: Expr,
    dt: Expr,
    dtt: Expr,
}

impl Field {
    pub fn parse(source: &str, n: usize) -> Result<Self> {
        Ok(Self::from_expr(parse(source, n)?, n).with_source(source))
    }

    pub fn from_expr(expr: Expr, n: usize) -> Self {
        let dt = expr.derivative(0);
        let dtt = dt.derivative(0);
        Self {
            source: expr.to_string(),
            n,
            expr,
            dt,
            dtt,
        }
    }

    fn with_source(mut self, source: &str) -> Self {
        self.source = source.trim().to_string();
        self
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn depends_on_base(&self) -> bool {
        self.expr.depends_on_base()
    }

    fn vars(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n + 1);
        v.push(t);
        v.extend((0..self.n).map(|k| x.get(k).copied().unwrap_or(0.0)));
        v
    }

    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        self.expr.eval(&self.vars(t, x))
    }

    pub fn dt(&self, t: f64, x: &[f64]) -> f64 {
        self.dt.eval(&self.vars(t, x))
    }

    pub fn dtt(&self, t: f64, x: &[f64]) -> f64 {
        self.dtt.eval(&self.vars(t, x))
    }

    /// `(value, ∂t, ∂tt)` at a point.
    pub fn jet(&self, t: f64, x: &[f64]) -> (f64, f64, f64) {
        let v = self.vars(t, x);
        (self.expr.eval(&v), self.dt.eval(&v), self.dtt.eval(&v))
    }

    pub fn slice(&self, grid: &BaseGrid, t: f64) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        Ok(grid.sample(|x| self.value(t, x)))
    }

    pub fn slice_dt(&self, grid: &BaseGrid, t: f64) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        Ok(grid.sample(|x| self.dt(t, x)))
    }

    pub fn slice_dtt(&self, grid: &BaseGrid, t: f64) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        Ok(grid.sample(|x| self.dtt(t, x)))
    }

    fn check_grid(&self, grid: &BaseGrid) -> Result<()> {
        if grid.n() != self.n {
            return Err(CurvError::IncompatibleGrid(format!(
                "field has {} base coordinates, grid has {}",
                self.n,
                grid.n()
            )));
        }
        Ok(())
    }

    /// Errors unless the field is positive at every node of the slice.
    pub fn check_positive_slice(
        &self,
        quantity: &'static str,
        grid: &BaseGrid,
        t: f64,
    ) -> Result<Vec<f64>> {
        let s = self.slice(grid, t)?;
        if let Some(&value) = s.iter().find(|v| !(**v > 0.0)) {
            return Err(CurvError::NonPositive { quantity, t, value });
        }
        Ok(s)
    }
}
