use serde::Serialize;

/// Exponents and coefficients that depend only on the base dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionConstants {
    pub n: usize,
    /// Conformal Laplacian coefficient on the n-dimensional base, (n-2)/(4(n-1)).
    pub c_n: f64,
    /// Same coefficient for the (n+1)-dimensional end, (n-1)/(4n).
    pub c_np1: f64,
    /// u = f^subst_exp turns the warped curvature formula into a second-order ODE.
    pub subst_exp: f64,
    /// Conformal factor exponent: deformed metric is u^conf_exp times the original.
    pub conf_exp: f64,
    /// Exponent of the nonlinear term in the substituted ODE, (n-3)/(n+1).
    pub nonlin_exp: f64,
}

impl DimensionConstants {
    pub fn new(n: usize) -> Self {
        let nf = n as f64;
        Self {
            n,
            c_n: (nf - 2.0) / (4.0 * (nf - 1.0)),
            c_np1: (nf - 1.0) / (4.0 * nf),
            subst_exp: (nf + 1.0) / 2.0,
            conf_exp: 4.0 / (nf - 1.0),
            nonlin_exp: (nf - 3.0) / (nf + 1.0),
        }
    }

    /// Coefficient 4n/(n+1) of u'' in the substituted ODE.
    pub fn ode_coefficient(&self) -> f64 {
        let nf = self.n as f64;
        4.0 * nf / (nf + 1.0)
    }
}
