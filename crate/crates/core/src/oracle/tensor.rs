use nalgebra::DMatrix;

use super::dd::Dd;
use super::metric::MetricGrid;
use crate::error::{CurvError, Result};
use crate::expr::Scalar;

/// Metric, inverse and centred-difference derivatives at one point.
struct Jet {
    dim: usize,
    g: DMatrix<f64>,
    ginv: DMatrix<f64>,
    /// `dg[a][i*dim+j] = ∂_a g_ij`
    dg: Vec<Vec<f64>>,
    /// `ddg[a*dim+b][i*dim+j] = ∂_a ∂_b g_ij`
    ddg: Vec<Vec<f64>>,
}

fn metric_jet(metric: &MetricGrid, p: &[f64], second: bool) -> Result<Jet> {
    metric.check_point(p)?;
    let dim = metric.dim();
    let h = Dd::new(metric.step());
    let base: Vec<Dd> = p.iter().map(|&v| Dd::new(v)).collect();
    let shifted = |moves: &[(usize, f64)]| -> Result<Vec<Dd>> {
        let mut q = base.clone();
        for &(a, s) in moves {
            q[a] = q[a] + h.mul_f64(s);
        }
        metric.components_dd(&q)
    };
    let g0 = metric.components_dd(&base)?;
    let g = DMatrix::from_fn(dim, dim, |i, j| g0[i * dim + j].to_f64());
    let chol = g.clone().cholesky().ok_or(CurvError::SingularMetric)?;
    let ginv = chol.inverse();

    let inv_2h = Dd::ONE / h.mul_f64(2.0);
    let inv_h2 = Dd::ONE / (h * h);
    let inv_4h2 = Dd::ONE / (h * h).mul_f64(4.0);
    let mut plus = Vec::with_capacity(dim);
    let mut minus = Vec::with_capacity(dim);
    let mut dg = Vec::with_capacity(dim);
    for a in 0..dim {
        let gp = shifted(&[(a, 1.0)])?;
        let gm = shifted(&[(a, -1.0)])?;
        dg.push(
            gp.iter()
                .zip(&gm)
                .map(|(&x, &y)| ((x - y) * inv_2h).to_f64())
                .collect(),
        );
        plus.push(gp);
        minus.push(gm);
    }
    let mut ddg = vec![Vec::new(); dim * dim];
    if second {
        for a in 0..dim {
            let d: Vec<f64> = (0..dim * dim)
                .map(|k| ((plus[a][k] - g0[k].mul_f64(2.0) + minus[a][k]) * inv_h2).to_f64())
                .collect();
            ddg[a * dim + a] = d;
            for b in a + 1..dim {
                let pp = shifted(&[(a, 1.0), (b, 1.0)])?;
                let pm = shifted(&[(a, 1.0), (b, -1.0)])?;
                let mp = shifted(&[(a, -1.0), (b, 1.0)])?;
                let mm = shifted(&[(a, -1.0), (b, -1.0)])?;
                let d: Vec<f64> = (0..dim * dim)
                    .map(|k| ((pp[k] - pm[k] - mp[k] + mm[k]) * inv_4h2).to_f64())
                    .collect();
                ddg[a * dim + b] = d.clone();
                ddg[b * dim + a] = d;
            }
        }
    }
    Ok(Jet {
        dim,
        g,
        ginv,
        dg,
        ddg,
    })
}

/// `Γ^a_bc` at a point, stored as `values[a][b][c]` flattened.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelTable {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl ChristoffelTable {
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.values[(a * self.dim + b) * self.dim + c]
    }

    /// Largest `|Γ^a_bc - Γ^a_cb|`.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    worst = worst.max((self.get(a, b, c) - self.get(a, c, b)).abs());
                }
            }
        }
        worst
    }
}

fn christoffel_from(j: &Jet) -> ChristoffelTable {
    let d = j.dim;
    let mut values = vec![0.0; d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in b..d {
                let mut s = 0.0;
                for e in 0..d {
                    let gi = j.ginv[(a, e)];
                    if gi == 0.0 {
                        continue;
                    }
                    s += gi * (j.dg[b][e * d + c] + j.dg[c][e * d + b] - j.dg[e][b * d + c]);
                }
                values[(a * d + b) * d + c] = 0.5 * s;
                values[(a * d + c) * d + b] = 0.5 * s;
            }
        }
    }
    ChristoffelTable { dim: d, values }
}

pub fn fd_christoffel(metric: &MetricGrid, point: &[f64]) -> Result<ChristoffelTable> {
    Ok(christoffel_from(&metric_jet(metric, point, false)?))
}

/// Riemann tensor and its contractions at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensorSample {
    pub dim: usize,
    /// All-lower `R_abcd`, flattened.
    pub riemann: Vec<f64>,
    /// `Σ g^00 g^jl R_0j0l` over base indices.
    pub mixed: f64,
    /// `Σ g^ik g^jl R_ijkl` over base indices.
    pub tangential: f64,
    pub scalar: f64,
}

impl CurvatureTensorSample {
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.dim;
        self.riemann[((a * n + b) * n + c) * n + d]
    }

    /// Largest violation of the pair symmetry and the two antisymmetries.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let r = self.get(a, b, c, d);
                        worst = worst
                            .max((r - self.get(c, d, a, b)).abs())
                            .max((r + self.get(b, a, c, d)).abs())
                            .max((r + self.get(a, b, d, c)).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Scalar curvature by direct contraction of
/// `R_abcd = ½(∂b∂c g_ad + ∂a∂d g_bc - ∂a∂c g_bd - ∂b∂d g_ac) + g_ef(Γ^e_bc Γ^f_ad - Γ^e_bd Γ^f_ac)`.
pub fn fd_scalar_curvature(metric: &MetricGrid, point: &[f64]) -> Result<CurvatureTensorSample> {
    let j = metric_jet(metric, point, true)?;
    let gamma = christoffel_from(&j);
    let n = j.dim;
    let dd = |a: usize, b: usize, i: usize, k: usize| j.ddg[a * n + b][i * n + k];
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    let mut riemann = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut r =
                        0.5 * (dd(b, c, a, d) + dd(a, d, b, c) - dd(a, c, b, d) - dd(b, d, a, c));
                    for e in 0..n {
                        for f in 0..n {
                            let g = j.g[(e, f)];
                            if g == 0.0 {
                                continue;
                            }
                            r += g
                                * (gamma.get(e, b, c) * gamma.get(f, a, d)
                                    - gamma.get(e, b, d) * gamma.get(f, a, c));
                        }
                    }
                    riemann[idx(a, b, c, d)] = r;
                }
            }
        }
    }
    let gi = &j.ginv;
    let mut scalar = 0.0;
    let mut tangential = 0.0;
    let mut mixed = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let w = gi[(a, c)] * gi[(b, d)];
                    if w == 0.0 {
                        continue;
                    }
                    let term = w * riemann[idx(a, b, c, d)];
                    scalar += term;
                    if a > 0 && b > 0 && c > 0 && d > 0 {
                        tangential += term;
                    }
                    if a == 0 && c == 0 && b > 0 && d > 0 {
                        mixed += term;
                    }
                }
            }
        }
    }
    Ok(CurvatureTensorSample {
        dim: n,
        riemann,
        mixed,
        tangential,
        scalar,
    })
}

/// `|fd - closed| / max(|closed|, 1)`, so vanishing closed forms are compared absolutely.
pub fn relative_error(fd: f64, closed: f64) -> f64 {
    (fd - closed).abs() / closed.abs().max(1.0)
}

/// Errors on the `h, h/2, h/4` ladder and the observed orders between rungs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceLadder {
    pub steps: [f64; 3],
    pub errors: [f64; 3],
    pub orders: [f64; 2],
}

impl ConvergenceLadder {
    pub fn min_order(&self) -> f64 {
        self.orders[0].min(self.orders[1])
    }
}

pub fn convergence_ladder(
    metric: &MetricGrid,
    point: &[f64],
    closed_form: f64,
) -> Result<ConvergenceLadder> {
    let h = metric.step();
    let steps = [h, h / 2.0, h / 4.0];
    let mut errors = [0.0; 3];
    for (e, &s) in errors.iter_mut().zip(&steps) {
        let fd = fd_scalar_curvature(&metric.with_step(s)?, point)?.scalar;
        *e = relative_error(fd, closed_form);
    }
    let order = |a: f64, b: f64| (a / b).log2();
    Ok(ConvergenceLadder {
        steps,
        errors,
        orders: [order(errors[0], errors[1]), order(errors[1], errors[2])],
    })
}

/// One line of an oracle comparison report.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub point: Vec<f64>,
    pub closed_form: f64,
    pub fd: f64,
}

impl OracleRow {
    pub fn abs_err(&self) -> f64 {
        (self.fd - self.closed_form).abs()
    }

    pub fn rel_err(&self) -> f64 {
        relative_error(self.fd, self.closed_form)
    }
}

/// CSV with header `point,closed_form,fd,abs_err,rel_err`; point coordinates
/// are joined with `;`.
pub fn oracle_report_csv(rows: &[OracleRow]) -> String {
    use crate::io::fmt_f64;
    let mut out = String::from("point,closed_form,fd,abs_err,rel_err\n");
    for r in rows {
        let p: Vec<String> = r.point.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.join(";"),
            fmt_f64(r.closed_form),
            fmt_f64(r.fd),
            fmt_f64(r.abs_err()),
            fmt_f64(r.rel_err())
        ));
    }
    out
}
