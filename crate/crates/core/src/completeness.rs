//! Ray lengths in a conformally deformed end, and the cutoff-function test
//! integral for the end's Yamabe sign.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::field::Field;
use crate::io::fmt_f64;
use crate::quadrature::{for_each_node, integrate_log};

/// Half-width of the undecided band around tail exponent `-1`.
pub const TAIL_MARGIN: f64 = 0.05;
const FIT_POINTS: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RayVerdict {
    Finite,
    Divergent,
    Undetermined,
}

impl fmt::Display for RayVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RayVerdict::Finite => "finite",
            RayVerdict::Divergent => "divergent",
            RayVerdict::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayLengthReport {
    pub x0: Vec<f64>,
    pub n: usize,
    pub t0: f64,
    pub t_end: f64,
    /// `∫_{t0}^{T} u^(2/(n-1)) dt`.
    pub integral: f64,
    /// Log-log slope of the integrand on the last decade.
    pub tail_exponent: f64,
    /// `∫_T^∞` of the fitted power law; present only for finite verdicts.
    pub tail_estimate: Option<f64>,
    pub verdict: RayVerdict,
}

impl RayLengthReport {
    /// Integral plus fitted tail when the verdict is finite.
    pub fn completed(&self) -> Option<f64> {
        self.tail_estimate.map(|tail| self.integral + tail)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let x0: Vec<String> = self.x0.iter().map(|&v| fmt_f64(v)).collect();
        s.push_str(&format!("x0: {}\n", x0.join(",")));
        s.push_str(&format!("n: {}\n", self.n));
        s.push_str(&format!("t0: {}\n", fmt_f64(self.t0)));
        s.push_str(&format!("t_end: {}\n", fmt_f64(self.t_end)));
        s.push_str(&format!("integral: {}\n", fmt_f64(self.integral)));
        s.push_str(&format!("tail_exponent: {}\n", fmt_f64(self.tail_exponent)));
        if let Some(tail) = self.tail_estimate {
            s.push_str(&format!("tail_estimate: {}\n", fmt_f64(tail)));
            s.push_str(&format!("completed: {}\n", fmt_f64(self.integral + tail)));
        }
        s.push_str(&format!("verdict: {}\n", self.verdict));
        s
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn classify(p: f64) -> RayVerdict {
    if p < -1.0 - TAIL_MARGIN {
        RayVerdict::Finite
    } else if p >= -1.0 + TAIL_MARGIN {
        RayVerdict::Divergent
    } else {
        RayVerdict::Undetermined
    }
}

/// Least-squares slope of `(ln t, ln g)`.
fn fit_exponent(ts: &[f64], gs: &[f64]) -> f64 {
    let k = ts.len() as f64;
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = gs.iter().map(|g| g.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Ray length for a conformal factor given as a function of `t` alone.
pub fn ray_length_profile(
    u: impl Fn(f64) -> f64,
    n: usize,
    t0: f64,
    t_end: f64,
) -> Result<RayLengthReport> {
    ray_length_impl(&u, Vec::new(), n, t0, t_end)
}

/// Ray length along `t ↦ (t, x0)`.
pub fn ray_length(u: &Field, x0: &[f64], n: usize, t0: f64, t_end: f64) -> Result<RayLengthReport> {
    if x0.len() > u.n() {
        return Err(CurvError::InvalidArgument(format!(
            "base point has {} coordinates, field has {}",
            x0.len(),
            u.n()
        )));
    }
    ray_length_impl(&|t| u.value(t, x0), x0.to_vec(), n, t0, t_end)
}

fn ray_length_impl(
    u: &dyn Fn(f64) -> f64,
    x0: Vec<f64>,
    n: usize,
    t0: f64,
    t_end: f64,
) -> Result<RayLengthReport> {
    if n < 3 {
        return Err(CurvError::DimensionTooSmall {
            required: 3,
            got: n,
        });
    }
    if !(t0 > 0.0 && t_end > t0 && t_end.is_finite()) {
        return Err(CurvError::InvalidArgument(format!(
            "ray interval [{t0}, {t_end}] must satisfy 0 < t0 < T < inf"
        )));
    }
    let power = 2.0 / (n as f64 - 1.0);
    let integrand = |t: f64| -> Result<f64> {
        let v = u(t);
        if !(v > 0.0) {
            return Err(CurvError::NonPositive {
                quantity: "u",
                t,
                value: v,
            });
        }
        Ok((power * v.ln()).exp())
    };
    let mut first_err = None;
    let mut integral = 0.0;
    for_each_node(t0, t_end, 16, |t, w| match integrand(t) {
        Ok(g) => integral += w * g,
        Err(e) => {
            first_err.get_or_insert(e);
        }
    });
    if let Some(e) = first_err {
        return Err(e);
    }
    let fit_start = (t_end / 10.0).max(t0);
    let ts = crate::sampling::log_space(fit_start, t_end, FIT_POINTS)?;
    let gs = ts
        .iter()
        .map(|&t| integrand(t))
        .collect::<Result<Vec<_>>>()?;
    let p = fit_exponent(&ts, &gs);
    let verdict = classify(p);
    let tail_estimate =
        (verdict == RayVerdict::Finite).then(|| t_end * gs[gs.len() - 1] / (-p - 1.0));
    Ok(RayLengthReport {
        x0,
        n,
        t0,
        t_end,
        integral,
        tail_exponent: p,
        tail_estimate,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YamabeReport {
    pub value: f64,
    /// The value is negative for every `b` above this.
    pub threshold: f64,
    pub gradient_term: f64,
    pub plateau_term: f64,
    pub ramp_term: f64,
}

/// End contribution of `∫ (4n/(n-1))|∇u|² + R u²` for the cutoff that is `1`
/// on `(2, b)` and falls linearly to `0` on `(b, b+1)`. The gradient term is
/// the bound `C_o²` over the unit ramp; the threshold ignores the (negative)
/// ramp term.
pub fn yamabe_test_integral(
    r_end: f64,
    n: usize,
    b: f64,
    c_o: f64,
    vol_n: f64,
) -> Result<YamabeReport> {
    if n < 2 {
        return Err(CurvError::DimensionTooSmall {
            required: 2,
            got: n,
        });
    }
    if !(r_end < 0.0) {
        return Err(CurvError::InvalidArgument(format!(
            "R_end must be negative, got {r_end}"
        )));
    }
    if !(b > 2.0) {
        return Err(CurvError::InvalidArgument(format!(
            "b must exceed 2, got {b}"
        )));
    }
    if !(c_o >= 0.0) {
        return Err(CurvError::InvalidArgument(format!(
            "C_o must be nonnegative, got {c_o}"
        )));
    }
    if !(vol_n > 0.0) {
        return Err(CurvError::InvalidArgument(format!(
            "volume must be positive, got {vol_n}"
        )));
    }
    let coef = 4.0 * n as f64 / (n as f64 - 1.0);
    let ramp_u2 = integrate_log(|t| (b + 1.0 - t).powi(2), b, b + 1.0);
    let gradient_term = vol_n * coef * c_o * c_o;
    let plateau_term = vol_n * r_end * (b - 2.0);
    let ramp_term = vol_n * r_end * ramp_u2;
    Ok(YamabeReport {
        value: gradient_term + plateau_term + ramp_term,
        threshold: 2.0 + coef * c_o * c_o / (-r_end),
        gradient_term,
        plateau_term,
        ramp_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_factor_diverges() {
        let r = ray_length_profile(|_| 1.0, 3, 3.0, 1e4).unwrap();
        assert!((r.integral - (1e4 - 3.0)).abs() < 1e-8);
        assert_eq!(r.verdict, RayVerdict::Divergent);
        assert!(r.completed().is_none());
    }

    #[test]
    fn inverse_square_tail() {
        let u = Field::parse("t^(-2)", 3).unwrap();
        let r = ray_length(&u, &[0.0, 0.0, 0.0], 3, 3.0, 1e4).unwrap();
        assert_eq!(r.verdict, RayVerdict::Finite);
        assert!((r.completed().unwrap() - 1.0 / 3.0).abs() < 1e-10);
        assert!((r.tail_exponent + 2.0).abs() < 1e-10);
    }

    #[test]
    fn borderline_is_undetermined() {
        let r = ray_length_profile(|t| 1.0 / t, 3, 3.0, 1e4).unwrap();
        assert_eq!(r.verdict, RayVerdict::Undetermined);
        assert_eq!(format!("{:.2}", r.tail_exponent), "-1.00");
    }

    #[test]
    fn nonpositive_sample_is_an_error() {
        assert!(ray_length_profile(|t| 5.0 - t, 3, 3.0, 10.0).is_err());
        assert!(ray_length_profile(|_| 1.0, 2, 3.0, 10.0).is_err());
    }

    #[test]
    fn yamabe_threshold_example() {
        let r = yamabe_test_integral(-1.0, 3, 9.0, 1.0, 1.0).unwrap();
        assert!((r.threshold - 8.0).abs() < 1e-12);
        assert!(r.value < 0.0);
        assert!((r.ramp_term + 1.0 / 3.0).abs() < 1e-12);
        assert!(yamabe_test_integral(-1.0, 3, 3.0, 1.0, 1.0).unwrap().value > 0.0);
        let free = yamabe_test_integral(-1.0, 3, 2.01, 0.0, 1.0).unwrap();
        assert!(free.value < 0.0 && free.threshold == 2.0);
    }

    #[test]
    fn report_serializes() {
        let r = ray_length_profile(|t| t.powi(-2), 3, 3.0, 1e4).unwrap();
        assert!(r.to_text().contains("verdict: finite"));
        assert!(r.to_json_line().contains("\"verdict\":\"finite\""));
    }
}
