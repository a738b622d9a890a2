use std::f64::consts::{FRAC_PI_2, PI};

use super::rk::{integrate, RkOptions};
use super::verdict::Verdict;
use super::ComparisonTransform;
use crate::error::{CurvError, Result};

const NAME: &str = "oscillation";
/// Largest relative crossing shift tolerated when re-integrating at a tighter tolerance.
pub(crate) const REVALIDATION_SHIFT: f64 = 1e-3;

/// Integrates the extremal case of `t² u'' + (c/4) u ≤ 0` from
/// `u(t0) = 1`, `u'(t0) = 1/(2 t0)` and classifies by its zero crossings.
pub fn oscillation_certificate(c: f64, t0: f64, t_end: f64) -> Result<Verdict> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(CurvError::InvalidArgument(format!(
            "c must be positive, got {c}"
        )));
    }
    if !(t0 > 2.0 && t_end > t0 && t_end.is_finite()) {
        return Err(CurvError::InvalidArgument(format!(
            "needs T > t0 > 2, got t0 = {t0}, T = {t_end}"
        )));
    }
    let rhs = |t: f64, u: f64, _du: f64| -c * u / (4.0 * t * t);
    let du0 = 1.0 / (2.0 * t0);
    let opts = RkOptions::default();

    if c <= 1.0 {
        let alpha = (1.0 - (1.0 - c).sqrt()) / 2.0;
        let traj = integrate(rhs, t0, 1.0, du0, t_end, &opts)?;
        let crossings = traj.crossing_times();
        return Ok(Verdict::inconclusive(
            NAME,
            format!("c = {c} <= 1: t^alpha with alpha(1 - alpha) = c/4 is a positive solution"),
        )
        .with_crossings(crossings)
        .param("c", c)
        .param("t0", t0)
        .param("T", t_end)
        .witness("alpha", alpha)
        .witness("alpha_defect", alpha * (1.0 - alpha) - c / 4.0)
        .witness("u_end", traj.end().1));
    }

    let transform = ComparisonTransform::euler(c, 0.25)?;
    let delta = (c - 1.0).sqrt() / 2.0;
    let predicted_first = t0 * (FRAC_PI_2 / delta).exp();
    let ratio = (PI / delta).exp();
    if t_end < predicted_first {
        return Err(CurvError::IntervalTooShort {
            required: predicted_first * 1.01,
        });
    }
    let traj = integrate(rhs, t0, 1.0, du0, t_end, &opts)?;
    let crossings = traj.crossing_times();
    if crossings.is_empty() {
        return Err(CurvError::IntervalTooShort {
            required: predicted_first * 1.01,
        });
    }
    let fine = integrate(rhs, t0, 1.0, du0, t_end, &opts.refined(32.0))?;
    let shift = crossings
        .iter()
        .zip(fine.crossing_times())
        .map(|(a, b)| ((a - b) / a).abs())
        .fold(0.0, f64::max);
    if fine.crossings.len() != crossings.len() || shift >= REVALIDATION_SHIFT {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("crossing times moved by {shift:e} under refinement"),
        )
        .param("c", c));
    }
    let mut v = Verdict::nonexistence(NAME, crossings.clone())?
        .param("c", c)
        .param("t0", t0)
        .param("T", t_end)
        .witness("delta", transform.delta)
        .witness("predicted_first_crossing", predicted_first)
        .witness("predicted_ratio", ratio)
        .witness("required_T_second_crossing", predicted_first * ratio)
        .witness("revalidation_shift", shift);
    if crossings.len() >= 2 {
        let measured = crossings[1] / crossings[0];
        let worst = crossings
            .windows(2)
            .map(|w| ((w[1] / w[0]) / ratio - 1.0).abs())
            .fold(0.0, f64::max);
        v = v
            .witness("measured_ratio", measured)
            .witness("ratio_defect", worst);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::VerdictKind;

    #[test]
    fn crossing_ratio_matches_euler_theory() {
        let v = oscillation_certificate(1.2, 3.0, 1e11).unwrap();
        assert_eq!(v.kind, VerdictKind::Nonexistence);
        assert!(v.crossing_count >= 2);
        assert!(v.witness["ratio_defect"] < 1e-6);
        let first = 3.0 * (FRAC_PI_2 / (0.2f64.sqrt() / 2.0)).exp();
        assert!((v.crossings[0] / first - 1.0).abs() < 1e-8);
    }

    #[test]
    fn subcritical_witness() {
        let v = oscillation_certificate(0.8, 3.0, 1e5).unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        assert!((v.witness["alpha"] - 0.276_393_202_250_021).abs() < 1e-12);
        assert_eq!(v.crossing_count, 0);
        let crit = oscillation_certificate(1.0, 3.0, 1e5).unwrap();
        assert_eq!(crit.witness["alpha"], 0.5);
    }

    #[test]
    fn short_interval_reports_required_t() {
        match oscillation_certificate(1.2, 3.0, 100.0) {
            Err(CurvError::IntervalTooShort { required }) => assert!(required > 3000.0),
            other => panic!("{other:?}"),
        }
        assert!(oscillation_certificate(1.2, 1.0, 100.0).is_err());
    }
}
