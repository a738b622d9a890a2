use crate::error::{CurvError, Result};

pub const PROBE_POINTS: usize = 64;
pub const PROBE_END: f64 = 1.0e3;

/// `k` log-spaced samples on `[a, b]`, endpoints exact.
pub fn log_space(a: f64, b: f64, k: usize) -> Result<Vec<f64>> {
    if !(a > 0.0 && b >= a && a.is_finite() && b.is_finite()) || k == 0 {
        return Err(CurvError::InvalidArgument(format!(
            "log range needs 0 < a <= b and k >= 1, got {a}:{b}:{k}"
        )));
    }
    if k == 1 {
        return Ok(vec![a]);
    }
    if b == a {
        return Err(CurvError::InvalidArgument(format!(
            "log range {a}:{b}:{k} is degenerate"
        )));
    }
    let (la, lb) = (a.ln(), b.ln());
    let step = (lb - la) / (k - 1) as f64;
    let mut out: Vec<f64> = (0..k).map(|i| (la + step * i as f64).exp()).collect();
    out[0] = a;
    out[k - 1] = b;
    Ok(out)
}

/// `k` evenly spaced samples on `[a, b]`.
pub fn lin_space(a: f64, b: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![a];
    }
    let step = (b - a) / (k - 1) as f64;
    (0..k)
        .map(|i| if i == k - 1 { b } else { a + step * i as f64 })
        .collect()
}

/// Default grid for checking identities of a profile defined for `t > t_min`.
pub fn probe_grid(t_min: f64) -> Vec<f64> {
    log_space(t_min.max(0.0) + 0.5, PROBE_END, PROBE_POINTS).expect("valid probe range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_space_endpoints_and_ratio() {
        let s = log_space(1.0, 1000.0, 4).unwrap();
        assert_eq!(s[0], 1.0);
        assert_eq!(s[3], 1000.0);
        assert!((s[1] - 10.0).abs() < 1e-12);
        assert!(log_space(0.0, 1.0, 3).is_err());
        assert_eq!(log_space(2.0, 2.0, 1).unwrap(), vec![2.0]);
    }

    #[test]
    fn probe_grid_shape() {
        let g = probe_grid(0.0);
        assert_eq!(g.len(), 64);
        assert_eq!(g[0], 0.5);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
