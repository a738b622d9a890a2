//! Gauss–Legendre quadrature on logarithmic panels.

use std::sync::OnceLock;

const ORDER: usize = 10;

/// Nodes and weights on `[-1, 1]` by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Panel edges log-spaced on `[a, b]` with `per_decade` panels per factor of ten.
pub fn log_panels(a: f64, b: f64, per_decade: usize) -> Vec<f64> {
    let decades = (b / a).log10();
    let k = ((decades * per_decade as f64).ceil() as usize).max(8);
    let (la, lb) = (a.ln(), b.ln());
    let mut edges: Vec<f64> = (0..=k)
        .map(|i| (la + (lb - la) * i as f64 / k as f64).exp())
        .collect();
    edges[0] = a;
    edges[k] = b;
    edges
}

/// Calls `visit(node, weight)` for every quadrature node of `∫_a^b`.
pub fn for_each_node(a: f64, b: f64, per_decade: usize, mut visit: impl FnMut(f64, f64)) {
    let (x, w) = rule();
    let edges = log_panels(a, b, per_decade);
    for p in edges.windows(2) {
        let (mid, half) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
        for i in 0..ORDER {
            visit(mid + half * x[i], half * w[i]);
        }
    }
}

/// `∫_a^b g` with positive `a < b`.
pub fn integrate_log(g: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mut acc = 0.0;
    for_each_node(a, b, 16, |t, w| acc += w * g(t));
    acc
}
