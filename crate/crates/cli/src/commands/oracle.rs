use curvlab::io::fmt_f64;
use curvlab::oracle::{
    assemble_metric, convergence_ladder, fd_scalar_curvature, oracle_report_csv, OracleRow,
    WarpSource, DEFAULT_STEP,
};
use curvlab::polar::{conformal_scalar_curvature, polar_scalar_curvature, ConformalFactorField};
use curvlab::sampling::log_space;
use curvlab::warp::{warped_scalar_curvature, BaseGeometry};

use super::{base_geometry, fmt_point, format, parse_field, warp, Artifact, Format, Warp};
use crate::settings::{CliResult, LogRange, Settings};

pub const FLAGS: &[(&str, &str)] = &[
    (
        "profile",
        "warp function of t, or of t and x1..xn on a torus",
    ),
    ("conformal", "optional conformal factor u(t, x1..xn)"),
    ("t", "sample times a:b:k (default 2:20:4)"),
    ("samples", "torus grid points per time (default 4)"),
    ("h", "finite-difference step (default 1e-3)"),
    ("ladder", "true for errors on the h, h/2, h/4 ladder"),
];

/// Base coordinates of the probe points: grid points spread over every axis
/// on a torus, a fixed generic point in the polar chart otherwise.
fn probe_points(base: &BaseGeometry, samples: usize) -> Vec<(Vec<f64>, Option<usize>)> {
    match base.grid() {
        Some(g) => {
            let m = g.points_per_axis();
            (0..samples)
                .map(|j| {
                    let multi: Vec<usize> = (0..g.n()).map(|a| (1 + j * (3 + 2 * a)) % m).collect();
                    let idx = g.flat_index(&multi);
                    (g.coords(idx), Some(idx))
                })
                .collect()
        }
        None => vec![(
            (0..base.n()).map(|k| 0.9 + 0.1 * (k % 4) as f64).collect(),
            None,
        )],
    }
}

pub fn run(s: &Settings) -> CliResult<Artifact> {
    format(s, &[Format::Csv])?;
    let n = s.require::<usize>("n")?;
    let base = base_geometry(s, n)?;
    let f = warp(s, n, &base)?;
    let ts = match s.get::<LogRange>("t")? {
        Some(r) => r.0,
        None => log_space(2.0, 20.0, 4)?,
    };
    let h = s.or("h", DEFAULT_STEP)?;
    let ladder = s.or("ladder", false)?;
    let conformal = if s.has("conformal") {
        Some(ConformalFactorField::from_field(parse_field(
            s,
            "conformal",
            n,
        )?))
    } else {
        None
    };
    let polar = f.polar(n);
    let source = match &f {
        Warp::Radial(p) => WarpSource::Radial(p),
        Warp::Polar(p) => WarpSource::Polar(p),
    };
    let metric = assemble_metric(source, &base, conformal.as_ref(), h)?;
    let points = probe_points(&base, s.or("samples", 4)?);

    let mut rows = Vec::new();
    let mut ladder_csv = String::from("point,err_h,err_h2,err_h4,order_1,order_2\n");
    let mut worst = 0.0f64;
    for &t in &ts {
        for (x, idx) in &points {
            let closed = match (&conformal, &f) {
                (Some(u), _) => conformal_scalar_curvature(u, &polar, &base, t, *idx)?,
                (None, Warp::Radial(p)) => warped_scalar_curvature(p, &base, t)?,
                (None, Warp::Polar(_)) => polar_scalar_curvature(&polar, &base, t, *idx)?,
            };
            let mut point = vec![t];
            point.extend_from_slice(x);
            if ladder {
                let l = convergence_ladder(&metric, &point, closed)?;
                let cells: Vec<String> = l
                    .errors
                    .iter()
                    .chain(&l.orders)
                    .map(|&v| fmt_f64(v))
                    .collect();
                ladder_csv.push_str(&format!(
                    "{},{}\n",
                    fmt_point(&point).replace(',', ";"),
                    cells.join(",")
                ));
                worst = worst.max(l.errors[0]);
            } else {
                let fd = fd_scalar_curvature(&metric, &point)?.scalar;
                let row = OracleRow {
                    point,
                    closed_form: closed,
                    fd,
                };
                worst = worst.max(row.rel_err());
                rows.push(row);
            }
        }
    }
    let primary = if ladder {
        ladder_csv
    } else {
        oracle_report_csv(&rows)
    };
    Ok(Artifact::new(primary)
        .with_summary(format!("largest relative error {worst:e} at h = {h:e}")))
}
