use curvlab::polar::{
    conformal_scalar_curvature_slice, polar_scalar_curvature_slice, ConformalFactorField,
};
use curvlab::sampling::log_space;
use curvlab::warp::CurvatureProfile;

use super::{base_geometry, format, parse_field, render_table, warp, Artifact, Format, Warp};
use crate::settings::{CliResult, LogRange, Settings};

pub const FLAGS: &[(&str, &str)] = &[
    (
        "profile",
        "warp function of t, or of t and x1..xn on a torus",
    ),
    ("conformal", "optional conformal factor u(t, x1..xn)"),
    ("t", "samples a:b:k, log-spaced (default 3:1e4:64)"),
];

pub fn run(s: &Settings) -> CliResult<Artifact> {
    let fmt = format(s, &[Format::Csv, Format::Json])?;
    let n = s.require::<usize>("n")?;
    let base = base_geometry(s, n)?;
    let f = warp(s, n, &base)?;
    let ts = match s.get::<LogRange>("t")? {
        Some(r) => r.0,
        None => log_space(3.0, 1e4, 64)?,
    };
    let conformal = if s.has("conformal") {
        Some(ConformalFactorField::from_field(parse_field(
            s,
            "conformal",
            n,
        )?))
    } else {
        None
    };

    let profile = match (&f, &conformal) {
        (Warp::Radial(p), None) => CurvatureProfile::sample(p, &base, ts)?,
        _ => {
            let pf = f.polar(n);
            let mut values = Vec::new();
            for &t in &ts {
                let slice = match &conformal {
                    Some(u) => conformal_scalar_curvature_slice(u, &pf, &base, t)?,
                    None => polar_scalar_curvature_slice(&pf, &base, t)?,
                };
                values.extend(slice);
            }
            match base.grid() {
                Some(g) if values.len() > ts.len() => {
                    let coords = (0..g.len()).map(|i| g.coords(i)).collect();
                    CurvatureProfile::with_coords(ts, coords, values)?
                }
                _ => CurvatureProfile::new(ts, values)?,
            }
        }
    };
    let (lo, hi) = profile
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    Ok(
        Artifact::new(render_table(&profile.to_table(), fmt)).with_summary(format!(
            "{} samples, R in [{lo}, {hi}]",
            profile.values().len()
        )),
    )
}
