use rayon::prelude::*;

use curvlab::completeness::ray_length;

use super::{format, parse_field, Artifact, Format};
use crate::settings::{CliResult, Points, Settings};

pub const FLAGS: &[(&str, &str)] = &[
    ("u", "conformal factor u(t, x1..xn)"),
    ("n", "base dimension, at least 3"),
    (
        "x0",
        "base points, comma-separated coordinates, ';' between points (default origin)",
    ),
    ("t0", "left end (default 3)"),
    ("T", "right end (default 1e4)"),
];

pub fn run(s: &Settings) -> CliResult<Artifact> {
    let fmt = format(s, &[Format::Text, Format::Json])?;
    let n = s.require::<usize>("n")?;
    let u = parse_field(s, "u", n)?;
    let t0 = s.or("t0", 3.0)?;
    let t_end = s.or("T", 1e4)?;
    let points = s.or("x0", Points(vec![vec![0.0; n]]))?.0;
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(s.invalid(
            "x0",
            format!("point has {} coordinates, expected {n}", p.len()),
        ));
    }
    let reports = points
        .par_iter()
        .map(|x0| ray_length(&u, x0, n, t0, t_end))
        .collect::<Result<Vec<_>, _>>()?;
    let primary = match fmt {
        Format::Json => reports.iter().map(|r| r.to_json_line() + "\n").collect(),
        _ => reports
            .iter()
            .map(|r| r.to_text())
            .collect::<Vec<_>>()
            .join("\n"),
    };
    let summary = reports
        .iter()
        .map(|r| r.verdict.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Artifact::new(primary).with_summary(format!("ray verdicts: {summary}")))
}
