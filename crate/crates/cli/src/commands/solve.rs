use curvlab::ode::{
    monotone_solve, shoot, BoundaryValues, CurvatureBounds, MonotoneOptions, OdeForm, OdeSpec,
    RkOptions, SubSuperPair,
};

use super::{format, render_table, Artifact, Format};
use crate::settings::{CliResult, Settings};

pub const FLAGS: &[(&str, &str)] = &[
    ("method", "shoot or monotone (default shoot)"),
    ("n", "base dimension"),
    ("R", "prescribed curvature R(t)"),
    ("form", "eq13, eq31 or averaged (default eq31)"),
    ("base-R", "base scalar curvature for eq13"),
    ("t0", "left end (default 3)"),
    ("T", "right end (default 1e4)"),
    ("u0", "shooting: u(t0)"),
    ("du0", "shooting: u'(t0) (default 0)"),
    ("rtol", "shooting: relative tolerance"),
    ("atol", "shooting: absolute tolerance"),
    (
        "stop-at-zero",
        "shooting: stop at the first zero (true/false)",
    ),
    ("u-minus", "monotone: subsolution u_minus(t)"),
    ("u-plus", "monotone: supersolution u_plus(t)"),
    ("bc-left", "monotone: u(t0)"),
    ("bc-right", "monotone: u(T)"),
    ("a", "monotone: R >= -a^2"),
    ("C", "monotone: R <= -C/t^alpha"),
    ("alpha", "monotone: decay exponent, at most 2"),
    ("points", "monotone: grid points (default 801)"),
    ("tol", "monotone: stopping tolerance"),
    ("max-iter", "monotone: iteration cap"),
];

pub fn run(s: &Settings) -> CliResult<Artifact> {
    let fmt = format(s, &[Format::Csv, Format::Json])?;
    let n = s.require::<usize>("n")?;
    let r = s.require_str("R")?;
    let t0 = s.or("t0", 3.0)?;
    let t_end = s.or("T", 1e4)?;
    match s.raw("method").unwrap_or("shoot") {
        "shoot" => {
            let form = match s.raw("form") {
                None => OdeForm::Eq31,
                Some(v) => v.parse::<OdeForm>().map_err(|e| s.invalid("form", e))?,
            };
            let nn = n as f64 * (n as f64 - 1.0);
            let r_g = match form {
                OdeForm::Eq13 => s.require::<f64>("base-R")?,
                _ => s.or("base-R", -nn)?,
            };
            let spec = OdeSpec::from_expr(n, r, r_g, t0, t_end, form)?;
            let mut opts = RkOptions::default();
            opts.rtol = s.or("rtol", opts.rtol)?;
            opts.atol = s.or("atol", opts.atol)?;
            opts.stop_at_zero = s.or("stop-at-zero", false)?;
            let traj = shoot(&spec, s.require("u0")?, s.or("du0", 0.0)?, &opts)?;
            let summary = format!(
                "{} accepted steps, {} crossings{}",
                traj.accepted,
                traj.crossings.len(),
                if traj.stopped_early {
                    ", stopped at first zero"
                } else {
                    ""
                }
            );
            Ok(Artifact::new(render_table(&traj.to_table(), fmt)).with_summary(summary))
        }
        "monotone" => {
            let spec = OdeSpec::from_expr(
                n,
                r,
                -(n as f64) * (n as f64 - 1.0),
                t0,
                t_end,
                OdeForm::Eq31,
            )?;
            let pair = SubSuperPair::parse(s.require_str("u-minus")?, s.require_str("u-plus")?)
                .map_err(|e| s.invalid("u-minus", e))?;
            let bc = BoundaryValues {
                left: s.require("bc-left")?,
                right: s.require("bc-right")?,
            };
            let hyps = CurvatureBounds {
                a: s.require("a")?,
                c: s.require("C")?,
                alpha: s.require("alpha")?,
            };
            let defaults = MonotoneOptions::default();
            let opts = MonotoneOptions {
                points: s.or("points", defaults.points)?,
                tol: s.or("tol", defaults.tol)?,
                max_iter: s.or("max-iter", defaults.max_iter)?,
            };
            let sol = monotone_solve(&spec, &pair, bc, &hyps, &opts)?;
            let summary = format!(
                "{} iterations, residual {:e}, bracketed and monotone: {}",
                sol.iterations, sol.residual, sol.bracketed_and_monotone
            );
            Ok(Artifact::new(render_table(&sol.to_table(), fmt)).with_summary(summary))
        }
        other => Err(s.invalid("method", format!("unknown method '{other}'"))),
    }
}
