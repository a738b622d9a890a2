use serde::Serialize;

use curvlab::completeness::{yamabe_test_integral, YamabeReport};
use curvlab::io::fmt_f64;
use curvlab::ode::{
    barrier_certificate_33, comparison_certificate, oscillation_certificate, CertificateParams,
    Verdict,
};
use curvlab::warp::WarpProfile;

use super::{format, Artifact, Format};
use crate::settings::{CliResult, Settings};

pub const KINDS: &[&str] = &[
    "oscillation",
    "thm48",
    "thm413",
    "thm418",
    "thm112",
    "thm38",
    "barrier33",
    "yamabe",
];

pub const FLAGS: &[(&str, &str)] = &[
    (
        "kind",
        "oscillation, thm48, thm413, thm418, thm112, thm38, barrier33 or yamabe",
    ),
    ("n", "base dimension"),
    ("c", "comparison constant"),
    ("b", "curvature scale, or the cutoff radius for yamabe"),
    ("t0", "left end (default 3)"),
    ("T", "right end (default 1e4)"),
    ("f0", "initial value of the averaged quantity (default 1)"),
    ("df0", "initial slope of the averaged quantity (default 0)"),
    ("c1", "thm418: constant C1"),
    ("c2", "thm418: constant C2"),
    ("cu", "thm418: constant C"),
    ("volume", "base volume (default 1)"),
    ("u0", "initial value (default 1)"),
    (
        "du0",
        "initial slope (thm112 default 0; thm38 default gives v' = 0)",
    ),
    ("kappa2", "kappa^2 with R(g) <= -kappa^2"),
    ("delta", "thm38: curvature margin"),
    ("profile", "warp function f(t) for thm38 and barrier33"),
    ("R-end", "yamabe: scalar curvature of the end"),
    ("Co", "yamabe: gradient bound of the cutoff"),
];

#[derive(Debug, Clone, Serialize)]
pub struct YamabeRecord {
    certificate: &'static str,
    n: usize,
    r_end: f64,
    b: f64,
    c_o: f64,
    volume: f64,
    #[serde(flatten)]
    pub report: YamabeReport,
    pub sign: &'static str,
}

/// Outcome of one `certify` run.
#[derive(Debug)]
pub enum Certified {
    Verdict(Box<Verdict>),
    Yamabe(Box<YamabeRecord>),
}

impl Certified {
    pub fn to_text(&self) -> String {
        match self {
            Certified::Verdict(v) => v.to_text(),
            Certified::Yamabe(r) => {
                let mut s = String::new();
                s.push_str("certificate: yamabe\n");
                s.push_str(&format!("param.n: {}\n", r.n));
                s.push_str(&format!("param.R_end: {}\n", fmt_f64(r.r_end)));
                s.push_str(&format!("param.b: {}\n", fmt_f64(r.b)));
                s.push_str(&format!("param.C_o: {}\n", fmt_f64(r.c_o)));
                s.push_str(&format!("param.volume: {}\n", fmt_f64(r.volume)));
                s.push_str(&format!("value: {}\n", fmt_f64(r.report.value)));
                s.push_str(&format!("threshold: {}\n", fmt_f64(r.report.threshold)));
                s.push_str(&format!(
                    "gradient_term: {}\n",
                    fmt_f64(r.report.gradient_term)
                ));
                s.push_str(&format!(
                    "plateau_term: {}\n",
                    fmt_f64(r.report.plateau_term)
                ));
                s.push_str(&format!("ramp_term: {}\n", fmt_f64(r.report.ramp_term)));
                s.push_str(&format!("sign: {}\n", r.sign));
                s
            }
        }
    }

    pub fn to_json_line(&self) -> String {
        match self {
            Certified::Verdict(v) => v.to_json_line(),
            Certified::Yamabe(r) => serde_json::to_string(r).expect("record serializes"),
        }
    }

    pub fn verdict(&self) -> Option<&Verdict> {
        match self {
            Certified::Verdict(v) => Some(v),
            Certified::Yamabe(_) => None,
        }
    }
}

pub fn run_certificate(s: &Settings) -> CliResult<Certified> {
    let kind = s.require_str("kind")?;
    let t0 = s.or("t0", 3.0)?;
    let t_end = s.or("T", 1e4)?;
    let f0 = || s.or("f0", 1.0);
    let df0 = || s.or("df0", 0.0);
    let params = match kind {
        "oscillation" => {
            let v = oscillation_certificate(s.require("c")?, t0, t_end)?;
            return Ok(Certified::Verdict(Box::new(v)));
        }
        "barrier33" => {
            let profile = optional_profile(s)?;
            let v = barrier_certificate_33(
                s.require("kappa2")?,
                s.require("n")?,
                (t0, t_end),
                profile.as_ref(),
            )?;
            return Ok(Certified::Verdict(Box::new(v)));
        }
        "yamabe" => {
            let n = s.require("n")?;
            let r_end = s.require("R-end")?;
            let b = s.require("b")?;
            let c_o = s.require("Co")?;
            let volume = s.or("volume", 1.0)?;
            let report = yamabe_test_integral(r_end, n, b, c_o, volume)?;
            let sign = if report.value < 0.0 {
                "negative"
            } else {
                "nonnegative"
            };
            return Ok(Certified::Yamabe(Box::new(YamabeRecord {
                certificate: "yamabe",
                n,
                r_end,
                b,
                c_o,
                volume,
                report,
                sign,
            })));
        }
        "thm48" => CertificateParams::Thm48 {
            n: s.require("n")?,
            b: s.require("b")?,
            t0,
            f0: f0()?,
            df0: df0()?,
            t_end,
        },
        "thm413" => CertificateParams::Thm413 {
            n: s.require("n")?,
            c: s.require("c")?,
            b: s.require("b")?,
            t0,
            f0: f0()?,
            df0: df0()?,
            t_end,
        },
        "thm418" => CertificateParams::Thm418 {
            n: s.require("n")?,
            b: s.require("b")?,
            c1: s.require("c1")?,
            c2: s.require("c2")?,
            c_u: s.require("cu")?,
            t0,
            f0: f0()?,
            df0: df0()?,
            t_end,
        },
        "thm112" => CertificateParams::Thm112 {
            n: s.require("n")?,
            c: s.require("c")?,
            volume: s.or("volume", 1.0)?,
            t0,
            u0: s.or("u0", 1.0)?,
            du0: s.or("du0", 0.0)?,
            t_end,
        },
        "thm38" => CertificateParams::Thm38 {
            n: s.require("n")?,
            kappa2: s.require("kappa2")?,
            delta: s.require("delta")?,
            profile: optional_profile(s)?
                .ok_or_else(|| s.invalid("profile", "required for thm38"))?,
            t0,
            u0: s.or("u0", 1.0)?,
            du0: s.get("du0")?,
            t_end,
        },
        other => {
            return Err(s.invalid(
                "kind",
                format!(
                    "unknown certificate '{other}' (expected one of {})",
                    KINDS.join(", ")
                ),
            ))
        }
    };
    Ok(Certified::Verdict(Box::new(comparison_certificate(
        &params,
    )?)))
}

fn optional_profile(s: &Settings) -> CliResult<Option<WarpProfile>> {
    match s.raw("profile") {
        None => Ok(None),
        Some(src) => WarpProfile::parse(src)
            .map(Some)
            .map_err(|e| s.invalid("profile", e)),
    }
}

pub fn run(s: &Settings) -> CliResult<Artifact> {
    let fmt = format(s, &[Format::Text, Format::Json])?;
    let out = run_certificate(s)?;
    let summary = match out.verdict() {
        Some(v) => format!("{}: {}", v.certificate, v.kind),
        None => "yamabe: sign check".to_string(),
    };
    let primary = match fmt {
        Format::Json => format!("{}\n", out.to_json_line()),
        _ => out.to_text(),
    };
    Ok(Artifact::new(primary).with_summary(summary))
}
