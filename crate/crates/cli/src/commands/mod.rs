//! Subcommand implementations. Each returns the primary artifact plus an
//! optional human summary for stderr.

mod certify;
mod curvature;
mod oracle;
mod raylength;
mod solve;
mod sweep;

use curvlab::field::Field;
use curvlab::grid::{BaseGrid, Stencil};
use curvlab::io::{fmt_f64, Table};
use curvlab::polar::PolarWarpField;
use curvlab::warp::{BaseGeometry, WarpProfile};

use crate::settings::{CliResult, Settings};

/// Flags shared by every subcommand.
pub const COMMON_FLAGS: &[(&str, &str)] = &[
    (
        "config",
        "key = value file; flags given on the command line win",
    ),
    (
        "out",
        "output path, written atomically with a .meta sidecar",
    ),
    ("format", "csv, json or text, depending on the command"),
];

const BASE_FLAGS: &[(&str, &str)] = &[
    ("n", "base dimension"),
    ("base", "abstract, sphere or torus (default abstract)"),
    ("base-R", "scalar curvature of an abstract base (default 0)"),
    ("volume", "volume of an abstract base (default 1)"),
    ("radius", "sphere radius (default 1)"),
    ("m", "torus points per axis (default 16)"),
    (
        "stencil",
        "torus derivative stencil: fd or spectral (default fd)",
    ),
];

pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub flags: Vec<(&'static str, &'static str)>,
    pub run: fn(&Settings) -> CliResult<Artifact>,
}

impl CommandSpec {
    pub fn known_keys(&self) -> Vec<&'static str> {
        COMMON_FLAGS
            .iter()
            .chain(self.flags.iter())
            .map(|(k, _)| *k)
            .filter(|k| *k != "config")
            .collect()
    }
}

fn with_base(extra: &[(&'static str, &'static str)]) -> Vec<(&'static str, &'static str)> {
    BASE_FLAGS.iter().chain(extra).copied().collect()
}

pub fn commands() -> Vec<CommandSpec> {
    vec![
        CommandSpec {
            name: "curvature",
            about: "Scalar curvature of a warped or polar-type metric on a t grid",
            flags: with_base(curvature::FLAGS),
            run: curvature::run,
        },
        CommandSpec {
            name: "solve",
            about:
                "Solve the radial prescribed-curvature equation by shooting or monotone iteration",
            flags: solve::FLAGS.to_vec(),
            run: solve::run,
        },
        CommandSpec {
            name: "certify",
            about: "Run a comparison certificate or the Yamabe sign check",
            flags: certify::FLAGS.to_vec(),
            run: certify::run,
        },
        CommandSpec {
            name: "oracle",
            about: "Compare closed-form curvature with the finite-difference tensor oracle",
            flags: with_base(oracle::FLAGS),
            run: oracle::run,
        },
        CommandSpec {
            name: "raylength",
            about: "Length of radial rays in a conformally deformed metric",
            flags: raylength::FLAGS.to_vec(),
            run: raylength::run,
        },
        CommandSpec {
            name: "sweep",
            about: "Run a certificate over a range of one parameter",
            flags: sweep::flags(),
            run: sweep::run,
        },
    ]
}

/// Primary output and an optional note for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub primary: String,
    pub summary: Option<String>,
}

impl Artifact {
    pub fn new(primary: String) -> Self {
        Self {
            primary,
            summary: None,
        }
    }

    pub fn with_summary(mut self, summary: String) -> Self {
        self.summary = Some(summary);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Reads `--format`, accepting only the listed choices; the first is the default.
pub fn format(s: &Settings, allowed: &[Format]) -> CliResult<Format> {
    let Some(raw) = s.raw("format") else {
        return Ok(allowed[0]);
    };
    let f = match raw {
        "csv" => Format::Csv,
        "json" => Format::Json,
        "text" => Format::Text,
        other => return Err(s.invalid("format", format!("unknown format '{other}'"))),
    };
    if !allowed.contains(&f) {
        return Err(s.invalid(
            "format",
            format!("'{raw}' is not available for this command"),
        ));
    }
    Ok(f)
}

fn json_number(v: f64) -> String {
    serde_json::to_string(&v).expect("f64 serializes")
}

/// CSV, or one JSON object per row.
pub fn render_table(table: &Table, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = String::new();
            for row in &table.rows {
                let fields: Vec<String> = table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, &v)| {
                        format!(
                            "{}:{}",
                            serde_json::to_string(c).expect("str"),
                            json_number(v)
                        )
                    })
                    .collect();
                out.push('{');
                out.push_str(&fields.join(","));
                out.push_str("}\n");
            }
            out
        }
        Format::Csv | Format::Text => table.to_csv(),
    }
}

pub fn base_geometry(s: &Settings, n: usize) -> CliResult<BaseGeometry> {
    let kind = s.raw("base").unwrap_or("abstract");
    let reject = |key: &str| -> CliResult<()> {
        if s.has(key) {
            return Err(s.invalid(key, format!("does not apply to base '{kind}'")));
        }
        Ok(())
    };
    let base = match kind {
        "abstract" => {
            reject("radius")?;
            reject("m")?;
            reject("stencil")?;
            BaseGeometry::abstract_constant(n, s.or("base-R", 0.0)?, s.or("volume", 1.0)?)?
        }
        "sphere" => {
            for k in ["base-R", "volume", "m", "stencil"] {
                reject(k)?;
            }
            BaseGeometry::sphere(n, s.or("radius", 1.0)?)?
        }
        "torus" => {
            for k in ["base-R", "volume", "radius"] {
                reject(k)?;
            }
            let stencil = match s.raw("stencil").unwrap_or("fd") {
                "fd" => Stencil::SecondOrder,
                "spectral" => Stencil::Spectral,
                other => return Err(s.invalid("stencil", format!("unknown stencil '{other}'"))),
            };
            let grid = BaseGrid::new(n, s.or("m", 16)?)?.with_stencil(stencil);
            BaseGeometry::torus_with_grid(grid)?
        }
        other => return Err(s.invalid("base", format!("unknown base kind '{other}'"))),
    };
    Ok(base)
}

/// Warp function, radial or depending on the base point.
pub enum Warp {
    Radial(WarpProfile),
    Polar(PolarWarpField),
}

impl Warp {
    pub fn polar(&self, n: usize) -> PolarWarpField {
        match self {
            Warp::Radial(f) => PolarWarpField::from_profile(f, n),
            Warp::Polar(f) => f.clone(),
        }
    }
}

/// Expression errors in user input are usage errors on the flag that carried them.
pub fn parse_field(s: &Settings, key: &str, n: usize) -> CliResult<Field> {
    let src = s.require_str(key)?;
    Field::parse(src, n).map_err(|e| s.invalid(key, e))
}

pub fn warp(s: &Settings, n: usize, base: &BaseGeometry) -> CliResult<Warp> {
    let field = parse_field(s, "profile", n)?;
    if field.depends_on_base() {
        if base.grid().is_none() {
            return Err(s.invalid(
                "profile",
                format!(
                    "a profile depending on x1..x{n} needs --base torus, got {}",
                    base.kind().tag()
                ),
            ));
        }
        let f = PolarWarpField::parse(field.source(), n).map_err(|e| s.invalid("profile", e))?;
        return Ok(Warp::Polar(f));
    }
    let profile = WarpProfile::parse(field.source()).map_err(|e| s.invalid("profile", e))?;
    Ok(Warp::Radial(profile))
}

pub fn fmt_point(p: &[f64]) -> String {
    p.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(",")
}
