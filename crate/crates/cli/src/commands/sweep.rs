use rayon::prelude::*;

use curvlab::io::fmt_f64;

use super::certify::{self, Certified};
use super::{format, Artifact, Format};
use crate::settings::{CliResult, LogRange, Settings};

const OWN_FLAGS: &[(&str, &str)] = &[
    ("param", "name of the certificate flag to vary"),
    ("values", "a:b:k log-spaced, or a comma-separated list"),
];

pub fn flags() -> Vec<(&'static str, &'static str)> {
    OWN_FLAGS.iter().chain(certify::FLAGS).copied().collect()
}

fn values(s: &Settings) -> CliResult<Vec<String>> {
    let raw = s.require_str("values")?;
    if raw.contains(':') {
        let r = s.require::<LogRange>("values")?;
        return Ok(r.0.iter().map(|v| format!("{v:?}")).collect());
    }
    let list: Vec<String> = raw
        .split(',')
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect();
    if list.is_empty() {
        return Err(s.invalid("values", "no values given"));
    }
    Ok(list)
}

fn csv_cell(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub fn run(s: &Settings) -> CliResult<Artifact> {
    let fmt = format(s, &[Format::Json, Format::Csv])?;
    let param = s.require_str("param")?;
    if param == "kind" || !certify::FLAGS.iter().any(|(k, _)| *k == param) {
        return Err(s.invalid("param", format!("'{param}' is not a certificate flag")));
    }
    let vals = values(s)?;
    s.require_str("kind")?;

    // usage errors abort the sweep; domain errors are recorded per value
    let runs: Vec<(String, CliResult<Certified>)> = vals
        .par_iter()
        .map(|v| {
            (
                v.clone(),
                certify::run_certificate(&s.with(param, v.clone())),
            )
        })
        .collect();
    let mut primary = String::new();
    if fmt == Format::Csv {
        primary.push_str("value,outcome,crossing_count,first_crossing,detail\n");
    }
    let mut failures = 0;
    for (v, run) in runs {
        let outcome = match run {
            Err(e @ crate::settings::CliError::Usage(_)) => return Err(e),
            other => other,
        };
        match fmt {
            Format::Json => {
                let value = serde_json::Value::String(v.clone());
                let line = match &outcome {
                    Ok(c) => format!(
                        "{{\"param\":\"{param}\",\"value\":{value},\"result\":{}}}",
                        c.to_json_line()
                    ),
                    Err(e) => format!(
                        "{{\"param\":\"{param}\",\"value\":{value},\"error\":{}}}",
                        serde_json::Value::String(e.to_string())
                    ),
                };
                primary.push_str(&line);
                primary.push('\n');
            }
            _ => {
                let row = match &outcome {
                    Ok(Certified::Verdict(vd)) => format!(
                        "{},{},{},{},{}",
                        csv_cell(&v),
                        vd.kind,
                        vd.crossing_count,
                        vd.first_crossing().map_or(String::new(), fmt_f64),
                        csv_cell(vd.reason.as_deref().unwrap_or(""))
                    ),
                    Ok(Certified::Yamabe(r)) => {
                        format!("{},{},0,,{}", csv_cell(&v), r.sign, fmt_f64(r.report.value))
                    }
                    Err(e) => format!("{},error,0,,{}", csv_cell(&v), csv_cell(&e.to_string())),
                };
                primary.push_str(&row);
                primary.push('\n');
            }
        }
        if outcome.is_err() {
            failures += 1;
        }
    }
    Ok(Artifact::new(primary)
        .with_summary(format!("{} runs, {failures} domain errors", vals.len())))
}
