//! Key-value settings merged from a config file and command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use curvlab::sampling::log_space;
use curvlab::CurvError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(CurvError),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Domain(e) => write!(f, "error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<CurvError> for CliError {
    fn from(e: CurvError) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Flag,
    File,
}

/// Flag values layered over config-file values.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, (String, Origin)>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "config line {}: expected key = value, got '{raw}'",
                i + 1
            ))
        })?;
        let key = key.trim().trim_start_matches("--").to_string();
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read --config {}: {e}", path.display())))?;
    parse_config(&text)
}

impl Settings {
    /// Rejects file keys that the command does not know.
    pub fn merge(
        file: BTreeMap<String, String>,
        flags: BTreeMap<String, String>,
        known: &[&str],
    ) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (k, v) in file {
            if !known.contains(&k.as_str()) {
                return Err(CliError::Usage(format!("unknown key '{k}' in config file")));
            }
            values.insert(k, (v, Origin::File));
        }
        for (k, v) in flags {
            values.insert(k, (v, Origin::Flag));
        }
        Ok(Self { values })
    }

    /// Copy with `key` replaced, as if given on the command line.
    pub fn with(&self, key: &str, value: String) -> Self {
        let mut next = self.clone();
        next.values.insert(key.to_string(), (value, Origin::Flag));
        next
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Entries in key order, for metadata records.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values
            .iter()
            .map(|(k, (v, _))| (k.as_str(), v.as_str()))
    }

    fn describe(&self, key: &str) -> String {
        match self.values.get(key) {
            Some((_, Origin::File)) => format!("key '{key}' in config file"),
            _ => format!("--{key}"),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some((v, _)) => v.parse::<T>().map(Some).map_err(|e| {
                CliError::Usage(format!(
                    "invalid value '{v}' for {}: {e}",
                    self.describe(key)
                ))
            }),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> CliResult<T>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| CliError::Usage(format!("missing required flag --{key}")))
    }

    pub fn or<T: FromStr>(&self, key: &str, default: T) -> CliResult<T>
    where
        T::Err: fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require_str(&self, key: &str) -> CliResult<&str> {
        self.raw(key)
            .ok_or_else(|| CliError::Usage(format!("missing required flag --{key}")))
    }

    /// Usage error naming `key`.
    pub fn invalid(&self, key: &str, reason: impl fmt::Display) -> CliError {
        CliError::Usage(format!("{}: {reason}", self.describe(key)))
    }
}

/// `a:b:k` for `k` log-spaced samples on `[a, b]`, or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRange(pub Vec<f64>);

impl FromStr for LogRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|e| format!("'{p}': {e}"));
        match parts.as_slice() {
            [v] => Ok(LogRange(vec![num(v)?])),
            [a, b, k] => {
                let k = k.parse::<usize>().map_err(|e| format!("'{k}': {e}"))?;
                log_space(num(a)?, num(b)?, k)
                    .map(LogRange)
                    .map_err(|e| e.to_string())
            }
            _ => Err("expected a:b:k".into()),
        }
    }
}

/// Comma-separated numbers; `;` separates several points.
#[derive(Debug, Clone, PartialEq)]
pub struct Points(pub Vec<Vec<f64>>);

impl FromStr for Points {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(';')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|e| format!("'{}': {e}", v.trim()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Points)
    }
}
