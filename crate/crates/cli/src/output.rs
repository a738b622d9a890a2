//! Atomic artifact writes with a metadata sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use tempfile::NamedTempFile;

use crate::settings::CliResult;

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".meta");
    PathBuf::from(s)
}

fn unix_seconds(t: SystemTime) -> f64 {
    t.duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

/// Run record kept out of the primary artifact so that it stays reproducible.
pub struct RunMeta<'a> {
    pub command: &'a str,
    pub settings: Vec<(&'a str, &'a str)>,
    pub started: SystemTime,
    pub threads: usize,
}

impl RunMeta<'_> {
    pub fn render(&self, finished: SystemTime) -> String {
        let mut s = String::new();
        s.push_str(&format!("command = {}\n", self.command));
        s.push_str(&format!("version = {}\n", env!("CARGO_PKG_VERSION")));
        s.push_str(&format!("threads = {}\n", self.threads));
        s.push_str(&format!(
            "started_unix = {:.6}\n",
            unix_seconds(self.started)
        ));
        s.push_str(&format!("finished_unix = {:.6}\n", unix_seconds(finished)));
        for (k, v) in &self.settings {
            s.push_str(&format!("setting.{k} = {v}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, "a\n").unwrap();
        write_atomic(&p, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b\n");
        assert_eq!(meta_path(&p), dir.path().join("out.csv.meta"));
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
