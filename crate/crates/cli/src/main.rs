//! `curvlab`: curvature, ODE solves, certificates, oracle checks and ray
//! lengths from the command line.
//!
//! Exit status is 0 on success (inconclusive verdicts included), 1 on a
//! domain error and 2 on a usage error.

mod commands;
mod output;
mod settings;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::SystemTime;

use clap::{Arg, ArgMatches, Command};

use commands::{commands, CommandSpec, COMMON_FLAGS};
use output::{meta_path, write_atomic, RunMeta};
use settings::{read_config, CliError, CliResult, Settings};

const THREADS_VAR: &str = "CURVLAB_THREADS";

fn flag(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name)
        .long(name)
        .value_name("VALUE")
        .help(help)
        .allow_hyphen_values(true)
}

fn cli(specs: &[CommandSpec]) -> Command {
    let mut app = Command::new("curvlab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Scalar curvature, prescribed-curvature ODEs and comparison certificates on manifold ends")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in specs {
        let mut sub = Command::new(spec.name).about(spec.about);
        for &(name, help) in COMMON_FLAGS.iter().chain(&spec.flags) {
            sub = sub.arg(flag(name, help));
        }
        app = app.subcommand(sub);
    }
    app
}

fn thread_count() -> CliResult<usize> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(rayon::current_num_threads()),
        Ok(v) => {
            let k: usize = v.trim().parse().map_err(|_| {
                CliError::Usage(format!(
                    "{THREADS_VAR} must be a positive integer, got '{v}'"
                ))
            })?;
            if k == 0 {
                return Err(CliError::Usage(format!("{THREADS_VAR} must be at least 1")));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global()
                .map_err(|e| CliError::Usage(format!("{THREADS_VAR}: {e}")))?;
            Ok(k)
        }
    }
}

fn settings_for(spec: &CommandSpec, m: &ArgMatches) -> CliResult<Settings> {
    let mut flags = BTreeMap::new();
    for (name, _) in &spec.flags {
        if let Some(v) = m.get_one::<String>(name) {
            flags.insert(name.to_string(), v.clone());
        }
    }
    for key in ["out", "format"] {
        if let Some(v) = m.get_one::<String>(key) {
            flags.insert(key.to_string(), v.clone());
        }
    }
    let file = match m.get_one::<String>("config") {
        Some(path) => read_config(&PathBuf::from(path))?,
        None => BTreeMap::new(),
    };
    Settings::merge(file, flags, &spec.known_keys())
}

fn execute(spec: &CommandSpec, m: &ArgMatches) -> CliResult<()> {
    let started = SystemTime::now();
    let threads = thread_count()?;
    let settings = settings_for(spec, m)?;
    let artifact = (spec.run)(&settings)?;
    if let Some(note) = &artifact.summary {
        eprintln!("{}: {note}", spec.name);
    }
    match settings.raw("out") {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(artifact.primary.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let path = PathBuf::from(path);
            write_atomic(&path, &artifact.primary)?;
            let meta = RunMeta {
                command: spec.name,
                settings: settings.entries().collect(),
                started,
                threads,
            };
            write_atomic(&meta_path(&path), &meta.render(SystemTime::now()))?;
        }
    }
    Ok(())
}

fn main() {
    let specs = commands();
    let matches = cli(&specs).get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let spec = specs
        .iter()
        .find(|s| s.name == name)
        .expect("registered subcommand");
    if let Err(e) = execute(spec, sub) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
