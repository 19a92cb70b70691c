mod commands;
mod error;
mod output;
mod settings;

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{Arg, ArgMatches, Command};

use commands::{specs, CommandSpec};
use error::CliError;
use output::{write_with_manifest, VERSION};
use settings::{Settings, RESERVED};

/// Environment variable selecting the worker thread count.
const THREADS_VAR: &str = "LTFSM_THREADS";

fn build_cli(specs: &[CommandSpec]) -> Command {
    let mut cli = Command::new("ltfsm")
        .version(VERSION)
        .about("Simulate local time fractional stable motion and check it against oracles")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in specs {
        let mut sub = Command::new(spec.name).about(spec.about).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value settings; flags take precedence"),
        );
        for (key, help) in &spec.keys {
            sub = sub.arg(
                Arg::new(*key)
                    .long(*key)
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .help(*help),
            );
        }
        cli = cli.subcommand(sub);
    }
    cli.subcommand(
        Command::new("replay")
            .about("Re-run the command recorded in a manifest")
            .arg(Arg::new("manifest").value_name("MANIFEST").required(true))
            .arg(
                Arg::new("out")
                    .long("out")
                    .value_name("FILE")
                    .help("write to this path instead of the recorded one"),
            ),
    )
}

fn read_settings(path: &Path) -> Result<Settings, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    Settings::parse(&text)
}

fn check_keys(settings: &Settings, spec: &CommandSpec) -> Result<(), CliError> {
    for key in settings.keys() {
        if !RESERVED.contains(&key) && !spec.keys.iter().any(|(k, _)| *k == key) {
            return Err(CliError::Config(format!("unknown setting '{key}' for {}", spec.name)));
        }
    }
    Ok(())
}

fn execute(spec: &CommandSpec, settings: &Settings) -> Result<i32, CliError> {
    check_keys(settings, spec)?;
    let outcome = (spec.run)(settings)?;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(outcome.stdout.as_bytes())?;
    stdout.flush()?;
    if let Some((path, contents)) = &outcome.file {
        let manifest = write_with_manifest(spec.name, path, contents, &outcome.resolved)?;
        eprintln!("wrote {} and {}", path.display(), manifest.display());
    }
    match outcome.failure {
        Some(f) => {
            eprintln!("{f}");
            Ok(f.exit_code())
        }
        None => Ok(0),
    }
}

fn run_subcommand(specs: &[CommandSpec], name: &str, sub: &ArgMatches) -> Result<i32, CliError> {
    if name == "replay" {
        let manifest = sub.get_one::<String>("manifest").expect("required");
        let mut settings = read_settings(Path::new(manifest))?;
        let command = settings
            .get("command")
            .ok_or_else(|| CliError::Config(format!("{manifest} names no command")))?
            .to_string();
        if let Some(v) = settings.get("version") {
            if v != VERSION {
                eprintln!("warning: manifest written by version {v}, running {VERSION}");
            }
        }
        if let Some(out) = sub.get_one::<String>("out") {
            settings.set("out", out.clone());
        }
        let spec = specs
            .iter()
            .find(|s| s.name == command)
            .ok_or_else(|| CliError::Config(format!("unknown command '{command}' in {manifest}")))?;
        return execute(spec, &settings);
    }
    let spec = specs.iter().find(|s| s.name == name).expect("registered subcommand");
    let mut settings = match sub.get_one::<String>("config") {
        Some(path) => read_settings(Path::new(path))?,
        None => Settings::default(),
    };
    check_keys(&settings, spec)?;
    for (key, _) in &spec.keys {
        if sub.value_source(key) == Some(ValueSource::CommandLine) {
            settings.set(key, sub.get_one::<String>(key).expect("present").clone());
        }
    }
    execute(spec, &settings)
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var(THREADS_VAR) {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn main() {
    let specs = specs();
    let matches = build_cli(&specs).get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let code = configure_threads()
        .and_then(|_| run_subcommand(&specs, name, sub))
        .unwrap_or_else(|e| {
            eprintln!("{e}");
            e.exit_code()
        });
    std::process::exit(code);
}
