mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use output::{CliError, Rendered};

/// Reads `--config FILE` (a JSON object keyed by long flag names) and appends
/// every key not already present on the command line, so explicit flags win.
fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strings: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let path = strings.iter().enumerate().find_map(|(i, a)| {
        a.strip_prefix("--config=").map(str::to_owned).or_else(|| {
            (a == "--config")
                .then(|| strings.get(i + 1).cloned())
                .flatten()
        })
    });
    let Some(path) = path else { return Ok(argv) };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {path} is not valid JSON: {e}")))?;
    let serde_json::Value::Object(map) = value else {
        return Err(CliError::Usage(format!(
            "config {path} must be a JSON object"
        )));
    };
    let mut merged = argv;
    for (key, value) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        let given = strings
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match value {
            serde_json::Value::Bool(true) => merged.push(flag.into()),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::String(s) => merged.push(format!("{flag}={s}").into()),
            serde_json::Value::Number(n) => merged.push(format!("{flag}={n}").into()),
            serde_json::Value::Array(items) => {
                let joined: Vec<String> = items
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .map(str::to_owned)
                            .unwrap_or_else(|| v.to_string())
                    })
                    .collect();
                merged.push(format!("{flag}={}", joined.join(",")).into());
            }
            serde_json::Value::Object(_) => {
                return Err(CliError::Usage(format!(
                    "config key {key} cannot be an object"
                )))
            }
        }
    }
    Ok(merged)
}

fn run() -> Result<Rendered, CliError> {
    let argv = merge_config(std::env::args_os().collect())?;
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    if let Some(threads) = cli.global.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let outcome = commands::dispatch(&cli)?;
    output::render(&cli.global, outcome)
}

fn main() -> ExitCode {
    match run() {
        Ok(rendered) => rendered.exit_code(),
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            ExitCode::from(if e.use_stderr() { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("progvc: {e}");
            ExitCode::from(2)
        }
    }
}
