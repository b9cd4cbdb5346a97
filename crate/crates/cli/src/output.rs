use std::fmt;
use std::process::ExitCode;

use serde_json::{json, Map, Value};

use crate::args::{Format, GlobalOpts};

/// Bumped whenever a report field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    Clap(clap::Error),
    Usage(String),
    Core(progvc_core::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Clap(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<progvc_core::Error> for CliError {
    fn from(e: progvc_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// What a command produced: the report body, an optional flat table for CSV,
/// and whether everything it checked held.
pub struct Outcome {
    pub command: &'static str,
    pub body: Value,
    pub table: Option<Table>,
    pub verified: bool,
}

impl Outcome {
    pub fn ok(command: &'static str, body: Value) -> Self {
        Outcome {
            command,
            body,
            table: None,
            verified: true,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn verified(mut self, verified: bool) -> Self {
        self.verified = verified;
        self
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub struct Rendered {
    verified: bool,
}

impl Rendered {
    pub fn exit_code(&self) -> ExitCode {
        if self.verified {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

fn envelope(global: &GlobalOpts, outcome: &Outcome) -> Value {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(outcome.command));
    map.insert("seed".into(), json!(global.seed));
    map.insert("verified".into(), json!(outcome.verified));
    map.insert("report".into(), outcome.body.clone());
    Value::Object(map)
}

fn text(value: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = value {
        for (k, v) in map {
            match v {
                Value::Object(inner) => {
                    for (ik, iv) in inner {
                        out.push_str(&format!("{k}.{ik}: {iv}\n"));
                    }
                }
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
    }
    out
}

pub fn render(global: &GlobalOpts, outcome: Outcome) -> Result<Rendered, CliError> {
    let doc = match global.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(global, &outcome))
                .expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text(&envelope(global, &outcome)),
        Format::Csv => match &outcome.table {
            Some(table) => table.to_csv(),
            None => {
                return Err(CliError::Usage(format!(
                    "{} produces a nested report; CSV is only available for flat tables",
                    outcome.command
                )))
            }
        },
    };
    match &global.output {
        Some(path) => std::fs::write(path, doc)?,
        None => print!("{doc}"),
    }
    Ok(Rendered {
        verified: outcome.verified,
    })
}
