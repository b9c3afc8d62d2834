use std::io::{self, Write};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

/// Envelope for every JSON document the CLI prints.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub params: Value,
    pub results: Value,
    pub version: &'static str,
    /// Only present with `--timing`, so that default output is byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

pub struct Reporter {
    command: &'static str,
    params: Value,
    start: Instant,
    timing: bool,
}

impl Reporter {
    pub fn new(command: &'static str, params: Value, timing: bool) -> Self {
        Reporter {
            command,
            params,
            start: Instant::now(),
            timing,
        }
    }

    pub fn emit<T: Serialize>(self, results: &T) -> Result<(), Failure> {
        let report = RunReport {
            command: self.command.to_string(),
            params: self.params,
            results: serde_json::to_value(results).map_err(|e| Failure::Usage(e.to_string()))?,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_ms: self.timing.then(|| self.start.elapsed().as_secs_f64() * 1e3),
        };
        let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Usage(e.to_string()))?;
        write_line(&text)
    }
}

/// Writes one line to stdout; a closed pipe ends the program quietly.
pub fn write_line(s: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match writeln!(out, "{s}") {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Err(Failure::Quiet),
        Err(e) => Err(Failure::Usage(e.to_string())),
        Ok(()) => Ok(()),
    }
}

#[derive(Debug)]
pub enum Failure {
    /// A verification ran and found a violation; the report was already printed.
    Verification,
    Usage(String),
    SizeGuard(String),
    /// Downstream closed stdout.
    Quiet,
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Usage(_) => 2,
            Failure::SizeGuard(_) => 3,
            Failure::Quiet => 0,
        }
    }

    pub fn message(&self) -> Option<&str> {
        match self {
            Failure::Usage(m) | Failure::SizeGuard(m) => Some(m),
            _ => None,
        }
    }
}
