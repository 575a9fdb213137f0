//! Report envelope, output routing and exit codes.

use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use spatial_conflict::io::hash_file;

pub const TOOL: &str = "spatial-conflict";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit 1: a checked property does not hold.
pub const EXIT_ASSERTION: i32 = 1;
/// Exit 2: bad flags or unreadable input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Assertion(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Assertion(_) => EXIT_ASSERTION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Assertion(m) => write!(f, "assertion failed: {m}"),
        }
    }
}

impl From<spatial_conflict::Error> for CliError {
    fn from(e: spatial_conflict::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// An input file recorded in the report by role, path and SHA-256.
pub struct Input {
    pub role: &'static str,
    pub path: PathBuf,
}

impl Input {
    pub fn new(role: &'static str, path: &Path) -> Self {
        Input {
            role,
            path: path.to_path_buf(),
        }
    }
}

/// Wraps a result with the metadata every report carries. Keys are sorted by
/// serde_json, so equal inputs give byte-identical text.
pub fn envelope(
    command: &str,
    seed: Option<u64>,
    budget: Option<usize>,
    inputs: &[Input],
    result: Value,
) -> CliResult<Value> {
    let mut files = serde_json::Map::new();
    for i in inputs {
        files.insert(
            i.role.to_string(),
            json!({ "path": i.path.display().to_string(), "sha256": hash_file(&i.path)? }),
        );
    }
    Ok(json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "seed": seed,
        "budget": budget,
        "inputs": files,
        "result": result,
    }))
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
