//! Flat key=value run configuration with command-line overrides.
//!
//! A config file holds one `key = value` pair per line ('#' starts a
//! comment).  Every command resolves its parameters as: built-in default,
//! overridden by the config file, overridden by the command-line flag.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Keys a config file may set.  Anything else is rejected loudly — silent
/// typos in experiment configs are how wrong numbers get published.
pub const KNOWN_KEYS: &[&str] = &[
    "family",
    "matrix",
    "numax",
    "maxlen",
    "modulus",
    "scheme",
    "s_grid",
    "s",
    "skip",
    "truncation",
    "tolerance",
    "seed",
    "out_dir",
    "include_origin",
    "order_bound",
    "group",
    "mu",
    "lambda",
    "subgroup",
    "n",
    "bound",
    "p",
    "s_size",
    "trials",
    "unlink",
];

/// Why a command could not run.  The numeric exit codes the binary maps
/// these to: usage/config 1, invariant violation 2, tolerance failure 3.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config file, unreadable input.
    Usage(String),
    /// A library invariant refused the request (bad matrix, non-normal
    /// subgroup, out-of-range s, ...).
    Invariant(cheblab::Error),
    /// The computation ran fine but a requested statistical tolerance was
    /// missed.
    Tolerance(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Invariant(e) => write!(f, "{e}"),
            CliError::Tolerance(msg) => write!(f, "TOLERANCE_FAIL: {msg}"),
        }
    }
}

impl From<cheblab::Error> for CliError {
    fn from(e: cheblab::Error) -> Self {
        CliError::Invariant(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {e}"))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Tolerance(_) => 3,
        }
    }

    /// One-line machine-readable form, printed to stderr on failure.
    pub fn violation_json(&self) -> String {
        let kind = match self {
            CliError::Usage(_) => "usage".to_string(),
            CliError::Tolerance(_) => "tolerance".to_string(),
            CliError::Invariant(e) => {
                let dbg = format!("{e:?}");
                dbg.split([' ', '{']).next().unwrap_or("invariant").to_string()
            }
        };
        let body = serde_json::json!({ "kind": kind, "message": self.to_string() });
        body.to_string()
    }
}

/// Parsed config file contents.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn empty() -> Self {
        Settings::default()
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        Settings::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {}: expected key = value, got {raw:?}",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Settings { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Typed lookup; a present-but-unparsable value is a config error, not
    /// a silent fallback to the default.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(text) => text.parse::<T>().map(Some).map_err(|e| {
                CliError::Usage(format!("config key {key}: cannot parse {text:?}: {e}"))
            }),
        }
    }
}

/// flag value if given, else config value, else the default.
pub fn resolve<T: FromStr + Clone>(
    flag: Option<T>,
    settings: &Settings,
    key: &str,
    default: T,
) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(settings.get::<T>(key)?.unwrap_or(default))
}

/// Same, but with no default: the parameter must come from somewhere.
pub fn resolve_required<T: FromStr + Clone>(
    flag: Option<T>,
    settings: &Settings,
    key: &str,
) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    settings
        .get::<T>(key)?
        .ok_or_else(|| CliError::Usage(format!("missing required parameter {key}")))
}

/// "2,1,1,1" -> row-major 2x2 matrix.
pub fn parse_matrix(text: &str) -> Result<[[i64; 2]; 2], CliError> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|e| CliError::Usage(format!("matrix entry {c:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "matrix needs 4 comma-separated entries, got {}",
            parts.len()
        )));
    }
    Ok([[parts[0], parts[1]], [parts[2], parts[3]]])
}

/// "1.2,1.1,1.05" -> grid of s-values.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("s value {c:?}: {e}")))
        })
        .collect()
}

/// "0,1,5" -> group element indices.
pub fn parse_elements(text: &str) -> Result<Vec<u16>, CliError> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse::<u16>()
                .map_err(|e| CliError::Usage(format!("element index {c:?}: {e}")))
        })
        .collect()
}
