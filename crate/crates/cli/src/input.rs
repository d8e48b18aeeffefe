//! Input loading: inline JSON or a file path, decoded with JSON-pointer error paths.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_path_to_error::Segment;

#[derive(Debug)]
pub enum CliError {
    /// Input that does not match its schema; `pointer` locates the offending value.
    Schema { pointer: String, message: String },
    Io(String),
    Compute(gdpa::error::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema { pointer, message } => {
                let at = if pointer.is_empty() { "/" } else { pointer };
                write!(f, "schema error at {at}: {message}")
            }
            CliError::Io(m) => write!(f, "cannot read input: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<gdpa::error::Error> for CliError {
    fn from(e: gdpa::error::Error) -> Self {
        CliError::Compute(e)
    }
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    path.iter()
        .filter_map(|seg| match seg {
            Segment::Seq { index } => Some(format!("/{index}")),
            Segment::Map { key } => Some(format!("/{}", escape(key))),
            Segment::Enum { variant } => Some(format!("/{}", escape(variant))),
            Segment::Unknown => None,
        })
        .collect()
}

/// Decode `text` as `T`, reporting failures with a JSON pointer.
pub fn decode<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        pointer: pointer(e.path()),
        message: e.inner().to_string(),
    })?;
    Ok(value)
}

/// Inline JSON when the argument starts with `{` or `[`, otherwise a file path.
pub fn load<T: DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return decode(arg);
    }
    let text = std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
    decode(&text)
}
