use serde_json::{json, Value};
use thiserror::Error;

/// Anything that stops a command before it can reach a verdict. All of
/// these exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("{message}")]
    Schema { pointer: String, message: String },
    #[error("{message}")]
    Reference { pointer: String, message: String },
    #[error("{message}")]
    Invalid { pointer: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] topolog_core::Error),
}

impl CliError {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    pub fn reference(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Reference {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    pub fn invalid(pointer: impl Into<String>, err: impl ToString) -> Self {
        CliError::Invalid {
            pointer: pointer.into(),
            message: err.to_string(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Schema { .. } => "schema",
            CliError::Reference { .. } => "reference",
            CliError::Invalid { .. } => "invalid",
            CliError::Usage(_) => "usage",
            CliError::Core(topolog_core::Error::Parse { .. }) => "parse",
            CliError::Core(topolog_core::Error::Type { .. }) => "type",
            CliError::Core(_) => "invalid",
        }
    }

    pub fn pointer(&self) -> Option<&str> {
        match self {
            CliError::Schema { pointer, .. } | CliError::Reference { pointer, .. } | CliError::Invalid { pointer, .. } => {
                Some(pointer)
            }
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        if let Some(p) = self.pointer() {
            body["pointer"] = Value::String(p.to_string());
        }
        json!({ "error": body })
    }
}

/// Escapes one reference token of a JSON pointer.
pub fn token(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

/// Converts a `serde_path_to_error` path into a JSON pointer.
pub fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", token(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", token(variant))),
            Segment::Unknown => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointer_tokens_are_escaped() {
        assert_eq!(token("a/b~c"), "a~1b~0c");
    }

    #[test]
    fn error_json_carries_pointer() {
        let e = CliError::schema("/systems/0", "bad");
        assert_eq!(e.to_json()["error"]["pointer"], "/systems/0");
        assert_eq!(e.to_json()["error"]["kind"], "schema");
    }
}
