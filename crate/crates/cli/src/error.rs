use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config line {line}: {reason}")]
    ConfigSyntax { line: usize, reason: String },

    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("scenario not feasible: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Core(#[from] girg_core::GirgError),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    kind: &'a str,
    message: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::ConfigSyntax { .. } => "config_syntax",
            CliError::InvalidValue { .. } => "invalid_value",
            CliError::UnknownKey(_) => "unknown_key",
            CliError::Infeasible(_) => "infeasible",
            CliError::Core(_) => "computation",
            CliError::Io { .. } => "io",
            CliError::Csv(_) => "io",
        }
    }

    /// Configuration problems exit with 2, failures during a run with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) | CliError::Io { .. } | CliError::Csv(_) => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let report = ErrorReport {
            kind: self.kind(),
            message: self.to_string(),
        };
        serde_json::json!({ "error": report }).to_string()
    }
}

pub fn invalid(key: &str, reason: impl Into<String>) -> CliError {
    CliError::InvalidValue {
        key: key.to_string(),
        reason: reason.into(),
    }
}

pub type CliResult<T> = Result<T, CliError>;
