use thiserror::Error;

/// Failures surfaced by the command-line layer, each with an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", config_message(.line, .message))]
    Config { line: Option<usize>, message: String },

    #[error("{0}")]
    Solver(#[from] pseudodot::Error),

    #[error("{0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn config_message(line: &Option<usize>, message: &str) -> String {
    match line {
        Some(n) => format!("config line {n}: {message}"),
        None => format!("config: {message}"),
    }
}

impl CliError {
    /// 1 for usage, configuration and i/o problems; 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 1,
            CliError::Solver(_) | CliError::Numerical(_) => 2,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
