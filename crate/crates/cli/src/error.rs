use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Precondition(_) => "precondition",
            CliError::Io(_) => "io",
        }
    }

    /// One JSON object on a single line.
    pub fn report(&self) -> String {
        serde_json::json!({ "error": self.kind(), "code": self.code(), "message": self.to_string() }).to_string()
    }
}

impl From<twobath::Error> for CliError {
    fn from(e: twobath::Error) -> Self {
        use twobath::Error as E;
        match e {
            E::NonFinite(_)
            | E::NotSymmetric(_)
            | E::Unphysical(_)
            | E::NotPositiveDefinite
            | E::Eigen(_)
            | E::FockLeakage { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}
