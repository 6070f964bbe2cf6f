use std::fmt;

/// CLI failure, mapped one-to-one onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, config or physical inputs.
    Usage(String),
    /// Quadrature or internal-consistency failure.
    Numeric(accelshift::Error),
    /// Output path cannot be written.
    Output(String),
    /// A sweep completed but some rows carry errors.
    RowFailures(usize),
    /// At least one self-test check failed.
    SelfTest(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SelfTest(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Output(_) => 4,
            CliError::RowFailures(_) => 5,
        }
    }
}

impl From<accelshift::Error> for CliError {
    fn from(e: accelshift::Error) -> Self {
        match e {
            accelshift::Error::Domain { .. } | accelshift::Error::Polarization(_) => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid input: {m}"),
            CliError::Numeric(e) => write!(f, "evaluation failed: {e}"),
            CliError::Output(m) => write!(f, "cannot write output: {m}"),
            CliError::RowFailures(n) => write!(f, "{n} row(s) failed; see the `error` column"),
            CliError::SelfTest(n) => write!(f, "{n} self-test check(s) failed"),
        }
    }
}
