use std::fmt;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    SuiteFailure(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::SuiteFailure(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::SuiteFailure(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<multipartite::Error> for CliError {
    fn from(e: multipartite::Error) -> Self {
        match e {
            multipartite::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Validation(String::new()).code(), 1);
        assert_eq!(CliError::SuiteFailure(String::new()).code(), 2);
        assert_eq!(CliError::Io(String::new()).code(), 3);
        let io: CliError = multipartite::Error::Io(std::io::Error::other("x")).into();
        assert_eq!(io.code(), 3);
        let v: CliError = multipartite::Error::EmptyState.into();
        assert_eq!(v.code(), 1);
    }
}
