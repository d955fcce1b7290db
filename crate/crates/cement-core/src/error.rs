use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error taxonomy shared by the library and the CLI.
///
/// The CLI maps variants onto exit codes: `Input`, `Io` and `Fatal` are
/// fatal input problems (exit 2), `UnknownEntity` covers unresolvable
/// ids and commit hashes (exit 3), `Config` covers bad configuration
/// (exit 4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("unresolvable id: {0}")]
    UnknownEntity(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("repository error: {0}")]
    Fatal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn unknown(msg: impl Into<String>) -> Self {
        Error::UnknownEntity(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn fatal(msg: impl Into<String>) -> Self {
        Error::Fatal(msg.into())
    }
}
