use std::io;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] keymesh_core::Error),

    #[error("configuration: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(#[from] io::Error),

    #[error("self-test failed: {0}")]
    SelfTest(String),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

impl HarnessError {
    /// Process exit status: 2 for failed invariants, 1 for everything the user can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::SelfTest(_) => 2,
            _ => 1,
        }
    }
}

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(HarnessError::Config(msg.into()))
}
