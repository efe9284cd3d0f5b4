use thiserror::Error;

/// Errors raised by group computations.
///
/// `Resource` is distinct from a negative answer: a search that hits a cap
/// never reports "no".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("resource cap `{cap}` exceeded (limit {limit}): {context}")]
    Resource {
        cap: &'static str,
        limit: usize,
        context: String,
    },
    #[error("logic error: {0}")]
    Logic(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn resource(cap: &'static str, limit: usize, context: impl Into<String>) -> Self {
        Error::Resource {
            cap,
            limit,
            context: context.into(),
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
