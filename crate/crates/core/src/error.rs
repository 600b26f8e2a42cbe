use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid variant: {0}")]
    BadVariant(String),
    #[error("{0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance has no items or no bins")]
    EmptyInstance,
    #[error("item {0} does not fit in any bin")]
    ItemTooLarge(usize),
    #[error("invalid item {id}: {reason}")]
    InvalidItem { id: usize, reason: String },
    #[error("invalid bin {id}: {reason}")]
    InvalidBin { id: usize, reason: String },
    #[error("invalid variant: {0}")]
    BadVariant(String),
}

impl From<ConfigError> for InstanceError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::BadVariant(s) | ConfigError::Parse(s) => InstanceError::BadVariant(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuideError {
    #[error("guide value undefined: {0}")]
    UndefinedGuide(&'static str),
}
