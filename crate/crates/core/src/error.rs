use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group of order {order} exceeds the configured bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("invalid permutation group input: {0}")]
    InvalidGroup(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a family of subgroups: {0}")]
    NotAFamily(String),
    #[error("no Segal element exists: {0}")]
    NoSuchElement(String),
    #[error("module carries no annihilator data")]
    UnsupportedModule,
    #[error("complex is not regular: {0}")]
    NotRegular(String),
    #[error("coefficient system does not vanish on the family: {0}")]
    EDoesNotVanish(String),
    #[error("structure mismatch: {0}")]
    StructureMismatch(String),
    #[error("morphism check failed: {0}")]
    MorphismCheckFailed(String),
    #[error("invalid category data: {0}")]
    InvalidCategory(String),
    #[error("invalid chain data: {0}")]
    InvalidChainData(String),
    #[error("character table: {0}")]
    CharacterTable(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
