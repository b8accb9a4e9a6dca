use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyGraph,

    #[error("duplicate edge {0} -- {1} rejected in strict mode")]
    DuplicateEdge(String, String),

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),

    #[error("community `{0}` is empty")]
    EmptyCommunity(String),

    #[error("node {node} is not a member of community `{community}`")]
    NotAMember { node: usize, community: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no local community: sweep found no proper prefix")]
    NoLocalCommunity,

    #[error("all scores are zero")]
    ZeroScores,

    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },

    #[error("no communities supplied")]
    NoCommunities,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
