use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("cycle in covers: `{0}` <= `{1}` and `{1}` <= `{0}`")]
    Cycle(String, String),
    #[error("no unique bottom: `{0}` and `{1}` are both minimal")]
    NoBottom(String, String),
    #[error("no unique top: `{0}` and `{1}` are both maximal")]
    NoTop(String, String),
    #[error("not a lattice: `{0}` and `{1}` have no {2}")]
    NotALattice(String, String, &'static str),
    #[error("empty lattice")]
    EmptyLattice,
    #[error("unknown catalog kind `{0}`")]
    UnknownCatalog(String),
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("{0} is out of range")]
    OutOfRange(String),
    #[error("element {0} does not belong to the base lattice")]
    NotInLattice(String),
    #[error("a filter needs at least one generator")]
    EmptyGenerators,
    #[error("structures need at least one point")]
    EmptyCarrier,
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("missing relation for element `{0}`")]
    MissingRelation(String),
    #[error("the two objects are over different lattices")]
    LatticeMismatch,
    #[error("map is not injective: `{0}` and `{1}` share an image")]
    NotInjective(String, String),
    #[error("map repeats source point `{0}`")]
    RepeatedSource(String),
    #[error("map is not total: `{0}` has no image")]
    NotTotal(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("relation for `{0}` is not an equivalence relation")]
    NotEquivalence(String),
    #[error("cannot read `{path}`: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
