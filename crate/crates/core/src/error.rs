use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("not a Heyting algebra: {0}")]
    NotHeyting(String),
    #[error("{what} exceeds the configured cap of {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("order relation has a cycle through `{0}`")]
    Cycle(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("not a sieve: {0}")]
    NotASieve(String),
    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),
    #[error("not natural: {0}")]
    NotNatural(String),
    #[error("invalid sub-object: {0}")]
    InvalidSubobject(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("type error in `{subterm}`: {msg}")]
    Type { subterm: String, msg: String },
    #[error("unassigned primitive `{0}`")]
    UnassignedPrimitive(String),
    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("representation is not faithful: {0}")]
    NotFaithful(String),
    #[error("unassigned {kind} `{name}`")]
    Unassigned { kind: &'static str, name: String },
    #[error("axiom `{0}` does not hold in the representation")]
    AxiomFailure(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn cap(what: impl Into<String>, cap: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            cap,
        }
    }
}
