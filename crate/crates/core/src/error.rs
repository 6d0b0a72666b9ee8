use thiserror::Error;

/// Errors raised by the algebraic layers and the scan drivers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus {0}: moduli must be at least 1")]
    InvalidModulus(u64),

    #[error("invariant factors {0:?} do not form a divisor chain of integers >= 2")]
    NotInvariantFactors(Vec<u32>),

    #[error("group order exceeds the supported envelope of {limit} elements")]
    GroupTooLarge { limit: usize },

    #[error("element {0:?} does not belong to the group")]
    ForeignElement(Vec<u32>),

    #[error("element {element:?} is outside the ground set")]
    OutsideGroundSet { element: Vec<u32> },

    #[error("the empty sequence is the identity, not an atom")]
    EmptySequence,

    #[error("ground set is empty")]
    EmptyGroundSet,

    #[error("invalid primary component: {0}")]
    InvalidComponent(String),

    #[error("the identity is a unit, not an atom")]
    IdentityNotAtom,

    #[error("element is not a member of the monoid")]
    NotMember,

    #[error("factorizations belong to different elements")]
    DifferentElements,

    #[error("operation requires a class group of order 2, found order {0}")]
    NeedsOrderTwo(usize),

    #[error("spec has no components")]
    NoComponents,

    #[error("witness case {case} does not match the spec: {reason}")]
    WitnessMismatch { case: u8, reason: String },

    #[error("scan region would contain {count} elements, above the limit of {limit}")]
    RegionTooLarge { count: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
