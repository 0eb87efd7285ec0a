use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in this crate.
///
/// Validation and precondition failures are caller errors. A
/// [`Error::TheoremViolation`] can only be produced by a bug in this crate: it
/// means an exactly computed object contradicted a structural guarantee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A group was described with no factors or with a zero cyclic order.
    InvalidGroup(String),
    /// The group order is above the enumeration cap.
    OrderExceedsCap { order: u128, cap: u64 },
    /// Two objects (or an object and an element) belong to different groups.
    SpecMismatch,
    /// A residue or character index is not reduced modulo its cyclic order.
    OutOfRange(String),
    /// A generator list was empty.
    EmptyGenerators,
    /// An explicit element set is not closed under the group operation.
    NotASubgroup,
    /// A probability was negative.
    NegativeProbability(String),
    /// Probabilities do not add up to one; carries the actual mass as `p/q`.
    MassNotOne(String),
    /// The same element was listed twice.
    DuplicateElement(String),
    /// A circle support list was empty while no non-rational mass was declared.
    EmptyCircleSupport,
    /// A zero denominator.
    ZeroDenominator,
    /// The brute-force oracle was asked to handle a group above its limit.
    ScaleExceeded { order: u64, limit: u64 },
    /// An operation's hypothesis does not hold for the given input.
    PreconditionFailed(String),
    /// An internal consistency check failed. Indicates a bug.
    TheoremViolation(String),
}

impl Error {
    pub fn is_theorem_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }

    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::PreconditionFailed(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGroup(msg) => write!(f, "invalid group: {msg}"),
            Error::OrderExceedsCap { order, cap } => {
                write!(f, "group order {order} exceeds the enumeration cap {cap}")
            }
            Error::SpecMismatch => f.write_str("objects belong to different groups"),
            Error::OutOfRange(what) => write!(f, "out of range: {what}"),
            Error::EmptyGenerators => f.write_str("generator list is empty"),
            Error::NotASubgroup => f.write_str("element set is not closed under the group operation"),
            Error::NegativeProbability(at) => write!(f, "negative probability at {at}"),
            Error::MassNotOne(mass) => write!(f, "mass ≠ 1 (total is {mass})"),
            Error::DuplicateElement(at) => write!(f, "element {at} listed more than once"),
            Error::EmptyCircleSupport => f.write_str("circle support is empty"),
            Error::ZeroDenominator => f.write_str("zero denominator"),
            Error::ScaleExceeded { order, limit } => {
                write!(f, "group order {order} is above the oracle limit {limit}")
            }
            Error::PreconditionFailed(msg) => write!(f, "precondition not met: {msg}"),
            Error::TheoremViolation(msg) => write!(f, "theorem violation (implementation bug): {msg}"),
        }
    }
}

impl core::error::Error for Error {}
