use alloc::string::String;
use core::fmt;

/// Errors raised by the pure algorithms.
///
/// Most operations in this crate are total; the variants below cover bad
/// configuration and violated input contracts.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A mining or scoring parameter is out of its valid range.
    InvalidParameter { name: &'static str, reason: String },
    /// An input broke a documented precondition (for example a negative score).
    ContractViolation(String),
    /// The same aspect term is listed under more than one category.
    DuplicateCategoryMember { member: String, first: String, second: String },
    /// Two categories share an id.
    DuplicateCategoryId(String),
    /// A category declares no members.
    EmptyCategory(String),
    /// An evaluation override names a gold feature that does not exist.
    UnknownGoldFeature(String),
    /// An evaluation override names an extracted term that does not exist.
    UnknownExtractedTerm(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::ContractViolation(msg) => write!(f, "contract violation: {msg}"),
            Error::DuplicateCategoryMember {
                member,
                first,
                second,
            } => write!(
                f,
                "aspect term `{member}` is a member of both `{first}` and `{second}`"
            ),
            Error::DuplicateCategoryId(id) => write!(f, "duplicate category id `{id}`"),
            Error::EmptyCategory(id) => write!(f, "category `{id}` has no members"),
            Error::UnknownGoldFeature(name) => write!(f, "unknown gold feature `{name}`"),
            Error::UnknownExtractedTerm(term) => {
                write!(f, "unknown extracted aspect term `{term}`")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
