use crate::poset::StratumId;
use thiserror::Error;

/// Errors shared by every layer of the calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("stratum names must be nonempty")]
    EmptyName,

    #[error("duplicate stratum `{0}`")]
    DuplicateStratum(StratumId),

    #[error("unknown stratum `{0}`")]
    UnknownStratum(StratumId),

    #[error("order cycle: `{0}` and `{1}` are each below the other")]
    Cycle(StratumId, StratumId),

    #[error("`{lower}` (dim {lower_dim}) < `{upper}` (dim {upper_dim}) violates strict dimension growth")]
    DimOrder {
        lower: StratumId,
        lower_dim: u32,
        upper: StratumId,
        upper_dim: u32,
    },

    #[error("`{0}` was declared dense but is not above every stratum")]
    NotDense(StratumId),

    #[error("the space has no dense stratum")]
    NoDenseStratum,

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("triangular matrix diagonal entry at `{0}` must be 1")]
    DiagonalNotOne(StratumId),

    #[error("matrix entry ({lower}, {upper}) lies outside the order support")]
    EntryOffSupport { lower: StratumId, upper: StratumId },

    #[error("missing link data for the pair `{lower}` < `{upper}`")]
    MissingLinkData { lower: StratumId, upper: StratumId },

    #[error("a link system is required for ic-basis operations")]
    MissingLinks,

    #[error("duplicate link entry for the pair `{lower}` < `{upper}`")]
    DuplicateLink { lower: StratumId, upper: StratumId },

    #[error("link entry (`{lower}`, `{upper}`) is not a strictly comparable pair")]
    InvalidLinkPair { lower: StratumId, upper: StratumId },

    #[error("link data conflict for `{lower}` < `{upper}`: given {given}, Betti list yields {derived}")]
    LinkConflict {
        lower: StratumId,
        upper: StratumId,
        given: i64,
        derived: i64,
    },

    #[error("codimension must be at least 1, got {0}")]
    InvalidCodim(u32),

    #[error("values live on different spaces")]
    SpaceMismatch,

    #[error("kernel column for `{column}` sums to {actual} against the target weights, expected {expected}")]
    KernelInconsistent {
        column: StratumId,
        expected: i64,
        actual: i64,
    },

    #[error("duplicate kernel entry for (`{row}`, `{column}`)")]
    DuplicateKernelEntry { row: StratumId, column: StratumId },

    #[error("homomorphism value missing for stratum `{0}`")]
    MissingHomValue(StratumId),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checked `i64` helpers; every arithmetic path in the crate goes through
/// these so that overflow surfaces as [`Error::Overflow`] instead of a wrap.
pub(crate) fn iadd(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn isub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn imul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub(crate) fn ineg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow)
}
