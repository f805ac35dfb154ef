//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by series arithmetic, partition statistics, and the
/// combinatorial maps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A series inverse needs a lowest coefficient of +1 or −1.
    #[error("series inverse requires a lowest coefficient of ±1, found {found}")]
    NonUnitLowestCoefficient { found: String },

    /// Inverting a multi-term exact polynomial produces an infinite series,
    /// so a truncation order must be supplied.
    #[error("inverting this value yields an infinite series; supply a truncation order")]
    InversionNeedsTruncation,

    /// The zero series has no inverse.
    #[error("the zero series has no inverse")]
    DivisionByZero,

    /// Exact division was requested but the divisor does not divide evenly.
    #[error("exact division left a nonzero remainder")]
    InexactDivision,

    /// Pochhammer products step through exponents by a positive amount.
    #[error("pochhammer step must be positive")]
    NonPositiveStep,

    /// An infinite product can only be evaluated up to a truncation order.
    #[error("an infinite product requires a truncation order")]
    InfiniteProductNeedsTruncation,

    /// A 2φ1 term hit a vanishing denominator factor.
    #[error("partial 2φ1 sum: denominator factor vanished at term {term}")]
    VanishingDenominatorFactor { term: u32 },

    /// Partition text or part list failed validation.
    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    /// The statistic is undefined for the empty partition.
    #[error("{statistic} is undefined for the empty partition")]
    EmptyPartition { statistic: &'static str },

    /// A map precondition on the rank failed.
    #[error("rank {rank} is smaller than the required minimum {required}")]
    RankTooSmall { rank: i64, required: i64 },

    /// A map precondition on the M2-rank failed.
    #[error("M2-rank {rank} is smaller than the required minimum {required}")]
    M2RankTooSmall { rank: i64, required: i64 },

    /// The requested offset is not a member of the partition's rank-set.
    #[error("{offset} is not in the rank-set of {partition}")]
    NotInRankSet { offset: i64, partition: String },

    /// The value lies outside the image of the map being inverted.
    #[error("{value} is not in the image of {map}")]
    NotInImage { map: &'static str, value: String },

    /// A partition with a repeated odd part has no 2-modular diagram.
    #[error("odd part {part} is repeated; 2-modular diagrams require distinct odd parts")]
    RepeatedOddPart { part: u64 },

    /// The 2-modular graph is empty where a nonempty one is required.
    #[error("{operation} is undefined for the empty 2-modular graph")]
    EmptyMod2Graph { operation: &'static str },

    /// Successive-square rank of order k needs at least k−1 squares.
    #[error("order-{order} rank needs at least {required} successive squares, found {found}")]
    NotEnoughSquares { order: u64, required: u64, found: u64 },

    /// A rewrite step was applied outside its parameter domain.
    #[error("rewrite step {step} is not applicable at m = {m}")]
    RewriteOutOfDomain { step: &'static str, m: i64 },

    /// A generating-function family was asked for out-of-domain parameters.
    #[error("family {family}: {reason}")]
    FamilyOutOfDomain { family: String, reason: String },

    /// The check id is not present in the registry.
    #[error("unknown check id {id}")]
    UnknownCheckId { id: String },
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
