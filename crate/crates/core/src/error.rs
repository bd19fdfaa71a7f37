use thiserror::Error;

/// Errors raised by the algebra and link pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("braid generator s{index} invalid on {strands} strands")]
    BraidGeneratorOutOfRange { index: usize, strands: usize },

    #[error("strand {strand} out of range for {strands} strands")]
    StrandOutOfRange { strand: usize, strands: usize },

    #[error("pure generator A({i},{j}) invalid on {strands} strands")]
    InvalidPureGenerator { i: usize, j: usize, strands: usize },

    #[error("braid is not pure")]
    NotPure,

    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },

    #[error("truncation mismatch: cutoff {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("invalid cutoff {0}")]
    InvalidCutoff(usize),

    #[error("index sequence of length {len} exceeds cutoff {cutoff}")]
    IndexTooLong { len: usize, cutoff: usize },

    #[error("image of x{0} is not a conjugate of x{0}")]
    NotConjugate(usize),

    #[error("Milnor index {0:?} has repeated entries")]
    RepeatedIndex(Vec<usize>),

    #[error("invalid Milnor index {0:?}")]
    InvalidIndex(Vec<usize>),

    #[error("string link is not verified Brunnian")]
    NotBrunnian,

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("malformed PD code: {0}")]
    MalformedPd(String),

    #[error("diagram has {crossings} crossings, above the limit {limit}")]
    CrossingLimit { crossings: usize, limit: usize },

    #[error("Laurent polynomial is not a polynomial in z: {0}")]
    NotConwayForm(String),

    #[error("value does not fit in 64 bits")]
    Overflow,

    #[error("odd diagonal bracket {value} for {sigma}: {diagnostics}")]
    OddDiagonal {
        sigma: String,
        value: i64,
        diagnostics: String,
    },

    #[error("degree {degree} is impossible for a {components}-component link")]
    ParityImpossible { degree: usize, components: usize },

    #[error("degree {degree} is not below {bound}")]
    DegreeNotBelow { degree: usize, bound: usize },

    #[error("family entry {label} failed the Brunnian check")]
    FamilyNotBrunnian { label: String },

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("unknown invariant {0}")]
    UnknownInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
