use thiserror::Error;

/// Everything that can go wrong across the library.
///
/// Variants carry enough context to be actionable; none of them wrap I/O
/// errors (callers doing file work layer their own error type on top).
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("multiplication table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: u16, b: u16, c: u16 },

    #[error("multiplication table has no two-sided identity")]
    NoIdentity,

    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: u16 },

    #[error("table is not square: {entries} entries cannot form an n x n table")]
    MalformedTable { entries: usize },

    #[error("table entry {value} out of range for order {order}")]
    EntryOutOfRange { value: i64, order: usize },

    #[error("modulus {modulus} too small: need m >= 2")]
    ModulusTooSmall { modulus: i64 },

    #[error("group of order {order} exceeds bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },

    #[error("generator images violate the source-model relations")]
    RelationViolated,

    #[error("generator images do not generate the target group")]
    NotSurjective,

    #[error("matrix with trace {trace} is not Anosov: need |trace| > 2 and det = 1")]
    NotAnosov { trace: i64 },

    #[error("matrix determinant is {det}, expected 1")]
    NotUnimodular { det: i64 },

    #[error("orbit family does not match the quotient's source model")]
    ModelMismatch,

    #[error("peripheral images do not commute")]
    NoncommutingPeripheral,

    #[error("element set is not closed under multiplication (not a subgroup)")]
    NotASubgroup,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("s = {s} out of range: zeta evaluations need s > 1")]
    SOutOfRange { s: f64 },

    #[error("empty knot stream")]
    EmptyStream,

    #[error("class sets of the two density estimates do not match")]
    MismatchedClasses,

    #[error("{p} is not prime")]
    NotPrime { p: u64 },

    #[error("index {index} out of range for {n} components")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("linking matrix must be symmetric with zero diagonal (violated at ({i},{j}))")]
    BadLinkingMatrix { i: usize, j: usize },

    #[error("dataset is empty")]
    DatasetEmpty,

    #[error("bad record in orbit stream: {reason}")]
    BadRecord { reason: String },

    #[error("orbit enumeration would visit {cells} lattice cells (bound {bound})")]
    EnumerationTooLarge { cells: u128, bound: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
