//! Exact-arithmetic toolkit for central hyperplane arrangements defined over
//! the rationals: intersection lattices and characteristic polynomials,
//! irreducible decomposition and monodromy order of the Milnor fiber,
//! spectrum of plane arrangements, eigenspace cohomology tables with their
//! E-polynomials, and finite-field point counts of complements and Milnor
//! fibers (brute force, factored convolution, and a quadratic fast path).
//!
//! All symbolic computation is exact: arbitrary-precision integers and
//! rationals throughout, no floating point.

pub mod arrangement;
pub mod decompose;
pub mod ffcount;
pub mod hodge;
pub mod katz;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod spectrum;

pub use arrangement::{CentralArrangement, Hyperplane};
pub use decompose::Decomposition;
pub use ffcount::{CountMethod, CountResult, PointCounter, PrimeField, DEFAULT_BUDGET};
pub use hodge::CohomologyTable;
pub use lattice::IntersectionLattice;
pub use poly::IntPoly;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("document parse error: {0}")]
    Parse(String),
    #[error("hyperplane rows have unequal lengths")]
    RaggedRows,
    #[error("zero normal vector is not a hyperplane")]
    ZeroNormal,
    #[error("duplicate hyperplane after canonicalization (defining equation not reduced)")]
    DuplicateHyperplane,
    #[error("arrangement must contain at least one hyperplane")]
    EmptyArrangement,
    #[error("ambient dimension must be at least 1")]
    BadAmbientDimension,
    #[error("operation requires an essential arrangement (normals must span the ambient space)")]
    NotEssential,
    #[error("operation requires a plane arrangement (ambient dimension 3, i.e. n = 2)")]
    NotPlanar,
    #[error("operation requires at least {needed} hyperplanes, arrangement has {got}")]
    TooFewHyperplanes { needed: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} has bad reduction for this arrangement")]
    BadPrime(u64),
    #[error("prime {p} is not congruent to {want} modulo {modulus}")]
    WrongResidueClass { p: u64, want: u64, modulus: u64 },
    #[error("prime {0} exceeds the 2^31 limit for residue tables")]
    PrimeTooLarge(u64),
    #[error("operation requires exactly {want} irreducible factors, arrangement has {got}")]
    WrongFactorCount { want: usize, got: usize },
    #[error("factor {factor} splits residues into {classes} classes at this prime, need exactly 2")]
    SquareClassUnavailable { factor: usize, classes: usize },
    #[error("enumeration budget exceeded: task needs {needed} point evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("cohomology table contains classes of unknown Hodge type; E-polynomial undefined")]
    NotTate,
    #[error("factor table for eigenvalue index {index} of order {order} is missing")]
    MissingEigenvalue { index: usize, order: usize },
    #[error("Hodge tables are only available for generic factors of even dimension, got dimension {0}")]
    OddGenericDimension(usize),
    #[error("block {block} (size {size}) is not a generic-type factor; no cohomology table available")]
    UnsupportedFactor { block: usize, size: usize },
    #[error("lattice construction supports at most 128 hyperplanes, got {0}")]
    TooManyHyperplanes(usize),
    #[error("coefficients do not alternate in sign; not a count polynomial of an arrangement complement")]
    NotAlternating,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
