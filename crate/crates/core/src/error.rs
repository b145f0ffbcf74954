use thiserror::Error;

use crate::witness::Witness;
use crate::Elem;

/// Reasons a lattice description is rejected.
///
/// Variants that name elements use the row order of the description being
/// validated, so the witness can be located in the input file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("malformed order matrix: {0}")]
    Malformed(String),
    #[error("invalid constructor: {0}")]
    InvalidSpec(String),
    #[error("lattice has {size} elements, the limit is {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("order is not reflexive: witness ({0}, {0}, {0})")]
    NotReflexive(usize),
    #[error("order is not antisymmetric: witness ({0}, {1}, {0}) with {0} <= {1} <= {0}")]
    NotAntisymmetric(usize, usize),
    #[error("order is not transitive: witness ({0}, {1}, {2}) with {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("not a lattice: {0} and {1} have no {2}")]
    MissingBound(usize, usize, &'static str),
    #[error("order has no {0} element")]
    Unbounded(&'static str),
    #[error(
        "not distributive: witness ({0}, {1}, {2}) with {0} meet ({1} join {2}) != ({0} meet {1}) join ({0} meet {2})"
    )]
    NotDistributive(usize, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("tuple space {size}^{arity} exceeds the limit of {limit} points")]
    TupleSpaceTooLarge {
        size: usize,
        arity: usize,
        limit: usize,
    },
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("{0}")]
    LatticeMismatch(&'static str),
    #[error("element {elem} is out of range for a lattice of size {size}")]
    InvalidElement { elem: Elem, size: usize },
    #[error("coordinate {k} is out of range for arity {arity}")]
    CoordinateOutOfRange { k: usize, arity: usize },
    #[error("expected {expected} values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("map on binary tuples is not order-preserving: g(e_{{{lower:b}}}) is not below g(e_{{{upper:b}}})")]
    NotOrderPreserving { lower: usize, upper: usize },
    #[error("polynomial form has no CNF coefficients")]
    MissingCnf,
    #[error("function is not quasi-polynomial: {0}")]
    NotQuasiPolynomial(Witness),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("arity {arity} exceeds the supported maximum of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("{what}: line {line}, column {column}: {message}")]
    Parse {
        what: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("at {path}: {source}")]
    At { path: String, source: Box<Error> },
    #[error("enumeration budget exceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u64,
    },
}

impl Error {
    /// Attaches a location such as `values[3]` or `p.alpha`.
    pub fn at(self, path: impl Into<String>) -> Self {
        Error::At {
            path: path.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
