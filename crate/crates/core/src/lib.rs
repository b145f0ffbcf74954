//! Finite bounded distributive lattices, lattice polynomial functions and
//! Sugeno integrals, quasi-polynomial and transformed polynomial functions,
//! and brute-force oracles for all of them.
//!
//! Lattice elements are dense indices (`0` is the bottom, `size - 1` the
//! top). Functions `X^n -> Y` are stored as [`FunctionTable`]s in
//! last-coordinate-fastest order. Subsets `I ⊆ [n]` are bitmasks with bit
//! `i` standing for coordinate `i` (zero-based).

mod comonotone;
pub mod error;
pub mod files;
pub mod fixtures;
pub mod lattice;
pub mod oracle;
pub mod polyfn;
pub mod quasipoly;
pub mod table;
pub mod tuple;
pub mod unary;
pub mod verify;
pub mod witness;

/// A lattice element, as an index into its lattice.
pub type Elem = usize;

pub use comonotone::MAX_COMONOTONE_ARITY;
pub use error::{Error, LatticeError, Result};
pub use lattice::{make_lattice, Lattice, LatticeSpec, Surgery};
pub use oracle::EnumerationBudget;
pub use polyfn::{BinaryMap, PolynomialForm};
pub use quasipoly::{Factorization, FactorizationKind, QuasiReport};
pub use table::FunctionTable;
pub use tuple::{TupleCursor, TupleSpace};
pub use unary::{UnaryMap, UnaryReport};
pub use witness::{Property, Report, Verdict, Witness};
