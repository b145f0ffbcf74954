//! Lattice polynomial functions and Sugeno integrals: normal forms,
//! Goodstein extension and the classical recognizers.

mod form;
mod recognize;

pub use form::{canonical_forms, goodstein_extend, BinaryMap, PolynomialForm};
pub use recognize::{
    is_median_decomposable, is_polynomial, is_sugeno, polynomial_property_report,
};
pub(crate) use recognize::{homogeneity_scan, median_scan};
