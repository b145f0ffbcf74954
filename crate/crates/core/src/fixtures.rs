//! Small named functions used across tests, the acceptance suite and the CLI.

use std::sync::Arc;

use crate::lattice::Lattice;
use crate::polyfn::PolynomialForm;
use crate::table::FunctionTable;
use crate::unary::UnaryMap;

fn chain(size: usize) -> Arc<Lattice> {
    Arc::new(Lattice::chain(size).expect("small chain"))
}

/// Exclusive or on the two-element chain.
pub fn xor() -> FunctionTable {
    let l = chain(2);
    FunctionTable::new(2, l.clone(), l, vec![0, 1, 1, 0]).expect("valid table")
}

/// `med(x₁, m, x₂)` on the three-element chain `{0, m, 1}`.
pub fn median3() -> FunctionTable {
    let l = chain(3);
    FunctionTable::from_fn(2, l.clone(), l.clone(), |x| l.med(x[0], 1, x[1])).expect("valid table")
}

/// The ternary median on the two-element chain.
pub fn majority() -> FunctionTable {
    let l = chain(2);
    FunctionTable::from_fn(3, l.clone(), l.clone(), |x| l.med(x[0], x[1], x[2])).expect("valid table")
}

/// The constant `m` on the three-element chain.
pub fn constant3() -> FunctionTable {
    let l = chain(3);
    FunctionTable::constant(2, l.clone(), l, 1).expect("valid table")
}

/// `p = med(x₁ ∧ x₂, m, x₁ ∨ x₂)` on `{0, m, 1}` and the step map `φ`
/// sending `m` and `1` to `1`.
pub fn quasi_idempotency_counterexample_parts() -> (PolynomialForm, UnaryMap) {
    let l = chain(3);
    // α(∅) = 0, α({1}) = α({2}) = m, α({1,2}) = 1
    let p = PolynomialForm::new(2, l.clone(), vec![0, 1, 1, 2]).expect("valid form");
    let phi = UnaryMap::new(l.clone(), l, vec![0, 2, 2]).expect("valid map");
    (p, phi)
}

/// `p ∘ φ` for the pair above: quasi-polynomial, but `f(1, 0) = m` while
/// `δ_f` only takes the values `0` and `1`.
pub fn quasi_idempotency_counterexample() -> FunctionTable {
    let (p, phi) = quasi_idempotency_counterexample_parts();
    let l = phi.domain().clone();
    FunctionTable::from_fn(2, l.clone(), l, |x| p.eval_dnf(&phi.apply(x))).expect("valid table")
}

/// Order-preserving `chain(3)^2 -> chain(2)` with `f(x) = 1` iff `x₁ = 1`
/// and `x₂ ≥ m`. Both hats are `∧`, yet `f` is not quasi-polynomial:
/// `δ_f(m) = 0` forces `f(1, m) = f(1, 0)`.
pub fn hat_agreeing_non_quasi_polynomial() -> FunctionTable {
    FunctionTable::new(2, chain(3), chain(2), vec![0, 0, 0, 0, 0, 0, 0, 1, 1]).expect("valid table")
}
