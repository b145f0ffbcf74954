use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::oracle::{self, EnumerationBudget};
use crate::polyfn::{goodstein_extend, is_polynomial, BinaryMap};
use crate::table::FunctionTable;
use crate::unary::UnaryMap;
use crate::witness::{Property, Verdict, Witness};
use crate::Elem;

use super::{quasi_median_verdict, Factorization, FactorizationKind, QuasiReport};

/// A unary map on one lattice is a polynomial iff it is idempotent under
/// composition, a homomorphism, and has a convex range.
pub fn is_unary_polynomial(phi: &UnaryMap) -> Result<bool> {
    if **phi.domain() != **phi.codomain() {
        return Err(Error::LatticeMismatch("unary polynomial test needs equal domain and codomain"));
    }
    let idempotent = phi.domain().elements().all(|c| phi.get(phi.get(c)) == phi.get(c));
    Ok(idempotent && phi.is_homomorphism() && phi.codomain().is_convex(&phi.range()))
}

/// First `x` (tuple order) with `f(x)` outside the range of `δ_f`.
pub fn quasi_idempotency_witness(f: &FunctionTable) -> Option<Witness> {
    let mut on_diagonal = vec![false; f.codomain().size()];
    for &v in f.diagonal().table() {
        on_diagonal[v] = true;
    }
    f.values()
        .iter()
        .position(|&v| !on_diagonal[v])
        .map(|i| Witness::Point {
            x: f.space().tuple_at(i),
        })
}

/// The range of `δ_f` equals the range of `f`.
pub fn is_quasi_idempotent(f: &FunctionTable) -> bool {
    quasi_idempotency_witness(f).is_none()
}

/// A map defined on the range of some `φ`, sending each value to one of its
/// preimages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightInverse {
    source: Arc<Lattice>,
    target: Arc<Lattice>,
    table: Vec<Option<Elem>>,
}

impl RightInverse {
    /// `None` outside the range of the inverted map.
    pub fn get(&self, y: Elem) -> Option<Elem> {
        self.table[y]
    }

    /// The lattice the inverse is defined on (the inverted map's codomain).
    pub fn source(&self) -> &Arc<Lattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Lattice> {
        &self.target
    }

    /// The points where the inverse is defined, ascending.
    pub fn defined_on(&self) -> Vec<Elem> {
        (0..self.table.len()).filter(|&y| self.table[y].is_some()).collect()
    }
}

/// `h` on the range of `φ` with `φ(h(y)) = y`, choosing the smallest-index
/// preimage. Labels are a linear extension, so for a homomorphism this is
/// the least preimage and `h` is order-preserving.
pub fn right_inverse(phi: &UnaryMap) -> RightInverse {
    let mut table = vec![None; phi.codomain().size()];
    for x in phi.domain().elements() {
        table[phi.get(x)].get_or_insert(x);
    }
    RightInverse {
        source: phi.codomain().clone(),
        target: phi.domain().clone(),
        table,
    }
}

/// With a homomorphic diagonal: transformed polynomial iff quasi-idempotent
/// and quasi-polynomial. Otherwise decided by exhaustive search over `ψ ∘ p`
/// with the default budget.
pub fn is_transformed_polynomial(f: &FunctionTable) -> Result<QuasiReport> {
    is_transformed_polynomial_with(f, &EnumerationBudget::from_env())
}

pub fn is_transformed_polynomial_with(f: &FunctionTable, budget: &EnumerationBudget) -> Result<QuasiReport> {
    let delta = f.diagonal();
    let mut out = QuasiReport::default();
    let hom = Verdict::from_witness(delta.homomorphism_witness());
    let idem = Verdict::from_witness(quasi_idempotency_witness(f));
    let quasi = quasi_median_verdict(f);
    let transformed = if hom.holds() {
        match (&idem, &quasi) {
            (Verdict::Fails(w), _) | (_, Verdict::Fails(w)) => Verdict::Fails(w.clone()),
            _ => {
                out.factorization = Some(transformed_factorization(f)?);
                Verdict::Holds
            }
        }
    } else {
        out.decided_by_oracle = true;
        let search = oracle::find_transformed(f, budget)?;
        match search.found {
            Some(fact) => {
                out.factorization = Some(fact);
                Verdict::Holds
            }
            None => Verdict::Fails(Witness::Exhausted {
                candidates: search.candidates,
            }),
        }
    };
    out.report.insert(Property::DiagonalHomomorphism, hom);
    out.report.insert(Property::QuasiIdempotent, idem);
    out.report.insert(Property::QuasiPolynomial, quasi);
    out.report.insert(Property::TransformedPolynomial, transformed);
    Ok(out)
}

/// `(ψ, p) = (δ_f, p_{h∘f})` where `h` is the right inverse of `δ_f` and
/// `p_{h∘f}` extends `h ∘ f` from the binary tuples.
pub fn transformed_factorization(f: &FunctionTable) -> Result<Factorization> {
    let delta = f.diagonal();
    if let Some(w) = delta.homomorphism_witness() {
        return Err(Error::Precondition(format!("diagonal is not a homomorphism ({w})")));
    }
    if let Some(w) = quasi_idempotency_witness(f) {
        return Err(Error::Precondition(format!("function is not quasi-idempotent ({w})")));
    }
    if let Verdict::Fails(w) = quasi_median_verdict(f) {
        return Err(Error::NotQuasiPolynomial(w));
    }
    let h = right_inverse(&delta);
    let x_lat = f.domain().clone();
    let g = BinaryMap::from_fn(f.arity(), x_lat, |m| {
        h.get(f.binary_value(m)).expect("quasi-idempotent: binary values lie on the diagonal range")
    })?;
    let p = goodstein_extend(&g)?;
    let mut fact = Factorization::new(FactorizationKind::Transformed, p, delta)?;
    if fact.compose()? != *f {
        return Err(Error::Precondition("δ_f ∘ p does not reproduce f".into()));
    }
    fact.verified = true;
    Ok(fact)
}

/// Polynomial criterion for quasi-polynomial or transformed polynomial
/// functions on one lattice, with a cross-check against [`is_polynomial`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PromotionReport {
    /// `δ_f(c) = c` for every `c` in the range of `f`.
    pub range_idempotent: bool,
    pub diagonal_homomorphism: bool,
    pub diagonal_range_convex: bool,
    pub criterion: bool,
    pub polynomial: bool,
}

impl PromotionReport {
    pub fn agrees(&self) -> bool {
        self.criterion == self.polynomial
    }
}

pub fn promote_to_polynomial(f: &FunctionTable) -> Result<PromotionReport> {
    promote_to_polynomial_with(f, &EnumerationBudget::from_env())
}

pub fn promote_to_polynomial_with(f: &FunctionTable, budget: &EnumerationBudget) -> Result<PromotionReport> {
    f.require_endo()?;
    if !quasi_median_verdict(f).holds()
        && !is_transformed_polynomial_with(f, budget)?.holds(Property::TransformedPolynomial)
    {
        return Err(Error::Precondition(
            "function is neither quasi-polynomial nor a transformed polynomial".into(),
        ));
    }
    let delta = f.diagonal();
    let range_idempotent = f.range().iter().all(|&c| delta.get(c) == c);
    let diagonal_homomorphism = delta.is_homomorphism();
    let diagonal_range_convex = f.domain().is_convex(&delta.range());
    Ok(PromotionReport {
        range_idempotent,
        diagonal_homomorphism,
        diagonal_range_convex,
        criterion: range_idempotent && diagonal_homomorphism && diagonal_range_convex,
        polynomial: is_polynomial(f)?.holds(),
    })
}
