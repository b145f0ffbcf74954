//! Quasi-polynomial functions `f = p ∘ φ` and transformed polynomial
//! functions `f = ψ ∘ p`: recognition, factorization and the associated
//! property suites.

mod properties;
mod transformed;

use std::sync::Arc;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::oracle::{self, EnumerationBudget};
use crate::polyfn::{goodstein_extend, is_sugeno, median_scan, BinaryMap, PolynomialForm};
use crate::table::FunctionTable;
use crate::unary::UnaryMap;
use crate::witness::{Property, Report, Verdict};
use crate::Elem;

pub use properties::quasi_property_report;
pub use transformed::{
    is_quasi_idempotent, is_transformed_polynomial, is_transformed_polynomial_with, is_unary_polynomial,
    promote_to_polynomial, promote_to_polynomial_with, quasi_idempotency_witness, right_inverse,
    transformed_factorization, PromotionReport, RightInverse,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorizationKind {
    /// `f = p ∘ φ` with `p` polynomial over the codomain.
    Generic,
    /// `f = q ∘ φ` with `q` a Sugeno integral over the codomain.
    Sugeno,
    /// `f = ψ ∘ p` with `p` polynomial over the domain; `ψ` is stored in
    /// the `phi` slot.
    Transformed,
}

/// A polynomial paired with a unary map, composed in the order given by
/// the kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub p: PolynomialForm,
    pub phi: UnaryMap,
    pub kind: FactorizationKind,
    pub verified: bool,
}

impl Factorization {
    /// Checks lattice compatibility and the kind's side conditions.
    pub fn new(kind: FactorizationKind, p: PolynomialForm, phi: UnaryMap) -> Result<Self> {
        match kind {
            FactorizationKind::Generic | FactorizationKind::Sugeno => {
                if **phi.codomain() != **p.lattice() {
                    return Err(Error::LatticeMismatch("phi must map into the polynomial's lattice"));
                }
                if let Some(w) = phi.bracket_witness() {
                    return Err(Error::Precondition(format!("phi violates the bracket condition at {w}")));
                }
                if kind == FactorizationKind::Sugeno && !is_sugeno(&p.to_table()?)? {
                    return Err(Error::Precondition("polynomial is not a Sugeno integral".into()));
                }
            }
            FactorizationKind::Transformed => {
                if **phi.domain() != **p.lattice() {
                    return Err(Error::LatticeMismatch("psi must be defined on the polynomial's lattice"));
                }
            }
        }
        Ok(Self {
            p,
            phi,
            kind,
            verified: false,
        })
    }

    /// The composed function.
    pub fn compose(&self) -> Result<FunctionTable> {
        let n = self.p.arity();
        match self.kind {
            FactorizationKind::Generic | FactorizationKind::Sugeno => {
                FunctionTable::from_fn(n, self.phi.domain().clone(), self.p.lattice().clone(), |x| {
                    self.p.eval_dnf(&self.phi.apply(x))
                })
            }
            FactorizationKind::Transformed => {
                FunctionTable::from_fn(n, self.p.lattice().clone(), self.phi.codomain().clone(), |x| {
                    self.phi.get(self.p.eval_dnf(x))
                })
            }
        }
    }
}

/// Verdicts on one function plus, when one exists, a factorization.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuasiReport {
    pub report: Report,
    pub factorization: Option<Factorization>,
    /// Set when a verdict came from exhaustive search rather than a
    /// characterization.
    pub decided_by_oracle: bool,
}

impl QuasiReport {
    pub fn holds(&self, property: Property) -> bool {
        self.report.holds(property)
    }

    pub fn get(&self, property: Property) -> Option<&Verdict> {
        self.report.get(property)
    }

    pub fn to_json(&self) -> Map<String, Value> {
        let mut out = self.report.to_json();
        out.insert("decided_by_oracle".into(), Value::Bool(self.decided_by_oracle));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HatMode {
    /// Join over the top coordinates of meets over the bottom coordinates.
    Dnf,
    /// Meet over the bottom coordinates of joins over the top coordinates.
    Cnf,
}

/// `δ_f(c) = f(c, …, c)`.
pub fn diagonal(f: &FunctionTable) -> UnaryMap {
    f.diagonal()
}

/// The order-preserving map on binary tuples built from `f`'s binary values
/// by nested joins and meets.
pub fn hat(f: &FunctionTable, mode: HatMode) -> BinaryMap {
    let n = f.arity();
    let full = (1usize << n) - 1;
    let y = &**f.codomain();
    let binary: Vec<Elem> = (0..=full).map(|m| f.binary_value(m)).collect();
    let values = (0..=full)
        .map(|e| {
            let ones = e;
            let zeros = full ^ e;
            match mode {
                HatMode::Dnf => y.join_all(submasks(ones).map(|a| y.meet_all(submasks(zeros).map(|b| binary[a | b])))),
                HatMode::Cnf => y.meet_all(submasks(zeros).map(|b| y.join_all(submasks(ones).map(|a| binary[a | b])))),
            }
        })
        .collect();
    BinaryMap::new(n, f.codomain().clone(), values).expect("hat values come from the table")
}

/// All submasks of `mask`, including `0` and `mask`.
fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = (cur != 0).then(|| (cur - 1) & mask);
        Some(cur)
    })
}

/// Quasi-median decomposability: `f(x) = med(f(x⁰_k), δ_f(x_k), f(x¹_k))`
/// for all `x` and `k`. Attaches the canonical factorization when it holds.
pub fn is_quasi_polynomial(f: &FunctionTable) -> Result<QuasiReport> {
    let verdict = quasi_median_verdict(f);
    let mut out = QuasiReport::default();
    if verdict.holds() {
        out.factorization = Some(canonical_factorization(f)?);
    }
    out.report.insert(Property::QuasiPolynomial, verdict);
    Ok(out)
}

pub(crate) fn quasi_median_verdict(f: &FunctionTable) -> Verdict {
    let delta = f.diagonal();
    Verdict::from_witness(median_scan(f, |c| delta.get(c), f.codomain()))
}

/// `p_f` extends the DNF hat of `f`.
pub fn hat_polynomial(f: &FunctionTable) -> PolynomialForm {
    goodstein_extend(&hat(f, HatMode::Dnf)).expect("the hat of any function is order-preserving")
}

/// `(p_f, δ_f)` for a quasi-polynomial `f`.
pub fn canonical_factorization(f: &FunctionTable) -> Result<Factorization> {
    if let Verdict::Fails(w) = quasi_median_verdict(f) {
        return Err(Error::NotQuasiPolynomial(w));
    }
    let mut fact = Factorization::new(FactorizationKind::Generic, hat_polynomial(f), f.diagonal())?;
    if fact.compose()? != *f {
        return Err(Error::Precondition("p_f ∘ δ_f does not reproduce f".into()));
    }
    fact.verified = true;
    Ok(fact)
}

/// Whether the candidate composes to `f` pointwise.
pub fn verify_factorization(f: &FunctionTable, cand: &Factorization) -> Result<bool> {
    if cand.p.arity() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: cand.p.arity(),
        });
    }
    let (inner_domain, outer_codomain) = match cand.kind {
        FactorizationKind::Generic | FactorizationKind::Sugeno => (cand.phi.domain(), cand.p.lattice()),
        FactorizationKind::Transformed => (cand.p.lattice(), cand.phi.codomain()),
    };
    if **inner_domain != **f.domain() || **outer_codomain != **f.codomain() {
        return Err(Error::LatticeMismatch("factorization lattices differ from the function's"));
    }
    Ok(cand.compose()? == *f)
}

/// The pair of identities `⟨p⟩_f = p_f` and `⟨φ⟩_p = δ_f`.
pub fn factorization_bracket_identities(f: &FunctionTable, p: &PolynomialForm, phi: &UnaryMap) -> Result<bool> {
    let y = f.codomain();
    if **p.lattice() != **y || **phi.codomain() != **y || **phi.domain() != **f.domain() {
        return Err(Error::LatticeMismatch("factorization lattices differ from the function's"));
    }
    let n = f.arity();
    let x_lat = f.domain();
    let f0 = f.get(&vec![x_lat.bottom(); n]);
    let f1 = f.get(&vec![x_lat.top(); n]);
    let p_table = p.to_table()?;
    let pf_table = hat_polynomial(f).to_table()?;
    let first = p_table
        .values()
        .iter()
        .zip(pf_table.values())
        .all(|(&pv, &qv)| y.med(f0, pv, f1) == qv);
    let p0 = p_table.get(&vec![y.bottom(); n]);
    let p1 = p_table.get(&vec![y.top(); n]);
    let delta = f.diagonal();
    let second = x_lat
        .elements()
        .all(|c| y.med(p0, phi.get(c), p1) == delta.get(c));
    Ok(first && second)
}

/// Every `(p, φ)` with `p` a polynomial over the codomain, `φ` a
/// bracket-condition map and `p ∘ φ = f`.
pub fn enumerate_factorizations(f: &FunctionTable, budget: &EnumerationBudget) -> Result<Vec<Factorization>> {
    let polys = oracle::enumerate_polynomials(f.arity(), f.codomain().clone(), budget)?;
    let maps = oracle::enumerate_bracket_maps(f.domain().clone(), f.codomain().clone(), budget)?;
    budget.check_candidates("factorization pairs", polys.len() as u128 * maps.len() as u128)?;
    budget.check_work(
        "factorization checks",
        polys.len() as u128 * maps.len() as u128 * f.space().len() as u128,
    )?;
    let tables = polys.iter().map(PolynomialForm::to_table).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (p, table) in polys.iter().zip(&tables) {
        for phi in &maps {
            if composes_to(table, phi, f) {
                let mut fact = Factorization::new(FactorizationKind::Generic, p.clone(), phi.clone())?;
                fact.verified = true;
                out.push(fact);
            }
        }
    }
    Ok(out)
}

fn composes_to(p: &FunctionTable, phi: &UnaryMap, f: &FunctionTable) -> bool {
    let space = f.space();
    let inner = p.space();
    let mut cursor = space.cursor();
    loop {
        let idx = cursor.index();
        let j = cursor.tuple().iter().fold(0, |acc, &xi| acc * inner.radix() + phi.get(xi));
        if p.at(j) != f.at(idx) {
            return false;
        }
        if !cursor.advance() {
            return true;
        }
    }
}

/// `(q, δ_f)` with `q` a Sugeno integral: `q` extends `p_f`'s binary values
/// with the endpoints pinned to bottom and top.
pub fn quasi_sugeno_factorization(f: &FunctionTable) -> Result<Factorization> {
    let canonical = canonical_factorization(f)?;
    let y: Arc<_> = f.codomain().clone();
    let n = f.arity();
    let full = (1usize << n) - 1;
    let alpha = canonical.p.alpha();
    let g = BinaryMap::from_fn(n, y.clone(), |m| {
        if m == 0 {
            y.bottom()
        } else if m == full {
            y.top()
        } else {
            alpha[m]
        }
    })?;
    let q = goodstein_extend(&g)
        .map_err(|e| Error::Precondition(format!("pinned binary values of p_f are not monotone: {e}")))?;
    let mut fact = Factorization::new(FactorizationKind::Sugeno, q, canonical.phi)?;
    if fact.compose()? != *f {
        return Err(Error::Precondition("q ∘ δ_f does not reproduce f".into()));
    }
    fact.verified = true;
    Ok(fact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::Lattice;
    use crate::polyfn::{canonical_forms, is_polynomial};

    fn c(n: usize) -> Arc<Lattice> {
        Arc::new(Lattice::chain(n).unwrap())
    }

    #[test]
    fn submask_enumeration() {
        let mut v: Vec<_> = submasks(0b101).collect();
        v.sort();
        assert_eq!(v, vec![0, 1, 4, 5]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn hat_of_xor() {
        let xor = fixtures::xor();
        assert_eq!(hat(&xor, HatMode::Dnf).values(), &[0, 0, 0, 1]);
        assert_eq!(hat(&xor, HatMode::Cnf).values(), &[0, 1, 1, 1]);
        // the n = 2 formula for e = (0,1): (f(0,0)∧f(1,0)) ∨ (f(0,1)∧f(1,1))
        let by_hand = (xor.get(&[0, 0]) & xor.get(&[1, 0])) | (xor.get(&[0, 1]) & xor.get(&[1, 1]));
        assert_eq!(hat(&xor, HatMode::Dnf).get(0b10), by_hand);
    }

    #[test]
    fn hat_of_monotone_is_restriction() {
        let l = c(3);
        let f = FunctionTable::from_fn(2, l.clone(), l.clone(), |x| l.med(x[0], 1, x[1])).unwrap();
        let restriction: Vec<_> = (0..4).map(|m| f.binary_value(m)).collect();
        assert_eq!(hat(&f, HatMode::Dnf).values(), restriction.as_slice());
        assert_eq!(hat(&f, HatMode::Cnf).values(), restriction.as_slice());
    }

    #[test]
    fn diagonal_examples() {
        let l = c(3);
        let meet = FunctionTable::from_fn(2, l.clone(), l.clone(), |x| x[0].min(x[1])).unwrap();
        assert_eq!(diagonal(&meet).table(), &[0, 1, 2]);
        assert_eq!(diagonal(&fixtures::xor()).table(), &[0, 0]);
        let f = fixtures::quasi_idempotency_counterexample();
        assert_eq!(diagonal(&f).table(), &[0, 2, 2]);
    }

    #[test]
    fn quasi_polynomial_examples() {
        let xor = fixtures::xor();
        let r = is_quasi_polynomial(&xor).unwrap();
        assert!(!r.holds(Property::QuasiPolynomial));
        assert!(r.factorization.is_none());
        assert!(matches!(canonical_factorization(&xor), Err(Error::NotQuasiPolynomial(_))));

        let f = fixtures::quasi_idempotency_counterexample();
        let r = is_quasi_polynomial(&f).unwrap();
        assert!(r.holds(Property::QuasiPolynomial));
        let fact = r.factorization.unwrap();
        assert!(fact.verified);
        assert_eq!(fact.compose().unwrap(), f);
    }

    #[test]
    fn bracket_condition_unary_maps_are_quasi_polynomial() {
        let x = c(3);
        let y = Arc::new(Lattice::boolean(2).unwrap());
        for phi in oracle::enumerate_bracket_maps(x.clone(), y.clone(), &EnumerationBudget::default()).unwrap() {
            let f = FunctionTable::from_fn(1, x.clone(), y.clone(), |v| phi.get(v[0])).unwrap();
            assert!(is_quasi_polynomial(&f).unwrap().holds(Property::QuasiPolynomial));
        }
    }

    #[test]
    fn canonical_factorization_of_polynomial() {
        let l = c(3);
        let f = FunctionTable::from_fn(2, l.clone(), l.clone(), |x| l.med(x[0].min(x[1]), 1, 2)).unwrap();
        assert!(is_polynomial(&f).unwrap().holds());
        let fact = canonical_factorization(&f).unwrap();
        assert_eq!(fact.p.alpha(), canonical_forms(&f).unwrap().alpha());
        let f0 = f.get(&[0, 0]);
        let f1 = f.get(&[2, 2]);
        for c in 0..3 {
            assert_eq!(fact.phi.get(c), l.med(f0, c, f1));
        }
    }

    #[test]
    fn constant_factorizations() {
        let l = c(3);
        let f = FunctionTable::constant(2, l.clone(), l.clone(), 1).unwrap();
        let fact = canonical_factorization(&f).unwrap();
        assert_eq!(fact.p.to_table().unwrap(), f);
        assert_eq!(fact.phi.table(), &[1, 1, 1]);

        // p ≡ c with any bracket-condition φ
        let p = PolynomialForm::new(2, l.clone(), vec![1; 4]).unwrap();
        let phi = UnaryMap::new(l.clone(), l.clone(), vec![2, 1, 0]).unwrap();
        let cand = Factorization::new(FactorizationKind::Generic, p, phi).unwrap();
        assert!(verify_factorization(&f, &cand).unwrap());
    }

    #[test]
    fn verify_rejects_mismatch() {
        let l = c(3);
        let meet = FunctionTable::from_fn(2, l.clone(), l.clone(), |x| x[0].min(x[1])).unwrap();
        let join = PolynomialForm::new(2, l.clone(), vec![0, 2, 2, 2]).unwrap();
        let cand = Factorization::new(FactorizationKind::Generic, join, UnaryMap::identity(l.clone())).unwrap();
        assert!(!verify_factorization(&meet, &cand).unwrap());

        let other = FunctionTable::constant(3, l.clone(), l.clone(), 0).unwrap();
        assert!(matches!(verify_factorization(&other, &cand), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn factorization_invariants_are_enforced() {
        let l = c(3);
        let p = PolynomialForm::new(1, l.clone(), vec![0, 2]).unwrap();
        let scattered = UnaryMap::new(l.clone(), l.clone(), vec![0, 2, 1]).unwrap();
        assert!(Factorization::new(FactorizationKind::Generic, p.clone(), scattered.clone()).is_err());
        // transformed kind places no condition on ψ
        assert!(Factorization::new(FactorizationKind::Transformed, p, scattered).is_ok());
        let not_sugeno = PolynomialForm::new(1, l.clone(), vec![1, 2]).unwrap();
        assert!(Factorization::new(FactorizationKind::Sugeno, not_sugeno, UnaryMap::identity(l)).is_err());
    }

    #[test]
    fn constant_enumeration_contains_both_families() {
        let l = c(3);
        let budget = EnumerationBudget::default();
        let f = FunctionTable::constant(2, l.clone(), l.clone(), 1).unwrap();
        let all = enumerate_factorizations(&f, &budget).unwrap();
        let bracket_maps = oracle::enumerate_bracket_maps(l.clone(), l.clone(), &budget).unwrap();
        let const_p = PolynomialForm::new(2, l.clone(), vec![1; 4]).unwrap().alpha().to_vec();
        for phi in &bracket_maps {
            assert!(all.iter().any(|fa| fa.p.alpha() == const_p.as_slice() && fa.phi == *phi));
        }
        let const_phi = UnaryMap::constant(l.clone(), l.clone(), 1).unwrap();
        for p in oracle::enumerate_polynomials(2, l.clone(), &budget).unwrap() {
            let t = p.to_table().unwrap();
            let idempotent = (0..3).all(|c| t.get(&[c, c]) == c);
            if idempotent {
                assert!(all.iter().any(|fa| fa.p == p && fa.phi == const_phi));
            }
        }
    }

    #[test]
    fn unary_identity_factorizations() {
        let l = c(2);
        let f = FunctionTable::projection(1, l.clone(), 0).unwrap();
        let all = enumerate_factorizations(&f, &EnumerationBudget::default()).unwrap();
        assert!(all
            .iter()
            .any(|fa| fa.p.alpha() == [0, 1] && fa.phi == UnaryMap::identity(l.clone())));
        for fa in &all {
            assert_eq!(fa.compose().unwrap(), f);
        }
    }

    #[test]
    fn counterexample_enumeration_contains_constructing_and_canonical_pairs() {
        let f = fixtures::quasi_idempotency_counterexample();
        let all = enumerate_factorizations(&f, &EnumerationBudget::default()).unwrap();
        let (p, phi) = fixtures::quasi_idempotency_counterexample_parts();
        assert!(all.iter().any(|fa| fa.p.alpha() == p.alpha() && fa.phi == phi));
        let canonical = canonical_factorization(&f).unwrap();
        assert!(all.iter().any(|fa| fa.p.alpha() == canonical.p.alpha() && fa.phi == canonical.phi));
    }

    #[test]
    fn sugeno_factorization_of_interior_constant() {
        let l = c(3);
        let f = FunctionTable::constant(2, l.clone(), l.clone(), 1).unwrap();
        let fact = quasi_sugeno_factorization(&f).unwrap();
        assert_eq!(fact.kind, FactorizationKind::Sugeno);
        assert_eq!(fact.p.alpha(), &[0, 1, 1, 2]);
        assert_eq!(fact.phi.table(), &[1, 1, 1]);
        assert_eq!(fact.compose().unwrap(), f);
    }

    #[test]
    fn sugeno_factorization_of_sugeno_and_counterexample() {
        let l = c(3);
        let f = FunctionTable::from_fn(2, l.clone(), l.clone(), |x| l.med(x[0], 1, x[1])).unwrap();
        let fact = quasi_sugeno_factorization(&f).unwrap();
        assert_eq!(fact.p.to_table().unwrap(), f);
        assert_eq!(fact.phi, UnaryMap::identity(l));

        let g = fixtures::quasi_idempotency_counterexample();
        let fact = quasi_sugeno_factorization(&g).unwrap();
        assert!(is_sugeno(&fact.p.to_table().unwrap()).unwrap());
        assert_eq!(fact.compose().unwrap(), g);
    }
}
