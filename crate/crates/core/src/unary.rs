use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::witness::Witness;
use crate::Elem;

/// A total map between two lattices, one codomain element per domain element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryMap {
    domain: Arc<Lattice>,
    codomain: Arc<Lattice>,
    table: Vec<Elem>,
}

impl UnaryMap {
    pub fn new(domain: Arc<Lattice>, codomain: Arc<Lattice>, table: Vec<Elem>) -> Result<Self> {
        if table.len() != domain.size() {
            return Err(Error::WrongLength {
                expected: domain.size(),
                found: table.len(),
            });
        }
        for &v in &table {
            codomain.check(v)?;
        }
        Ok(Self {
            domain,
            codomain,
            table,
        })
    }

    pub fn from_fn(
        domain: Arc<Lattice>,
        codomain: Arc<Lattice>,
        f: impl Fn(Elem) -> Elem,
    ) -> Result<Self> {
        let table = domain.elements().map(f).collect();
        Self::new(domain, codomain, table)
    }

    pub fn identity(lattice: Arc<Lattice>) -> Self {
        let table = lattice.elements().collect();
        Self {
            domain: lattice.clone(),
            codomain: lattice,
            table,
        }
    }

    pub fn constant(domain: Arc<Lattice>, codomain: Arc<Lattice>, c: Elem) -> Result<Self> {
        codomain.check(c)?;
        let table = vec![c; domain.size()];
        Ok(Self {
            domain,
            codomain,
            table,
        })
    }

    pub fn domain(&self) -> &Arc<Lattice> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Lattice> {
        &self.codomain
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    #[inline]
    pub fn get(&self, x: Elem) -> Elem {
        self.table[x]
    }

    pub fn apply(&self, x: &[Elem]) -> Vec<Elem> {
        x.iter().map(|&xi| self.table[xi]).collect()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &UnaryMap) -> Result<UnaryMap> {
        if *inner.codomain != *self.domain {
            return Err(Error::LatticeMismatch("composition: inner codomain differs from outer domain"));
        }
        let table = inner.table.iter().map(|&y| self.table[y]).collect();
        Ok(UnaryMap {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            table,
        })
    }

    /// Distinct values, ascending.
    pub fn range(&self) -> Vec<Elem> {
        let mut seen = vec![false; self.codomain.size()];
        for &v in &self.table {
            seen[v] = true;
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    /// First pair `a <= b` with `φ(a) ≰ φ(b)`.
    pub fn order_preserving_witness(&self) -> Option<Witness> {
        let (x, y) = (&*self.domain, &*self.codomain);
        x.elements()
            .flat_map(|a| x.elements().map(move |b| (a, b)))
            .find(|&(a, b)| x.leq(a, b) && !y.leq(self.get(a), self.get(b)))
            .map(|(a, b)| Witness::Elements { a, b })
    }

    pub fn is_order_preserving(&self) -> bool {
        self.order_preserving_witness().is_none()
    }

    pub fn is_order_reversing(&self) -> bool {
        let (x, y) = (&*self.domain, &*self.codomain);
        x.elements()
            .all(|a| x.elements().all(|b| !x.leq(a, b) || y.leq(self.get(b), self.get(a))))
    }

    /// First pair on which `φ` fails to preserve meet or join.
    pub fn homomorphism_witness(&self) -> Option<Witness> {
        let (x, y) = (&*self.domain, &*self.codomain);
        x.elements()
            .flat_map(|a| x.elements().map(move |b| (a, b)))
            .find(|&(a, b)| {
                self.get(x.meet(a, b)) != y.meet(self.get(a), self.get(b))
                    || self.get(x.join(a, b)) != y.join(self.get(a), self.get(b))
            })
            .map(|(a, b)| Witness::Elements { a, b })
    }

    pub fn is_homomorphism(&self) -> bool {
        self.homomorphism_witness().is_none()
    }

    /// First `c` with `φ(c)` outside `[φ(0) ∧ φ(1), φ(0) ∨ φ(1)]`.
    pub fn bracket_witness(&self) -> Option<Witness> {
        let y = &*self.codomain;
        let lo = self.get(self.domain.bottom());
        let hi = self.get(self.domain.top());
        self.domain
            .elements()
            .find(|&c| y.med(lo, self.get(c), hi) != self.get(c))
            .map(|c| Witness::Element { c })
    }

    /// `φ = ⟨φ⟩_φ`.
    pub fn satisfies_bracket_condition(&self) -> bool {
        self.bracket_witness().is_none()
    }

    pub fn predicates(&self) -> UnaryReport {
        let range = self.range();
        let hull = self.codomain.convex_hull(&range);
        let convex_hull_of_range: Vec<Elem> = (0..hull.len()).filter(|&c| hull[c]).collect();
        UnaryReport {
            is_order_preserving: self.is_order_preserving(),
            is_order_reversing: self.is_order_reversing(),
            is_homomorphism: self.is_homomorphism(),
            range_is_convex: convex_hull_of_range == range,
            range,
            convex_hull_of_range,
            satisfies_bracket_condition: self.satisfies_bracket_condition(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnaryReport {
    pub is_order_preserving: bool,
    pub is_order_reversing: bool,
    pub is_homomorphism: bool,
    pub range: Vec<Elem>,
    pub convex_hull_of_range: Vec<Elem>,
    pub range_is_convex: bool,
    pub satisfies_bracket_condition: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Arc<Lattice> {
        Arc::new(Lattice::chain(3).unwrap())
    }

    #[test]
    fn identity_has_every_property() {
        let r = UnaryMap::identity(c3()).predicates();
        assert!(r.is_order_preserving && r.is_homomorphism && r.range_is_convex);
        assert!(r.satisfies_bracket_condition);
        assert!(!r.is_order_reversing);
    }

    #[test]
    fn scrambled_map() {
        let phi = UnaryMap::new(c3(), c3(), vec![0, 2, 1]).unwrap();
        let r = phi.predicates();
        assert!(!r.is_order_preserving);
        assert!(!r.satisfies_bracket_condition);
        assert_eq!(phi.bracket_witness(), Some(Witness::Element { c: 1 }));
    }

    #[test]
    fn step_map_on_chain_is_a_homomorphism() {
        let phi = UnaryMap::new(c3(), c3(), vec![0, 2, 2]).unwrap();
        // all 9 pairs by hand: min/max commute with a monotone map on a chain
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(phi.get(a.min(b)), phi.get(a).min(phi.get(b)));
                assert_eq!(phi.get(a.max(b)), phi.get(a).max(phi.get(b)));
            }
        }
        let r = phi.predicates();
        assert!(r.is_order_preserving && r.satisfies_bracket_condition && r.is_homomorphism);
        assert_eq!(r.range, vec![0, 2]);
        assert!(!r.range_is_convex);
        assert_eq!(r.convex_hull_of_range, vec![0, 1, 2]);
    }

    #[test]
    fn reversing_map_on_diamond() {
        let d = Arc::new(Lattice::boolean(2).unwrap());
        // complement
        let phi = UnaryMap::from_fn(d.clone(), d, |x| 3 - x).unwrap();
        let r = phi.predicates();
        assert!(r.is_order_reversing && !r.is_order_preserving);
        assert!(r.satisfies_bracket_condition);
        assert!(!r.is_homomorphism);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            UnaryMap::new(c3(), c3(), vec![0, 1]),
            Err(Error::WrongLength { .. })
        ));
        assert!(matches!(
            UnaryMap::new(c3(), c3(), vec![0, 1, 3]),
            Err(Error::InvalidElement { .. })
        ));
    }
}
