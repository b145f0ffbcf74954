use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::tuple::TupleSpace;
use crate::unary::UnaryMap;
use crate::witness::Witness;
use crate::Elem;

/// A total map `X^n -> Y` stored densely in tuple-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    domain: Arc<Lattice>,
    codomain: Arc<Lattice>,
    space: TupleSpace,
    values: Vec<Elem>,
}

impl FunctionTable {
    pub fn new(
        arity: usize,
        domain: Arc<Lattice>,
        codomain: Arc<Lattice>,
        values: Vec<Elem>,
    ) -> Result<Self> {
        let space = TupleSpace::new(arity, domain.size())?;
        if values.len() != space.len() {
            return Err(Error::WrongLength {
                expected: space.len(),
                found: values.len(),
            });
        }
        for &v in &values {
            codomain.check(v)?;
        }
        Ok(Self {
            domain,
            codomain,
            space,
            values,
        })
    }

    pub fn from_fn(
        arity: usize,
        domain: Arc<Lattice>,
        codomain: Arc<Lattice>,
        f: impl Fn(&[Elem]) -> Elem,
    ) -> Result<Self> {
        let space = TupleSpace::new(arity, domain.size())?;
        let mut values = Vec::with_capacity(space.len());
        let mut cursor = space.cursor();
        loop {
            values.push(f(cursor.tuple()));
            if !cursor.advance() {
                break;
            }
        }
        Self::new(arity, domain, codomain, values)
    }

    pub fn constant(arity: usize, domain: Arc<Lattice>, codomain: Arc<Lattice>, c: Elem) -> Result<Self> {
        codomain.check(c)?;
        Self::from_fn(arity, domain, codomain, |_| c)
    }

    /// `x ↦ x_k` (zero-based `k`).
    pub fn projection(arity: usize, lattice: Arc<Lattice>, k: usize) -> Result<Self> {
        if k >= arity {
            return Err(Error::CoordinateOutOfRange { k, arity });
        }
        Self::from_fn(arity, lattice.clone(), lattice, |x| x[k])
    }

    pub fn arity(&self) -> usize {
        self.space.arity()
    }

    pub fn domain(&self) -> &Arc<Lattice> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Lattice> {
        &self.codomain
    }

    pub fn space(&self) -> &TupleSpace {
        &self.space
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Elem> {
        self.values
    }

    #[inline]
    pub fn get(&self, x: &[Elem]) -> Elem {
        self.values[self.space.index_of(x)]
    }

    #[inline]
    pub fn at(&self, index: usize) -> Elem {
        self.values[index]
    }

    /// Whether domain and codomain are the same lattice.
    pub fn is_endo(&self) -> bool {
        self.domain == self.codomain
    }

    pub(crate) fn require_endo(&self) -> Result<()> {
        if self.is_endo() {
            Ok(())
        } else {
            Err(Error::LatticeMismatch("function must have equal domain and codomain"))
        }
    }

    /// Distinct values, ascending.
    pub fn range(&self) -> Vec<Elem> {
        let mut seen = vec![false; self.codomain.size()];
        for &v in &self.values {
            seen[v] = true;
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    /// `δ_f(c) = f(c, …, c)`.
    pub fn diagonal(&self) -> UnaryMap {
        let n = self.arity();
        let table = self
            .domain
            .elements()
            .map(|c| self.get(&vec![c; n]))
            .collect();
        UnaryMap::new(self.domain.clone(), self.codomain.clone(), table)
            .expect("diagonal values come from the table")
    }

    /// `f(e_I)` where bit `i` of `mask` selects coordinate `i`.
    pub fn binary_value(&self, mask: usize) -> Elem {
        self.get(&binary_tuple(&self.domain, self.arity(), mask))
    }

    /// `f ∘ φ`, i.e. `x ↦ f(φ(x_1), …, φ(x_n))`.
    pub fn precompose(&self, phi: &UnaryMap) -> Result<FunctionTable> {
        if **phi.codomain() != *self.domain {
            return Err(Error::LatticeMismatch("precompose: map codomain differs from table domain"));
        }
        FunctionTable::from_fn(self.arity(), phi.domain().clone(), self.codomain.clone(), |x| {
            self.get(&phi.apply(x))
        })
    }

    /// `ψ ∘ f`.
    pub fn postcompose(&self, psi: &UnaryMap) -> Result<FunctionTable> {
        if **psi.domain() != *self.codomain {
            return Err(Error::LatticeMismatch("postcompose: map domain differs from table codomain"));
        }
        let values = self.values.iter().map(|&v| psi.get(v)).collect();
        FunctionTable::new(self.arity(), self.domain.clone(), psi.codomain().clone(), values)
    }

    /// First `x <= y` (differing in one coordinate) with `f(x) ≰ f(y)`.
    /// Checking single-coordinate steps suffices by transitivity.
    pub fn order_preserving_witness(&self) -> Option<Witness> {
        let (x_lat, y_lat) = (&*self.domain, &*self.codomain);
        let mut cursor = self.space.cursor();
        loop {
            let idx = cursor.index();
            let x = cursor.tuple();
            let fx = self.values[idx];
            for k in 0..x.len() {
                let stride = self.space.stride(k);
                let base = idx - x[k] * stride;
                for c in x_lat.elements() {
                    if c != x[k] && x_lat.leq(x[k], c) && !y_lat.leq(fx, self.values[base + c * stride]) {
                        let mut y = x.to_vec();
                        y[k] = c;
                        return Some(Witness::Pair { x: x.to_vec(), y });
                    }
                }
            }
            if !cursor.advance() {
                return None;
            }
        }
    }

    pub fn is_order_preserving(&self) -> bool {
        self.order_preserving_witness().is_none()
    }
}

/// `e_I`: top where bit `i` of `mask` is set, bottom elsewhere.
pub fn binary_tuple(lattice: &Lattice, arity: usize, mask: usize) -> Vec<Elem> {
    (0..arity)
        .map(|i| if mask >> i & 1 == 1 { lattice.top() } else { lattice.bottom() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_and_diagonals() {
        let c3 = Arc::new(Lattice::chain(3).unwrap());
        let meet = FunctionTable::from_fn(2, c3.clone(), c3.clone(), |x| x[0].min(x[1])).unwrap();
        assert_eq!(meet.values(), &[0, 0, 0, 0, 1, 1, 0, 1, 2]);
        assert_eq!(meet.diagonal().table(), &[0, 1, 2]);
        assert_eq!(meet.range(), vec![0, 1, 2]);
        assert_eq!(meet.binary_value(0b01), 0);
        assert_eq!(meet.binary_value(0b11), 2);
        assert!(meet.is_order_preserving());

        let rev = FunctionTable::from_fn(1, c3.clone(), c3.clone(), |x| 2 - x[0]).unwrap();
        assert_eq!(
            rev.order_preserving_witness(),
            Some(Witness::Pair { x: vec![0], y: vec![1] })
        );
    }

    #[test]
    fn binary_tuples_use_bit_i_for_coordinate_i() {
        let c3 = Lattice::chain(3).unwrap();
        assert_eq!(binary_tuple(&c3, 3, 0b001), vec![2, 0, 0]);
        assert_eq!(binary_tuple(&c3, 3, 0b110), vec![0, 2, 2]);
    }

    #[test]
    fn constructor_errors() {
        let c2 = Arc::new(Lattice::chain(2).unwrap());
        assert!(matches!(
            FunctionTable::new(2, c2.clone(), c2.clone(), vec![0; 3]),
            Err(Error::WrongLength { expected: 4, found: 3 })
        ));
        assert!(matches!(
            FunctionTable::projection(2, c2.clone(), 2),
            Err(Error::CoordinateOutOfRange { .. })
        ));
        assert!(matches!(
            FunctionTable::constant(21, c2.clone(), c2, 0),
            Err(Error::TupleSpaceTooLarge { .. })
        ));
    }
}
