use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::table::FunctionTable;
use crate::Elem;

/// A map on the binary tuples `{0,1}^n`, indexed by subset bitmask
/// (bit `i` set iff coordinate `i` is the top).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMap {
    arity: usize,
    lattice: Arc<Lattice>,
    values: Vec<Elem>,
}

impl BinaryMap {
    pub fn new(arity: usize, lattice: Arc<Lattice>, values: Vec<Elem>) -> Result<Self> {
        check_arity(arity)?;
        if values.len() != 1 << arity {
            return Err(Error::WrongLength {
                expected: 1 << arity,
                found: values.len(),
            });
        }
        for &v in &values {
            lattice.check(v)?;
        }
        Ok(Self {
            arity,
            lattice,
            values,
        })
    }

    pub fn from_fn(arity: usize, lattice: Arc<Lattice>, g: impl Fn(usize) -> Elem) -> Result<Self> {
        check_arity(arity)?;
        let values = (0..1usize << arity).map(g).collect();
        Self::new(arity, lattice, values)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn get(&self, mask: usize) -> Elem {
        self.values[mask]
    }

    /// First covering pair `I ⊂ I ∪ {i}` (by `I`, then `i`) with
    /// `g(I) ≰ g(I ∪ {i})`, as `(lower, upper)` masks.
    pub fn monotonicity_violation(&self) -> Option<(usize, usize)> {
        monotonicity_violation(&self.lattice, self.arity, &self.values)
    }

    pub fn is_order_preserving(&self) -> bool {
        self.monotonicity_violation().is_none()
    }
}

pub(crate) fn monotonicity_violation(lattice: &Lattice, arity: usize, values: &[Elem]) -> Option<(usize, usize)> {
    for lower in 0..1usize << arity {
        for i in 0..arity {
            let upper = lower | 1 << i;
            if upper != lower && !lattice.leq(values[lower], values[upper]) {
                return Some((lower, upper));
            }
        }
    }
    None
}

fn check_arity(arity: usize) -> Result<()> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    if arity >= usize::BITS as usize - 1 {
        return Err(Error::TupleSpaceTooLarge {
            size: 2,
            arity,
            limit: crate::tuple::MAX_TUPLE_SPACE,
        });
    }
    Ok(())
}

/// Normal-form coefficients of a lattice polynomial:
/// `p(x) = ⋁_I (α(I) ∧ ⋀_{i∈I} x_i)` and optionally
/// `p(x) = ⋀_I (β(I) ∨ ⋁_{i∈I} x_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialForm {
    arity: usize,
    lattice: Arc<Lattice>,
    alpha: Vec<Elem>,
    beta: Option<Vec<Elem>>,
    canonical: bool,
}

impl PolynomialForm {
    /// Arbitrary DNF coefficients; not marked canonical.
    pub fn new(arity: usize, lattice: Arc<Lattice>, alpha: Vec<Elem>) -> Result<Self> {
        let alpha = BinaryMap::new(arity, lattice.clone(), alpha)?.values;
        Ok(Self {
            arity,
            lattice,
            alpha,
            beta: None,
            canonical: false,
        })
    }

    pub fn with_beta(mut self, beta: Vec<Elem>) -> Result<Self> {
        let beta = BinaryMap::new(self.arity, self.lattice.clone(), beta)?.values;
        self.beta = Some(beta);
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn alpha(&self) -> &[Elem] {
        &self.alpha
    }

    pub fn beta(&self) -> Option<&[Elem]> {
        self.beta.as_deref()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn eval_dnf(&self, x: &[Elem]) -> Elem {
        debug_assert_eq!(x.len(), self.arity);
        let l = &*self.lattice;
        let mut acc = l.bottom();
        for (mask, &a) in self.alpha.iter().enumerate() {
            let mut term = a;
            for (i, &xi) in x.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    term = l.meet(term, xi);
                }
            }
            acc = l.join(acc, term);
        }
        acc
    }

    pub fn eval_cnf(&self, x: &[Elem]) -> Result<Elem> {
        let beta = self.beta.as_ref().ok_or(Error::MissingCnf)?;
        let l = &*self.lattice;
        let mut acc = l.top();
        for (mask, &b) in beta.iter().enumerate() {
            let mut clause = b;
            for (i, &xi) in x.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    clause = l.join(clause, xi);
                }
            }
            acc = l.meet(acc, clause);
        }
        Ok(acc)
    }

    /// The function the DNF describes.
    pub fn to_table(&self) -> Result<FunctionTable> {
        FunctionTable::from_fn(self.arity, self.lattice.clone(), self.lattice.clone(), |x| {
            self.eval_dnf(x)
        })
    }

    pub fn to_table_cnf(&self) -> Result<FunctionTable> {
        if self.beta.is_none() {
            return Err(Error::MissingCnf);
        }
        FunctionTable::from_fn(self.arity, self.lattice.clone(), self.lattice.clone(), |x| {
            self.eval_cnf(x).expect("beta present")
        })
    }
}

/// Reads `α(I) = f(e_I)` and `β(I) = f(e_{[n]∖I})` off the binary tuples.
/// The result is marked canonical only when `α` is order-preserving.
pub fn canonical_forms(f: &FunctionTable) -> Result<PolynomialForm> {
    f.require_endo()?;
    let n = f.arity();
    let full = (1usize << n) - 1;
    let alpha: Vec<Elem> = (0..=full).map(|m| f.binary_value(m)).collect();
    let beta = (0..=full).map(|m| alpha[full ^ m]).collect();
    let canonical = monotonicity_violation(f.codomain(), n, &alpha).is_none();
    Ok(PolynomialForm {
        arity: n,
        lattice: f.codomain().clone(),
        alpha,
        beta: Some(beta),
        canonical,
    })
}

/// The unique polynomial agreeing with `g` on binary tuples, if `g` is
/// order-preserving.
pub fn goodstein_extend(g: &BinaryMap) -> Result<PolynomialForm> {
    if let Some((lower, upper)) = g.monotonicity_violation() {
        return Err(Error::NotOrderPreserving { lower, upper });
    }
    let full = (1usize << g.arity) - 1;
    let beta = (0..=full).map(|m| g.values[full ^ m]).collect();
    Ok(PolynomialForm {
        arity: g.arity,
        lattice: g.lattice.clone(),
        alpha: g.values.clone(),
        beta: Some(beta),
        canonical: true,
    })
}
