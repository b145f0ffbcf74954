//! Finite bounded distributive lattices stored as dense order, meet and join
//! tables.
//!
//! Elements are the indices `0..size`. After construction the labelling is a
//! linear extension of the order: `a <= b` implies `a <= b` as integers, so
//! the bottom is always `0` and the top is always `size - 1`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, LatticeError, Result};
use crate::Elem;

/// Largest lattice the constructors accept. Meet and join tables are
/// quadratic in the size.
pub const MAX_LATTICE_SIZE: usize = 1024;

/// Largest number of atoms accepted by [`LatticeSpec::Boolean`].
pub const MAX_BOOLEAN_ATOMS: usize = 4;

/// Lattice description as it appears in JSON files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeSpec {
    Chain {
        size: usize,
    },
    Boolean {
        atoms: usize,
    },
    Product {
        factors: Vec<LatticeSpec>,
    },
    /// `leq[a][b] == 1` iff `a <= b`, rows in file order.
    Explicit {
        size: usize,
        leq: Vec<Vec<u8>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

impl LatticeSpec {
    pub fn chain(size: usize) -> Self {
        LatticeSpec::Chain { size }
    }

    pub fn boolean(atoms: usize) -> Self {
        LatticeSpec::Boolean { atoms }
    }
}

#[derive(Clone)]
pub struct Lattice {
    size: usize,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    labels: Option<Vec<String>>,
    chain: bool,
    spec: LatticeSpec,
    relabeling: Option<Vec<usize>>,
    factor_sizes: Option<Vec<usize>>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.leq == other.leq
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("size", &self.size)
            .field("spec", &self.spec)
            .finish()
    }
}

/// Builds and validates a lattice from its description.
pub fn make_lattice(spec: &LatticeSpec) -> Result<Lattice, LatticeError> {
    match spec {
        LatticeSpec::Chain { size } => Lattice::chain(*size),
        LatticeSpec::Boolean { atoms } => Lattice::boolean(*atoms),
        LatticeSpec::Product { factors } => {
            let factors = factors
                .iter()
                .map(make_lattice)
                .collect::<Result<Vec<_>, _>>()?;
            Lattice::product(&factors)
        }
        LatticeSpec::Explicit { size, leq, labels } => {
            if leq.len() != *size {
                return Err(LatticeError::Malformed(format!(
                    "size is {size} but the matrix has {} rows",
                    leq.len()
                )));
            }
            let mut table = Vec::with_capacity(size * size);
            for (r, row) in leq.iter().enumerate() {
                if row.len() != *size {
                    return Err(LatticeError::Malformed(format!(
                        "row {r} has {} entries, expected {size}",
                        row.len()
                    )));
                }
                for (c, &v) in row.iter().enumerate() {
                    match v {
                        0 => table.push(false),
                        1 => table.push(true),
                        _ => {
                            return Err(LatticeError::Malformed(format!(
                                "entry ({r}, {c}) is {v}, expected 0 or 1"
                            )))
                        }
                    }
                }
            }
            if let Some(labels) = labels {
                if labels.len() != *size {
                    return Err(LatticeError::Malformed(format!(
                        "{} labels for {size} elements",
                        labels.len()
                    )));
                }
            }
            Lattice::explicit(*size, table, labels.clone())
        }
    }
}

impl Lattice {
    /// The chain `0 < 1 < ... < size-1`.
    pub fn chain(size: usize) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::InvalidSpec("a chain needs at least one element".into()));
        }
        check_size(size)?;
        let mut leq = vec![false; size * size];
        let mut meet = vec![0; size * size];
        let mut join = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                leq[a * size + b] = a <= b;
                meet[a * size + b] = a.min(b);
                join[a * size + b] = a.max(b);
            }
        }
        Ok(Lattice {
            size,
            leq,
            meet,
            join,
            labels: None,
            chain: true,
            spec: LatticeSpec::Chain { size },
            relabeling: None,
            factor_sizes: None,
        })
    }

    /// Subsets of `atoms` atoms, encoded as bitmasks.
    pub fn boolean(atoms: usize) -> Result<Self, LatticeError> {
        if atoms == 0 || atoms > MAX_BOOLEAN_ATOMS {
            return Err(LatticeError::InvalidSpec(format!(
                "boolean lattices need 1..={MAX_BOOLEAN_ATOMS} atoms, got {atoms}"
            )));
        }
        let size = 1usize << atoms;
        let mut leq = vec![false; size * size];
        let mut meet = vec![0; size * size];
        let mut join = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                leq[a * size + b] = a & b == a;
                meet[a * size + b] = a & b;
                join[a * size + b] = a | b;
            }
        }
        let labels = (0..size)
            .map(|m| {
                let atoms: Vec<String> = (0..atoms)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| (i + 1).to_string())
                    .collect();
                format!("{{{}}}", atoms.join(","))
            })
            .collect();
        Ok(Lattice {
            size,
            leq,
            meet,
            join,
            labels: Some(labels),
            chain: atoms == 1,
            spec: LatticeSpec::Boolean { atoms },
            relabeling: None,
            factor_sizes: None,
        })
    }

    /// Direct product with componentwise order and operations. Elements are
    /// mixed-radix numbers whose last factor varies fastest.
    pub fn product(factors: &[Lattice]) -> Result<Self, LatticeError> {
        if factors.is_empty() {
            return Err(LatticeError::InvalidSpec("a product needs at least one factor".into()));
        }
        let sizes: Vec<usize> = factors.iter().map(Lattice::size).collect();
        let size = sizes.iter().try_fold(1usize, |acc, &s| {
            acc.checked_mul(s).filter(|&n| n <= MAX_LATTICE_SIZE)
        });
        let Some(size) = size else {
            return Err(LatticeError::TooLarge {
                size: sizes.iter().fold(1usize, |a, &s| a.saturating_mul(s)),
                limit: MAX_LATTICE_SIZE,
            });
        };
        let decode = |mut e: usize| {
            let mut parts = vec![0; sizes.len()];
            for (slot, &s) in parts.iter_mut().zip(&sizes).rev() {
                *slot = e % s;
                e /= s;
            }
            parts
        };
        let encode = |parts: &[usize]| parts.iter().zip(&sizes).fold(0, |acc, (&p, &s)| acc * s + p);
        let comps: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let mut leq = vec![false; size * size];
        let mut meet = vec![0; size * size];
        let mut join = vec![0; size * size];
        let mut buf_m = vec![0; sizes.len()];
        let mut buf_j = vec![0; sizes.len()];
        for a in 0..size {
            for b in 0..size {
                let (ca, cb) = (&comps[a], &comps[b]);
                let mut below = true;
                for (i, f) in factors.iter().enumerate() {
                    below &= f.leq(ca[i], cb[i]);
                    buf_m[i] = f.meet(ca[i], cb[i]);
                    buf_j[i] = f.join(ca[i], cb[i]);
                }
                leq[a * size + b] = below;
                meet[a * size + b] = encode(&buf_m);
                join[a * size + b] = encode(&buf_j);
            }
        }
        let chain = (0..size).all(|a| (0..size).all(|b| leq[a * size + b] || leq[b * size + a]));
        Ok(Lattice {
            size,
            leq,
            meet,
            join,
            labels: None,
            chain,
            spec: LatticeSpec::Product {
                factors: factors.iter().map(|f| f.spec.clone()).collect(),
            },
            relabeling: None,
            factor_sizes: Some(sizes),
        })
    }

    /// Validates an order given as a row-major `size * size` table and
    /// relabels it into a linear extension.
    pub fn explicit(
        size: usize,
        leq: Vec<bool>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Malformed("empty order".into()));
        }
        check_size(size)?;
        if leq.len() != size * size {
            return Err(LatticeError::Malformed(format!(
                "expected {} entries, found {}",
                size * size,
                leq.len()
            )));
        }
        let le = |a: usize, b: usize| leq[a * size + b];
        for a in 0..size {
            if !le(a, a) {
                return Err(LatticeError::NotReflexive(a));
            }
        }
        for a in 0..size {
            for b in a + 1..size {
                if le(a, b) && le(b, a) {
                    return Err(LatticeError::NotAntisymmetric(a, b));
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                if !le(a, b) {
                    continue;
                }
                for c in 0..size {
                    if le(b, c) && !le(a, c) {
                        return Err(LatticeError::NotTransitive(a, b, c));
                    }
                }
            }
        }
        if !(0..size).any(|b| (0..size).all(|x| le(b, x))) {
            return Err(LatticeError::Unbounded("least"));
        }
        if !(0..size).any(|t| (0..size).all(|x| le(x, t))) {
            return Err(LatticeError::Unbounded("greatest"));
        }
        let meet = bound_table(size, &le, true)?;
        let join = bound_table(size, &le, false)?;
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    let lhs = meet[a * size + join[b * size + c]];
                    let rhs = join[meet[a * size + b] * size + meet[a * size + c]];
                    if lhs != rhs {
                        return Err(LatticeError::NotDistributive(a, b, c));
                    }
                }
            }
        }

        // Kahn's algorithm, always taking the smallest available source row.
        let mut indegree: Vec<usize> = (0..size)
            .map(|b| (0..size).filter(|&a| a != b && le(a, b)).count())
            .collect();
        let mut ready: BTreeSet<usize> = (0..size).filter(|&a| indegree[a] == 0).collect();
        let mut order = Vec::with_capacity(size);
        while let Some(a) = ready.pop_first() {
            order.push(a);
            for (b, d) in indegree.iter_mut().enumerate() {
                if b != a && le(a, b) {
                    *d -= 1;
                    if *d == 0 {
                        ready.insert(b);
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), size);
        let mut position = vec![0; size];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }

        let mut c_leq = vec![false; size * size];
        let mut c_meet = vec![0; size * size];
        let mut c_join = vec![0; size * size];
        for (na, &oa) in order.iter().enumerate() {
            for (nb, &ob) in order.iter().enumerate() {
                c_leq[na * size + nb] = le(oa, ob);
                c_meet[na * size + nb] = position[meet[oa * size + ob]];
                c_join[na * size + nb] = position[join[oa * size + ob]];
            }
        }
        let labels = labels.map(|l| order.iter().map(|&o| l[o].clone()).collect::<Vec<_>>());
        let chain = (0..size).all(|a| (0..size).all(|b| le(a, b) || le(b, a)));
        let identity = order.iter().enumerate().all(|(i, &o)| i == o);
        let spec = LatticeSpec::Explicit {
            size,
            leq: (0..size)
                .map(|a| (0..size).map(|b| u8::from(c_leq[a * size + b])).collect())
                .collect(),
            labels: labels.clone(),
        };
        Ok(Lattice {
            size,
            leq: c_leq,
            meet: c_meet,
            join: c_join,
            labels,
            chain,
            spec,
            relabeling: (!identity).then_some(order),
            factor_sizes: None,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> Elem {
        0
    }

    pub fn top(&self) -> Elem {
        self.size - 1
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn is_chain(&self) -> bool {
        self.chain
    }

    /// Canonical description; explicit lattices are emitted in their
    /// relabelled order so re-reading it is the identity.
    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    /// For explicit lattices whose input rows were not already a linear
    /// extension: entry `i` is the input row that became element `i`.
    pub fn relabeling(&self) -> Option<&[usize]> {
        self.relabeling.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, e: Elem) -> String {
        match &self.labels {
            Some(l) => l[e].clone(),
            None => e.to_string(),
        }
    }

    pub fn check(&self, e: Elem) -> Result<()> {
        if e < self.size {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                elem: e,
                size: self.size,
            })
        }
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.size + b]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.size + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.size + b]
    }

    pub fn comparable(&self, a: Elem, b: Elem) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Meet of all items; the empty meet is the top.
    pub fn meet_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// Join of all items; the empty join is the bottom.
    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    /// Ternary median `(a ∧ b) ∨ (b ∧ c) ∨ (c ∧ a)`.
    #[inline]
    pub fn med(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        self.join(self.join(self.meet(a, b), self.meet(b, c)), self.meet(c, a))
    }

    /// `med(lo, x, hi)`. Bounds may be given in either order.
    #[inline]
    pub fn clamp(&self, x: Elem, lo: Elem, hi: Elem) -> Elem {
        self.med(lo, x, hi)
    }

    /// Componentwise `med(lo, x_i, hi)`.
    pub fn bracket(&self, x: &[Elem], lo: Elem, hi: Elem) -> Vec<Elem> {
        x.iter().map(|&xi| self.med(lo, xi, hi)).collect()
    }

    pub fn surgery(&self, x: &[Elem], op: Surgery) -> Result<Vec<Elem>> {
        let mut out = x.to_vec();
        match op {
            Surgery::Substitute { k, c } => {
                if k >= x.len() {
                    return Err(Error::CoordinateOutOfRange { k, arity: x.len() });
                }
                out[k] = c;
            }
            Surgery::MeetConst(c) => out.iter_mut().for_each(|v| *v = self.meet(*v, c)),
            Surgery::JoinConst(c) => out.iter_mut().for_each(|v| *v = self.join(*v, c)),
            Surgery::ClipFloor(c) => out.iter_mut().for_each(|v| {
                if self.leq(*v, c) {
                    *v = self.bottom();
                }
            }),
            Surgery::ClipCeil(c) => out.iter_mut().for_each(|v| {
                if self.leq(c, *v) {
                    *v = self.top();
                }
            }),
        }
        Ok(out)
    }

    /// Smallest convex set containing `set`, as a membership mask.
    pub fn convex_hull(&self, set: &[Elem]) -> Vec<bool> {
        self.elements()
            .map(|c| {
                set.iter().any(|&a| self.leq(a, c)) && set.iter().any(|&b| self.leq(c, b))
            })
            .collect()
    }

    pub fn is_convex(&self, set: &[Elem]) -> bool {
        let mut member = vec![false; self.size];
        for &a in set {
            member[a] = true;
        }
        self.convex_hull(set) == member
    }

    /// Factor coordinates of an element of a product lattice.
    pub fn components(&self, e: Elem) -> Option<Vec<Elem>> {
        let sizes = self.factor_sizes.as_ref()?;
        let mut parts = vec![0; sizes.len()];
        let mut rest = e;
        for (slot, &s) in parts.iter_mut().zip(sizes).rev() {
            *slot = rest % s;
            rest /= s;
        }
        Some(parts)
    }

    /// Exhaustively re-checks order, lattice, boundedness and distributivity.
    pub fn validate(&self) -> Result<(), LatticeError> {
        let n = self.size;
        let elems = || 0..n;
        for a in elems() {
            if !self.leq(a, a) {
                return Err(LatticeError::NotReflexive(a));
            }
            if !self.leq(0, a) {
                return Err(LatticeError::Unbounded("least"));
            }
            if !self.leq(a, n - 1) {
                return Err(LatticeError::Unbounded("greatest"));
            }
            for b in elems() {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return Err(LatticeError::NotAntisymmetric(a, b));
                }
                if self.leq(a, b) && a > b {
                    return Err(LatticeError::Malformed(format!(
                        "labelling is not a linear extension at ({a}, {b})"
                    )));
                }
                let m = self.meet(a, b);
                let j = self.join(a, b);
                for c in elems() {
                    if self.leq(a, b) && self.leq(b, c) && !self.leq(a, c) {
                        return Err(LatticeError::NotTransitive(a, b, c));
                    }
                    let lower = self.leq(c, a) && self.leq(c, b);
                    if lower != self.leq(c, m) {
                        return Err(LatticeError::MissingBound(a, b, "greatest lower bound"));
                    }
                    let upper = self.leq(a, c) && self.leq(b, c);
                    if upper != self.leq(j, c) {
                        return Err(LatticeError::MissingBound(a, b, "least upper bound"));
                    }
                    if self.meet(a, self.join(b, c)) != self.join(m, self.meet(a, c)) {
                        return Err(LatticeError::NotDistributive(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Componentwise tuple transformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surgery {
    /// Replace coordinate `k` (zero-based) by `c`.
    Substitute { k: usize, c: Elem },
    MeetConst(Elem),
    JoinConst(Elem),
    /// Coordinates `<= c` become the bottom.
    ClipFloor(Elem),
    /// Coordinates `>= c` become the top.
    ClipCeil(Elem),
}

fn check_size(size: usize) -> Result<(), LatticeError> {
    if size > MAX_LATTICE_SIZE {
        Err(LatticeError::TooLarge {
            size,
            limit: MAX_LATTICE_SIZE,
        })
    } else {
        Ok(())
    }
}

fn bound_table(
    size: usize,
    le: &impl Fn(usize, usize) -> bool,
    lower: bool,
) -> Result<Vec<Elem>, LatticeError> {
    let below = |x: usize, y: usize| if lower { le(x, y) } else { le(y, x) };
    let mut table = vec![0; size * size];
    for a in 0..size {
        for b in 0..size {
            let candidates: Vec<usize> = (0..size).filter(|&c| below(c, a) && below(c, b)).collect();
            let best = candidates
                .iter()
                .copied()
                .find(|&g| candidates.iter().all(|&c| below(c, g)));
            match best {
                Some(g) => table[a * size + b] = g,
                None => {
                    let what = if lower {
                        "greatest lower bound"
                    } else {
                        "least upper bound"
                    };
                    return Err(LatticeError::MissingBound(a, b, what));
                }
            }
        }
    }
    Ok(table)
}
