//! Brute-force enumerators and membership oracles.
//!
//! Everything here works by listing candidates and composing tables, with no
//! appeal to any characterization, so it can referee the recognizers.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::polyfn::{goodstein_extend, BinaryMap, PolynomialForm};
use crate::quasipoly::{Factorization, FactorizationKind};
use crate::table::FunctionTable;
use crate::tuple::TupleSpace;
use crate::unary::UnaryMap;
use crate::Elem;

pub const DEFAULT_MAX_CANDIDATES: u64 = 1_000_000;
pub const DEFAULT_MAX_CHECKS: u64 = 10_000_000_000;
pub const BUDGET_ENV: &str = "QLAT_BUDGET";

/// Caps on enumeration size and pointwise work, plus the sampling seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_candidates: u64,
    pub max_checks: u64,
    pub seed: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_candidates: DEFAULT_MAX_CANDIDATES,
            max_checks: DEFAULT_MAX_CHECKS,
            seed: 0,
        }
    }
}

impl EnumerationBudget {
    /// The default budget, with `max_candidates` taken from `QLAT_BUDGET`
    /// when it holds a positive integer.
    pub fn from_env() -> Self {
        let mut b = Self::default();
        if let Some(cap) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
        {
            b.max_candidates = cap;
        }
        b
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_candidates(mut self, cap: u64) -> Self {
        self.max_candidates = cap.max(1);
        self
    }

    pub fn check_candidates(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_candidates as u128 {
            return Err(Error::BudgetExceeded {
                what,
                needed,
                cap: self.max_candidates,
            });
        }
        Ok(())
    }

    pub fn check_work(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_checks as u128 {
            return Err(Error::BudgetExceeded {
                what,
                needed,
                cap: self.max_checks,
            });
        }
        Ok(())
    }
}

/// `base^exp`, saturating at `u128::MAX`.
pub fn saturating_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Number of functions `X^n -> Y`.
pub fn function_count(n: usize, x: &Lattice, y: &Lattice) -> u128 {
    let points = saturating_pow(x.size(), n);
    match usize::try_from(points) {
        Ok(p) => saturating_pow(y.size(), p),
        Err(_) => u128::MAX,
    }
}

/// Advances `values` to the next vector in lexicographic order over
/// `0..radix`, last entry fastest. Returns `false` after the last one.
fn next_lex(values: &mut [Elem], radix: usize) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if *v < radix {
            return true;
        }
        *v = 0;
    }
    false
}

/// One canonical form per polynomial function `Y^n -> Y`, in lexicographic
/// order of `α`. Candidates are built subset by subset, keeping `α`
/// order-preserving, so only the emitted forms count against the budget.
pub fn enumerate_polynomials(n: usize, y: Arc<Lattice>, budget: &EnumerationBudget) -> Result<Vec<PolynomialForm>> {
    if n == 0 {
        return Err(Error::ZeroArity);
    }
    if n > 16 {
        return Err(Error::ArityTooLarge { arity: n, max: 16 });
    }
    let masks = 1usize << n;
    let mut alpha = vec![y.bottom(); masks];
    let mut out = Vec::new();
    extend_monotone(&y, n, 0, &mut alpha, &mut |a| {
        budget.check_candidates("polynomial forms", out.len() as u128 + 1)?;
        let g = BinaryMap::new(n, y.clone(), a.to_vec())?;
        out.push(goodstein_extend(&g)?);
        Ok(())
    })?;
    Ok(out)
}

fn extend_monotone(
    y: &Lattice,
    n: usize,
    mask: usize,
    alpha: &mut [Elem],
    emit: &mut dyn FnMut(&[Elem]) -> Result<()>,
) -> Result<()> {
    if mask == alpha.len() {
        return emit(alpha);
    }
    let floor = y.join_all((0..n).filter(|i| mask >> i & 1 == 1).map(|i| alpha[mask ^ (1 << i)]));
    for v in y.elements() {
        if y.leq(floor, v) {
            alpha[mask] = v;
            extend_monotone(y, n, mask + 1, alpha, emit)?;
        }
    }
    Ok(())
}

/// Every map `X -> Y`, in lexicographic order of tables.
pub fn enumerate_unary_maps(x: Arc<Lattice>, y: Arc<Lattice>, budget: &EnumerationBudget) -> Result<Vec<UnaryMap>> {
    enumerate_maps_where(x, y, budget, |_| true)
}

/// Every map `X -> Y` with each value in `[φ(0) ∧ φ(1), φ(0) ∨ φ(1)]`.
pub fn enumerate_bracket_maps(x: Arc<Lattice>, y: Arc<Lattice>, budget: &EnumerationBudget) -> Result<Vec<UnaryMap>> {
    enumerate_maps_where(x, y, budget, UnaryMap::satisfies_bracket_condition)
}

fn enumerate_maps_where(
    x: Arc<Lattice>,
    y: Arc<Lattice>,
    budget: &EnumerationBudget,
    keep: impl Fn(&UnaryMap) -> bool,
) -> Result<Vec<UnaryMap>> {
    budget.check_candidates("unary maps", saturating_pow(y.size(), x.size()))?;
    let mut table = vec![0; x.size()];
    let mut out = Vec::new();
    loop {
        let phi = UnaryMap::new(x.clone(), y.clone(), table.clone())?;
        if keep(&phi) {
            out.push(phi);
        }
        if !next_lex(&mut table, y.size()) {
            return Ok(out);
        }
    }
}

/// Outcome of an exhaustive factorization search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Search {
    /// The first matching pair in enumeration order (polynomial outer,
    /// unary map inner).
    pub found: Option<Factorization>,
    /// Pairs examined.
    pub candidates: u64,
}

/// `p ∘ φ` as a table over `X^n`.
fn compose_inner(p: &FunctionTable, phi: &UnaryMap, space: &TupleSpace) -> Vec<Elem> {
    let radix = p.space().radix();
    space
        .iter()
        .map(|x| p.at(x.iter().fold(0, |acc, &xi| acc * radix + phi.get(xi))))
        .collect()
}

/// Searches every polynomial over `Y` and every bracket-condition map
/// `X -> Y` for `p ∘ φ = f`.
pub fn find_quasi(f: &FunctionTable, budget: &EnumerationBudget) -> Result<Search> {
    let polys = enumerate_polynomials(f.arity(), f.codomain().clone(), budget)?;
    let maps = enumerate_bracket_maps(f.domain().clone(), f.codomain().clone(), budget)?;
    let pairs = polys.len() as u128 * maps.len() as u128;
    budget.check_work("quasi-polynomial search", pairs * f.space().len() as u128)?;
    let mut candidates = 0;
    for p in &polys {
        let table = p.to_table()?;
        for phi in &maps {
            candidates += 1;
            if compose_inner(&table, phi, f.space()) == f.values() {
                let mut fact = Factorization::new(FactorizationKind::Generic, p.clone(), phi.clone())?;
                fact.verified = true;
                return Ok(Search {
                    found: Some(fact),
                    candidates,
                });
            }
        }
    }
    Ok(Search {
        found: None,
        candidates,
    })
}

/// Searches every polynomial over `X` and every map `ψ: X -> Y` for
/// `ψ ∘ p = f`.
pub fn find_transformed(f: &FunctionTable, budget: &EnumerationBudget) -> Result<Search> {
    let polys = enumerate_polynomials(f.arity(), f.domain().clone(), budget)?;
    let maps = enumerate_unary_maps(f.domain().clone(), f.codomain().clone(), budget)?;
    let pairs = polys.len() as u128 * maps.len() as u128;
    budget.check_work("transformed polynomial search", pairs * f.space().len() as u128)?;
    let mut candidates = 0;
    for p in &polys {
        let table = p.to_table()?;
        for psi in &maps {
            candidates += 1;
            if table.values().iter().zip(f.values()).all(|(&v, &fv)| psi.get(v) == fv) {
                let mut fact = Factorization::new(FactorizationKind::Transformed, p.clone(), psi.clone())?;
                fact.verified = true;
                return Ok(Search {
                    found: Some(fact),
                    candidates,
                });
            }
        }
    }
    Ok(Search {
        found: None,
        candidates,
    })
}

/// Whether `f = p ∘ φ` for some polynomial `p` and bracket-condition `φ`.
pub fn oracle_quasi_membership(f: &FunctionTable, budget: &EnumerationBudget) -> Result<bool> {
    Ok(find_quasi(f, budget)?.found.is_some())
}

/// Whether `f = ψ ∘ p` for some polynomial `p` over the domain and any `ψ`.
pub fn oracle_transformed_membership(f: &FunctionTable, budget: &EnumerationBudget) -> Result<bool> {
    Ok(find_transformed(f, budget)?.found.is_some())
}

/// All composed tables of one family for a fixed arity and lattice pair,
/// each mapped to the indices of the first `(polynomial, unary map)` pair
/// producing it.
#[derive(Debug, Clone)]
pub struct MemberSet {
    arity: usize,
    domain: Arc<Lattice>,
    codomain: Arc<Lattice>,
    polys: Vec<PolynomialForm>,
    maps: Vec<UnaryMap>,
    kind: FactorizationKind,
    members: BTreeMap<Vec<Elem>, (usize, usize)>,
}

impl MemberSet {
    /// Every `p ∘ φ` with `p` over `Y` and `φ` a bracket-condition map.
    pub fn quasi(n: usize, x: Arc<Lattice>, y: Arc<Lattice>, budget: &EnumerationBudget) -> Result<Self> {
        let polys = enumerate_polynomials(n, y.clone(), budget)?;
        let maps = enumerate_bracket_maps(x.clone(), y.clone(), budget)?;
        let space = TupleSpace::new(n, x.size())?;
        budget.check_work(
            "quasi-polynomial member set",
            polys.len() as u128 * maps.len() as u128 * space.len() as u128,
        )?;
        let mut members = BTreeMap::new();
        for (pi, p) in polys.iter().enumerate() {
            let table = p.to_table()?;
            for (mi, phi) in maps.iter().enumerate() {
                members.entry(compose_inner(&table, phi, &space)).or_insert((pi, mi));
            }
        }
        Ok(Self {
            arity: n,
            domain: x,
            codomain: y,
            polys,
            maps,
            kind: FactorizationKind::Generic,
            members,
        })
    }

    /// Every `ψ ∘ p` with `p` over `X` and `ψ: X -> Y` arbitrary.
    pub fn transformed(n: usize, x: Arc<Lattice>, y: Arc<Lattice>, budget: &EnumerationBudget) -> Result<Self> {
        let polys = enumerate_polynomials(n, x.clone(), budget)?;
        let maps = enumerate_unary_maps(x.clone(), y.clone(), budget)?;
        let space = TupleSpace::new(n, x.size())?;
        budget.check_work(
            "transformed polynomial member set",
            polys.len() as u128 * maps.len() as u128 * space.len() as u128,
        )?;
        let mut members = BTreeMap::new();
        for (pi, p) in polys.iter().enumerate() {
            let table = p.to_table()?;
            for (mi, psi) in maps.iter().enumerate() {
                let composed = table.values().iter().map(|&v| psi.get(v)).collect();
                members.entry(composed).or_insert((pi, mi));
            }
        }
        Ok(Self {
            arity: n,
            domain: x,
            codomain: y,
            polys,
            maps,
            kind: FactorizationKind::Transformed,
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of `(polynomial, unary map)` pairs composed.
    pub fn candidates(&self) -> u64 {
        (self.polys.len() * self.maps.len()) as u64
    }

    fn same_shape(&self, f: &FunctionTable) -> bool {
        f.arity() == self.arity && **f.domain() == *self.domain && **f.codomain() == *self.codomain
    }

    pub fn contains(&self, f: &FunctionTable) -> bool {
        self.same_shape(f) && self.members.contains_key(f.values())
    }

    /// The first factorization found for `f`, if `f` is a member.
    pub fn factorization(&self, f: &FunctionTable) -> Option<Factorization> {
        if !self.same_shape(f) {
            return None;
        }
        let &(pi, mi) = self.members.get(f.values())?;
        let mut fact = Factorization::new(self.kind, self.polys[pi].clone(), self.maps[mi].clone()).ok()?;
        fact.verified = true;
        Some(fact)
    }

    /// Members as tables, in lexicographic order of values.
    pub fn tables(&self) -> impl Iterator<Item = FunctionTable> + '_ {
        self.members.keys().map(|values| {
            FunctionTable::new(self.arity, self.domain.clone(), self.codomain.clone(), values.clone())
                .expect("member tables come from valid compositions")
        })
    }
}

/// Functions `X^n -> Y`: every one when there are at most
/// `max_candidates`, otherwise `max_candidates` distinct seeded samples.
///
/// Sample `i` draws from a ChaCha8 stream keyed by `(seed, i)` and redraws
/// from the same stream until it hits a table not yet emitted.
pub struct FunctionSpace {
    domain: Arc<Lattice>,
    codomain: Arc<Lattice>,
    space: TupleSpace,
    total: u128,
    cap: u64,
    seed: u64,
    exhaustive: bool,
    emitted: u64,
    next: Option<Vec<Elem>>,
    seen: HashSet<Vec<u16>>,
}

pub fn function_space(n: usize, x: Arc<Lattice>, y: Arc<Lattice>, budget: &EnumerationBudget) -> Result<FunctionSpace> {
    let space = TupleSpace::new(n, x.size())?;
    let total = function_count(n, &x, &y);
    let exhaustive = total <= budget.max_candidates as u128;
    let next = Some(vec![0; space.len()]);
    Ok(FunctionSpace {
        domain: x,
        codomain: y,
        space,
        total,
        cap: budget.max_candidates,
        seed: budget.seed,
        exhaustive,
        emitted: 0,
        next,
        seen: HashSet::new(),
    })
}

impl FunctionSpace {
    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }

    /// Size of the whole function space (saturating).
    pub fn total(&self) -> u128 {
        self.total
    }

    /// Number of tables the stream yields.
    pub fn planned(&self) -> u64 {
        if self.exhaustive {
            self.total as u64
        } else {
            self.cap
        }
    }

    fn table(&self, values: Vec<Elem>) -> FunctionTable {
        FunctionTable::new(self.space.arity(), self.domain.clone(), self.codomain.clone(), values)
            .expect("generated values are in range")
    }

    fn sample(&mut self, index: u64) -> Vec<Elem> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let radix = self.codomain.size();
        loop {
            let values: Vec<Elem> = (0..self.space.len()).map(|_| rng.gen_range(0..radix)).collect();
            let key = values.iter().map(|&v| v as u16).collect();
            if self.seen.insert(key) {
                return values;
            }
        }
    }
}

impl Iterator for FunctionSpace {
    type Item = FunctionTable;

    fn next(&mut self) -> Option<FunctionTable> {
        if self.exhaustive {
            let current = self.next.take()?;
            let mut following = current.clone();
            if next_lex(&mut following, self.codomain.size()) {
                self.next = Some(following);
            }
            return Some(self.table(current));
        }
        if self.emitted >= self.cap {
            return None;
        }
        let values = self.sample(self.emitted);
        self.emitted += 1;
        Some(self.table(values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> Arc<Lattice> {
        Arc::new(Lattice::chain(n).unwrap())
    }

    /// Monotone maps from the subset lattice of `[n]` to `y`, by filtering
    /// every map.
    fn monotone_count_by_filter(n: usize, y: &Lattice) -> usize {
        let masks = 1usize << n;
        let mut values = vec![0; masks];
        let mut count = 0;
        loop {
            let monotone = (0..masks).all(|a| {
                (0..masks).all(|b| a & b != a || y.leq(values[a], values[b]))
            });
            count += monotone as usize;
            if !next_lex(&mut values, y.size()) {
                return count;
            }
        }
    }

    #[test]
    fn polynomial_counts() {
        let b = EnumerationBudget::default();
        let boolean = Arc::new(Lattice::boolean(2).unwrap());
        let cases: Vec<(usize, Arc<Lattice>, usize)> = vec![
            (2, c(2), 6),
            (2, c(3), 20),
            (3, c(2), 20),
            (2, boolean.clone(), 36),
            (1, c(4), 10),
            (1, boolean, 9),
        ];
        for (n, y, expected) in cases {
            let polys = enumerate_polynomials(n, y.clone(), &b).unwrap();
            assert_eq!(polys.len(), expected, "n={n} |Y|={}", y.size());
            assert_eq!(monotone_count_by_filter(n, &y), expected);
            assert!(polys.iter().all(PolynomialForm::is_canonical));
            let distinct: HashSet<_> = polys.iter().map(|p| p.to_table().unwrap().into_values()).collect();
            assert_eq!(distinct.len(), expected);
        }
    }

    #[test]
    fn closed_form_for_binary_chain3() {
        let hand: usize = (0..3usize)
            .flat_map(|i| (i..3).map(move |j| (j - i + 1).pow(2)))
            .sum();
        assert_eq!(hand, 20);
    }

    #[test]
    fn bracket_map_counts() {
        let b = EnumerationBudget::default();
        assert_eq!(enumerate_bracket_maps(c(2), c(2), &b).unwrap().len(), 4);
        let maps = enumerate_bracket_maps(c(3), c(3), &b).unwrap();
        assert_eq!(maps.len(), 17);
        assert!(!maps.iter().any(|m| m.table() == [0, 2, 1]));
        for k in 0..3 {
            assert!(maps.iter().any(|m| m.table() == [k, k, k]));
        }
        assert_eq!(enumerate_unary_maps(c(3), c(2), &b).unwrap().len(), 8);
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = EnumerationBudget::default().with_max_candidates(5);
        assert!(matches!(
            enumerate_polynomials(2, c(2), &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            enumerate_bracket_maps(c(3), c(3), &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let b = EnumerationBudget::default();
        let l2 = c(2);
        let xor = FunctionTable::new(2, l2.clone(), l2.clone(), vec![0, 1, 1, 0]).unwrap();
        let s = find_quasi(&xor, &b).unwrap();
        assert!(s.found.is_none());
        assert_eq!(s.candidates, 24);
        assert!(!oracle_transformed_membership(&xor, &b).unwrap());

        let l3 = c(3);
        let k = FunctionTable::constant(2, l3.clone(), c(2), 1).unwrap();
        assert!(oracle_transformed_membership(&k, &b).unwrap());
        assert!(oracle_quasi_membership(&k, &b).unwrap());

        let meet = FunctionTable::from_fn(2, l3.clone(), l3.clone(), |x| x[0].min(x[1])).unwrap();
        let s = find_transformed(&meet, &b).unwrap();
        assert_eq!(s.found.unwrap().compose().unwrap(), meet);
    }

    #[test]
    fn member_sets_agree_with_single_searches() {
        let b = EnumerationBudget::default();
        let (x, y) = (c(3), c(2));
        let quasi = MemberSet::quasi(2, x.clone(), y.clone(), &b).unwrap();
        let transformed = MemberSet::transformed(2, x.clone(), y.clone(), &b).unwrap();
        for f in function_space(2, x, y, &b).unwrap() {
            assert_eq!(quasi.contains(&f), oracle_quasi_membership(&f, &b).unwrap());
            assert_eq!(transformed.contains(&f), oracle_transformed_membership(&f, &b).unwrap());
            if let Some(fact) = quasi.factorization(&f) {
                assert_eq!(fact.compose().unwrap(), f);
            }
        }
        assert_eq!(quasi.tables().count(), quasi.len());
    }

    #[test]
    fn exhaustive_space_order_and_size() {
        let b = EnumerationBudget::default();
        let all: Vec<_> = function_space(2, c(2), c(2), &b).unwrap().collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].values(), &[0, 0, 0, 0]);
        assert_eq!(all[1].values(), &[0, 0, 0, 1]);
        assert_eq!(all[15].values(), &[1, 1, 1, 1]);
        let s = function_space(2, c(3), c(3), &b).unwrap();
        assert!(s.is_exhaustive());
        assert_eq!(s.count(), 19683);
    }

    #[test]
    fn sampling_is_distinct_and_reproducible() {
        let d = Arc::new(Lattice::boolean(2).unwrap());
        let b = EnumerationBudget::default().with_max_candidates(2000).with_seed(7);
        let first: Vec<_> = function_space(2, d.clone(), c(3), &b).unwrap().map(|f| f.into_values()).collect();
        let again: Vec<_> = function_space(2, d.clone(), c(3), &b).unwrap().map(|f| f.into_values()).collect();
        assert_eq!(first.len(), 2000);
        assert_eq!(first, again);
        assert_eq!(first.iter().collect::<HashSet<_>>().len(), 2000);
        let other: Vec<_> = function_space(2, d, c(3), &b.with_seed(8)).unwrap().map(|f| f.into_values()).collect();
        assert_ne!(first, other);
    }

    #[test]
    fn near_full_sampling_terminates() {
        // 16 tables, cap 15: sampling path with almost every table drawn
        let b = EnumerationBudget::default().with_max_candidates(15);
        let s = function_space(2, c(2), c(2), &b).unwrap();
        assert!(!s.is_exhaustive());
        assert_eq!(s.map(|f| f.into_values()).collect::<HashSet<_>>().len(), 15);
    }
}
