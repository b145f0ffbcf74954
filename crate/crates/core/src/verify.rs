//! Exhaustive equivalence checks between the recognizers and the brute-force
//! oracles, grouped into suites.
//!
//! Each check walks a space of functions `X^n -> Y` and counts the
//! functions on which two sides disagree. Failures carry the offending
//! table verbatim.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{make_lattice, Lattice, LatticeSpec};
use crate::oracle::{self, function_count, EnumerationBudget, MemberSet};
use crate::polyfn::{
    is_median_decomposable, is_polynomial, is_sugeno, polynomial_property_report, PolynomialForm,
};
use crate::quasipoly::{
    factorization_bracket_identities, hat, hat_polynomial, is_quasi_polynomial, is_transformed_polynomial_with,
    promote_to_polynomial_with, quasi_property_report, quasi_sugeno_factorization, verify_factorization,
    Factorization, FactorizationKind, HatMode,
};
use crate::table::FunctionTable;
use crate::unary::UnaryMap;
use crate::witness::Property;
use crate::Elem;

/// Failures stored per check; the count is always exact.
pub const MAX_REPORTED_FAILURES: usize = 10;

/// The functions `X^n -> Y` for one arity and lattice pair.
#[derive(Debug, Clone)]
pub struct Space {
    pub arity: usize,
    pub domain: Arc<Lattice>,
    pub codomain: Arc<Lattice>,
}

impl Space {
    pub fn new(arity: usize, domain: &LatticeSpec, codomain: &LatticeSpec) -> Result<Self> {
        Ok(Self {
            arity,
            domain: Arc::new(make_lattice(domain)?),
            codomain: Arc::new(make_lattice(codomain)?),
        })
    }

    /// `chain(a)^n -> chain(b)`.
    pub fn chains(arity: usize, a: usize, b: usize) -> Self {
        Self::new(arity, &LatticeSpec::chain(a), &LatticeSpec::chain(b)).expect("chains within limits")
    }

    pub fn is_endo(&self) -> bool {
        *self.domain == *self.codomain
    }

    pub fn function_count(&self) -> u128 {
        function_count(self.arity, &self.domain, &self.codomain)
    }

    fn functions(&self, budget: &EnumerationBudget) -> Result<oracle::FunctionSpace> {
        oracle::function_space(self.arity, self.domain.clone(), self.codomain.clone(), budget)
    }
}

fn lattice_name(l: &Lattice) -> String {
    match l.spec() {
        LatticeSpec::Chain { size } => format!("chain({size})"),
        LatticeSpec::Boolean { atoms } => format!("boolean({atoms})"),
        LatticeSpec::Product { factors } => {
            let parts: Vec<String> = factors
                .iter()
                .map(|f| make_lattice(f).map_or_else(|_| "?".into(), |l| lattice_name(&l)))
                .collect();
            parts.join("x")
        }
        LatticeSpec::Explicit { size, .. } => format!("explicit({size})"),
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}^{} -> {}",
            lattice_name(&self.domain),
            self.arity,
            lattice_name(&self.codomain)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub values: Vec<Elem>,
    pub detail: String,
}

/// Outcome of one check over one space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: &'static str,
    pub space: String,
    /// Whether every function of the space was visited.
    pub exhaustive: bool,
    pub visited: u64,
    /// Functions satisfying the check's hypotheses.
    pub applicable: u64,
    pub disagreements: u64,
    pub failures: Vec<Failure>,
}

impl CheckResult {
    fn new(check: &'static str, space: String, exhaustive: bool) -> Self {
        Self {
            check,
            space,
            exhaustive,
            visited: 0,
            applicable: 0,
            disagreements: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.disagreements == 0
    }

    fn fail(&mut self, values: &[Elem], detail: String) {
        self.disagreements += 1;
        if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(Failure {
                values: values.to_vec(),
                detail,
            });
        }
    }
}

/// What one function contributes to a check.
enum Outcome {
    Skip,
    Agree,
    Disagree(String),
}

fn agree(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Agree
    } else {
        Outcome::Disagree(detail())
    }
}

fn run_over(
    check: &'static str,
    space: &Space,
    budget: &EnumerationBudget,
    mut each: impl FnMut(&FunctionTable) -> Result<Outcome>,
) -> Result<CheckResult> {
    let functions = space.functions(budget)?;
    let mut result = CheckResult::new(check, space.to_string(), functions.is_exhaustive());
    for f in functions {
        result.visited += 1;
        match each(&f)? {
            Outcome::Skip => {}
            Outcome::Agree => result.applicable += 1,
            Outcome::Disagree(detail) => {
                result.applicable += 1;
                result.fail(f.values(), detail);
            }
        }
    }
    Ok(result)
}

/// Polynomial ⇔ median decomposable ⇔ order-preserving and homogeneous over
/// the convex hull of the range ⇔ member of the enumerated polynomials.
pub fn polynomial_characterization(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    require_endo(space)?;
    let members: BTreeSet<Vec<Elem>> = oracle::enumerate_polynomials(space.arity, space.codomain.clone(), budget)?
        .iter()
        .map(|p| p.to_table().map(FunctionTable::into_values))
        .collect::<Result<_>>()?;
    run_over("polynomial_characterization", space, budget, |f| {
        let poly = is_polynomial(f)?.holds();
        let median = is_median_decomposable(f)?.holds();
        let r = polynomial_property_report(f)?;
        let homogeneous = r.holds(Property::OrderPreserving)
            && r.holds(Property::MeetHomogeneous)
            && r.holds(Property::JoinHomogeneous);
        let oracle = members.contains(f.values());
        Ok(agree(poly == median && poly == homogeneous && poly == oracle, || {
            format!("polynomial={poly} median={median} homogeneous={homogeneous} oracle={oracle}")
        }))
    })
}

/// On chains: hull-idempotent, comonotonic minitive and maxitive ⇔
/// polynomial.
pub fn chain_polynomial_characterization(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    require_endo(space)?;
    if !space.domain.is_chain() {
        return Err(Error::Precondition(format!("{space} is not over a chain")));
    }
    run_over("chain_polynomial_characterization", space, budget, |f| {
        let poly = is_polynomial(f)?.holds();
        let r = polynomial_property_report(f)?;
        let comonotone = r.holds(Property::HullIdempotent)
            && r.holds(Property::ComonotonicMinitive)
            && r.holds(Property::ComonotonicMaxitive);
        Ok(agree(poly == comonotone, || format!("polynomial={poly} comonotone={comonotone}")))
    })
}

/// Quasi-median decomposable ⇔ some `p ∘ φ` equals `f`; the canonical
/// factorization reproduces every member.
pub fn quasi_polynomial_membership(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    let members = MemberSet::quasi(space.arity, space.domain.clone(), space.codomain.clone(), budget)?;
    run_over("quasi_polynomial_membership", space, budget, |f| {
        let r = is_quasi_polynomial(f)?;
        let quasi = r.holds(Property::QuasiPolynomial);
        let oracle = members.contains(f);
        let reproduces = match &r.factorization {
            Some(fact) => fact.compose()? == *f,
            None => !quasi,
        };
        Ok(agree(quasi == oracle && reproduces, || {
            format!("quasi_polynomial={quasi} oracle={oracle} factorization_reproduces={reproduces}")
        }))
    })
}

/// For each quasi-polynomial `f`: the pairs `(p, φ)` composing to `f` are
/// exactly those with `⟨p⟩_f = p_f` and `⟨φ⟩_p = δ_f`.
pub fn factorization_characterization(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    let polys = oracle::enumerate_polynomials(space.arity, space.codomain.clone(), budget)?;
    let maps = oracle::enumerate_bracket_maps(space.domain.clone(), space.codomain.clone(), budget)?;
    let pairs: Vec<Factorization> = polys
        .iter()
        .flat_map(|p| {
            maps.iter()
                .map(move |phi| Factorization::new(FactorizationKind::Generic, p.clone(), phi.clone()))
        })
        .collect::<Result<_>>()?;
    run_over("factorization_characterization", space, budget, |f| {
        if !is_quasi_polynomial(f)?.holds(Property::QuasiPolynomial) {
            return Ok(Outcome::Skip);
        }
        let mut by_composition = 0;
        for (i, cand) in pairs.iter().enumerate() {
            let composes = verify_factorization(f, cand)?;
            let identities = factorization_bracket_identities(f, &cand.p, &cand.phi)?;
            if composes != identities {
                return Ok(Outcome::Disagree(format!(
                    "pair {i} (alpha={:?}, phi={:?}): composes={composes} identities={identities}",
                    cand.p.alpha(),
                    cand.phi.table()
                )));
            }
            by_composition += composes as usize;
        }
        Ok(agree(by_composition > 0, || "no factorization found".into()))
    })
}

/// For each quasi-polynomial `f`: `q ∘ δ_f = f` with `q` a Sugeno integral.
pub fn sugeno_factorization(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    run_over("sugeno_factorization", space, budget, |f| {
        if !is_quasi_polynomial(f)?.holds(Property::QuasiPolynomial) {
            return Ok(Outcome::Skip);
        }
        let fact = quasi_sugeno_factorization(f)?;
        let sugeno = is_sugeno(&fact.p.to_table()?)?;
        let reproduces = fact.compose()? == *f && fact.phi == f.diagonal();
        Ok(agree(sugeno && reproduces, || format!("sugeno={sugeno} reproduces={reproduces}")))
    })
}

fn homomorphic_hypotheses(f: &FunctionTable) -> bool {
    f.is_order_preserving() && f.diagonal().is_homomorphism()
}

/// For order-preserving `f` with a homomorphic diagonal, each of the three
/// homogeneity/decomposition pairs ⇔ quasi-polynomial.
pub fn quasi_homogeneity_characterization(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    run_over("quasi_homogeneity_characterization", space, budget, |f| {
        if !homomorphic_hypotheses(f) {
            return Ok(Outcome::Skip);
        }
        let quasi = is_quasi_polynomial(f)?.holds(Property::QuasiPolynomial);
        let r = quasi_property_report(f)?;
        let meet_h = r.holds(Property::QuasiMeetHomogeneous);
        let join_h = r.holds(Property::QuasiJoinHomogeneous);
        let meet_d = r.holds(Property::HorizontallyMeetDecomposable);
        let join_d = r.holds(Property::HorizontallyJoinDecomposable);
        let flags = [meet_h && join_h, meet_h && join_d, meet_d && join_h];
        Ok(agree(flags.iter().all(|&b| b == quasi), || {
            format!("quasi_polynomial={quasi} (ii,iii,iv)={flags:?}")
        }))
    })
}

/// For a chain codomain and the same hypotheses: quasi-comonotonic
/// minitive and maxitive ⇔ quasi-polynomial.
pub fn quasi_comonotone_characterization(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    if !space.codomain.is_chain() {
        return Err(Error::Precondition(format!("{space} does not map into a chain")));
    }
    run_over("quasi_comonotone_characterization", space, budget, |f| {
        if !homomorphic_hypotheses(f) {
            return Ok(Outcome::Skip);
        }
        let quasi = is_quasi_polynomial(f)?.holds(Property::QuasiPolynomial);
        let r = quasi_property_report(f)?;
        let comonotone = r.holds(Property::QuasiComonotonicMinitive) && r.holds(Property::QuasiComonotonicMaxitive);
        Ok(agree(comonotone == quasi, || {
            format!("quasi_polynomial={quasi} comonotone={comonotone}")
        }))
    })
}

/// For each quasi-polynomial `f`: the DNF and CNF hats agree.
pub fn hat_agreement(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    run_over("hat_agreement", space, budget, |f| {
        if !is_quasi_polynomial(f)?.holds(Property::QuasiPolynomial) {
            return Ok(Outcome::Skip);
        }
        let dnf = hat(f, HatMode::Dnf);
        let cnf = hat(f, HatMode::Cnf);
        Ok(agree(dnf == cnf, || format!("dnf={:?} cnf={:?}", dnf.values(), cnf.values())))
    })
}

/// First order-preserving function (in enumeration order) whose DNF and CNF
/// hats agree but which is not quasi-polynomial.
pub fn find_hat_counterexample(space: &Space, budget: &EnumerationBudget) -> Result<Option<FunctionTable>> {
    for f in space.functions(budget)? {
        if f.is_order_preserving()
            && hat(&f, HatMode::Dnf) == hat(&f, HatMode::Cnf)
            && !is_quasi_polynomial(&f)?.holds(Property::QuasiPolynomial)
        {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// For homomorphic diagonals: quasi-idempotent and quasi-polynomial ⇔ some
/// `ψ ∘ p` equals `f`. Every member also satisfies `f = δ_f ∘ p` for the
/// oracle's `p`, and on endomorphic spaces the promotion criterion agrees
/// with the polynomial test.
pub fn transformed_membership(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    let members = MemberSet::transformed(space.arity, space.domain.clone(), space.codomain.clone(), budget)?;
    run_over("transformed_membership", space, budget, |f| {
        let oracle_fact = members.factorization(f);
        let oracle = oracle_fact.is_some();
        if let Some(fact) = &oracle_fact {
            let delta = f.diagonal();
            let p = fact.p.to_table()?;
            if p.postcompose(&delta)? != *f {
                return Ok(Outcome::Disagree("f != δ_f ∘ p for the oracle's p".into()));
            }
            if space.is_endo() {
                let promo = promote_to_polynomial_with(f, budget)?;
                if !promo.agrees() {
                    return Ok(Outcome::Disagree(format!("promotion {promo:?}")));
                }
            }
        }
        if !f.diagonal().is_homomorphism() {
            return Ok(Outcome::Skip);
        }
        let r = is_transformed_polynomial_with(f, budget)?;
        let verdict = r.holds(Property::TransformedPolynomial);
        let reproduces = match &r.factorization {
            Some(fact) => fact.compose()? == *f,
            None => !verdict,
        };
        Ok(agree(verdict == oracle && !r.decided_by_oracle && reproduces, || {
            format!(
                "transformed={verdict} oracle={oracle} decided_by_oracle={} reproduces={reproduces}",
                r.decided_by_oracle
            )
        }))
    })
}

/// Identities for every enumerated polynomial `p` over `Y` and
/// bracket-condition map `φ: X -> Y`:
///
/// - `p` is order-preserving, `δ_p(c) = ⟨c⟩_p`, and `δ_p(c) = c` on the range;
/// - `p(x) = p(⟨x⟩_p)`, `p(x ∨ c) = p(x) ∨ ⟨c⟩_p`, `p(x ∧ c) = p(x) ∧ ⟨c⟩_p`;
/// - with `f = p ∘ φ`: `δ_f = ⟨φ⟩_p`, `f = p ∘ δ_f`, and `φ = δ_f` when
///   `p` is a Sugeno integral;
/// - `⟨p(x)⟩_f = p(⟨x⟩_φ)` for every `x ∈ Y^n`, and `f = ⟨f⟩_f`.
pub fn polynomial_identities(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    let y = space.codomain.clone();
    let n = space.arity;
    let polys = oracle::enumerate_polynomials(n, y.clone(), budget)?;
    let maps = oracle::enumerate_bracket_maps(space.domain.clone(), y.clone(), budget)?;
    let mut result = CheckResult::new("polynomial_identities", space.to_string(), true);
    for p in &polys {
        let t = p.to_table()?;
        result.visited += 1;
        result.applicable += 1;
        if let Some(detail) = single_polynomial_identities(p, &t) {
            result.fail(t.values(), detail);
        }
        for phi in &maps {
            result.visited += 1;
            result.applicable += 1;
            if let Some(detail) = composed_identities(p, &t, phi)? {
                result.fail(t.values(), format!("phi={:?}: {detail}", phi.table()));
            }
        }
    }
    Ok(result)
}

fn single_polynomial_identities(p: &PolynomialForm, t: &FunctionTable) -> Option<String> {
    let y = &**p.lattice();
    let n = p.arity();
    let p0 = t.get(&vec![y.bottom(); n]);
    let p1 = t.get(&vec![y.top(); n]);
    if !t.is_order_preserving() {
        return Some("not order-preserving".into());
    }
    let delta = t.diagonal();
    if let Some(c) = y.elements().find(|&c| delta.get(c) != y.med(p0, c, p1)) {
        return Some(format!("δ_p({c}) != ⟨{c}⟩_p"));
    }
    if let Some(c) = t.range().into_iter().find(|&c| delta.get(c) != c) {
        return Some(format!("δ_p({c}) != {c} on the range"));
    }
    for (i, x) in t.space().iter().enumerate() {
        let px = t.at(i);
        if t.get(&y.bracket(&x, p0, p1)) != px {
            return Some(format!("p({x:?}) != p(⟨x⟩_p)"));
        }
        for c in y.elements() {
            let cb = y.med(p0, c, p1);
            let up: Vec<Elem> = x.iter().map(|&v| y.join(v, c)).collect();
            let down: Vec<Elem> = x.iter().map(|&v| y.meet(v, c)).collect();
            if t.get(&up) != y.join(px, cb) || t.get(&down) != y.meet(px, cb) {
                return Some(format!("homogeneity at x={x:?}, c={c}"));
            }
        }
    }
    None
}

fn composed_identities(p: &PolynomialForm, t: &FunctionTable, phi: &UnaryMap) -> Result<Option<String>> {
    let y = &**p.lattice();
    let n = p.arity();
    let x_lat = phi.domain();
    let f = t.precompose(phi)?;
    let delta = f.diagonal();
    let p0 = t.get(&vec![y.bottom(); n]);
    let p1 = t.get(&vec![y.top(); n]);
    if let Some(c) = x_lat.elements().find(|&c| delta.get(c) != y.med(p0, phi.get(c), p1)) {
        return Ok(Some(format!("δ_f({c}) != ⟨φ({c})⟩_p")));
    }
    if t.precompose(&delta)? != f {
        return Ok(Some("f != p ∘ δ_f".into()));
    }
    if is_sugeno(t)? && delta != *phi {
        return Ok(Some("p is Sugeno but φ != δ_f".into()));
    }
    let f0 = f.get(&vec![x_lat.bottom(); n]);
    let f1 = f.get(&vec![x_lat.top(); n]);
    let (lo, hi) = (phi.get(x_lat.bottom()), phi.get(x_lat.top()));
    for (i, x) in t.space().iter().enumerate() {
        if y.med(f0, t.at(i), f1) != t.get(&y.bracket(&x, lo, hi)) {
            return Ok(Some(format!("⟨p({x:?})⟩_f != p(⟨x⟩_φ)")));
        }
    }
    if f.values().iter().any(|&v| y.med(f0, v, f1) != v) {
        return Ok(Some("f != ⟨f⟩_f".into()));
    }
    Ok(None)
}

/// Goodstein uniqueness: the canonical `p_f` of each quasi-polynomial
/// matches the CNF-based extension and the enumerated forms contain it once.
pub fn hat_polynomial_uniqueness(space: &Space, budget: &EnumerationBudget) -> Result<CheckResult> {
    let forms = oracle::enumerate_polynomials(space.arity, space.codomain.clone(), budget)?;
    run_over("hat_polynomial_uniqueness", space, budget, |f| {
        if !is_quasi_polynomial(f)?.holds(Property::QuasiPolynomial) {
            return Ok(Outcome::Skip);
        }
        let pf = hat_polynomial(f);
        let matches = forms.iter().filter(|q| q.alpha() == pf.alpha()).count();
        let cnf = crate::polyfn::goodstein_extend(&hat(f, HatMode::Cnf))?;
        let same = pf.to_table()? == cnf.to_table_cnf()?;
        Ok(agree(matches == 1 && same, || format!("matches={matches} cnf_agrees={same}")))
    })
}

fn require_endo(space: &Space) -> Result<()> {
    if space.is_endo() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{space} is not an endomorphism space")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Core,
    Chains,
    Transformed,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Chains => "chains",
            Suite::Transformed => "transformed",
            Suite::All => "all",
        }
    }
}

/// Size bounds for the suites. Spaces are `chain(a)^n -> chain(b)` with
/// `2 ≤ a, b ≤ max_elems` and `1 ≤ n ≤ max_arity`, kept only when every
/// function fits in the budget's candidate cap.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub max_elems: usize,
    pub max_arity: usize,
    /// Seeded samples of `boolean(2)^2 -> boolean(2)` in the core suite.
    pub samples: u64,
    pub budget: EnumerationBudget,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            max_elems: 3,
            max_arity: 3,
            samples: 100_000,
            budget: EnumerationBudget::from_env(),
        }
    }
}

impl SuiteConfig {
    pub fn spaces(&self) -> Vec<Space> {
        let mut out = Vec::new();
        for n in 1..=self.max_arity {
            for a in 2..=self.max_elems {
                for b in 2..=self.max_elems {
                    let s = Space::chains(n, a, b);
                    if s.function_count() <= self.budget.max_candidates as u128 {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    fn endo_spaces(&self) -> Vec<Space> {
        self.spaces().into_iter().filter(Space::is_endo).collect()
    }
}

/// Runs every check of a suite, calling `progress` after each one with its
/// wall time.
pub fn run_suite(
    suite: Suite,
    config: &SuiteConfig,
    mut progress: impl FnMut(&CheckResult, Duration),
) -> Result<Vec<CheckResult>> {
    type Check = fn(&Space, &EnumerationBudget) -> Result<CheckResult>;
    let budget = &config.budget;
    let mut planned: Vec<(Check, Space, EnumerationBudget)> = Vec::new();
    let core = matches!(suite, Suite::Core | Suite::All);
    let chains = matches!(suite, Suite::Chains | Suite::All);
    let transformed = matches!(suite, Suite::Transformed | Suite::All);
    if core {
        for s in config.endo_spaces() {
            planned.push((polynomial_characterization, s, *budget));
        }
        if config.samples > 0 {
            let d = LatticeSpec::boolean(2);
            let sampled = budget.with_max_candidates(config.samples.min(budget.max_candidates));
            planned.push((polynomial_characterization, Space::new(2, &d, &d)?, sampled));
        }
        let per_space: [Check; 6] = [
            quasi_polynomial_membership,
            factorization_characterization,
            sugeno_factorization,
            quasi_homogeneity_characterization,
            hat_agreement,
            hat_polynomial_uniqueness,
        ];
        for check in per_space {
            for s in config.spaces() {
                planned.push((check, s, *budget));
            }
        }
        for s in config.spaces() {
            planned.push((polynomial_identities, s, *budget));
        }
    }
    if chains {
        for s in config.endo_spaces() {
            planned.push((chain_polynomial_characterization, s, *budget));
        }
        for s in config.spaces() {
            planned.push((quasi_comonotone_characterization, s, *budget));
        }
    }
    if transformed {
        for s in config.spaces() {
            planned.push((transformed_membership, s, *budget));
        }
    }
    let mut out = Vec::with_capacity(planned.len());
    for (check, space, b) in planned {
        let start = Instant::now();
        let r = check(&space, &b)?;
        progress(&r, start.elapsed());
        out.push(r);
    }
    Ok(out)
}
