use crate::comonotone::{self, Op, MAX_COMONOTONE_ARITY};
use crate::error::Result;
use crate::table::FunctionTable;
use crate::witness::{Property, Report, Verdict, Witness};
use crate::Elem;

use super::form::canonical_forms;

/// Whether `f` coincides with the DNF built from its values on binary
/// tuples, with order-preserving coefficients.
pub fn is_polynomial(f: &FunctionTable) -> Result<Verdict> {
    let form = canonical_forms(f)?;
    let mut cursor = f.space().cursor();
    loop {
        if form.eval_dnf(cursor.tuple()) != f.at(cursor.index()) {
            return Ok(Verdict::Fails(Witness::Point {
                x: cursor.tuple().to_vec(),
            }));
        }
        if !cursor.advance() {
            break;
        }
    }
    if let Some((lower, upper)) = super::form::monotonicity_violation(f.codomain(), f.arity(), form.alpha()) {
        // A non-monotone α always produces a pointwise mismatch above.
        return Ok(Verdict::Fails(Witness::Subsets { lower, upper }));
    }
    Ok(Verdict::Holds)
}

/// `f(x) = med(f(x⁰_k), x_k, f(x¹_k))` for every `x` and `k`.
pub fn is_median_decomposable(f: &FunctionTable) -> Result<Verdict> {
    f.require_endo()?;
    let l = &**f.codomain();
    Ok(Verdict::from_witness(median_scan(f, |c| c, l)))
}

/// First `(x, k)` where `f(x) != med(f(x⁰_k), middle(x_k), f(x¹_k))`.
pub(crate) fn median_scan(
    f: &FunctionTable,
    middle: impl Fn(Elem) -> Elem,
    y: &crate::lattice::Lattice,
) -> Option<Witness> {
    let space = f.space();
    let x_lat = f.domain();
    let mut cursor = space.cursor();
    loop {
        let idx = cursor.index();
        let x = cursor.tuple();
        for (k, &xk) in x.iter().enumerate() {
            let stride = space.stride(k);
            let base = idx - xk * stride;
            let lo = f.at(base + x_lat.bottom() * stride);
            let hi = f.at(base + x_lat.top() * stride);
            if y.med(lo, middle(xk), hi) != f.at(idx) {
                return Some(Witness::Coordinate { x: x.to_vec(), k });
            }
        }
        if !cursor.advance() {
            return None;
        }
    }
}

/// Polynomial with `f(0,…,0) = 0` and `f(1,…,1) = 1`.
pub fn is_sugeno(f: &FunctionTable) -> Result<bool> {
    let n = f.arity();
    let l = f.codomain();
    Ok(is_polynomial(f)?.holds()
        && f.get(&vec![l.bottom(); n]) == l.bottom()
        && f.get(&vec![l.top(); n]) == l.top())
}

/// Order-preservation, idempotency and homogeneity over the convex hull of
/// the range, and comonotonic minitivity/maxitivity (chains of arity at
/// most [`MAX_COMONOTONE_ARITY`] only).
pub fn polynomial_property_report(f: &FunctionTable) -> Result<Report> {
    f.require_endo()?;
    let l = &**f.codomain();
    let hull = l.convex_hull(&f.range());
    let hull: Vec<Elem> = (0..hull.len()).filter(|&c| hull[c]).collect();
    let delta = f.diagonal();

    let mut report = Report::new();
    report.insert(
        Property::OrderPreserving,
        Verdict::from_witness(f.order_preserving_witness()),
    );
    report.insert(
        Property::HullIdempotent,
        Verdict::from_witness(
            hull.iter()
                .find(|&&c| delta.get(c) != c)
                .map(|&c| Witness::Element { c }),
        ),
    );
    report.insert(
        Property::MeetHomogeneous,
        Verdict::from_witness(homogeneity_scan(f, &hull, Op::Meet, |c| c)),
    );
    report.insert(
        Property::JoinHomogeneous,
        Verdict::from_witness(homogeneity_scan(f, &hull, Op::Join, |c| c)),
    );
    if l.is_chain() && f.arity() <= MAX_COMONOTONE_ARITY {
        let min = comonotone::scan(f, l, |x| x.to_vec(), Op::Meet)?;
        let max = comonotone::scan(f, l, |x| x.to_vec(), Op::Join)?;
        report.insert(Property::ComonotonicMinitive, Verdict::from_witness(min));
        report.insert(Property::ComonotonicMaxitive, Verdict::from_witness(max));
    } else {
        report.insert(Property::ComonotonicMinitive, Verdict::NotApplicable);
        report.insert(Property::ComonotonicMaxitive, Verdict::NotApplicable);
    }
    Ok(report)
}

/// First `(x, c)` with `f(x ⋆ c) != f(x) ⋆ scale(c)`, `c` drawn from
/// `constants` (domain elements).
pub(crate) fn homogeneity_scan(
    f: &FunctionTable,
    constants: &[Elem],
    op: Op,
    scale: impl Fn(Elem) -> Elem,
) -> Option<Witness> {
    let space = f.space();
    let (x_lat, y_lat) = (&**f.domain(), &**f.codomain());
    let mut cursor = space.cursor();
    loop {
        let idx = cursor.index();
        let x = cursor.tuple();
        for &c in constants {
            let shifted = x.iter().fold(0, |acc, &xi| {
                let v = match op {
                    Op::Meet => x_lat.meet(xi, c),
                    Op::Join => x_lat.join(xi, c),
                };
                acc * space.radix() + v
            });
            let expected = match op {
                Op::Meet => y_lat.meet(f.at(idx), scale(c)),
                Op::Join => y_lat.join(f.at(idx), scale(c)),
            };
            if f.at(shifted) != expected {
                return Some(Witness::Constant { x: x.to_vec(), c });
            }
        }
        if !cursor.advance() {
            return None;
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::Lattice;

    fn c(n: usize) -> Arc<Lattice> {
        Arc::new(Lattice::chain(n).unwrap())
    }

    fn xor() -> FunctionTable {
        FunctionTable::from_fn(2, c(2), c(2), |x| x[0] ^ x[1]).unwrap()
    }

    #[test]
    fn ternary_median_is_polynomial() {
        let l = c(3);
        let f = FunctionTable::from_fn(3, l.clone(), l.clone(), |x| l.med(x[0], x[1], x[2])).unwrap();
        assert!(is_polynomial(&f).unwrap().holds());
        assert!(is_median_decomposable(&f).unwrap().holds());
    }

    #[test]
    fn xor_is_not_polynomial() {
        let v = is_polynomial(&xor()).unwrap();
        // DNF of α = (0,1,1,0) gives 1 at (1,1)
        assert_eq!(v, Verdict::Fails(Witness::Point { x: vec![1, 1] }));
    }

    #[test]
    fn xor_median_decomposition_fails_first_at_0_1() {
        // x=(0,0): both k fine. x=(0,1), k=0: med(f(0,1), 0, f(1,1)) = med(1,0,0) = 0 ≠ 1
        assert_eq!(
            is_median_decomposable(&xor()).unwrap(),
            Verdict::Fails(Witness::Coordinate { x: vec![0, 1], k: 0 })
        );
        // the example pair (1,1), k=0 also fails: med(f(0,1), 1, f(1,1)) = 1 ≠ 0
        let f = xor();
        assert_ne!(f.codomain().med(f.get(&[0, 1]), 1, f.get(&[1, 1])), f.get(&[1, 1]));
    }

    #[test]
    fn non_convex_unary_in_first_argument() {
        let l = c(3);
        let delta = [0, 0, 2];
        let f = FunctionTable::from_fn(2, l.clone(), l, |x| delta[x[0]]).unwrap();
        assert!(!is_polynomial(&f).unwrap().holds());
        assert!(!is_median_decomposable(&f).unwrap().holds());
    }

    #[test]
    fn projections_and_constants_decompose() {
        let l = c(3);
        for k in 0..2 {
            let p = FunctionTable::projection(2, l.clone(), k).unwrap();
            assert!(is_median_decomposable(&p).unwrap().holds());
            assert!(is_sugeno(&p).unwrap());
        }
        for v in 0..3 {
            let k = FunctionTable::constant(2, l.clone(), l.clone(), v).unwrap();
            assert!(is_median_decomposable(&k).unwrap().holds());
        }
        let mid = FunctionTable::constant(2, l.clone(), l, 1).unwrap();
        assert!(!is_sugeno(&mid).unwrap());
    }

    #[test]
    fn sugeno_median_with_constant() {
        let l = c(3);
        let f = FunctionTable::from_fn(2, l.clone(), l.clone(), |x| l.med(x[0], 1, x[1])).unwrap();
        assert!(is_sugeno(&f).unwrap());
        let r = polynomial_property_report(&f).unwrap();
        for (p, v) in r.iter() {
            assert!(v.holds(), "{p:?} {v:?}");
        }
    }

    #[test]
    fn xor_report() {
        let r = polynomial_property_report(&xor()).unwrap();
        assert!(!r.holds(Property::OrderPreserving));
    }

    #[test]
    fn join_on_diamond() {
        let d = Arc::new(Lattice::boolean(2).unwrap());
        let f = FunctionTable::from_fn(2, d.clone(), d.clone(), |x| d.join(x[0], x[1])).unwrap();
        let r = polynomial_property_report(&f).unwrap();
        assert_eq!(r.get(Property::ComonotonicMinitive), Some(&Verdict::NotApplicable));
        assert!(r.holds(Property::MeetHomogeneous) && r.holds(Property::JoinHomogeneous));
        assert!(r.holds(Property::OrderPreserving));
    }

    #[test]
    fn requires_equal_lattices() {
        let f = FunctionTable::constant(1, c(2), c(3), 0).unwrap();
        assert!(is_polynomial(&f).is_err());
        assert!(is_median_decomposable(&f).is_err());
        assert!(polynomial_property_report(&f).is_err());
    }
}
