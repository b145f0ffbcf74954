use crate::comonotone::{self, Op, MAX_COMONOTONE_ARITY};
use crate::error::Result;
use crate::lattice::Surgery;
use crate::polyfn::homogeneity_scan;
use crate::table::FunctionTable;
use crate::witness::{Property, Verdict, Witness};
use crate::Elem;

use super::QuasiReport;

/// Quasi-homogeneity, horizontal decompositions and quasi-comonotonic
/// minitivity/maxitivity, together with the hypotheses (order-preservation,
/// homomorphic diagonal) under which they characterize quasi-polynomials.
///
/// The comonotone flags are not applicable unless the codomain is a chain
/// and the arity is at most [`MAX_COMONOTONE_ARITY`].
pub fn quasi_property_report(f: &FunctionTable) -> Result<QuasiReport> {
    let delta = f.diagonal();
    let x_lat = &**f.domain();
    let y_lat = &**f.codomain();
    let constants: Vec<Elem> = x_lat.elements().collect();

    let mut out = QuasiReport::default();
    let r = &mut out.report;
    r.insert(Property::OrderPreserving, Verdict::from_witness(f.order_preserving_witness()));
    r.insert(Property::DiagonalHomomorphism, Verdict::from_witness(delta.homomorphism_witness()));
    r.insert(
        Property::QuasiMeetHomogeneous,
        Verdict::from_witness(homogeneity_scan(f, &constants, Op::Meet, |c| delta.get(c))),
    );
    r.insert(
        Property::QuasiJoinHomogeneous,
        Verdict::from_witness(homogeneity_scan(f, &constants, Op::Join, |c| delta.get(c))),
    );
    r.insert(
        Property::HorizontallyMeetDecomposable,
        Verdict::from_witness(horizontal_scan(f, Op::Meet)),
    );
    r.insert(
        Property::HorizontallyJoinDecomposable,
        Verdict::from_witness(horizontal_scan(f, Op::Join)),
    );
    if y_lat.is_chain() && f.arity() <= MAX_COMONOTONE_ARITY {
        let key = |x: &[Elem]| delta.apply(x);
        let min = comonotone::scan(f, y_lat, key, Op::Meet)?;
        let max = comonotone::scan(f, y_lat, key, Op::Join)?;
        r.insert(Property::QuasiComonotonicMinitive, Verdict::from_witness(min));
        r.insert(Property::QuasiComonotonicMaxitive, Verdict::from_witness(max));
    } else {
        r.insert(Property::QuasiComonotonicMinitive, Verdict::NotApplicable);
        r.insert(Property::QuasiComonotonicMaxitive, Verdict::NotApplicable);
    }
    Ok(out)
}

/// Meet: `f(x) = f(x ∨ c) ∧ f([x]^c)`. Join: `f(x) = f(x ∧ c) ∨ f([x]_c)`.
fn horizontal_scan(f: &FunctionTable, op: Op) -> Option<Witness> {
    let x_lat = &**f.domain();
    let y_lat = &**f.codomain();
    let space = f.space();
    let mut cursor = space.cursor();
    loop {
        let idx = cursor.index();
        let x = cursor.tuple();
        for c in x_lat.elements() {
            let (shift, clip) = match op {
                Op::Meet => (Surgery::JoinConst(c), Surgery::ClipCeil(c)),
                Op::Join => (Surgery::MeetConst(c), Surgery::ClipFloor(c)),
            };
            let a = f.get(&x_lat.surgery(x, shift).expect("constant surgery"));
            let b = f.get(&x_lat.surgery(x, clip).expect("constant surgery"));
            let rhs = match op {
                Op::Meet => y_lat.meet(a, b),
                Op::Join => y_lat.join(a, b),
            };
            if rhs != f.at(idx) {
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
    use crate::fixtures;
    use crate::lattice::Lattice;
    use crate::polyfn::PolynomialForm;
    use crate::unary::UnaryMap;

    #[test]
    fn xor_fails_quasi_join_homogeneity_at_1_0() {
        let r = quasi_property_report(&fixtures::xor()).unwrap();
        let w = r.get(Property::QuasiJoinHomogeneous).unwrap().witness().unwrap().clone();
        // (0,0): every c fine; (0,1) ∨ 1 = (1,1) ↦ 0 but f(0,1) ∨ δ(1) = 1
        assert_eq!(w, Witness::Constant { x: vec![0, 1], c: 1 });
        let f = fixtures::xor();
        assert_ne!(f.get(&[1, 1]), f.get(&[1, 0]) | f.diagonal().get(1));
    }

    #[test]
    fn sugeno_after_homomorphism_has_every_property() {
        let x = Arc::new(Lattice::chain(4).unwrap());
        let y = Arc::new(Lattice::chain(3).unwrap());
        // order-preserving, endpoint-preserving map onto a chain is a homomorphism
        let delta = UnaryMap::new(x.clone(), y.clone(), vec![0, 1, 1, 2]).unwrap();
        let q = PolynomialForm::new(2, y.clone(), vec![0, 1, 0, 2]).unwrap();
        let f = FunctionTable::from_fn(2, x, y, |v| q.eval_dnf(&delta.apply(v))).unwrap();
        let r = quasi_property_report(&f).unwrap();
        for (p, v) in r.report.iter() {
            assert!(v.holds(), "{p:?} {v:?}");
        }
    }

    #[test]
    fn unary_identity() {
        let l = Arc::new(Lattice::chain(3).unwrap());
        let f = FunctionTable::projection(1, l, 0).unwrap();
        let r = quasi_property_report(&f).unwrap();
        assert!(r.report.iter().all(|(_, v)| v.holds()));
    }

    #[test]
    fn comonotone_not_applicable_off_chains() {
        let d = Arc::new(Lattice::boolean(2).unwrap());
        let f = FunctionTable::projection(2, d, 0).unwrap();
        let r = quasi_property_report(&f).unwrap();
        assert_eq!(r.get(Property::QuasiComonotonicMinitive), Some(&Verdict::NotApplicable));
        assert!(r.holds(Property::QuasiMeetHomogeneous));
    }
}
