//! Verdicts, counterexample witnesses and named property reports.
//!
//! Every predicate in the crate reports the first counterexample it meets
//! while scanning tuples in [`TupleCursor`](crate::TupleCursor) order, so
//! repeated runs produce identical witnesses.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::Elem;

/// A counterexample refuting one property. Coordinates (`k`) and
/// permutation entries (`sigma`) are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Point { x: Vec<Elem> },
    Coordinate { x: Vec<Elem>, k: usize },
    Constant { x: Vec<Elem>, c: Elem },
    Pair { x: Vec<Elem>, y: Vec<Elem> },
    Comonotone { x: Vec<Elem>, y: Vec<Elem>, sigma: Vec<usize> },
    Element { c: Elem },
    Elements { a: Elem, b: Elem },
    Subsets { lower: usize, upper: usize },
    /// Exhaustive search over `candidates` factorizations found none.
    Exhausted { candidates: u64 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point { x } => write!(f, "x={x:?}"),
            Witness::Coordinate { x, k } => write!(f, "x={x:?}, k={k}"),
            Witness::Constant { x, c } => write!(f, "x={x:?}, c={c}"),
            Witness::Pair { x, y } => write!(f, "x={x:?}, y={y:?}"),
            Witness::Comonotone { x, y, sigma } => {
                write!(f, "x={x:?}, y={y:?}, sigma={sigma:?}")
            }
            Witness::Element { c } => write!(f, "c={c}"),
            Witness::Elements { a, b } => write!(f, "a={a}, b={b}"),
            Witness::Subsets { lower, upper } => write!(f, "I={lower:#b}, J={upper:#b}"),
            Witness::Exhausted { candidates } => write!(f, "none of {candidates} candidates match"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
    /// The property is only defined for other inputs (e.g. comonotone
    /// checks on a non-chain).
    NotApplicable,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_applicable(&self) -> bool {
        !matches!(self, Verdict::NotApplicable)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }

    pub fn from_witness(w: Option<Witness>) -> Self {
        w.map_or(Verdict::Holds, Verdict::Fails)
    }

    /// `true`, `false` or `null`.
    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Holds => Value::Bool(true),
            Verdict::Fails(_) => Value::Bool(false),
            Verdict::NotApplicable => Value::Null,
        }
    }
}

/// Every named predicate the reports can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    OrderPreserving,
    Polynomial,
    MedianDecomposable,
    Sugeno,
    /// Idempotent on the convex hull of the range.
    HullIdempotent,
    /// Meet-homogeneous for constants in the convex hull of the range.
    MeetHomogeneous,
    JoinHomogeneous,
    ComonotonicMinitive,
    ComonotonicMaxitive,
    QuasiPolynomial,
    QuasiMeetHomogeneous,
    QuasiJoinHomogeneous,
    HorizontallyMeetDecomposable,
    HorizontallyJoinDecomposable,
    QuasiComonotonicMinitive,
    QuasiComonotonicMaxitive,
    DiagonalHomomorphism,
    QuasiIdempotent,
    TransformedPolynomial,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::OrderPreserving => "order_preserving",
            Property::Polynomial => "polynomial",
            Property::MedianDecomposable => "median_decomposable",
            Property::Sugeno => "sugeno",
            Property::HullIdempotent => "hull_idempotent",
            Property::MeetHomogeneous => "meet_homogeneous",
            Property::JoinHomogeneous => "join_homogeneous",
            Property::ComonotonicMinitive => "comonotonic_minitive",
            Property::ComonotonicMaxitive => "comonotonic_maxitive",
            Property::QuasiPolynomial => "quasi_polynomial",
            Property::QuasiMeetHomogeneous => "quasi_meet_homogeneous",
            Property::QuasiJoinHomogeneous => "quasi_join_homogeneous",
            Property::HorizontallyMeetDecomposable => "horizontally_meet_decomposable",
            Property::HorizontallyJoinDecomposable => "horizontally_join_decomposable",
            Property::QuasiComonotonicMinitive => "quasi_comonotonic_minitive",
            Property::QuasiComonotonicMaxitive => "quasi_comonotonic_maxitive",
            Property::DiagonalHomomorphism => "diagonal_homomorphism",
            Property::QuasiIdempotent => "quasi_idempotent",
            Property::TransformedPolynomial => "transformed_polynomial",
        }
    }
}

/// A set of named verdicts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    verdicts: BTreeMap<Property, Verdict>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, property: Property, verdict: Verdict) {
        self.verdicts.insert(property, verdict);
    }

    pub fn get(&self, property: Property) -> Option<&Verdict> {
        self.verdicts.get(&property)
    }

    /// Whether `property` was evaluated and holds.
    pub fn holds(&self, property: Property) -> bool {
        self.get(property).is_some_and(Verdict::holds)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Property, &Verdict)> {
        self.verdicts.iter().map(|(p, v)| (*p, v))
    }

    pub fn extend(&mut self, other: Report) {
        self.verdicts.extend(other.verdicts);
    }

    /// Flat JSON object: `name: bool|null` plus `name_witness` for failures.
    pub fn to_json(&self) -> Map<String, Value> {
        let mut out = Map::new();
        for (property, verdict) in self.iter() {
            out.insert(property.name().to_string(), verdict.to_json());
            if let Some(w) = verdict.witness() {
                out.insert(
                    format!("{}_witness", property.name()),
                    serde_json::to_value(w).expect("witness serializes"),
                );
            }
        }
        out
    }
}
