//! JSON file formats for functions, polynomial forms and factorizations.
//!
//! Values in files are element indices. For explicit lattices they refer to
//! the file's row order and are translated into the canonical order on
//! load; files written by this crate always carry the canonical lattice
//! description, so reading them back is the identity.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{make_lattice, Lattice, LatticeSpec};
use crate::polyfn::PolynomialForm;
use crate::quasipoly::{Factorization, FactorizationKind};
use crate::table::FunctionTable;
use crate::unary::UnaryMap;
use crate::Elem;

/// Parses JSON, reporting syntax and schema errors with their position.
pub fn parse<T: DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        what: what.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Builds the lattice a spec describes, together with the map from the
/// spec's own element order to canonical indices.
pub fn load_lattice(spec: &LatticeSpec) -> Result<(Arc<Lattice>, Vec<Elem>)> {
    let lattice = make_lattice(spec)?;
    let order = source_order(spec, &lattice)?;
    Ok((Arc::new(lattice), order))
}

fn source_order(spec: &LatticeSpec, lattice: &Lattice) -> Result<Vec<Elem>> {
    match spec {
        LatticeSpec::Chain { .. } | LatticeSpec::Boolean { .. } => Ok(lattice.elements().collect()),
        LatticeSpec::Explicit { .. } => {
            let mut order: Vec<Elem> = lattice.elements().collect();
            if let Some(relabeling) = lattice.relabeling() {
                for (canonical, &row) in relabeling.iter().enumerate() {
                    order[row] = canonical;
                }
            }
            Ok(order)
        }
        LatticeSpec::Product { factors } => {
            let parts = factors
                .iter()
                .map(|f| {
                    let l = make_lattice(f)?;
                    Ok((l.size(), source_order(f, &l)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(lattice
                .elements()
                .map(|mut e| {
                    let mut canonical = 0;
                    let mut scale = 1;
                    for (size, order) in parts.iter().rev() {
                        canonical += order[e % size] * scale;
                        e /= size;
                        scale *= size;
                    }
                    canonical
                })
                .collect())
        }
    }
}

fn translate(values: &[Elem], order: &[Elem], field: &str) -> Result<Vec<Elem>> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            order.get(v).copied().ok_or_else(|| {
                Error::InvalidElement {
                    elem: v,
                    size: order.len(),
                }
                .at(format!("{field}[{i}]"))
            })
        })
        .collect()
}

/// `{"arity": n, "domain": spec, "codomain": spec, "values": [...]}` with
/// values in tuple order, last coordinate fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub arity: usize,
    pub domain: LatticeSpec,
    pub codomain: LatticeSpec,
    pub values: Vec<Elem>,
}

impl FunctionFile {
    pub fn from_table(f: &FunctionTable) -> Self {
        Self {
            arity: f.arity(),
            domain: f.domain().spec().clone(),
            codomain: f.codomain().spec().clone(),
            values: f.values().to_vec(),
        }
    }

    pub fn to_table(&self) -> Result<FunctionTable> {
        let (x, x_order) = load_lattice(&self.domain).map_err(|e| e.at("domain"))?;
        let (y, y_order) = load_lattice(&self.codomain).map_err(|e| e.at("codomain"))?;
        let n = self.arity;
        if n == 0 {
            return Err(Error::ZeroArity.at("arity"));
        }
        let space = crate::tuple::TupleSpace::new(n, x.size()).map_err(|e| e.at("arity"))?;
        if self.values.len() != space.len() {
            return Err(Error::WrongLength {
                expected: space.len(),
                found: self.values.len(),
            }
            .at("values"));
        }
        let file_values = translate(&self.values, &y_order, "values")?;
        // rows of the file are tuples in the file's element order
        let mut values = vec![0; space.len()];
        let mut canonical = vec![0; n];
        for (i, x_file) in space.iter().enumerate() {
            for (slot, &c) in canonical.iter_mut().zip(&x_file) {
                *slot = x_order[c];
            }
            values[space.index_of(&canonical)] = file_values[i];
        }
        FunctionTable::new(n, x, y, values)
    }
}

/// `{"arity": n, "lattice": spec, "alpha": [...], "beta": [...]}` with
/// coefficients indexed by subset bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialFormFile {
    pub arity: usize,
    pub lattice: LatticeSpec,
    pub alpha: Vec<Elem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<Elem>>,
}

impl PolynomialFormFile {
    pub fn from_form(p: &PolynomialForm) -> Self {
        Self {
            arity: p.arity(),
            lattice: p.lattice().spec().clone(),
            alpha: p.alpha().to_vec(),
            beta: p.beta().map(<[Elem]>::to_vec),
        }
    }

    pub fn to_form(&self) -> Result<PolynomialForm> {
        let (l, order) = load_lattice(&self.lattice).map_err(|e| e.at("lattice"))?;
        let alpha = translate(&self.alpha, &order, "alpha")?;
        let p = PolynomialForm::new(self.arity, l, alpha).map_err(|e| e.at("alpha"))?;
        match &self.beta {
            Some(beta) => {
                let beta = translate(beta, &order, "beta")?;
                p.with_beta(beta).map_err(|e| e.at("beta"))
            }
            None => Ok(p),
        }
    }
}

/// A unary map's table. The lattices default to the polynomial's lattice
/// when absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnaryMapFile {
    pub table: Vec<Elem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<LatticeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<LatticeSpec>,
}

impl UnaryMapFile {
    pub fn from_map(phi: &UnaryMap) -> Self {
        Self {
            table: phi.table().to_vec(),
            domain: Some(phi.domain().spec().clone()),
            codomain: Some(phi.codomain().spec().clone()),
        }
    }

    fn to_map(&self, fallback: &LatticeSpec) -> Result<UnaryMap> {
        let (x, x_order) = load_lattice(self.domain.as_ref().unwrap_or(fallback)).map_err(|e| e.at("phi.domain"))?;
        let (y, y_order) =
            load_lattice(self.codomain.as_ref().unwrap_or(fallback)).map_err(|e| e.at("phi.codomain"))?;
        if self.table.len() != x.size() {
            return Err(Error::WrongLength {
                expected: x.size(),
                found: self.table.len(),
            }
            .at("phi.table"));
        }
        let file_values = translate(&self.table, &y_order, "phi.table")?;
        let mut table = vec![0; x.size()];
        for (row, &v) in file_values.iter().enumerate() {
            table[x_order[row]] = v;
        }
        UnaryMap::new(x, y, table)
    }
}

/// `{"kind": "generic|sugeno|transformed", "p": form, "phi": {"table": [...]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationFile {
    pub kind: FactorizationKind,
    pub p: PolynomialFormFile,
    pub phi: UnaryMapFile,
}

impl FactorizationFile {
    pub fn from_factorization(f: &Factorization) -> Self {
        Self {
            kind: f.kind,
            p: PolynomialFormFile::from_form(&f.p),
            phi: UnaryMapFile::from_map(&f.phi),
        }
    }

    /// Checks the kind's side conditions; `verified` is left unset.
    pub fn to_factorization(&self) -> Result<Factorization> {
        let p = self.p.to_form().map_err(|e| e.at("p"))?;
        let phi = self.phi.to_map(&self.p.lattice)?;
        Factorization::new(self.kind, p, phi)
    }
}
