use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};

use qlat::files::{self, FactorizationFile, FunctionFile};
use qlat::oracle::{enumerate_polynomials, MemberSet};
use qlat::polyfn::{is_median_decomposable, is_polynomial, is_sugeno, polynomial_property_report};
use qlat::quasipoly::{
    canonical_factorization, enumerate_factorizations, hat, is_quasi_idempotent, is_quasi_polynomial,
    is_transformed_polynomial_with, quasi_property_report, quasi_sugeno_factorization, HatMode,
};
use qlat::verify::{run_suite, Suite, SuiteConfig};
use qlat::{EnumerationBudget, Error, Factorization, FunctionTable, Lattice, LatticeSpec, Property, Verdict};

use crate::report::InputDigest;
use crate::{Class, Mode, SuiteArg};

/// What a command hands back to `main` for the run report.
pub struct Output {
    pub inputs: Vec<InputDigest>,
    pub result: Value,
    pub ok: bool,
}

fn load_function(path: &Path) -> Result<(FunctionTable, InputDigest)> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let digest = InputDigest::new("function", &path.display().to_string(), &bytes);
    let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let file: FunctionFile = files::parse("function file", &text)?;
    let table = file.to_table().with_context(|| format!("invalid function file {}", path.display()))?;
    Ok((table, digest))
}

/// Inline JSON, `chain:K`, `boolean:K`, or a path to a lattice file.
fn parse_lattice_arg(name: &str, arg: &str) -> Result<(Arc<Lattice>, InputDigest)> {
    let shorthand = |prefix: &str| {
        arg.strip_prefix(prefix)
            .map(|k| k.trim().parse::<usize>().with_context(|| format!("bad {name} size in {arg:?}")))
    };
    let (spec, digest) = if let Some(k) = shorthand("chain:") {
        (LatticeSpec::chain(k?), InputDigest::new(name, "inline", arg.as_bytes()))
    } else if let Some(k) = shorthand("boolean:") {
        (LatticeSpec::boolean(k?), InputDigest::new(name, "inline", arg.as_bytes()))
    } else if arg.trim_start().starts_with('{') {
        (files::parse(name, arg)?, InputDigest::new(name, "inline", arg.as_bytes()))
    } else {
        let text = std::fs::read_to_string(arg).with_context(|| format!("cannot read {name} file {arg}"))?;
        (files::parse(name, &text)?, InputDigest::new(name, arg, text.as_bytes()))
    };
    let (lattice, _) = files::load_lattice(&spec).with_context(|| format!("invalid {name} lattice"))?;
    Ok((lattice, digest))
}

fn factorization_json(f: &Factorization) -> Value {
    serde_json::to_value(FactorizationFile::from_factorization(f)).expect("factorization serializes")
}

fn function_json(f: &FunctionTable) -> Value {
    serde_json::to_value(FunctionFile::from_table(f)).expect("function serializes")
}

fn relabeling(l: &Lattice) -> Value {
    match l.relabeling() {
        Some(r) => json!(r),
        None => Value::Null,
    }
}

pub fn classify(path: &Path) -> Result<Output> {
    let (f, digest) = load_function(path)?;
    let budget = EnumerationBudget::from_env();
    let mut predicates = Map::new();
    let mut notes = Vec::new();

    if f.is_endo() {
        let mut report = polynomial_property_report(&f)?;
        report.insert(Property::Polynomial, is_polynomial(&f)?);
        report.insert(Property::MedianDecomposable, is_median_decomposable(&f)?);
        predicates.extend(report.to_json());
        predicates.insert("sugeno".into(), Value::Bool(is_sugeno(&f)?));
    } else {
        for p in [Property::Polynomial, Property::MedianDecomposable, Property::Sugeno] {
            predicates.insert(p.name().into(), Value::Null);
        }
        notes.push("domain and codomain differ: polynomial predicates do not apply".to_string());
    }

    let quasi = is_quasi_polynomial(&f)?;
    predicates.extend(quasi_property_report(&f)?.to_json());
    predicates.extend(quasi.to_json());
    predicates.insert(Property::QuasiIdempotent.name().into(), Value::Bool(is_quasi_idempotent(&f)));

    let mut transformed_factorization = Value::Null;
    match is_transformed_polynomial_with(&f, &budget) {
        Ok(r) => {
            predicates.extend(r.to_json());
            if let Some(fact) = &r.factorization {
                transformed_factorization = factorization_json(fact);
            }
        }
        Err(e @ Error::BudgetExceeded { .. }) => {
            predicates.insert(Property::TransformedPolynomial.name().into(), Value::Null);
            notes.push(format!("transformed_polynomial undecided: {e}"));
        }
        Err(e) => return Err(e.into()),
    }

    let result = json!({
        "function": {
            "arity": f.arity(),
            "domain": f.domain().spec(),
            "codomain": f.codomain().spec(),
        },
        "relabeling": {
            "domain": relabeling(f.domain()),
            "codomain": relabeling(f.codomain()),
        },
        "predicates": predicates,
        "hat_dnf": hat(&f, HatMode::Dnf).values(),
        "hat_cnf": hat(&f, HatMode::Cnf).values(),
        "diagonal": f.diagonal().table(),
        "canonical_factorization": quasi.factorization.as_ref().map_or(Value::Null, factorization_json),
        "transformed_factorization": transformed_factorization,
        "notes": notes,
    });
    Ok(Output {
        inputs: vec![digest],
        result,
        ok: true,
    })
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Canonical => "canonical",
        Mode::Sugeno => "sugeno",
        Mode::Transformed => "transformed",
        Mode::All => "all",
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

pub fn factorize(path: &Path, mode: Mode, output: Option<&Path>) -> Result<Output> {
    let (f, digest) = load_function(path)?;
    let budget = EnumerationBudget::from_env();
    let mut result = Map::new();
    result.insert("mode".into(), json!(mode_name(mode)));

    let quasi = is_quasi_polynomial(&f)?;
    let quasi_witness = quasi.get(Property::QuasiPolynomial).and_then(Verdict::witness).cloned();

    let found: Option<Vec<Factorization>> = match mode {
        Mode::Canonical => quasi_witness.is_none().then(|| canonical_factorization(&f)).transpose()?.map(|x| vec![x]),
        Mode::Sugeno => quasi_witness.is_none().then(|| quasi_sugeno_factorization(&f)).transpose()?.map(|x| vec![x]),
        Mode::Transformed => {
            let r = is_transformed_polynomial_with(&f, &budget)?;
            result.insert("decided_by_oracle".into(), json!(r.decided_by_oracle));
            match r.factorization {
                Some(fact) => Some(vec![fact]),
                None => {
                    let w = r.get(Property::TransformedPolynomial).and_then(Verdict::witness);
                    result.insert("transformed_polynomial_witness".into(), json!(w));
                    None
                }
            }
        }
        Mode::All => quasi_witness
            .is_none()
            .then(|| enumerate_factorizations(&f, &budget))
            .transpose()?,
    };

    let Some(facts) = found else {
        result.insert("exists".into(), json!(false));
        result.insert("quasi_polynomial".into(), json!(quasi_witness.is_none()));
        if let Some(w) = &quasi_witness {
            result.insert("witness".into(), json!(w));
        }
        return Ok(Output {
            inputs: vec![digest],
            result: Value::Object(result),
            ok: false,
        });
    };

    result.insert("exists".into(), json!(true));
    let files: Vec<FactorizationFile> = facts.iter().map(FactorizationFile::from_factorization).collect();
    if mode == Mode::All {
        result.insert("count".into(), json!(facts.len()));
        result.insert("factorizations".into(), json!(files));
    } else {
        result.insert("factorization".into(), json!(files[0]));
    }
    if let Some(out) = output {
        if mode == Mode::All {
            write_json(out, &files)?;
        } else {
            write_json(out, &files[0])?;
        }
        result.insert("written".into(), json!(out.display().to_string()));
    }
    Ok(Output {
        inputs: vec![digest],
        result: Value::Object(result),
        ok: true,
    })
}

pub fn verify(suite: SuiteArg, max_elems: usize, max_arity: usize, seed: u64, samples: u64) -> Result<Output> {
    if !(2..=6).contains(&max_elems) {
        bail!("--max-elems must be between 2 and 6, got {max_elems}");
    }
    if !(1..=4).contains(&max_arity) {
        bail!("--max-arity must be between 1 and 4, got {max_arity}");
    }
    let suite = match suite {
        SuiteArg::Core => Suite::Core,
        SuiteArg::Chains => Suite::Chains,
        SuiteArg::Transformed => Suite::Transformed,
        SuiteArg::All => Suite::All,
    };
    let config = SuiteConfig {
        max_elems,
        max_arity,
        samples,
        budget: EnumerationBudget::from_env().with_seed(seed),
    };
    let mut results = run_suite(suite, &config, |r, t| {
        eprintln!(
            "{} {} on {} [{:.2}s]",
            if r.passed() { "ok  " } else { "FAIL" },
            r.check,
            r.space,
            t.as_secs_f64()
        );
    })?;
    results.sort_by(|a, b| (a.check, &a.space).cmp(&(b.check, &b.space)));
    let failed = results.iter().filter(|r| !r.passed()).count();
    let result = json!({
        "suite": suite.name(),
        "max_elems": max_elems,
        "max_arity": max_arity,
        "seed": seed,
        "samples": samples,
        "checks": results.len(),
        "failed": failed,
        "results": results,
    });
    Ok(Output {
        inputs: Vec::new(),
        result,
        ok: failed == 0,
    })
}

fn class_name(class: Class) -> &'static str {
    match class {
        Class::Polynomial => "polynomial",
        Class::Sugeno => "sugeno",
        Class::Quasi => "quasi",
        Class::Transformed => "transformed",
    }
}

pub fn enumerate(arity: usize, domain: &str, codomain: &str, class: Class, count_only: bool) -> Result<Output> {
    let (x, dx) = parse_lattice_arg("domain", domain)?;
    let (y, dy) = parse_lattice_arg("codomain", codomain)?;
    let budget = EnumerationBudget::from_env();
    let members: Vec<FunctionTable> = match class {
        Class::Polynomial | Class::Sugeno => {
            if *x != *y {
                bail!("class {} needs equal domain and codomain", class_name(class));
            }
            let full = (1usize << arity) - 1;
            enumerate_polynomials(arity, y.clone(), &budget)?
                .into_iter()
                .filter(|p| class == Class::Polynomial || (p.alpha()[0] == y.bottom() && p.alpha()[full] == y.top()))
                .map(|p| p.to_table())
                .collect::<qlat::Result<_>>()?
        }
        Class::Quasi => MemberSet::quasi(arity, x.clone(), y.clone(), &budget)?.tables().collect(),
        Class::Transformed => MemberSet::transformed(arity, x.clone(), y.clone(), &budget)?.tables().collect(),
    };
    let mut result = json!({
        "class": class_name(class),
        "arity": arity,
        "domain": x.spec(),
        "codomain": y.spec(),
        "count": members.len(),
    });
    if !count_only {
        result["members"] = members.iter().map(function_json).collect();
    }
    Ok(Output {
        inputs: vec![dx, dy],
        result,
        ok: true,
    })
}
