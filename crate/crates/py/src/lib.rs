//! Python bindings: satisfaction, manifests, proofs, isoterms, properties and
//! enumeration counts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use varcross::catalog::Catalog;
use varcross::freeobject::{is_isoterm_in_join, IsotermVerdict, DEFAULT_STATE_CAP};
use varcross::harness::{count_monoids, probe_properties, run_manifest, run_proof, MonoidExpr};
use varcross::parse_identity;
use varcross::satisfaction::{satisfies_with_budget, Verdict, DEFAULT_BUDGET};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn catalog() -> PyResult<Catalog> {
    Catalog::builtin().map_err(value_err)
}

/// Returns `(verdict, detail)` where verdict is "holds", "fails" or
/// "inconclusive". `identity` is a catalog reference or `"u = v"`.
#[pyfunction]
#[pyo3(signature = (monoid, identity, budget = DEFAULT_BUDGET))]
fn satisfies(monoid: &str, identity: &str, budget: u64) -> PyResult<(String, String)> {
    let cat = catalog()?;
    let resolved = MonoidExpr::parse(monoid)
        .and_then(|e| e.resolve(&cat))
        .map_err(value_err)?;
    let identities = if identity.contains('=') {
        vec![parse_identity(identity).map_err(value_err)?]
    } else {
        cat.identities_for(identity).map_err(value_err)?
    };
    let mut inconclusive = None;
    for i in &identities {
        for (name, m) in &resolved.factors {
            match satisfies_with_budget(m, i, budget) {
                Verdict::Holds => {}
                Verdict::Fails(ce) => {
                    return Ok((
                        "fails".into(),
                        format!("{} fails in {name} at {}", i.name(), ce.render(m)),
                    ))
                }
                v @ Verdict::Inconclusive { .. } => {
                    inconclusive.get_or_insert(format!("{} in {name}: {v}", i.name()));
                }
            }
        }
    }
    Ok(match inconclusive {
        Some(detail) => ("inconclusive".into(), detail),
        None => ("holds".into(), String::new()),
    })
}

/// Runs manifest text; returns `(exit_code, records)`.
#[pyfunction]
#[pyo3(signature = (text, jobs = 0))]
fn manifest(text: &str, jobs: usize) -> PyResult<(i32, String)> {
    let report = run_manifest(text, &catalog()?, jobs, None).map_err(value_err)?;
    Ok((report.exit_code(), report.records(false)))
}

/// Verifies proof-script text; returns `(valid, report)`.
#[pyfunction]
#[pyo3(signature = (text, lax = false))]
fn proof(text: &str, lax: bool) -> PyResult<(bool, String)> {
    let run = run_proof(text, lax, Some(&catalog()?)).map_err(value_err)?;
    Ok((run.report.valid, run.to_string()))
}

/// Returns `(True, None)` for an isoterm, `(False, witness)` otherwise and
/// `(None, reason)` when the state cap is reached.
#[pyfunction]
fn isoterm(monoid: &str, word: &str) -> PyResult<(Option<bool>, Option<String>)> {
    let cat = catalog()?;
    let resolved = MonoidExpr::parse(monoid)
        .and_then(|e| e.resolve(&cat))
        .map_err(value_err)?;
    let word = varcross::parse_word(word).map_err(value_err)?;
    let factors: Vec<_> = resolved.factors.into_iter().map(|(_, m)| m).collect();
    Ok(
        match is_isoterm_in_join(&factors, &word, DEFAULT_STATE_CAP) {
            IsotermVerdict::Isoterm => (Some(true), None),
            IsotermVerdict::NotIsoterm { witness } => (Some(false), Some(witness.to_string())),
            IsotermVerdict::Inconclusive(e) => (None, Some(e.to_string())),
        },
    )
}

/// Human-readable structural report on a monoid expression.
#[pyfunction]
fn properties(monoid: &str) -> PyResult<String> {
    let expr = MonoidExpr::parse(monoid).map_err(value_err)?;
    probe_properties(&expr, &catalog()?).map_err(value_err)
}

/// Number of monoids of order `n` up to isomorphism.
#[pyfunction]
fn monoid_count(n: usize) -> PyResult<usize> {
    if n == 0 || n > 6 {
        return Err(PyValueError::new_err("order must be between 1 and 6"));
    }
    Ok(count_monoids(n))
}

/// Runs the catalog self-check; returns `(passed, report)`.
#[pyfunction]
fn selfcheck() -> PyResult<(bool, String)> {
    let report = catalog()?.selfcheck();
    Ok((report.passed(), report.to_string()))
}

#[pymodule]
fn varcross_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(satisfies, m)?)?;
    m.add_function(wrap_pyfunction!(manifest, m)?)?;
    m.add_function(wrap_pyfunction!(proof, m)?)?;
    m.add_function(wrap_pyfunction!(isoterm, m)?)?;
    m.add_function(wrap_pyfunction!(properties, m)?)?;
    m.add_function(wrap_pyfunction!(monoid_count, m)?)?;
    m.add_function(wrap_pyfunction!(selfcheck, m)?)?;
    Ok(())
}
