//! Python bindings. Results come back as plain dicts and lists, shaped like
//! the `body` of the CLI's JSON reports.

use coniveau::certificates::{
    builtin_scenarios, build_module, build_scenario, canonical_family, detect, dh_table,
    find_witness, pgl_detect, stable_quotient, Scenario, ScenarioParams,
};
use coniveau::motivic::{dh_quadric_check, quadric_etale_ring, rost_etale_ring};
use coniveau::Error;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(coniveau, ConiveauError, PyException, "Input or verification error; `args[0]` is the reason code.");

fn err(e: Error) -> PyErr {
    ConiveauError::new_err((e.reason(), e.to_string()))
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).expect("bodies serialize");
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn params(p: Option<u32>, n: Option<usize>, m: Option<usize>, cap: Option<u32>) -> ScenarioParams {
    ScenarioParams { p, n, m, cap }
}

/// Built-in scenario by exact name, or a family built from parameters.
fn ring(name: &str, params: ScenarioParams) -> Result<Scenario, Error> {
    if name.contains('(') {
        let reg = builtin_scenarios()?;
        return reg.get(name).cloned().ok_or_else(|| Error::UnknownScenario(name.to_string()));
    }
    build_scenario(name, params)
}

/// Names of the built-in scenarios, sorted.
#[pyfunction]
fn scenarios() -> PyResult<Vec<String>> {
    Ok(builtin_scenarios().map_err(err)?.names())
}

/// Certificate for one class; the index sequence is searched when omitted.
#[pyfunction]
#[pyo3(signature = (scenario, element=None, indices=None, *, p=None, n=None, m=None, cap=None))]
#[allow(clippy::too_many_arguments)]
fn certify(
    py: Python<'_>,
    scenario: &str,
    element: Option<&str>,
    indices: Option<Vec<u32>>,
    p: Option<u32>,
    n: Option<usize>,
    m: Option<usize>,
    cap: Option<u32>,
) -> PyResult<Py<PyAny>> {
    let params = params(p, n, m, cap);
    if canonical_family(scenario) == Some("pgl") || scenario.starts_with("pgl(") {
        if element.is_some() || indices.is_some() {
            return Err(err(Error::Unsupported("the pgl module certifies Q0u2 only".into())));
        }
        let module = if scenario.contains('(') {
            builtin_scenarios()
                .map_err(err)?
                .module(scenario)
                .cloned()
                .ok_or_else(|| err(Error::UnknownScenario(scenario.to_string())))?
        } else {
            build_module(scenario, params).map_err(err)?
        };
        return to_py(py, &pgl_detect(&module).map_err(err)?);
    }
    let s = ring(scenario, params).map_err(err)?;
    let alpha = match element {
        Some(text) => s.parse(text).map_err(err)?,
        None => s
            .candidates
            .first()
            .map(|c| c.element.clone())
            .ok_or_else(|| err(Error::MissingDeclaration(format!("{} has no candidates", s.name))))?,
    };
    let c = match indices {
        Some(i) => detect(&s, &alpha, &i),
        None => find_witness(&s, &alpha),
    }
    .map_err(err)?;
    to_py(py, &c)
}

/// Every candidate of a scenario, certified.
#[pyfunction]
#[pyo3(signature = (scenario, *, p=None, n=None, m=None, cap=None))]
fn dh(py: Python<'_>, scenario: &str, p: Option<u32>, n: Option<usize>, m: Option<usize>, cap: Option<u32>) -> PyResult<Py<PyAny>> {
    let s = ring(scenario, params(p, n, m, cap)).map_err(err)?;
    to_py(py, &dh_table(&s).map_err(err)?)
}

/// Basis of the ring modulo its declared N^1 generators.
#[pyfunction]
#[pyo3(signature = (scenario, *, p=None, n=None, m=None, cap=None))]
fn stable_basis(scenario: &str, p: Option<u32>, n: Option<usize>, m: Option<usize>, cap: Option<u32>) -> PyResult<Vec<String>> {
    let s = ring(scenario, params(p, n, m, cap)).map_err(err)?;
    Ok(stable_quotient(&s).map_err(err)?.basis())
}

/// Free and torsion ranks of the étale ring, per even degree.
#[pyfunction]
#[pyo3(signature = (n, *, rost=false))]
fn etale_ranks(py: Python<'_>, n: u32, rost: bool) -> PyResult<Py<PyAny>> {
    let r = if rost { rost_etale_ring(n) } else { quadric_etale_ring(n) }.map_err(err)?;
    to_py(py, &r.rank_table())
}

/// The quadric DH check; `forced` declares extra N^1 degrees.
#[pyfunction]
#[pyo3(signature = (n, forced=Vec::new()))]
fn quadric_dh(py: Python<'_>, n: u32, forced: Vec<u32>) -> PyResult<Py<PyAny>> {
    to_py(py, &dh_quadric_check(n, &forced).map_err(err)?)
}

#[pymodule]
#[pyo3(name = "coniveau")]
fn coniveau_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ConiveauError", m.py().get_type::<ConiveauError>())?;
    m.add_function(wrap_pyfunction!(scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(dh, m)?)?;
    m.add_function(wrap_pyfunction!(stable_basis, m)?)?;
    m.add_function(wrap_pyfunction!(etale_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(quadric_dh, m)?)?;
    Ok(())
}
