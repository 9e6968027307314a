//! Python bindings. Polynomials cross the boundary as text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use sharppoly::constructor;
use sharppoly::diagram::{diagram_of, structural_check, DiagramDisplay};
use sharppoly::exactpoly::{self, minimal_term_count};
use sharppoly::harness::{to_json, SearchReport};
use sharppoly::mipsearch::{enumerate_mip, MipConfig};
use sharppoly::nullsearch::{enumerate_sharp, enumerate_with_terms, SearchConfig};
use sharppoly::BivariatePoly;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse(poly: &str) -> PyResult<BivariatePoly> {
    poly.parse().map_err(value_err)
}

fn texts(polys: &[BivariatePoly]) -> Vec<String> {
    polys.iter().map(|p| p.to_string()).collect()
}

/// `(member, sharp, terms, failures)`.
#[pyfunction]
fn verify(poly: &str, degree: u32) -> PyResult<(bool, bool, usize, Vec<String>)> {
    let s = exactpoly::verify(&parse(poly)?, degree);
    Ok((s.member, s.sharp, s.terms, s.failures))
}

#[pyfunction]
#[pyo3(signature = (degree, even = false))]
fn invariant(degree: u32, even: bool) -> PyResult<String> {
    let p = if even { exactpoly::invariant_even(degree) } else { exactpoly::invariant_sharp(degree) };
    Ok(p.map_err(value_err)?.to_string())
}

fn run(degree: u32, terms: Option<usize>, backend: &str) -> PyResult<SearchReport> {
    let n = terms.unwrap_or_else(|| minimal_term_count(degree));
    let sharp = n == minimal_term_count(degree);
    match backend {
        "nullspace" if sharp => enumerate_sharp(degree, &SearchConfig::default()),
        "nullspace" => enumerate_with_terms(degree, n, &SearchConfig::default()),
        "mip" if sharp => enumerate_mip(degree, &MipConfig::default()),
        "mip" => return Err(PyValueError::new_err("the mip backend only searches for sharp polynomials")),
        other => return Err(PyValueError::new_err(format!("unknown backend {other:?}"))),
    }
    .map_err(value_err)
}

/// `(canonical polynomials, raw count)`.
#[pyfunction]
#[pyo3(signature = (degree, terms = None, backend = "nullspace"))]
fn enumerate(degree: u32, terms: Option<usize>, backend: &str) -> PyResult<(Vec<String>, usize)> {
    let r = run(degree, terms, backend)?;
    Ok((texts(&r.polynomials), r.raw_count))
}

/// The report in its JSON form.
#[pyfunction]
#[pyo3(signature = (degree, terms = None, backend = "nullspace"))]
fn enumerate_json(degree: u32, terms: Option<usize>, backend: &str) -> PyResult<String> {
    Ok(to_json(&run(degree, terms, backend)?, None))
}

#[pyfunction]
#[pyo3(signature = (degree, depth = 1))]
fn construct(degree: u32, depth: usize) -> PyResult<Vec<String>> {
    let found = constructor::construct(degree, depth).map_err(value_err)?;
    Ok(found.into_iter().map(|c| c.polynomial.to_string()).collect())
}

/// `(degree, found)` for every odd degree up to `max_degree`.
#[pyfunction]
#[pyo3(signature = (max_degree, depth = 1))]
fn scan(max_degree: u32, depth: usize) -> PyResult<Vec<(u32, bool)>> {
    let degrees: Vec<u32> = (1..=max_degree).step_by(2).collect();
    let records = constructor::scan_uniqueness(&degrees, depth).map_err(value_err)?;
    Ok(records.into_iter().map(|r| (r.degree, r.found_noninvariant)).collect())
}

/// Decimal strings, since the values outgrow 64 bits quickly.
#[pyfunction]
fn pell_degrees(count: usize) -> Vec<String> {
    constructor::pell_degrees(count).iter().map(|v| v.to_string()).collect()
}

/// `(rendered grid, violations)`.
#[pyfunction]
fn diagram(poly: &str, degree: u32) -> PyResult<(String, Vec<String>)> {
    let p = parse(poly)?;
    let diag = diagram_of(&p, degree).map_err(value_err)?;
    let check = structural_check(&p, degree).map_err(value_err)?;
    let text = DiagramDisplay { diagram: &diag, sinks: &check.analysis.sinks }.to_string();
    Ok((text, check.violations))
}

#[pymodule]
fn sharppoly_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(invariant, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_json, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(pell_degrees, m)?)?;
    m.add_function(wrap_pyfunction!(diagram, m)?)?;
    Ok(())
}
