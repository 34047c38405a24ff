use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dsconcat_core::bf::hexfmt::{read_table, write_table};
use dsconcat_core::bf::profile;
use dsconcat_core::constructor::certify::{certify, certify_bound, certify_exhaustive, pow2_form, CertifiedProfile};
use dsconcat_core::constructor::construct::{construct, ConstructOptions};
use dsconcat_core::constructor::feasibility::{BaseMode, Variant};
use dsconcat_core::constructor::planfile::{parse_plan, write_plan};
use dsconcat_core::constructor::tables::reproduce_tables;
use dsconcat_core::families::{parse_seeds, Regime};
use dsconcat_core::Error;

fn to_py(e: Error) -> PyErr {
    let msg = format!("{}: {e}", e.category());
    match e {
        Error::Io(_) => PyOSError::new_err(msg),
        Error::Verification(_) => PyRuntimeError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

fn certificate<'py>(py: Python<'py>, c: &CertifiedProfile) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("mode", c.mode.to_string())?;
    d.set_item("n", c.n)?;
    d.set_item("m", c.resiliency_at_least)?;
    d.set_item("degree_lower", c.degree_lower)?;
    d.set_item("degree_upper", c.degree_upper)?;
    d.set_item("nonlinearity", c.nonlinearity_at_least.clone())?;
    d.set_item("nonlinearity_exact", c.nonlinearity_exact.clone())?;
    d.set_item("nonlinearity_form", pow2_form(c.n, &c.nonlinearity_at_least))?;
    d.set_item("closed_form", c.closed_form.clone())?;
    d.set_item("plain_form", c.plain_form.clone())?;
    d.set_item("almost_optimal", c.almost_optimal())?;
    Ok(d)
}

/// Profile of a truth table given in the `n=<k>` + hex text format.
#[pyfunction]
fn analyze<'py>(py: Python<'py>, table: &str) -> PyResult<Bound<'py, PyDict>> {
    let t = read_table(table).map_err(to_py)?;
    let p = py.detach(|| profile(&t)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("n", p.n)?;
    d.set_item("balanced", p.balanced)?;
    d.set_item("m", p.resiliency)?;
    d.set_item("d", p.degree)?;
    d.set_item("N", p.nonlinearity)?;
    d.set_item("almost_optimal", p.almost_optimal)?;
    d.set_item("parseval", p.parseval)?;
    Ok(d)
}

/// Run a construction. Returns the plan text, the certificate and, unless
/// `plan_only`, the truth table text.
#[pyfunction]
#[pyo3(name = "construct", signature = (variant, n, m, *, seeds=None, select=None, base=None, shuffle=None, plan_only=false, relaxed=false))]
#[allow(clippy::too_many_arguments)]
fn construct_function<'py>(
    py: Python<'py>,
    variant: &str,
    n: u32,
    m: u32,
    seeds: Option<&str>,
    select: Option<Vec<u32>>,
    base: Option<&str>,
    shuffle: Option<u64>,
    plan_only: bool,
    relaxed: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let variant: Variant = variant.parse().map_err(PyValueError::new_err)?;
    let mode = base.map(str::parse::<BaseMode>).transpose().map_err(PyValueError::new_err)?;
    let seeds = match seeds {
        Some(text) => parse_seeds(text).map_err(to_py)?,
        None => Vec::new(),
    };
    let mut opts = ConstructOptions {
        mode,
        select,
        plan_only,
        ..ConstructOptions::default()
    };
    opts.plan.shuffle = shuffle;
    if relaxed {
        opts.plan.regime = Regime::Relaxed;
    }
    let c = py.detach(|| construct(variant, n, m, &seeds, &opts)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("plan", write_plan(&c.plan))?;
    d.set_item("base", c.plan.mode.to_string())?;
    d.set_item("certificate", certificate(py, &c.certificate)?)?;
    d.set_item("table", c.table.as_ref().map(write_table))?;
    match &c.cross_check {
        Some(x) => d.set_item("measured", certificate(py, x)?)?,
        None => d.set_item("measured", py.None())?,
    }
    Ok(d)
}

/// Certify a plan given as text. `mode` is `auto`, `bound` or `exhaustive`.
#[pyfunction]
#[pyo3(name = "certify", signature = (plan, mode="auto"))]
fn certify_plan<'py>(py: Python<'py>, plan: &str, mode: &str) -> PyResult<Bound<'py, PyDict>> {
    let plan = parse_plan(plan).map_err(to_py)?;
    let cert = py
        .detach(|| match mode {
            "auto" => certify(&plan).map(Some),
            "bound" => Ok(Some(certify_bound(&plan))),
            "exhaustive" => certify_exhaustive(&plan).map(|(_, c)| Some(c)),
            _ => Ok(None),
        })
        .map_err(to_py)?
        .ok_or_else(|| PyValueError::new_err(format!("unknown certify mode {mode:?}")))?;
    certificate(py, &cert)
}

/// Table reproduction report as text, one line per entry.
#[pyfunction]
#[pyo3(signature = (m_lo=1, m_hi=4, n_lo=12, n_hi=512, observe=Vec::new()))]
fn tables(py: Python<'_>, m_lo: u32, m_hi: u32, n_lo: u32, n_hi: u32, observe: Vec<u32>) -> String {
    py.detach(|| reproduce_tables(m_lo..=m_hi, n_lo..=n_hi, &observe).to_text())
}

#[pymodule]
fn dsconcat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(construct_function, m)?)?;
    m.add_function(wrap_pyfunction!(certify_plan, m)?)?;
    m.add_function(wrap_pyfunction!(tables, m)?)?;
    Ok(())
}
