//! Python bindings: bundle-level entry points returning plain dicts, lists
//! and strings. Matrices are lists of rows of polynomial strings.

use dgmf_core::bundle::{bundle_file, matrix_strings, read_bundle, to_json, LoadedBundle};
use dgmf_core::dg_solver::{complete_multiplication, SolverConfig};
use dgmf_core::dga::validate_dga;
use dgmf_core::factorization::{build_mf, build_resolution, verify_mf, FactorizationError, MfVariant, ResolutionVariant};
use dgmf_core::fixtures::{e1, e2, e3};
use dgmf_core::linkage::{run_pipeline, verify_hypotheses, verify_identity_suite, verify_higher_multiplication, LinkageInput};
use dgmf_core::report::Report;
use dgmf_core::ring::{format_poly, parse_poly, Field};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(dgmf, InputError, PyValueError, "Malformed bundle, polynomial or option.");
create_exception!(dgmf, CheckFailed, PyException, "An identity or validation check failed.");
create_exception!(dgmf, PreconditionError, PyException, "The requested construction does not apply, e.g. r is not a unit.");

fn input_err(e: impl ToString) -> PyErr {
    InputError::new_err(e.to_string())
}

fn report_dict<'py>(py: Python<'py>, r: &Report) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("passed", r.passed())?;
    let checks = PyList::empty(py);
    for c in &r.checks {
        let item = PyDict::new(py);
        item.set_item("name", &c.name)?;
        item.set_item("passed", c.passed)?;
        item.set_item("detail", &c.detail)?;
        checks.append(item)?;
    }
    d.set_item("checks", checks)?;
    d.set_item("notes", r.notes.clone())?;
    Ok(d)
}

fn require(r: &Report, stage: &str) -> PyResult<()> {
    match r.failures().next() {
        Some(c) => Err(CheckFailed::new_err(format!("{stage}: {}: {}", c.name, c.detail))),
        None => Ok(()),
    }
}

fn linkage_input(b: LoadedBundle, solve_mult: bool, seed: u64) -> PyResult<LinkageInput> {
    let m = match b.m {
        Some(m) => m,
        None if solve_mult => {
            let cfg = SolverConfig { seed, ..SolverConfig::default() };
            complete_multiplication(&b.complex, &b.orientation, &b.split, &cfg)
                .map_err(|e| CheckFailed::new_err(format!("solve_mult: {e}")))?
        }
        None => return Err(input_err("bundle has no multiplication table; pass solve_mult=True")),
    };
    Ok(LinkageInput { a: b.a, f: b.f, m, options: b.options })
}

/// Canonical form of a polynomial string; characteristic 0 means the rationals.
#[pyfunction]
#[pyo3(signature = (text, vars, characteristic = 101))]
pub fn canonical_poly(text: &str, vars: Vec<String>, characteristic: u64) -> PyResult<String> {
    let field = Field::from_characteristic(characteristic).map_err(input_err)?;
    let p = parse_poly(text, &vars, field).map_err(input_err)?;
    Ok(format_poly(&p, &vars))
}

/// JSON bundle of a built-in example ("E1", "E2" or "E3").
#[pyfunction]
#[pyo3(signature = (name, seed = 0))]
pub fn demo_bundle(name: &str, seed: u64) -> PyResult<String> {
    let ex = match name.to_ascii_uppercase().as_str() {
        "E1" => e1(),
        "E2" => e2(),
        "E3" => e3(&SolverConfig { seed, ..SolverConfig::default() })
            .map_err(|e| CheckFailed::new_err(format!("solve_mult: {e}")))?,
        other => return Err(input_err(format!("unknown example `{other}`"))),
    };
    let input = ex.input();
    Ok(to_json(&bundle_file(&ex.vars, &ex.a, &ex.f, &ex.m, &input.options)))
}

/// Runs the DGΓ-algebra validator on a bundle and returns its report.
#[pyfunction]
pub fn validate<'py>(py: Python<'py>, bundle: &str) -> PyResult<Bound<'py, PyDict>> {
    let b = read_bundle(bundle).map_err(input_err)?;
    let m = b.m.as_ref().ok_or_else(|| input_err("bundle has no multiplication table"))?;
    report_dict(py, &validate_dga(m, Some(&b.a)))
}

/// Runs the pipeline and builds one factorization, optionally with a resolution.
///
/// Returns a dict with `rank`, `f`, `g_even`, `g_odd`, `x`, `x_dagger`,
/// `reports` (stage name → report) and, when requested, `resolution_ranks`.
#[pyfunction]
#[pyo3(signature = (bundle, variant = "full", resolution = None, check_len = 10, solve_mult = false, seed = 0))]
pub fn build<'py>(
    py: Python<'py>,
    bundle: &str,
    variant: &str,
    resolution: Option<&str>,
    check_len: usize,
    solve_mult: bool,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let mf_variant = match variant {
        "full" => MfVariant::Full,
        "reduced" => MfVariant::Reduced,
        other => return Err(input_err(format!("variant must be \"full\" or \"reduced\", got `{other}`"))),
    };
    let res_variant = match resolution {
        None => None,
        Some("N") | Some("n") => Some(ResolutionVariant::N),
        Some("acute") => Some(ResolutionVariant::Acute),
        Some(other) => return Err(input_err(format!("resolution must be \"N\" or \"acute\", got `{other}`"))),
    };
    let b = read_bundle(bundle).map_err(input_err)?;
    let vars = b.vars.clone();
    let input = linkage_input(b, solve_mult, seed)?;
    let st = run_pipeline(&input).map_err(|e| CheckFailed::new_err(format!("pipeline: {e}")))?;

    let reports = PyDict::new(py);
    for (name, r) in [
        ("hypotheses", verify_hypotheses(&st)),
        ("identity_suite", verify_identity_suite(&st, false)),
        ("higher_multiplication", verify_higher_multiplication(&st)),
    ] {
        require(&r, name)?;
        reports.set_item(name, report_dict(py, &r)?)?;
    }
    let mf = build_mf(&st, mf_variant).map_err(|e| match e {
        e @ FactorizationError::RNotUnit(_) => PreconditionError::new_err(e.to_string()),
        e => CheckFailed::new_err(e.to_string()),
    })?;
    let r = verify_mf(&mf);
    require(&r, "factorization")?;
    reports.set_item("factorization", report_dict(py, &r)?)?;

    let out = PyDict::new(py);
    out.set_item("rank", mf.rank())?;
    out.set_item("f", format_poly(&mf.f, &vars))?;
    out.set_item("g_even", matrix_strings(&mf.g_even, &vars))?;
    out.set_item("g_odd", matrix_strings(&mf.g_odd, &vars))?;
    out.set_item("x", matrix_strings(&st.x.x, &vars))?;
    out.set_item("x_dagger", matrix_strings(&st.x.x_dagger, &vars))?;
    if let Some(v) = res_variant {
        let res = build_resolution(&st, v, check_len).map_err(|e| CheckFailed::new_err(e.to_string()))?;
        require(&res.report, "resolution")?;
        reports.set_item("resolution", report_dict(py, &res.report)?)?;
        out.set_item("resolution_ranks", res.ranks(check_len))?;
    }
    out.set_item("reports", reports)?;
    Ok(out)
}

#[pymodule]
fn dgmf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("InputError", m.py().get_type::<InputError>())?;
    m.add("CheckFailed", m.py().get_type::<CheckFailed>())?;
    m.add("PreconditionError", m.py().get_type::<PreconditionError>())?;
    m.add_function(wrap_pyfunction!(canonical_poly, m)?)?;
    m.add_function(wrap_pyfunction!(demo_bundle, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    Ok(())
}
