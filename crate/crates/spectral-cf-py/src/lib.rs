//! Python module `spectral_cf_py`. Matrices are lists of rows of complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use spectral_cf::cli::{parse_extrapolation, resolve_observable};
use spectral_cf::closed_forms;
use spectral_cf::linalg::{self, HermitianOperator, StateVector};
use spectral_cf::stone::{self, ResolventProbeConfig, UniformGrid};
use spectral_cf::verify::{run_suite, Suite};
use spectral_cf::Error;

fn to_py(e: Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn operator(rows: Vec<Vec<Complex64>>) -> PyResult<HermitianOperator> {
    HermitianOperator::from_rows(&rows).map_err(to_py)
}

fn state(amplitudes: Vec<Complex64>) -> PyResult<StateVector> {
    StateVector::from_complex(&amplitudes).map_err(to_py)
}

fn rows(h: &HermitianOperator) -> Vec<Vec<Complex64>> {
    let m = h.entries();
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Matrix of a named observable: catalogue name, `fock:<mode>:<n_max>` or `grid:<mode>:<n>:<x_max>`.
#[pyfunction]
fn observable(name: &str) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(rows(&resolve_observable(name).map_err(to_py)?.matrix))
}

/// Distinguished vacuum of a named observable, if it has one.
#[pyfunction]
fn vacuum(name: &str) -> PyResult<Option<Vec<Complex64>>> {
    let obs = resolve_observable(name).map_err(to_py)?;
    Ok(obs.vacuum.map(|v| v.amplitudes().iter().copied().collect()))
}

/// Distinct eigenvalues and their multiplicities.
#[pyfunction]
fn decompose(matrix: Vec<Vec<Complex64>>) -> PyResult<(Vec<f64>, Vec<usize>)> {
    let d = linalg::decompose(&operator(matrix)?).map_err(to_py)?;
    Ok((d.eigenvalues().to_vec(), d.multiplicities().to_vec()))
}

/// Atoms `(location, weight)` of the spectral measure of `matrix` in `state`.
#[pyfunction]
fn spectral_measure(matrix: Vec<Vec<Complex64>>, state_: Vec<Complex64>) -> PyResult<Vec<(f64, f64)>> {
    let m = linalg::spectral_measure(&operator(matrix)?, &state(state_)?).map_err(to_py)?;
    Ok(m.atoms.iter().map(|a| (a.location, a.weight)).collect())
}

#[pyfunction]
fn charfun_exact(py: Python<'_>, matrix: Vec<Vec<Complex64>>, state_: Vec<Complex64>, ts: Vec<f64>) -> PyResult<Vec<Complex64>> {
    let (h, u) = (operator(matrix)?, state(state_)?);
    let trace = py.detach(|| linalg::charfun_exact(&h, &u, &ts)).map_err(to_py)?;
    Ok(trace.values)
}

fn config(
    h: &HermitianOperator,
    u: &StateVector,
    epsilons: Vec<f64>,
    extrapolation: &str,
    grid: Option<(f64, f64, usize)>,
) -> PyResult<ResolventProbeConfig> {
    let base = match grid {
        Some((lo, hi, n)) => UniformGrid::new(lo, hi, n).and_then(|g| ResolventProbeConfig::new(epsilons, g)),
        None => ResolventProbeConfig::auto(h, u, epsilons),
    };
    Ok(base
        .map_err(to_py)?
        .with_extrapolation(parse_extrapolation(extrapolation).map_err(to_py)?))
}

/// Result of a resolvent-probe reconstruction.
#[pyclass(get_all, frozen)]
struct StoneResult {
    atoms: Vec<(f64, f64)>,
    lambdas: Vec<f64>,
    density: Vec<f64>,
    cdf: Vec<f64>,
    method: String,
    epsilon_used: f64,
}

#[pyfunction]
#[pyo3(signature = (matrix, state_, epsilons, extrapolation = "none", grid = None))]
fn stone_cdf(
    py: Python<'_>,
    matrix: Vec<Vec<Complex64>>,
    state_: Vec<Complex64>,
    epsilons: Vec<f64>,
    extrapolation: &str,
    grid: Option<(f64, f64, usize)>,
) -> PyResult<StoneResult> {
    let (h, u) = (operator(matrix)?, state(state_)?);
    let cfg = config(&h, &u, epsilons, extrapolation, grid)?;
    let m = py.detach(|| stone::stone_cdf(&h, &u, &cfg)).map_err(to_py)?;
    let density = m.density.unwrap_or_default();
    Ok(StoneResult {
        atoms: m.atoms.iter().map(|a| (a.location, a.weight)).collect(),
        lambdas: density.iter().map(|p| p.0).collect(),
        density: density.iter().map(|p| p.1).collect(),
        cdf: m.cdf.unwrap_or_default().iter().map(|p| p.1).collect(),
        method: m.method,
        epsilon_used: m.epsilon_used,
    })
}

/// Returns the probe characteristic function and the damping `ε` it still carries.
#[pyfunction]
#[pyo3(signature = (matrix, state_, epsilons, ts, extrapolation = "none"))]
fn stone_charfun(
    py: Python<'_>,
    matrix: Vec<Vec<Complex64>>,
    state_: Vec<Complex64>,
    epsilons: Vec<f64>,
    ts: Vec<f64>,
    extrapolation: &str,
) -> PyResult<(Vec<Complex64>, f64)> {
    let (h, u) = (operator(matrix)?, state(state_)?);
    let cfg = config(&h, &u, epsilons, extrapolation, None)?;
    let trace = py.detach(|| stone::stone_charfun(&h, &u, &cfg, &ts)).map_err(to_py)?;
    Ok((trace.values, trace.epsilon))
}

#[pyfunction]
fn closed_form_ids() -> Vec<&'static str> {
    closed_forms::registry().iter().map(|f| f.id).collect()
}

#[pyfunction]
fn closed_form(id: &str, x: f64) -> PyResult<Complex64> {
    closed_forms::closed_form(id).and_then(|f| f.evaluate(x)).map_err(to_py)
}

/// Runs a verification suite; returns whether every check passed and the JSON report.
#[pyfunction]
#[pyo3(signature = (suite = "corrected"))]
fn verify(py: Python<'_>, suite: &str) -> PyResult<(bool, String)> {
    let suite: Suite = suite.parse().map_err(to_py)?;
    let doc = py.detach(|| run_suite(suite));
    Ok((doc.all_pass(), doc.to_json()))
}

#[pymodule]
fn spectral_cf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<StoneResult>()?;
    m.add_function(wrap_pyfunction!(observable, m)?)?;
    m.add_function(wrap_pyfunction!(vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_measure, m)?)?;
    m.add_function(wrap_pyfunction!(charfun_exact, m)?)?;
    m.add_function(wrap_pyfunction!(stone_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(stone_charfun, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_ids, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
