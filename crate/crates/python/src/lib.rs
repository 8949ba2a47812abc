//! Python bindings for the `montroll_susy` library.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use montroll_susy::app::{output, ConsistencyReport, Model, RunConfig};
use montroll_susy::darboux::{self, Convention, DeformationParams};
use montroll_susy::error::Error;
use montroll_susy::kink;
use montroll_susy::numerics::{make_grid, Grid, SampledField};
use montroll_susy::spectral;
use montroll_susy::susy;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn grid(xi_min: f64, xi_max: f64, n: usize) -> PyResult<Grid> {
    make_grid(xi_min, xi_max, n).map_err(err)
}

fn field(g: Grid, values: Vec<f64>) -> PyResult<SampledField> {
    SampledField::new(g, values).map_err(err)
}

fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn run_config(config_json: Option<&str>, overrides: Vec<String>) -> PyResult<RunConfig> {
    let mut rc = match config_json {
        Some(text) => RunConfig::from_json(text).map_err(err)?,
        None => RunConfig::default(),
    };
    for s in &overrides {
        rc.set(s).map_err(err)?;
    }
    Ok(rc)
}

/// Real roots `(alpha1, alpha2, alpha3)` of `psi^3 - psi - sigma`.
#[pyfunction]
fn solve_cubic(sigma: f64) -> PyResult<(f64, f64, f64)> {
    let r = kink::solve_cubic(sigma).map_err(err)?;
    Ok((r.alpha1, r.alpha2, r.alpha3))
}

/// `(beta, gamma)` from the kink endpoints.
#[pyfunction]
#[pyo3(signature = (alpha1, alpha2, enforce_vieta = false))]
fn kink_params(alpha1: f64, alpha2: f64, enforce_vieta: bool) -> PyResult<(f64, f64)> {
    let k = kink::kink_params(alpha1, alpha2, enforce_vieta).map_err(err)?;
    Ok((k.beta, k.gamma))
}

/// Grid points of `[xi_min, xi_max]` with `n` points.
#[pyfunction]
fn grid_points(xi_min: f64, xi_max: f64, n: usize) -> PyResult<Vec<f64>> {
    Ok(grid(xi_min, xi_max, n)?.points())
}

#[pyclass(name = "SusyParams", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PySusyParams(susy::SusyParams);

#[pymethods]
impl PySusyParams {
    #[new]
    #[pyo3(signature = (beta, gamma, epsilon, epsilon0 = 0.0, amplitude = 1.0))]
    fn new(beta: f64, gamma: f64, epsilon: f64, epsilon0: f64, amplitude: f64) -> PyResult<Self> {
        susy::SusyParams::new(beta, gamma, epsilon, epsilon0, amplitude).map(Self).map_err(err)
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.0.epsilon
    }

    #[getter]
    fn epsilon0(&self) -> f64 {
        self.0.epsilon0
    }

    #[getter]
    fn amplitude(&self) -> f64 {
        self.0.amplitude
    }

    fn epsilon0_caticha(&self) -> f64 {
        self.0.epsilon0_caticha()
    }

    fn superpotential(&self, xi: Vec<f64>) -> Vec<f64> {
        xi.into_iter().map(|x| self.0.superpotential(x)).collect()
    }

    fn potential(&self, xi: Vec<f64>) -> Vec<f64> {
        xi.into_iter().map(|x| self.0.potential(x)).collect()
    }

    fn ground_state(&self, xi: Vec<f64>) -> Vec<f64> {
        xi.into_iter().map(|x| self.0.ground_state(x)).collect()
    }

    fn excited_state(&self, xi: Vec<f64>) -> Vec<f64> {
        xi.into_iter().map(|x| self.0.excited_state(x)).collect()
    }

    /// Well depths, bias and minima at the Caticha ground energy.
    fn morse<'py>(&self, py: Python<'py>, xi_min: f64, xi_max: f64, n: usize) -> PyResult<Bound<'py, PyAny>> {
        let m = susy::morse_characteristics(&self.0, &grid(xi_min, xi_max, n)?).map_err(err)?;
        to_py(py, &m)
    }

    /// Deformed family on a grid: dict with `r`, `u`, `phi0`, `i`, `xi_star`.
    #[pyo3(signature = (xi_min, xi_max, n, lambda_, convention = "paper_figure"))]
    fn deform<'py>(
        &self,
        py: Python<'py>,
        xi_min: f64,
        xi_max: f64,
        n: usize,
        lambda_: f64,
        convention: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let g = grid(xi_min, xi_max, n)?;
        let conv: Convention = convention.parse().map_err(err)?;
        let params = DeformationParams::new(lambda_, conv).map_err(err)?;
        let fam = darboux::deform(
            &susy::superpotential(&self.0, &g),
            &susy::potential(&self.0, &g),
            &susy::ground_state(&self.0, &g),
            &params,
        )
        .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("r", fam.r_lambda.values().to_vec())?;
        d.set_item("u", fam.u_lambda.values().to_vec())?;
        d.set_item("phi0", fam.phi0_lambda.values().to_vec())?;
        d.set_item("i", fam.i_field.values().to_vec())?;
        d.set_item("xi_star", fam.singularity)?;
        Ok(d)
    }
}

/// Lowest `k` eigenvalues and eigenfunctions of `-d^2/dxi^2 + u` with
/// Dirichlet ends, `u` sampled on `[xi_min, xi_max]`.
#[pyfunction]
fn lowest_modes(u: Vec<f64>, xi_min: f64, xi_max: f64, k: usize) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let g = grid(xi_min, xi_max, u.len())?;
    let h = spectral::discretize(&field(g, u)?).map_err(err)?;
    let s = spectral::lowest_modes(&h, k).map_err(err)?;
    Ok((s.eigenvalues, s.eigenfunctions.into_iter().map(SampledField::into_values).collect()))
}

/// Normalized Schrödinger residual of `(phi, eps)` for potential `u`.
#[pyfunction]
fn verify_eigenpair(u: Vec<f64>, phi: Vec<f64>, eps: f64, xi_min: f64, xi_max: f64) -> PyResult<f64> {
    let g = grid(xi_min, xi_max, u.len())?;
    Ok(spectral::verify_eigenpair(&field(g, u)?, &field(g, phi)?, eps, None))
}

/// Consistency report for a config: `(passed, report_dict, text)`.
#[pyfunction]
#[pyo3(signature = (config_json = None, overrides = Vec::new()))]
fn verify<'py>(
    py: Python<'py>,
    config_json: Option<&str>,
    overrides: Vec<String>,
) -> PyResult<(bool, Bound<'py, PyAny>, String)> {
    let cfg = run_config(config_json, overrides)?.resolve().map_err(err)?;
    let model = Model::build(&cfg).map_err(err)?;
    let report = ConsistencyReport::build(&model).map_err(err)?;
    let text = report.render_text(&cfg, &model);
    Ok((report.passed(), to_py(py, &report)?, text))
}

/// CSV text of figure `id` (1..5).
#[pyfunction]
#[pyo3(signature = (id, config_json = None, overrides = Vec::new()))]
fn figure_csv(id: u8, config_json: Option<&str>, overrides: Vec<String>) -> PyResult<String> {
    let cfg = run_config(config_json, overrides)?.resolve().map_err(err)?;
    output::figure_csv(&Model::build(&cfg).map_err(err)?, id).map_err(err)
}

#[pymodule]
fn montroll_susy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySusyParams>()?;
    m.add_function(wrap_pyfunction!(solve_cubic, m)?)?;
    m.add_function(wrap_pyfunction!(kink_params, m)?)?;
    m.add_function(wrap_pyfunction!(grid_points, m)?)?;
    m.add_function(wrap_pyfunction!(lowest_modes, m)?)?;
    m.add_function(wrap_pyfunction!(verify_eigenpair, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(figure_csv, m)?)?;
    Ok(())
}
