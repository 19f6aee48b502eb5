//! Python bindings: model construction, closed-form levels, kernel scans and
//! the batch runner.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use relsusy::analytic::{self, Branch, LevelLabel};
use relsusy::models::{self, SpinCase};
use relsusy::opalg::C64;
use relsusy::{susy, Error};

create_exception!(relsusy, NumericalError, PyArithmeticError);

fn to_py(e: Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse_case(name: &str) -> PyResult<SpinCase> {
    SpinCase::ALL
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown case {name:?}, expected kg, dirac or spin1")))
}

fn parse_branch(sign: &str) -> PyResult<Branch> {
    match sign {
        "+" | "plus" => Ok(Branch::Plus),
        "-" | "minus" => Ok(Branch::Minus),
        _ => Err(PyValueError::new_err(format!("unknown branch {sign:?}, expected '+' or '-'"))),
    }
}

fn rows(m: &relsusy::opalg::Matrix) -> Vec<Vec<C64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Model parameters. Natural units by default.
#[pyclass(name = "ModelSpec", module = "relsusy")]
struct PyModelSpec {
    inner: models::ModelSpec,
}

#[pymethods]
impl PyModelSpec {
    #[new]
    #[pyo3(signature = (case = "dirac", *, g = 2.0, omega_c = 1.0, k_z = 0.0, m = 1.0, c = 1.0, hbar = 1.0, n_fock = 32, buffer = 4))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        case: &str,
        g: f64,
        omega_c: f64,
        k_z: f64,
        m: f64,
        c: f64,
        hbar: f64,
        n_fock: usize,
        buffer: usize,
    ) -> PyResult<Self> {
        let inner = models::ModelSpec {
            case: parse_case(case)?,
            g,
            omega_c,
            k_z,
            m,
            c,
            hbar,
            n_fock,
            buffer,
            ..Default::default()
        };
        inner.validate().map_err(to_py)?;
        Ok(PyModelSpec { inner })
    }

    #[getter]
    fn case(&self) -> &'static str {
        self.inner.case.name()
    }
    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }
    #[getter]
    fn omega_c(&self) -> f64 {
        self.inner.omega_c
    }
    #[getter]
    fn k_z(&self) -> f64 {
        self.inner.k_z
    }
    #[getter]
    fn n_fock(&self) -> usize {
        self.inner.n_fock
    }
    #[getter]
    fn buffer(&self) -> usize {
        self.inner.buffer
    }

    fn rest_energy(&self) -> f64 {
        self.inner.rest_energy()
    }

    fn larmor_length(&self) -> f64 {
        self.inner.larmor_length()
    }

    /// Serialized as the model part of a run configuration.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "ModelSpec({:?}, g={}, omega_c={}, k_z={}, m={}, c={}, hbar={}, n_fock={}, buffer={})",
            s.case.name(),
            s.g,
            s.omega_c,
            s.k_z,
            s.m,
            s.c,
            s.hbar,
            s.n_fock,
            s.buffer
        )
    }
}

/// Full graded Hamiltonian as a list of rows of complex numbers.
#[pyfunction]
fn hamiltonian(spec: &PyModelSpec) -> PyResult<Vec<Vec<C64>>> {
    let h = models::build_model(&spec.inner).map_err(to_py)?;
    Ok(rows(models::assemble_full(&h).entries()))
}

/// Mass-odd commutator norm `(absolute, relative)` on the interior window.
#[pyfunction]
fn mo_commutator(spec: &PyModelSpec) -> PyResult<(f64, f64)> {
    let h = models::build_model(&spec.inner).map_err(to_py)?;
    let mo = models::mo_commutator_norm(&h, &spec.inner.window());
    Ok((mo.absolute, mo.relative))
}

#[pyfunction]
#[pyo3(signature = (spec, n, s_z = 0.0))]
fn nonrel_level(spec: &PyModelSpec, n: usize, s_z: f64) -> PyResult<f64> {
    let label = LevelLabel {
        n,
        s_z,
        k_z: spec.inner.k_z,
    };
    analytic::nonrel_level(spec.inner.case, &label, &spec.inner).map_err(to_py)
}

/// Closed-form energy; complex when the field is supercritical for that level.
#[pyfunction]
#[pyo3(signature = (spec, n, s_z = 0.0, branch = "+"))]
fn relativistic_energy(spec: &PyModelSpec, n: usize, s_z: f64, branch: &str) -> PyResult<(C64, bool)> {
    let label = LevelLabel {
        n,
        s_z,
        k_z: spec.inner.k_z,
    };
    let e = analytic::relativistic_energy(spec.inner.case, &label, &spec.inner, parse_branch(branch)?).map_err(to_py)?;
    Ok((e.value, e.supercritical))
}

/// `(n, s_z, E_plus, E_minus, analytic_E, abs_error)` for each interior level.
#[pyfunction]
fn fw_spectrum(spec: &PyModelSpec) -> PyResult<Vec<(usize, f64, f64, f64, f64, f64)>> {
    let (_, rows) = analytic::fw_spectrum(&spec.inner).map_err(to_py)?;
    Ok(rows
        .iter()
        .map(|r| (r.n, r.s_z, r.e_plus, r.e_minus, r.analytic_e, r.abs_error))
        .collect())
}

/// Smallest partner eigenvalue over a `k_z` grid.
///
/// Returns `(points, crossings, analytic_crossings)` with points as
/// `(k_z, dim_ker, min_eigenvalue)`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn kernel_scan(spec: &PyModelSpec, grid: Vec<f64>) -> PyResult<(Vec<(f64, usize, f64)>, Vec<f64>, Vec<f64>)> {
    let scan = susy::kernel_scan(&spec.inner, &grid).map_err(to_py)?;
    let points = scan
        .points
        .iter()
        .map(|p| (p.k_z, p.dim_ker, p.min_eigenvalue))
        .collect();
    Ok((points, scan.crossings, scan.analytic))
}

/// Runs a CLI command on a JSON configuration string. Returns
/// `(exit_code, report_json)` with the same codes as the binary.
#[pyfunction]
fn run_command(py: Python<'_>, command: &str, config_json: &str) -> (u8, String) {
    py.detach(|| relsusy::cli::run_json(command, config_json))
}

#[pymodule]
#[pyo3(name = "relsusy")]
pub fn relsusy_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelSpec>()?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(mo_commutator, m)?)?;
    m.add_function(wrap_pyfunction!(nonrel_level, m)?)?;
    m.add_function(wrap_pyfunction!(relativistic_energy, m)?)?;
    m.add_function(wrap_pyfunction!(fw_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_scan, m)?)?;
    m.add_function(wrap_pyfunction!(run_command, m)?)?;
    Ok(())
}
