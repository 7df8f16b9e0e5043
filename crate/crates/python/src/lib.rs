//! Python bindings. Reports cross the boundary as plain dicts built from
//! the same JSON the CLI prints.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use vdm_core::exponents::{affine_dimension, componentwise_min, d_gamma, normalize};
use vdm_core::irreducibility::{self, verify_certificate_with_seed, FieldSpec};
use vdm_core::tropical::decide_tropical_irreducibility;
use vdm_core::vandermonde::VandermondeInstance;

fn err(e: vdm_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A finite set of distinct exponent vectors in ℕⁿ, in column order.
#[pyclass(name = "Support", frozen)]
struct PySupport(vdm_core::Support);

#[pymethods]
impl PySupport {
    #[new]
    fn new(rows: Vec<Vec<u64>>) -> PyResult<Self> {
        vdm_core::Support::from_rows(&rows)
            .map(PySupport)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        vdm_core::Support::from_json_str(text)
            .map(PySupport)
            .map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn exponents(&self) -> Vec<Vec<u64>> {
        self.0
            .vectors()
            .iter()
            .map(|v| v.coords().to_vec())
            .collect()
    }

    #[getter]
    fn gamma_bar(&self) -> Vec<u64> {
        componentwise_min(&self.0).coords().to_vec()
    }

    /// None for a single vector.
    #[getter]
    fn d_gamma(&self) -> Option<u64> {
        d_gamma(&self.0).ok()
    }

    #[getter]
    fn affine_dim(&self) -> usize {
        affine_dimension(&self.0)
    }

    fn normalized(&self) -> PySupport {
        PySupport(normalize(&self.0).0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Support({:?})", self.exponents())
    }
}

/// Sparse polynomial over ℤ or 𝔽_p.
#[pyclass(name = "Polynomial", frozen)]
struct PyPolynomial(vdm_core::SparsePoly);

#[pymethods]
impl PyPolynomial {
    #[getter]
    fn characteristic(&self) -> u64 {
        self.0.ring().characteristic()
    }

    #[getter]
    fn num_terms(&self) -> usize {
        self.0.num_terms()
    }

    #[getter]
    fn total_degree(&self) -> Option<u64> {
        self.0.total_degree()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    fn __eq__(&self, other: &PyPolynomial) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({})", self.0)
    }
}

fn instance(s: &PySupport, characteristic: u64) -> PyResult<VandermondeInstance> {
    let f = FieldSpec::new(characteristic).map_err(err)?;
    VandermondeInstance::new(s.0.clone(), f.ring()).map_err(err)
}

/// The generalized Vandermonde determinant over the given characteristic.
#[pyfunction]
#[pyo3(signature = (support, characteristic = 0))]
fn determinant(support: &PySupport, characteristic: u64) -> PyResult<PyPolynomial> {
    Ok(PyPolynomial(
        instance(support, characteristic)?.determinant(),
    ))
}

/// Irreducibility certificate as a dict.
#[pyfunction]
#[pyo3(signature = (support, characteristic = 0))]
fn decide<'py>(
    py: Python<'py>,
    support: &PySupport,
    characteristic: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let f = FieldSpec::new(characteristic).map_err(err)?;
    to_py(py, &irreducibility::decide(&support.0, f))
}

/// Tropical certificate with its regular-subdivision witness.
#[pyfunction]
#[pyo3(signature = (support, seed = 0))]
fn tropical<'py>(py: Python<'py>, support: &PySupport, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let cert = decide_tropical_irreducibility(&support.0, seed).map_err(err)?;
    to_py(py, &cert)
}

/// Re-derives the certificate for `support` and checks it independently.
#[pyfunction]
#[pyo3(signature = (support, characteristic = 0, seed = 0))]
fn verify<'py>(
    py: Python<'py>,
    support: &PySupport,
    characteristic: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let inst = instance(support, characteristic)?;
    let cert = irreducibility::decide(&support.0, FieldSpec::new(characteristic).map_err(err)?);
    let report = verify_certificate_with_seed(&inst, &cert, seed).map_err(err)?;
    to_py(py, &report)
}

/// Runs the `vdm` command line in-process: returns (exit code, stdout, stderr).
#[pyfunction]
#[pyo3(signature = (args, stdin = None))]
fn run_cli(args: Vec<String>, stdin: Option<&Bound<'_, PyBytes>>) -> (i32, String, String) {
    let input = stdin.map(|b| b.as_bytes().to_vec()).unwrap_or_default();
    let argv = std::iter::once("vdm".to_string()).chain(args);
    let out = vdm_core::cli::run_args(argv, &mut input.as_slice());
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn vdm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySupport>()?;
    m.add_class::<PyPolynomial>()?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(tropical, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
