//! Python bindings for `e3atlas`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use e3atlas::{self as atlas, Beta, Error, Permutation};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn beta(v: [f64; 6]) -> Beta {
    Beta(v)
}

/// Normalized three-qubit pure state.
#[pyclass(
    name = "PureState3",
    module = "e3atlas",
    frozen,
    eq,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
struct PyState3(atlas::PureState3);

#[pymethods]
impl PyState3 {
    /// Eight amplitudes in flat index order 4i + 2j + k; normalized on input.
    #[new]
    fn new(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        atlas::PureState3::from_slice(&amplitudes)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn basis(i: usize, j: usize, k: usize) -> PyResult<Self> {
        if i > 1 || j > 1 || k > 1 {
            return Err(PyValueError::new_err("basis labels must be 0 or 1"));
        }
        Ok(Self(atlas::PureState3::basis(i, j, k)))
    }

    #[staticmethod]
    fn ghz() -> Self {
        Self(atlas::PureState3::ghz())
    }

    #[staticmethod]
    fn w() -> Self {
        Self(atlas::PureState3::w())
    }

    #[staticmethod]
    fn one_epr() -> Self {
        Self(atlas::PureState3::one_epr())
    }

    #[staticmethod]
    fn haar(seed: u64) -> Self {
        Self(atlas::haar_random_state3(seed))
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    /// `[I1, ..., I6]`.
    fn invariants_i(&self) -> Vec<f64> {
        atlas::invariants_i(&self.0).to_array().to_vec()
    }

    /// `[J1, ..., J6]`.
    fn invariants_j(&self) -> Vec<f64> {
        atlas::invariants_j(&self.0).0.to_vec()
    }

    /// Applies `u1 ⊗ u2 ⊗ u3`, each a 2x2 nested list.
    fn apply_local_unitary(
        &self,
        u1: [[Complex64; 2]; 2],
        u2: [[Complex64; 2]; 2],
        u3: [[Complex64; 2]; 2],
    ) -> PyResult<Self> {
        let u = atlas::LocalUnitary::new(u1, u2, u3).map_err(err)?;
        Ok(Self(atlas::apply_local_unitary(&u, &self.0)))
    }

    /// Relabels qubits by a permutation in cycle notation, e.g. `"(12)"`.
    fn permute(&self, cycles: &str) -> PyResult<Self> {
        let p = Permutation::parse(cycles, 3).map_err(err)?;
        Ok(Self(atlas::apply_qubit_permutation(&p, &self.0)))
    }

    #[pyo3(signature = (rank_tol = None))]
    fn orbit_dimension(&self, py: Python<'_>, rank_tol: Option<f64>) -> PyResult<Py<PyDict>> {
        let r = atlas::orbit_dimension3(
            &self.0,
            rank_tol.unwrap_or(atlas::analysis::DEFAULT_RANK_TOL),
        );
        rank_dict(py, &r)
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self
            .0
            .amplitudes()
            .iter()
            .map(|z| format!("({}{:+}j)", z.re, z.im))
            .collect();
        format!("PureState3([{}])", parts.join(", "))
    }
}

fn rank_dict(py: Python<'_>, r: &atlas::TangentRankResult) -> PyResult<Py<PyDict>> {
    let d = PyDict::new(py);
    d.set_item("dimension", r.dimension)?;
    d.set_item("singular_values", r.singular_values.clone())?;
    d.set_item("gap", r.gap)?;
    d.set_item("determinate", r.determinate)?;
    Ok(d.unbind())
}

fn report_dict(py: Python<'_>, r: &atlas::VerificationReport) -> PyResult<Py<PyDict>> {
    let d = PyDict::new(py);
    d.set_item("samples", r.samples)?;
    d.set_item("tol", r.tol)?;
    d.set_item("worst", r.worst.clone())?;
    d.set_item("failure_count", r.failure_count)?;
    let failures = r
        .failures
        .iter()
        .map(|f| {
            let e = PyDict::new(py);
            e.set_item("sample", f.sample)?;
            e.set_item("seed", f.seed)?;
            e.set_item("condition", &f.condition)?;
            e.set_item("residual", f.residual)?;
            Ok(e)
        })
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("failures", failures)?;
    Ok(d.unbind())
}

/// `[J1, ..., J6]` of eight amplitudes.
#[pyfunction]
fn invariants_j(amplitudes: Vec<Complex64>) -> PyResult<Vec<f64>> {
    let psi = atlas::PureState3::from_slice(&amplitudes).map_err(err)?;
    Ok(atlas::invariants_j(&psi).0.to_vec())
}

/// Residual of every membership condition plus the overall verdict.
#[pyfunction]
#[pyo3(signature = (beta_vec, tol = atlas::DEFAULT_TOL))]
fn membership(py: Python<'_>, beta_vec: [f64; 6], tol: f64) -> PyResult<Py<PyDict>> {
    let rep = atlas::membership(&beta(beta_vec), tol);
    let d = PyDict::new(py);
    d.set_item("in_x", rep.in_x)?;
    let residuals = PyDict::new(py);
    for (c, r) in &rep.residuals {
        residuals.set_item(c.name(), r)?;
    }
    d.set_item("residuals", residuals)?;
    let violated: Vec<&str> = rep.violated().iter().map(|c| c.name()).collect();
    d.set_item("violated", violated)?;
    Ok(d.unbind())
}

/// Cell name and table metadata for a member of X.
#[pyfunction]
#[pyo3(signature = (beta_vec, tol = atlas::DEFAULT_TOL))]
fn classify(py: Python<'_>, beta_vec: [f64; 6], tol: f64) -> PyResult<Py<PyDict>> {
    let cell = atlas::classify(&beta(beta_vec), tol).map_err(err)?;
    let info = cell.info();
    let d = PyDict::new(py);
    d.set_item("cell", info.name)?;
    d.set_item("cell_dimension", info.cell_dimension)?;
    d.set_item("acin_type", info.acin_type)?;
    d.set_item("slocc", info.slocc_class)?;
    d.set_item("orbit_dim", info.orbit_dimension)?;
    Ok(d.unbind())
}

/// `(case_label, state)` for a member of X.
#[pyfunction]
#[pyo3(signature = (beta_vec, tol = atlas::DEFAULT_TOL))]
fn synthesize(beta_vec: [f64; 6], tol: f64) -> PyResult<(String, PyState3)> {
    let r = atlas::synthesize(&beta(beta_vec), tol).map_err(err)?;
    Ok((
        r.case_label.label().to_string(),
        PyState3(r.state.to_state()),
    ))
}

#[pyfunction]
fn canonical_representative(state: &PyState3) -> PyResult<(String, PyState3)> {
    let r = atlas::canonical_representative(&state.0).map_err(err)?;
    Ok((
        r.case_label.label().to_string(),
        PyState3(r.state.to_state()),
    ))
}

/// Concurrence of four two-qubit amplitudes.
#[pyfunction]
fn concurrence(amplitudes: Vec<Complex64>) -> PyResult<f64> {
    let psi = atlas::PureState2::from_slice(&amplitudes).map_err(err)?;
    Ok(atlas::concurrence(&psi))
}

#[pyfunction]
#[pyo3(signature = (amplitudes, rank_tol = atlas::analysis::DEFAULT_RANK_TOL))]
fn orbit_dimension2(
    py: Python<'_>,
    amplitudes: Vec<Complex64>,
    rank_tol: f64,
) -> PyResult<Py<PyDict>> {
    let psi = atlas::PureState2::from_slice(&amplitudes).map_err(err)?;
    rank_dict(py, &atlas::orbit_dimension2(&psi, rank_tol))
}

#[pyfunction]
#[pyo3(signature = (samples, seed, tol = atlas::DEFAULT_TOL))]
fn verify_membership(py: Python<'_>, samples: u64, seed: u64, tol: f64) -> PyResult<Py<PyDict>> {
    let r = py
        .detach(|| atlas::monte_carlo_membership(samples, seed, tol))
        .map_err(err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (trials, seed, tol = 1e-10))]
fn verify_lu(py: Python<'_>, trials: u64, seed: u64, tol: f64) -> PyResult<Py<PyDict>> {
    let r = py
        .detach(|| atlas::check_lu_invariance(trials, seed, tol))
        .map_err(err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (trials, seed, tol = 1e-10))]
fn verify_permutation(py: Python<'_>, trials: u64, seed: u64, tol: f64) -> PyResult<Py<PyDict>> {
    let r = py
        .detach(|| atlas::check_permutation_law(trials, seed, tol))
        .map_err(err)?;
    report_dict(py, &r)
}

/// Points `(β1, β2, β3)` on the β4 = 0 bubble surface.
#[pyfunction]
fn sample_bubble_surface(resolution: usize) -> PyResult<Vec<[f64; 3]>> {
    Ok(atlas::sample_bubble_surface(resolution)
        .map_err(err)?
        .points)
}

#[pyfunction]
fn sample_tetrahedron(beta4: f64, resolution: usize) -> PyResult<Vec<[f64; 3]>> {
    Ok(atlas::sample_tetrahedron(beta4, resolution)
        .map_err(err)?
        .points)
}

/// Closed fiber curve as `(β5, β6)` pairs.
#[pyfunction]
fn sample_fiber_circle(
    beta1: f64,
    beta2: f64,
    beta3: f64,
    beta4: f64,
    resolution: usize,
) -> PyResult<Vec<[f64; 2]>> {
    Ok(
        atlas::sample_fiber_circle(beta1, beta2, beta3, beta4, resolution)
            .map_err(err)?
            .points,
    )
}

#[pymodule]
#[pyo3(name = "e3atlas")]
fn e3atlas_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState3>()?;
    m.add("DEFAULT_TOL", atlas::DEFAULT_TOL)?;
    m.add_function(wrap_pyfunction!(invariants_j, m)?)?;
    m.add_function(wrap_pyfunction!(membership, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_representative, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_dimension2, m)?)?;
    m.add_function(wrap_pyfunction!(verify_membership, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lu, m)?)?;
    m.add_function(wrap_pyfunction!(verify_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(sample_bubble_surface, m)?)?;
    m.add_function(wrap_pyfunction!(sample_tetrahedron, m)?)?;
    m.add_function(wrap_pyfunction!(sample_fiber_circle, m)?)?;
    Ok(())
}
