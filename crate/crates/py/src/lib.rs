//! Python bindings: brackets and isomorphisms on textual elements, module
//! construction from run configs, quasifiniteness verdicts and Z^2 grids.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qtorus::algebra::{bracket_l, check_identities, check_random, parse_l, GradingBasis};
use qtorus::cli::config::{BackendChoice, RunConfig};
use qtorus::cli::{functional, parse_basis, top_module, verdict_json};
use qtorus::coeff::{Exact, Prime};
use qtorus::hwmod::{
    build_hw_module_prime, build_with, growth_check, integrability_probe, Engine, TruncationParams,
};
use qtorus::isomap::{l_box, phi_aff, phi_tau};
use qtorus::quasifin::{verdict, SearchParams};
use qtorus::ztwo::{extend_z2, z2_dims, SubmoduleSpecW};

fn err(e: qtorus::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

/// A Z-grading basis (m1, m2) of Z^2 with determinant +-1.
#[pyclass(name = "Basis", frozen, from_py_object)]
#[derive(Clone)]
struct PyBasis {
    inner: GradingBasis,
}

#[pymethods]
impl PyBasis {
    #[new]
    fn new(m1: (i64, i64), m2: (i64, i64)) -> PyResult<Self> {
        Ok(PyBasis {
            inner: GradingBasis::new(m1, m2).map_err(err)?,
        })
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        Ok(PyBasis {
            inner: parse_basis(s).map_err(err)?,
        })
    }

    #[getter]
    fn m1(&self) -> (i64, i64) {
        self.inner.m1
    }

    #[getter]
    fn m2(&self) -> (i64, i64) {
        self.inner.m2
    }

    #[getter]
    fn alpha(&self) -> i64 {
        self.inner.alpha()
    }

    #[getter]
    fn m21_odd(&self) -> bool {
        self.inner.m21_odd()
    }

    /// Coordinates (j, k) of m = j m1 + k m2.
    fn coords(&self, m: (i64, i64)) -> (i64, i64) {
        self.inner.coords(m)
    }

    fn __repr__(&self) -> String {
        format!("Basis({:?}, {:?})", self.inner.m1, self.inner.m2)
    }
}

#[pyfunction]
fn bracket(x: &str, y: &str) -> PyResult<String> {
    let (x, y) = (parse_l(x).map_err(err)?, parse_l(y).map_err(err)?);
    Ok(bracket_l(&x, &y).to_string())
}

#[pyfunction(name = "phi_tau")]
fn py_phi_tau(x: &str) -> PyResult<String> {
    Ok(phi_tau(&parse_l(x).map_err(err)?).to_string())
}

#[pyfunction(name = "phi_aff")]
fn py_phi_aff(x: &str, basis: &PyBasis) -> PyResult<String> {
    let x = parse_l(x).map_err(err)?;
    Ok(phi_aff(&x, &basis.inner).map_err(err)?.to_string())
}

/// Skew symmetry, Jacobi and grading on a box plus random triples; returns
/// the number of violations of each kind.
#[pyfunction]
#[pyo3(signature = (box_bound = 1, random = 100, seed = 1, basis = None))]
fn check_jacobi<'py>(
    py: Python<'py>,
    box_bound: i64,
    random: usize,
    seed: u64,
    basis: Option<PyBasis>,
) -> PyResult<Bound<'py, PyDict>> {
    let b = basis.map_or_else(GradingBasis::standard, |b| b.inner);
    let boxed = check_identities(&l_box(box_bound), &b);
    let rnd = check_random(random, 5, seed, &b);
    let d = PyDict::new(py);
    d.set_item("triples", boxed.triples + rnd.triples)?;
    d.set_item("skew", boxed.skew_failures.len() + rnd.skew_failures.len())?;
    d.set_item(
        "jacobi",
        boxed.jacobi_failures.len() + rnd.jacobi_failures.len(),
    )?;
    d.set_item(
        "grading",
        boxed.grading_failures.len() + rnd.grading_failures.len(),
    )?;
    Ok(d)
}

/// A parsed run configuration (the same format the command line reads).
#[pyclass(name = "Config", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: RunConfig,
}

#[pymethods]
impl PyConfig {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyConfig {
            inner: RunConfig::parse(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(PyConfig {
            inner: RunConfig::from_file(&path).map_err(err)?,
        })
    }

    #[getter]
    fn basis(&self) -> PyBasis {
        PyBasis {
            inner: self.inner.basis,
        }
    }
}

enum AnyEngine {
    Exact(Engine<Exact>),
    Prime(Engine<Prime>),
}

/// Truncated irreducible highest (or lowest) weight module.
#[pyclass(name = "Module", unsendable)]
struct PyModule_ {
    engine: AnyEngine,
    backend: &'static str,
}

macro_rules! with_engine {
    ($self:expr, $e:ident => $body:expr) => {
        match &$self.engine {
            AnyEngine::Exact($e) => $body,
            AnyEngine::Prime($e) => $body,
        }
    };
}

#[pymethods]
impl PyModule_ {
    /// Builds the module a config describes. `backend` is "exact" or
    /// "prime"; window and depth override the config.
    #[new]
    #[pyo3(signature = (config, depth = None, window = None, backend = None))]
    fn new(
        config: &PyConfig,
        depth: Option<usize>,
        window: Option<i64>,
        backend: Option<&str>,
    ) -> PyResult<Self> {
        let c = &config.inner;
        let trunc = TruncationParams::new(
            window.unwrap_or(c.trunc.gen_window),
            window.unwrap_or(c.trunc.probe_window),
            depth.unwrap_or(c.trunc.max_depth),
        )
        .map_err(err)?;
        let choice = match backend {
            Some(s) => qtorus::cli::config::parse_backend(s).map_err(err)?,
            None => c.backend,
        };
        let top = top_module(c).map_err(err)?;
        Ok(match choice {
            BackendChoice::Prime => PyModule_ {
                engine: AnyEngine::Prime(
                    build_hw_module_prime(top, &c.basis, trunc, c.direction, c.seed)
                        .map_err(err)?,
                ),
                backend: "prime",
            },
            _ => PyModule_ {
                engine: AnyEngine::Exact(
                    build_with(top, &c.basis, trunc, c.direction, Exact).map_err(err)?,
                ),
                backend: "exact",
            },
        })
    }

    #[getter]
    fn backend(&self) -> &'static str {
        self.backend
    }

    /// dim V_{-s} for s = 0..depth.
    fn dims(&self) -> Vec<usize> {
        with_engine!(self, e => e.dims())
    }

    /// Commutation audit over generators in the given window; returns the
    /// failure descriptions (empty when the action is consistent).
    #[pyo3(signature = (window = 2))]
    fn audit(&self, window: i64) -> PyResult<Vec<String>> {
        let fails = with_engine!(self, e => e.audit(window)).map_err(err)?;
        Ok(fails
            .into_iter()
            .map(|f| format!("{}: {}", f.kind, f.detail))
            .collect())
    }

    /// (dims >= n holds, witness ranks as (n, rank) pairs).
    fn growth(&self) -> PyResult<(bool, Vec<(usize, usize)>)> {
        let g = with_engine!(self, e => growth_check(e)).map_err(err)?;
        Ok((g.holds, g.witness_ranks))
    }

    /// Smallest power killing the top vector, or None up to `max_power`.
    #[pyo3(signature = (m, sign = 1, v_index = 0, max_power = 3))]
    fn integrability(
        &self,
        m: (i64, i64),
        sign: i64,
        v_index: usize,
        max_power: usize,
    ) -> PyResult<Option<usize>> {
        with_engine!(self, e => integrability_probe(e, m, sign, v_index, max_power)).map_err(err)
    }
}

/// Quasifiniteness verdict for the functional of a config, as a dict.
#[pyfunction]
#[pyo3(signature = (config, max_order = None, window = None))]
fn quasifinite(
    py: Python<'_>,
    config: &PyConfig,
    max_order: Option<usize>,
    window: Option<i64>,
) -> PyResult<Py<PyAny>> {
    let c = &config.inner;
    let params = SearchParams {
        max_order: max_order.unwrap_or(c.max_order),
        window: window.unwrap_or(c.qf_window),
    };
    let v = verdict(&functional(c), params).map_err(err)?;
    json_to_py(py, &verdict_json(&v, &c.basis))
}

/// Cell dimensions dim V_{-s, r} of the Z^2-graded quotient for the config's
/// residue pattern, rows s = 0..depth, columns r = -loop_window..loop_window.
#[pyfunction]
#[pyo3(signature = (config, loop_window = 3, backend = "prime"))]
fn z2_grid(config: &PyConfig, loop_window: i64, backend: &str) -> PyResult<Vec<Vec<usize>>> {
    let c = &config.inner;
    let top = top_module(c).map_err(err)?;
    let w =
        c.w.clone()
            .unwrap_or_else(|| SubmoduleSpecW::full(top.dim()));
    let base = TruncationParams::new(c.trunc.gen_window, c.trunc.probe_window, 0).map_err(err)?;
    let grid = match qtorus::cli::config::parse_backend(backend).map_err(err)? {
        BackendChoice::Prime => {
            let e = build_hw_module_prime(top, &c.basis, base, c.direction, c.seed).map_err(err)?;
            let b = e.backend;
            z2_dims(&extend_z2(e, loop_window), &w, c.trunc, b)
                .map_err(err)?
                .0
        }
        _ => {
            let e = build_with(top, &c.basis, base, c.direction, Exact).map_err(err)?;
            z2_dims(&extend_z2(e, loop_window), &w, c.trunc, Exact)
                .map_err(err)?
                .0
        }
    };
    Ok(grid.rows)
}

/// Runs the command-line tool in-process; returns (exit code, stdout).
#[pyfunction]
fn run_cli(args: Vec<String>) -> PyResult<(i32, String)> {
    let mut argv = vec!["qtorus".to_string()];
    argv.extend(args);
    let mut out = Vec::new();
    let code = qtorus::cli::run(argv, &mut out).map_err(err)?;
    Ok((code, String::from_utf8_lossy(&out).into_owned()))
}

#[pymodule]
fn pyqtorus(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBasis>()?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PyModule_>()?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(py_phi_tau, m)?)?;
    m.add_function(wrap_pyfunction!(py_phi_aff, m)?)?;
    m.add_function(wrap_pyfunction!(check_jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(quasifinite, m)?)?;
    m.add_function(wrap_pyfunction!(z2_grid, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("SCHEMA_VERSION", qtorus::cli::SCHEMA_VERSION)?;
    Ok(())
}
