//! Python bindings. Structured results come back as plain dicts built from
//! the same JSON documents the command-line tool writes.

use bsgraph::diophantine::{self as dio, ApproxSide, DEFAULT_MAX_TERMS};
use bsgraph::floquet::{self, ScanOptions};
use bsgraph::lattice::{self, output, GapInterval};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(bsgraph, BsgraphError, PyException, "Raised when a bsgraph operation fails.");

fn err(e: impl std::fmt::Display) -> PyErr {
    BsgraphError::new_err(e.to_string())
}

fn from_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Exact real number: rational, quadratic irrational `(a+b*sqrt(d))/c`, or
/// a float with declared significant digits (`float:3.14159`).
#[pyclass(name = "ExactReal", module = "bsgraph", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyExactReal(dio::ExactReal);

#[pymethods]
impl PyExactReal {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyExactReal).map_err(err)
    }

    #[staticmethod]
    fn golden() -> Self {
        PyExactReal(dio::ExactReal::golden())
    }

    fn is_rational(&self) -> bool {
        self.0.is_rational()
    }

    fn is_exact(&self) -> bool {
        self.0.is_exact()
    }

    fn recip(&self) -> PyResult<Self> {
        self.0.checked_recip().map(PyExactReal).map_err(err)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ExactReal('{}')", self.0)
    }
}

/// Accepts an `ExactReal` or its text form.
fn exact(x: &Bound<'_, PyAny>) -> PyResult<dio::ExactReal> {
    if let Ok(v) = x.cast::<PyExactReal>() {
        return Ok(v.get().0.clone());
    }
    let text: String = x.extract().map_err(|_| PyValueError::new_err("expected ExactReal or str"))?;
    text.parse().map_err(err)
}

fn ints(v: &[BigInt]) -> Vec<BigInt> {
    v.to_vec()
}

/// `(head, period)` of the continued fraction of `x`.
#[pyfunction]
#[pyo3(signature = (x, max_terms = DEFAULT_MAX_TERMS))]
fn cf_expand(x: &Bound<'_, PyAny>, max_terms: usize) -> PyResult<(Vec<BigInt>, Vec<BigInt>)> {
    let cf = dio::cf_expand(&exact(x)?, max_terms).map_err(err)?;
    Ok((ints(cf.head()), ints(cf.period())))
}

/// First `count` convergents as `(p, q)` pairs.
#[pyfunction]
fn convergents(x: &Bound<'_, PyAny>, count: usize) -> PyResult<Vec<(BigInt, BigInt)>> {
    let cf = dio::cf_expand(&exact(x)?, DEFAULT_MAX_TERMS).map_err(err)?;
    Ok(dio::convergents(&cf, count).into_iter().map(|c| (c.p, c.q)).collect())
}

fn markov_dict<'py>(py: Python<'py>, v: &dio::MarkovValue) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", v.value)?;
    d.set_item("symbolic", v.symbolic.as_ref().map(ToString::to_string))?;
    d.set_item("uncertainty", v.uncertainty)?;
    Ok(d)
}

/// `liminf m * frac(m x)` with its exact form when available.
#[pyfunction]
fn upsilon<'py>(py: Python<'py>, x: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    markov_dict(py, &dio::upsilon(&exact(x)?).map_err(err)?)
}

/// One-sided constants `upsilon(x)`, `upsilon(1/x)` and `mu(x)`.
#[pyfunction]
fn markov_constant<'py>(py: Python<'py>, x: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let m = dio::markov_constant(&exact(x)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("upsilon_theta", markov_dict(py, &m.upsilon_theta)?)?;
    d.set_item("upsilon_theta_inv", markov_dict(py, &m.upsilon_theta_inv)?)?;
    d.set_item("mu", markov_dict(py, &m.mu)?)?;
    d.set_item("exact", m.exact)?;
    Ok(d)
}

/// Best approximations of the third kind from `side` ("below" or "above").
#[pyfunction]
fn best_approx_third_kind(x: &Bound<'_, PyAny>, side: &str, q_max: BigInt) -> PyResult<Vec<(BigInt, BigInt)>> {
    let side = match side {
        "below" => ApproxSide::Below,
        "above" => ApproxSide::Above,
        other => return Err(PyValueError::new_err(format!("side must be 'below' or 'above', got {other:?}"))),
    };
    let list = dio::best_approx_third_kind(&exact(x)?, side, &q_max).map_err(err)?;
    Ok(list.into_iter().map(|b| (b.p, b.q)).collect())
}

/// Rectangular lattice with delta couplings.
#[pyclass(name = "DeltaLattice", module = "bsgraph", frozen)]
struct PyDeltaLattice(lattice::DeltaLattice);

fn gap_dict<'py>(py: Python<'py>, g: &GapInterval) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("m", g.m)?;
    d.set_item("side", g.side.label())?;
    d.set_item("k_left", g.k_left)?;
    d.set_item("k_right", g.k_right)?;
    d.set_item("extends_below_zero", g.extends_below_zero)?;
    Ok(d)
}

#[pymethods]
impl PyDeltaLattice {
    /// `b` defaults to `a / theta`.
    #[new]
    #[pyo3(signature = (theta, alpha, a = 1.0, b = None))]
    fn new(theta: &Bound<'_, PyAny>, alpha: f64, a: f64, b: Option<f64>) -> PyResult<Self> {
        let theta = exact(theta)?;
        let lat = match b {
            Some(b) => lattice::DeltaLattice::new(a, b, alpha, theta),
            None => lattice::DeltaLattice::from_ratio(a, alpha, theta),
        };
        lat.map(PyDeltaLattice).map_err(err)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a()
    }
    #[getter]
    fn b(&self) -> f64 {
        self.0.b()
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    /// Gaps whose anchored endpoint lies below `k_max`.
    fn enumerate_gaps<'py>(&self, py: Python<'py>, k_max: f64) -> PyResult<Bound<'py, PyList>> {
        let list = lattice::enumerate_gaps(&self.0, k_max).map_err(err)?;
        let rows = list.gaps.iter().map(|g| gap_dict(py, g)).collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    /// Gap list as CSV text.
    fn gaps_csv(&self, k_max: f64) -> PyResult<String> {
        Ok(output::gaps_csv(&lattice::enumerate_gaps(&self.0, k_max).map_err(err)?))
    }

    /// Classification report as a dict.
    #[pyo3(signature = (m_horizon = 1000))]
    fn classify<'py>(&self, py: Python<'py>, m_horizon: u64) -> PyResult<Bound<'py, PyAny>> {
        let c = lattice::classify(&self.0, m_horizon).map_err(err)?;
        from_json(py, &output::classification_json(&self.0, &c))
    }

    /// Exact gap count, or `None` when the tail bound does not cover `m_horizon`.
    fn certified_gap_count(&self, m_horizon: u64) -> PyResult<Option<usize>> {
        lattice::certified_gap_count(&self.0, m_horizon).map_err(err)
    }
}

/// `A_j` of the golden-mean lattice.
#[pyfunction]
fn golden_a_j(j: u64) -> f64 {
    lattice::golden_a_j(j)
}

/// Half-open coupling window `(lower, upper)` giving exactly `n` gaps.
#[pyfunction]
#[pyo3(signature = (n, a = 1.0))]
fn golden_n_gap_window(n: u64, a: f64) -> PyResult<(f64, f64)> {
    let w = lattice::golden_n_gap_window(n, a).map_err(err)?;
    Ok((w.lower, w.upper))
}

/// Ratio with prescribed gap behaviour; scheme is "t", "1t" or "tt".
#[pyfunction]
#[pyo3(signature = (beta, t, scheme = "t"))]
fn construct_bs_ratio<'py>(py: Python<'py>, beta: &Bound<'py, PyAny>, t: u32, scheme: &str) -> PyResult<Bound<'py, PyAny>> {
    let scheme: lattice::Scheme = scheme.parse().map_err(err)?;
    let c = lattice::construct_bs_ratio(&exact(beta)?, t, scheme).map_err(err)?;
    from_json(py, &output::construction_json(&c))
}

/// Periodic unit cell with ST-form vertex couplings.
#[pyclass(name = "UnitCellGraph", module = "bsgraph", frozen)]
struct PyUnitCellGraph(floquet::UnitCellGraph);

#[pymethods]
impl PyUnitCellGraph {
    /// Parses the `bsgraph.cell.v1` text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        text.parse().map(PyUnitCellGraph).map_err(err)
    }

    #[staticmethod]
    fn rectangular_lattice(a: f64, b: f64, alpha: f64) -> PyResult<Self> {
        floquet::UnitCellGraph::rectangular_lattice(a, b, alpha).map(PyUnitCellGraph).map_err(err)
    }

    fn is_scale_invariant(&self) -> bool {
        self.0.is_scale_invariant()
    }

    /// Realified secular function at momentum `k` and quasimomentum `theta`.
    fn secular(&self, k: f64, theta: Vec<f64>) -> PyResult<f64> {
        floquet::secular(&self.0, k, &theta).map_err(err)
    }

    /// Band/gap scan over `[k_min, k_max]`, returned as a dict.
    #[pyo3(signature = (k_min, k_max, k_step, theta_resolution = 32))]
    fn band_scan<'py>(
        &self,
        py: Python<'py>,
        k_min: f64,
        k_max: f64,
        k_step: f64,
        theta_resolution: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let opts = ScanOptions { k_min, k_max, k_step, theta_resolution, ..Default::default() };
        let scan = py.detach(|| floquet::band_scan(&self.0, &opts)).map_err(err)?;
        from_json(py, &scan.to_json())
    }

    /// Momentum `k' >= k0 + c` reproducing the gap at `k0` within `epsilon`.
    #[pyo3(signature = (k0, s, epsilon, c, budget = floquet::DEFAULT_SEARCH_BUDGET))]
    fn gap_recurrence_search<'py>(
        &self,
        py: Python<'py>,
        k0: f64,
        s: f64,
        epsilon: f64,
        c: f64,
        budget: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let r = floquet::gap_recurrence_search(&self.0, k0, s, epsilon, c, budget).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("k_prime", r.k_prime)?;
        d.set_item("q", r.q)?;
        d.set_item("m", r.m)?;
        d.set_item("delta", r.delta)?;
        d.set_item("phase_error", r.phase_error)?;
        Ok(d)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pymodule]
#[pyo3(name = "bsgraph")]
pub fn bsgraph_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BsgraphError", m.py().get_type::<BsgraphError>())?;
    m.add_class::<PyExactReal>()?;
    m.add_class::<PyDeltaLattice>()?;
    m.add_class::<PyUnitCellGraph>()?;
    m.add_function(wrap_pyfunction!(cf_expand, m)?)?;
    m.add_function(wrap_pyfunction!(convergents, m)?)?;
    m.add_function(wrap_pyfunction!(upsilon, m)?)?;
    m.add_function(wrap_pyfunction!(markov_constant, m)?)?;
    m.add_function(wrap_pyfunction!(best_approx_third_kind, m)?)?;
    m.add_function(wrap_pyfunction!(golden_a_j, m)?)?;
    m.add_function(wrap_pyfunction!(golden_n_gap_window, m)?)?;
    m.add_function(wrap_pyfunction!(construct_bs_ratio, m)?)?;
    Ok(())
}
