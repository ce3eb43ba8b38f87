//! Python bindings. Field elements cross the boundary as their integer
//! indices (for prime fields, the residue itself); exact counts come back
//! as `int` and predicted terms as `fractions.Fraction`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use ffhyper_core::admissible::{is_admissible, random_symmetric_poly};
use ffhyper_core::bounds::{enumerate_b, enumerate_x, predict_envelope, slavov_count, weil_check};
use ffhyper_core::campaign::{run_verify, scan_csv, ScanConfig, VerifyConfig};
use ffhyper_core::hypergraph::{
    build_hypergraph, count_epo_charsum, count_epo_direct, count_m_subsets, omega_clique, Budget, CharSumMethod,
    HypergraphView,
};
use ffhyper_core::{parse_poly, CountReport, Error, MultiPoly, UniPoly};

create_exception!(ffhyper, FfhyperError, PyValueError);
create_exception!(ffhyper, BudgetExceeded, FfhyperError);

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        _ => FfhyperError::new_err(e.to_string()),
    }
}

fn budget(tuples: Option<u64>) -> Budget {
    let mut b = Budget::default();
    if let Some(t) = tuples {
        b.tuples = t;
    }
    b
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<PyObject> {
    let text = serde_json::to_string(v).expect("json");
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn big_int(py: Python<'_>, s: String) -> PyResult<PyObject> {
    Ok(py.import("builtins")?.getattr("int")?.call1((s,))?.unbind())
}

fn fraction(py: Python<'_>, num: impl ToString, den: impl ToString) -> PyResult<PyObject> {
    let (n, d) = (big_int(py, num.to_string())?, big_int(py, den.to_string())?);
    Ok(py.import("fractions")?.getattr("Fraction")?.call1((n, d))?.unbind())
}

fn report_dict<'py>(py: Python<'py>, r: &CountReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let dev = r.deviation();
    d.set_item("observed", big_int(py, r.observed.to_string())?)?;
    d.set_item("predicted_main", fraction(py, r.predicted_main.numer(), r.predicted_main.denom())?)?;
    d.set_item("deviation", fraction(py, dev.numer(), dev.denom())?)?;
    d.set_item("relative_deviation", r.relative_deviation())?;
    d.set_item("envelope", r.envelope)?;
    Ok(d)
}

/// A finite field of odd order.
#[pyclass(frozen, name = "Field")]
#[derive(Clone)]
struct PyField(ffhyper_core::Field);

#[pymethods]
impl PyField {
    /// `"p"`, `"q"`, `"p^n"` or `"p^n:c0,c1,...,1"`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        ffhyper_core::Field::parse(spec).map(PyField).map_err(err)
    }

    #[getter]
    fn order(&self) -> u32 {
        self.0.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    #[getter]
    fn spec(&self) -> String {
        self.0.spec_string()
    }

    fn element(&self, index: u32) -> PyResult<String> {
        Ok(self.0.format(self.0.element(index).map_err(err)?))
    }

    /// Quadratic character of the element with this index.
    fn chi(&self, index: u32) -> PyResult<i8> {
        Ok(self.0.chi(self.0.element(index).map_err(err)?))
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.0;
        Ok(f.add(f.element(a).map_err(err)?, f.element(b).map_err(err)?).index())
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.0;
        Ok(f.mul(f.element(a).map_err(err)?, f.element(b).map_err(err)?).index())
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.0.spec_string())
    }

    fn __eq__(&self, other: &PyField) -> bool {
        self.0 == other.0
    }
}

/// A polynomial in x1..xk over a field.
#[pyclass(frozen, name = "Poly")]
#[derive(Clone)]
struct PyPoly(MultiPoly);

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (field, text, k=None))]
    fn new(field: &PyField, text: &str, k: Option<usize>) -> PyResult<Self> {
        parse_poly(&field.0, text, k).map(PyPoly).map_err(err)
    }

    /// Random symmetric polynomial of degree at most `d` in `k` variables.
    #[staticmethod]
    fn random_symmetric(field: &PyField, k: usize, d: u32, seed: u64) -> PyResult<Self> {
        random_symmetric_poly(&field.0, k, d, seed).map(PyPoly).map_err(err)
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.0.nvars()
    }

    #[getter]
    fn degree(&self) -> i64 {
        self.0.total_degree()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    fn is_symmetric(&self) -> bool {
        self.0.is_symmetric()
    }

    /// Value at a point given as element indices.
    fn eval(&self, point: Vec<u32>) -> PyResult<u32> {
        if point.len() != self.0.nvars() {
            return Err(err(Error::ArityMismatch { expected: self.0.nvars(), found: point.len() }));
        }
        let f = self.0.field();
        let pt = point.iter().map(|&i| f.element(i)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        Ok(self.0.eval(&pt).map_err(err)?.index())
    }

    /// Admissibility verdict as a dict with `status` and an optional witness.
    fn admissible(&self, py: Python<'_>) -> PyResult<PyObject> {
        json_to_py(py, &is_admissible(&self.0).map_err(err)?.to_json())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}', '{}')", self.0.field().spec_string(), self.0)
    }
}

/// The hypergraph on F_q whose k-edges are the sets where f is a square.
#[pyclass(frozen, name = "Hypergraph")]
struct PyHypergraph {
    y: HypergraphView,
    budget: Budget,
}

#[pymethods]
impl PyHypergraph {
    #[new]
    #[pyo3(signature = (poly, budget_tuples=None))]
    fn new(poly: &PyPoly, budget_tuples: Option<u64>) -> PyResult<Self> {
        let budget = budget(budget_tuples);
        Ok(PyHypergraph { y: build_hypergraph(&poly.0, budget).map_err(err)?, budget })
    }

    /// Paley hypergraph, f = x1 + ... + xk.
    #[staticmethod]
    #[pyo3(signature = (field, k, budget_tuples=None))]
    fn paley(field: &PyField, k: usize, budget_tuples: Option<u64>) -> PyResult<Self> {
        let budget = budget(budget_tuples);
        Ok(PyHypergraph { y: ffhyper_core::hypergraph::paley(&field.0, k, budget).map_err(err)?, budget })
    }

    #[getter]
    fn k(&self) -> usize {
        self.y.k()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.y.order()
    }

    fn is_edge(&self, vertices: Vec<u32>) -> PyResult<bool> {
        let f = self.y.field();
        let vs = vertices.iter().map(|&i| f.element(i)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        self.y.is_edge(&vs).map_err(err)
    }

    fn edge_count(&self) -> u64 {
        self.y.edge_count()
    }

    /// Labeled even partial octahedra, counted directly.
    fn epo<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = py.allow_threads(|| count_epo_direct(&self.y, self.budget)).map_err(err)?;
        report_dict(py, &r)
    }

    /// Character-sum estimate; `method` is `"naive"` or `"factored"`.
    #[pyo3(signature = (method="factored"))]
    fn epo_charsum<'py>(&self, py: Python<'py>, method: &str) -> PyResult<Bound<'py, PyDict>> {
        let m = match method {
            "naive" => CharSumMethod::Naive,
            "factored" => CharSumMethod::Factored,
            _ => return Err(FfhyperError::new_err(format!("unknown method {method:?}"))),
        };
        let r = py.allow_threads(|| count_epo_charsum(&self.y, m, self.budget)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("s", big_int(py, r.s.to_string())?)?;
        d.set_item("estimate", fraction(py, r.estimate.numer(), r.estimate.denom())?)?;
        Ok(d)
    }

    /// m-subsets all of whose k-subsets are edges, with the error envelope.
    fn m_subsets<'py>(&self, py: Python<'py>, m: usize) -> PyResult<Bound<'py, PyDict>> {
        let r = py.allow_threads(|| count_m_subsets(&self.y, m)).map_err(err)?;
        let d = self.y.poly().total_degree().max(1) as u32;
        let env = predict_envelope(self.y.order() as u64, m, self.y.k(), d).map_err(err)?;
        let out = report_dict(py, &r)?;
        out.set_item("within_envelope", env.contains(&r.observed))?;
        Ok(out)
    }

    /// Clique number; raises `BudgetExceeded` if the search is cut short.
    #[pyo3(signature = (node_budget=50_000_000))]
    fn clique<'py>(&self, py: Python<'py>, node_budget: u64) -> PyResult<Bound<'py, PyDict>> {
        let c = py.allow_threads(|| omega_clique(&self.y, node_budget));
        if !c.exact {
            return Err(err(Error::BudgetExceeded { needed: c.nodes as u128, budget: node_budget as u128 }));
        }
        let d = PyDict::new(py);
        d.set_item("omega", c.size)?;
        d.set_item("clique", c.clique)?;
        d.set_item("nodes", c.nodes)?;
        Ok(d)
    }
}

/// `sum_x chi(a g(x))` for monic `g` given by coefficient indices, lowest
/// degree first.
#[pyfunction]
fn weil<'py>(py: Python<'py>, field: &PyField, coeffs: Vec<u32>, a: u32) -> PyResult<Bound<'py, PyDict>> {
    let f = &field.0;
    let cs = coeffs.iter().map(|&c| f.element(c)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let w = weil_check(&UniPoly::new(f, cs), f.element(a).map_err(err)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("sum", w.sum)?;
    d.set_item("s", w.s)?;
    d.set_item("applicable", w.applicable)?;
    d.set_item("holds", w.holds())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (poly, budget_tuples=None))]
fn xset<'py>(py: Python<'py>, poly: &PyPoly, budget_tuples: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let adm = is_admissible(&poly.0).map_err(err)?.is_admissible();
    let x = enumerate_x(&poly.0, adm, budget(budget_tuples)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("members", PyList::new(py, &x.members)?)?;
    d.set_item("bound", x.bound())?;
    d.set_item("y_count", x.y_count)?;
    d.set_item("z_count", x.z_count)?;
    d.set_item("constant_members", x.constant_members)?;
    d.set_item("within_bounds", x.within_bounds())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (poly, budget_tuples=None))]
fn bset<'py>(py: Python<'py>, poly: &PyPoly, budget_tuples: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let b = enumerate_b(&poly.0, budget(budget_tuples)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("members", PyList::new(py, &b.members)?)?;
    d.set_item("empirical_bound", b.empirical_bound())?;
    d.set_item("zero_products", b.zero_products)?;
    Ok(d)
}

/// Points where every polynomial is a nonzero square.
#[pyfunction]
#[pyo3(signature = (polys, budget_tuples=None))]
fn slavov<'py>(py: Python<'py>, polys: Vec<PyPoly>, budget_tuples: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let fs: Vec<MultiPoly> = polys.into_iter().map(|p| p.0).collect();
    let r = slavov_count(&fs, true, budget(budget_tuples)).map_err(err)?;
    let d = report_dict(py, &r.report)?;
    d.set_item("condition_holds", r.condition_holds())?;
    d.set_item("failing_subsets", r.failing_subsets.clone())?;
    d.set_item("within_envelope", r.within_envelope())?;
    Ok(d)
}

/// Random-polynomial scan as CSV text; identical for any worker count.
#[pyfunction]
#[pyo3(signature = (fields, seed=0, k=2, d=2, m=None, samples=50, workers=1))]
#[allow(clippy::too_many_arguments)]
fn scan(
    py: Python<'_>,
    fields: Vec<PyField>,
    seed: u64,
    k: usize,
    d: u32,
    m: Option<usize>,
    samples: usize,
    workers: usize,
) -> PyResult<String> {
    let mut cfg = ScanConfig::new(fields.into_iter().map(|f| f.0).collect(), seed);
    cfg.k = k;
    cfg.d = d;
    cfg.m = m.unwrap_or(k + 1);
    cfg.samples = samples;
    cfg.workers = workers.max(1);
    py.allow_threads(|| scan_csv(&cfg)).map_err(err)
}

/// Runs the verification suite (or the named groups) and returns its report.
#[pyfunction]
#[pyo3(signature = (only=None, seed=0))]
fn verify(py: Python<'_>, only: Option<Vec<String>>, seed: u64) -> PyResult<PyObject> {
    let cfg = VerifyConfig { only, seed, budget: Budget::default() };
    let report = py.allow_threads(|| run_verify(&cfg)).map_err(err)?;
    json_to_py(py, &report.to_json())
}

#[pymodule]
fn ffhyper(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyHypergraph>()?;
    m.add_function(wrap_pyfunction!(weil, m)?)?;
    m.add_function(wrap_pyfunction!(xset, m)?)?;
    m.add_function(wrap_pyfunction!(bset, m)?)?;
    m.add_function(wrap_pyfunction!(slavov, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("FfhyperError", m.py().get_type::<FfhyperError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    Ok(())
}
