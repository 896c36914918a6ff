//! Python bindings: `import mealy`.
//!
//! Words are sequences of 1-based letters. Big counts come back as Python
//! ints; verdicts and growth classes as plain dicts.

use mealy_core as core;
use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    mealy,
    MealyError,
    PyValueError,
    "Invalid input to a mealy operation."
);
create_exception!(
    mealy,
    ResourceLimitError,
    MealyError,
    "A configured cap on states, subsets or enumeration was exceeded."
);

fn to_py(e: core::Error) -> PyErr {
    use core::Error as E;
    match e {
        E::SubsetBlowup { .. }
        | E::BudgetExceeded { .. }
        | E::StateBlowup { .. }
        | E::NoConvergence { .. } => ResourceLimitError::new_err(e.to_string()),
        _ => MealyError::new_err(e.to_string()),
    }
}

/// A finite-state transformation in canonical form.
#[pyclass(
    name = "Transformation",
    module = "mealy",
    frozen,
    eq,
    hash,
    skip_from_py_object
)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyTransformation {
    inner: core::Transformation,
}

impl From<core::Transformation> for PyTransformation {
    fn from(inner: core::Transformation) -> Self {
        PyTransformation { inner }
    }
}

#[pymethods]
impl PyTransformation {
    /// From a transition table: `targets[q][x-1]` is the 0-based successor
    /// and `outputs[q][x-1]` the 1-based output of state `q` on letter `x`.
    #[new]
    #[pyo3(signature = (alphabet_size, targets, outputs, root = 0))]
    fn new(
        alphabet_size: usize,
        targets: Vec<Vec<usize>>,
        outputs: Vec<Vec<usize>>,
        root: usize,
    ) -> PyResult<Self> {
        if alphabet_size == 0 {
            return Err(MealyError::new_err("alphabet must be nonempty"));
        }
        if targets.len() != outputs.len() {
            return Err(MealyError::new_err("targets and outputs differ in length"));
        }
        let mut m = core::MealyMachine::new(alphabet_size);
        for (q, (t, o)) in targets.iter().zip(&outputs).enumerate() {
            m.add_state(format!("q{q}"), t, o).map_err(to_py)?;
        }
        Ok(m.canonicalize(root).map_err(to_py)?.into())
    }

    #[staticmethod]
    fn identity(alphabet_size: usize) -> PyResult<Self> {
        if alphabet_size == 0 {
            return Err(MealyError::new_err("alphabet must be nonempty"));
        }
        Ok(core::Transformation::identity(alphabet_size).into())
    }

    #[getter]
    fn alphabet_size(&self) -> usize {
        self.inner.alphabet_size()
    }

    #[getter]
    fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn apply(&self, word: Vec<usize>) -> PyResult<Vec<usize>> {
        self.inner.apply(&word).map_err(to_py)
    }

    fn section(&self, word: Vec<usize>) -> PyResult<Self> {
        Ok(self.inner.section(&word).map_err(to_py)?.into())
    }

    /// `self` first, then `other`.
    fn compose(&self, other: &Self) -> PyResult<Self> {
        Ok(self.inner.compose(&other.inner).map_err(to_py)?.into())
    }

    fn power(&self, n: u64) -> Self {
        self.inner.power(n).into()
    }

    fn equal(&self, other: &Self) -> PyResult<bool> {
        self.inner.equal(&other.inner).map_err(to_py)
    }

    fn serialize(&self) -> String {
        self.inner.serialize()
    }

    /// Wreath-recursion text with the root called `name`.
    #[pyo3(signature = (name = "t"))]
    fn to_wreath(&self, name: &str) -> String {
        core::print_wreath(&self.inner, name, &mut core::Namer::new())
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.compose(other)
    }

    fn __pow__(&self, n: u64, _modulo: Option<u64>) -> Self {
        self.power(n)
    }

    fn __repr__(&self) -> String {
        format!(
            "<Transformation k={} states={}>",
            self.inner.alphabet_size(),
            self.inner.state_count()
        )
    }
}

/// Named transformations parsed from wreath-recursion text.
#[pyclass(name = "AutomatonSet", module = "mealy", frozen)]
pub struct PyAutomatonSet {
    inner: core::AutomatonSet,
}

#[pymethods]
impl PyAutomatonSet {
    #[getter]
    fn alphabet_size(&self) -> usize {
        self.inner.alphabet_size()
    }

    /// Declared names in declaration order.
    fn names(&self) -> Vec<String> {
        self.inner.names().map(str::to_string).collect()
    }

    #[getter]
    fn main(&self) -> Option<String> {
        self.inner.main().map(str::to_string)
    }

    /// `main` if declared, otherwise the first equation.
    #[getter]
    fn default_name(&self) -> String {
        self.inner.default_name().to_string()
    }

    fn __getitem__(&self, name: &str) -> PyResult<PyTransformation> {
        Ok(self.inner.resolve(name).map_err(to_py)?.into())
    }

    fn __contains__(&self, name: &str) -> bool {
        self.inner.resolve(name).is_ok()
    }

    fn __len__(&self) -> usize {
        self.inner.names().count()
    }

    /// Wreath recursion of `t`, naming states after this set's equations.
    fn print(&self, t: &PyTransformation, root_name: &str) -> String {
        core::print_wreath(&t.inner, root_name, &mut self.inner.namer())
    }
}

#[pyfunction]
fn parse_wreath(text: &str) -> PyResult<PyAutomatonSet> {
    Ok(PyAutomatonSet {
        inner: core::parse_wreath(text).map_err(to_py)?,
    })
}

#[pyfunction]
fn apply(t: &PyTransformation, word: Vec<usize>) -> PyResult<Vec<usize>> {
    t.apply(word)
}

#[pyfunction]
fn section(t: &PyTransformation, word: Vec<usize>) -> PyResult<PyTransformation> {
    t.section(word)
}

#[pyfunction]
fn compose(s: &PyTransformation, t: &PyTransformation) -> PyResult<PyTransformation> {
    s.compose(t)
}

#[pyfunction]
fn power(t: &PyTransformation, n: u64) -> PyTransformation {
    t.power(n)
}

#[pyfunction]
fn equal(s: &PyTransformation, t: &PyTransformation) -> PyResult<bool> {
    s.equal(t)
}

#[pyfunction]
fn activity(t: &PyTransformation, n: usize) -> PyResult<BigUint> {
    core::activity(&t.inner, n).map_err(to_py)
}

/// `[α(1), …, α(upto)]`.
#[pyfunction]
fn activity_series(t: &PyTransformation, upto: usize) -> PyResult<Vec<BigUint>> {
    core::activity_series(&t.inner, upto, &core::ActivityConfig::default()).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (t, n, budget = 1_000_000))]
fn brute_force_activity(t: &PyTransformation, n: usize, budget: u128) -> PyResult<BigUint> {
    core::brute_force_activity(&t.inner, n, budget).map_err(to_py)
}

fn class_dict<'py>(py: Python<'py>, class: core::GrowthClass) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("label", class.to_string())?;
    match class {
        core::GrowthClass::Polynomial { degree } => {
            d.set_item("kind", "polynomial")?;
            d.set_item("degree", degree)?;
        }
        core::GrowthClass::Exponential { lambda, rate } => {
            d.set_item("kind", "exponential")?;
            d.set_item("lambda", lambda)?;
            d.set_item("rate", rate)?;
        }
    }
    Ok(d)
}

/// `{"kind": "polynomial", "degree": d}` or
/// `{"kind": "exponential", "lambda": λ, "rate": ln λ}`, plus a `label`.
#[pyfunction]
fn classify<'py>(py: Python<'py>, t: &PyTransformation) -> PyResult<Bound<'py, PyDict>> {
    class_dict(py, core::classify(&t.inner).map_err(to_py)?)
}

/// `(lambda, lower, upper)`; `lambda` is 1 for polynomial growth.
#[pyfunction]
#[pyo3(signature = (t, precision = 1e-9))]
fn growth_rate(t: &PyTransformation, precision: f64) -> PyResult<(f64, f64, f64)> {
    let g = core::growth_rate(&t.inner, precision).map_err(to_py)?;
    Ok((g.lambda, g.lower, g.upper))
}

/// The order verdict as a dict with `verdict` one of `"finite"`,
/// `"infinite"`, `"inconclusive"`.
#[pyfunction]
#[pyo3(signature = (t, max_vertices = 10_000, max_vertex_states = 20_000, exact = true))]
fn decide_order<'py>(
    py: Python<'py>,
    t: &PyTransformation,
    max_vertices: usize,
    max_vertex_states: usize,
    exact: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let config = core::OrderConfig {
        max_vertices,
        max_vertex_states,
        exact_index: exact,
        ..core::OrderConfig::default()
    };
    let report = core::decide_order(&t.inner, &config);
    let d = PyDict::new(py);
    d.set_item("vertices", report.graph.vertices().len())?;
    d.set_item("complete", report.graph.is_complete())?;
    match report.verdict {
        core::OrderVerdict::Infinite { witness, .. } => {
            d.set_item("verdict", "infinite")?;
            d.set_item("witness", (witness.letter, witness.index, witness.period))?;
        }
        core::OrderVerdict::Finite {
            period,
            index_lower,
            index_upper,
            exact_index,
        } => {
            d.set_item("verdict", "finite")?;
            d.set_item("period", period)?;
            d.set_item("index_lower", index_lower)?;
            d.set_item("index_upper", index_upper)?;
            d.set_item("index", exact_index)?;
        }
        core::OrderVerdict::Inconclusive { vertices_explored } => {
            d.set_item("verdict", "inconclusive")?;
            d.set_item("vertices_explored", vertices_explored)?;
        }
    }
    Ok(d)
}

/// `(index, period)` with `t^index = t^(index+period)`, index ≥ 1, when the
/// index is at most `max_index` and the period divides `period_hint`.
#[pyfunction]
#[pyo3(signature = (t, period_hint, max_index = 100_000, state_cap = 100_000))]
fn power_oracle(
    t: &PyTransformation,
    period_hint: u64,
    max_index: u64,
    state_cap: usize,
) -> PyResult<Option<(u64, u64)>> {
    if period_hint == 0 {
        return Err(MealyError::new_err("period hint must be positive"));
    }
    let found = core::power_oracle(&t.inner, period_hint, max_index, state_cap).map_err(to_py)?;
    Ok(found.map(|c| (c.index, c.period)))
}

#[pymodule]
fn mealy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MealyError", m.py().get_type::<MealyError>())?;
    m.add(
        "ResourceLimitError",
        m.py().get_type::<ResourceLimitError>(),
    )?;
    m.add_class::<PyTransformation>()?;
    m.add_class::<PyAutomatonSet>()?;
    m.add_function(wrap_pyfunction!(parse_wreath, m)?)?;
    m.add_function(wrap_pyfunction!(apply, m)?)?;
    m.add_function(wrap_pyfunction!(section, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(power, m)?)?;
    m.add_function(wrap_pyfunction!(equal, m)?)?;
    m.add_function(wrap_pyfunction!(activity, m)?)?;
    m.add_function(wrap_pyfunction!(activity_series, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_activity, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(growth_rate, m)?)?;
    m.add_function(wrap_pyfunction!(decide_order, m)?)?;
    m.add_function(wrap_pyfunction!(power_oracle, m)?)?;
    Ok(())
}
