//! Python bindings. Fractions cross the boundary as `fractions.Fraction`,
//! lists and committees as tuples of candidate numbers.

use agreeable_core::ballots::{self, generate};
use agreeable_core::{johnson, tally, theory};
use agreeable_core::{BallSpec, CandidateSubset, ElectionParams, Error, Rational, RawBallotFile};
use num_bigint::BigUint;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(msg) => PyIOError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    cls.call1((q.numer().clone(), q.denom().clone()))
}

fn fractions<'py>(py: Python<'py>, qs: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    qs.iter().map(|q| fraction(py, q)).collect()
}

/// Accepts `int`, `Fraction` or a `"p/q"` string.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    text.parse::<Rational>().map_err(to_py)
}

fn subset(members: Vec<u32>) -> PyResult<CandidateSubset> {
    CandidateSubset::from_members(&members).map_err(to_py)
}

fn members(s: &CandidateSubset) -> Vec<u32> {
    s.to_vec()
}

#[pyclass(name = "Params", frozen)]
struct PyParams {
    inner: ElectionParams,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(n: u32, k: u32, j: u32) -> PyResult<Self> {
        Ok(PyParams {
            inner: ElectionParams::new(n, k, j).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k
    }

    #[getter]
    fn j(&self) -> u32 {
        self.inner.j
    }

    #[getter]
    fn diameter(&self) -> u32 {
        self.inner.diameter()
    }

    fn list_count(&self) -> BigUint {
        self.inner.list_count()
    }

    fn committee_count(&self) -> BigUint {
        self.inner.committee_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(n={}, k={}, j={})",
            self.inner.n, self.inner.k, self.inner.j
        )
    }
}

/// A normalized voter distribution over `j`-lists.
#[pyclass(name = "VoterDistribution", frozen)]
struct PyDistribution {
    inner: ballots::VoterDistribution,
}

#[pymethods]
impl PyDistribution {
    /// Parses and normalizes a ballot file given as JSON text.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let raw = RawBallotFile::from_json(text).map_err(to_py)?;
        Ok(PyDistribution {
            inner: ballots::normalize(&raw).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn uniform(params: PyRef<'_, PyParams>, lists: Vec<Vec<u32>>) -> PyResult<Self> {
        let lists = lists
            .into_iter()
            .map(subset)
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyDistribution {
            inner: ballots::uniform_on(&params.inner, &lists).map_err(to_py)?,
        })
    }

    /// Uniform over the ball of `radius` about `center`.
    #[staticmethod]
    fn uniform_ball(params: PyRef<'_, PyParams>, center: Vec<u32>, radius: u32) -> PyResult<Self> {
        let spec = BallSpec::new(subset(center)?, radius, &params.inner).map_err(to_py)?;
        Ok(PyDistribution {
            inner: generate::uniform_ball(&params.inner, &spec).map_err(to_py)?,
        })
    }

    /// Ring `r` about `center` gets total weight `weights[r]`, spread evenly.
    #[staticmethod]
    fn concentric(
        params: PyRef<'_, PyParams>,
        center: Vec<u32>,
        weights: Vec<Bound<'_, PyAny>>,
    ) -> PyResult<Self> {
        let w = weights.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        let inner = ballots::concentric(&subset(center)?, &w, &params.inner).map_err(to_py)?;
        Ok(PyDistribution { inner })
    }

    #[getter]
    fn params(&self) -> PyParams {
        PyParams {
            inner: *self.inner.params(),
        }
    }

    fn support<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        for (list, w) in self.inner.support() {
            out.set_item(
                pyo3::types::PyTuple::new(py, members(list))?,
                fraction(py, w)?,
            )?;
        }
        Ok(out)
    }

    fn ring_weights<'py>(
        &self,
        py: Python<'py>,
        center: Vec<u32>,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let rw = ballots::ring_weights(&self.inner, &subset(center)?).map_err(to_py)?;
        fractions(py, &rw.weights)
    }

    fn project_concentric(&self, center: Vec<u32>) -> PyResult<PyDistribution> {
        let inner = ballots::project_concentric(&self.inner, &subset(center)?).map_err(to_py)?;
        Ok(PyDistribution { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_raw().to_json()
    }

    fn __len__(&self) -> usize {
        self.inner.support_len()
    }
}

#[pyfunction]
fn distance(a: Vec<u32>, b: Vec<u32>) -> PyResult<u32> {
    johnson::distance(&subset(a)?, &subset(b)?).map_err(to_py)
}

#[pyfunction]
fn ring_size(params: PyRef<'_, PyParams>, r: u32) -> PyResult<BigUint> {
    johnson::ring_size(&params.inner, r).map_err(to_py)
}

#[pyfunction]
fn ring(params: PyRef<'_, PyParams>, center: Vec<u32>, r: u32) -> PyResult<Vec<Vec<u32>>> {
    let lists = johnson::ring(&subset(center)?, r, &params.inner).map_err(to_py)?;
    Ok(lists.iter().map(members).collect())
}

#[pyfunction]
fn ball(params: PyRef<'_, PyParams>, center: Vec<u32>, radius: u32) -> PyResult<Vec<Vec<u32>>> {
    let spec = BallSpec::new(subset(center)?, radius, &params.inner).map_err(to_py)?;
    let lists = johnson::ball(&spec, &params.inner).map_err(to_py)?;
    Ok(lists.iter().map(members).collect())
}

#[pyfunction]
#[pyo3(signature = (dist, committee, threshold=None))]
fn approval<'py>(
    py: Python<'py>,
    dist: PyRef<'_, PyDistribution>,
    committee: Vec<u32>,
    threshold: Option<u32>,
) -> PyResult<Bound<'py, PyAny>> {
    let c = subset(committee)?;
    let q = match threshold {
        Some(s) => tally::threshold_approval(&dist.inner, &c, s),
        None => tally::approval(&dist.inner, &c),
    }
    .map_err(to_py)?;
    fraction(py, &q)
}

/// Returns `(best_value, winners, strategy)`.
#[pyfunction]
#[pyo3(signature = (dist, threshold=None))]
fn best_committees<'py>(
    py: Python<'py>,
    dist: &Bound<'py, PyDistribution>,
    threshold: Option<u32>,
) -> PyResult<(Bound<'py, PyAny>, Vec<Vec<u32>>, String)> {
    let dist = dist.get();
    let res = py
        .detach(|| tally::best_committees(&dist.inner, threshold))
        .map_err(to_py)?;
    Ok((
        fraction(py, &res.best_value)?,
        res.winners.iter().map(members).collect(),
        res.strategy_used.to_string(),
    ))
}

#[pyfunction]
fn theorem1_bound<'py>(
    py: Python<'py>,
    params: PyRef<'_, PyParams>,
) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &theory::theorem1_bound(&params.inner))
}

#[pyfunction]
fn theorem2_bound<'py>(
    py: Python<'py>,
    params: PyRef<'_, PyParams>,
    radius: u32,
) -> PyResult<Bound<'py, PyAny>> {
    fraction(
        py,
        &theory::theorem2_bound(&params.inner, radius).map_err(to_py)?,
    )
}

#[pyfunction]
fn corollary1_bound<'py>(
    py: Python<'py>,
    params: PyRef<'_, PyParams>,
    radius: u32,
    alpha: Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let a = rational(&alpha)?;
    fraction(
        py,
        &theory::corollary1_bound(&params.inner, radius, &a).map_err(to_py)?,
    )
}

/// Returns `(value, ring_weights, achieving_class)`.
#[pyfunction]
fn worst_case<'py>(
    py: Python<'py>,
    params: PyRef<'_, PyParams>,
    radius: u32,
) -> PyResult<(Bound<'py, PyAny>, Vec<Bound<'py, PyAny>>, u32)> {
    let p = params.inner;
    let wc = py
        .detach(|| theory::worst_case_concentric(&p, radius))
        .map_err(to_py)?;
    Ok((
        fraction(py, &wc.value)?,
        fractions(py, &wc.weights)?,
        wc.achieving_class,
    ))
}

/// The `b[r][m]` table as nested lists of fractions.
#[pyfunction]
fn b_coeff<'py>(
    py: Python<'py>,
    params: PyRef<'_, PyParams>,
) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    let table = theory::b_coeff(&params.inner);
    table.rows().iter().map(|row| fractions(py, row)).collect()
}

/// Returns `(passed, failures)` where each failure is `(instance, detail)`.
#[pyfunction]
fn lemma4_check(params: PyRef<'_, PyParams>) -> (bool, Vec<(String, String)>) {
    let report = theory::lemma4_check(&params.inner);
    let failures = report
        .failures()
        .map(|c| (c.instance.clone(), c.detail.clone()))
        .collect();
    (report.passed(), failures)
}

#[pymodule]
fn agreeable(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyDistribution>()?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(ring_size, m)?)?;
    m.add_function(wrap_pyfunction!(ring, m)?)?;
    m.add_function(wrap_pyfunction!(ball, m)?)?;
    m.add_function(wrap_pyfunction!(approval, m)?)?;
    m.add_function(wrap_pyfunction!(best_committees, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(theorem2_bound, m)?)?;
    m.add_function(wrap_pyfunction!(corollary1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(worst_case, m)?)?;
    m.add_function(wrap_pyfunction!(b_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(lemma4_check, m)?)?;
    Ok(())
}
