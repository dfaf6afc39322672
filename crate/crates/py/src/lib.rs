//! Python bindings: permutations, SAT and GDLP instances, the reduction
//! chain, Benes routing and the routing formulation.

use std::collections::BTreeSet;

use gdlp::benes::BenesNetwork;
use gdlp::error::Error;
use gdlp::graphroute;
use gdlp::reduce::{self, Stage};
use gdlp::search::SearchOptions;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn options(prune: bool, budget: Option<u64>) -> SearchOptions {
    let o = if prune {
        SearchOptions::default()
    } else {
        SearchOptions::naive()
    };
    match budget {
        Some(b) => o.with_budget(b),
        None => o,
    }
}

#[pyclass(name = "Permutation", module = "gdlp", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPermutation(gdlp::Permutation);

#[pymethods]
impl PyPermutation {
    /// Parse cycle notation, e.g. `Permutation("(0 1 2)", 4)`.
    #[new]
    fn new(cycles: &str, degree: usize) -> PyResult<Self> {
        gdlp::Permutation::parse_cycles(cycles, degree).map(PyPermutation).map_err(err)
    }

    #[staticmethod]
    fn from_map(map: Vec<usize>) -> PyResult<Self> {
        gdlp::Permutation::from_map(map).map(PyPermutation).map_err(err)
    }

    #[staticmethod]
    fn identity(degree: usize) -> PyResult<Self> {
        gdlp::Permutation::identity(degree).map(PyPermutation).map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn map(&self) -> Vec<usize> {
        self.0.map().to_vec()
    }

    fn apply(&self, i: usize) -> PyResult<usize> {
        if i < self.0.degree() {
            Ok(self.0.apply(i))
        } else {
            Err(err(Error::IndexOutOfRange {
                index: i,
                degree: self.0.degree(),
            }))
        }
    }

    /// `self` applied first, then `other`.
    fn compose(&self, other: &PyPermutation) -> PyResult<Self> {
        self.0.compose(&other.0).map(PyPermutation).map_err(err)
    }

    fn __mul__(&self, other: &PyPermutation) -> PyResult<Self> {
        self.compose(other)
    }

    fn inverse(&self) -> Self {
        PyPermutation(self.0.inverse())
    }

    fn power(&self, e: u64) -> Self {
        PyPermutation(self.0.power(e))
    }

    fn order(&self) -> u64 {
        self.0.order()
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        self.0.cycles()
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn __str__(&self) -> String {
        self.0.format_cycles()
    }

    fn __repr__(&self) -> String {
        format!("Permutation({:?}, {})", self.0.format_cycles(), self.0.degree())
    }
}

#[pyclass(name = "SatInstance", module = "gdlp", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySat(gdlp::SatInstance);

#[pymethods]
impl PySat {
    #[new]
    fn new(n: usize, clauses: Vec<[usize; 3]>) -> PyResult<Self> {
        gdlp::SatInstance::new(n, clauses).map(PySat).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        gdlp::SatInstance::parse(text).map(PySat).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn clauses(&self) -> Vec<[usize; 3]> {
        self.0.clauses().to_vec()
    }

    fn eval(&self, bits: Vec<bool>) -> PyResult<bool> {
        self.0.eval(&gdlp::Assignment::new(bits)).map_err(err)
    }

    /// First satisfying assignment in counting order, or None.
    fn brute_force(&self) -> PyResult<Option<Vec<bool>>> {
        gdlp::brute_force_sat(&self.0)
            .map(|a| a.map(|a| a.bits().to_vec()))
            .map_err(err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

#[pyclass(name = "GdlpInstance", module = "gdlp", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGdlp(gdlp::GdlpInstance);

#[pymethods]
impl PyGdlp {
    /// Instance with untagged bases and khat = 1.
    #[new]
    fn new(bases: Vec<PyRef<'_, PyPermutation>>, target: &PyPermutation) -> PyResult<Self> {
        let bases = bases.iter().map(|b| b.0.clone()).collect();
        gdlp::GdlpInstance::from_plain(bases, target.0.clone())
            .map(PyGdlp)
            .map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        gdlp::GdlpInstance::parse(text).map(PyGdlp).map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn base_count(&self) -> usize {
        self.0.base_count()
    }

    fn bases(&self) -> Vec<PyPermutation> {
        self.0.bases().iter().map(|b| PyPermutation(b.perm.clone())).collect()
    }

    fn roles(&self) -> Vec<String> {
        self.0.bases().iter().map(|b| b.role.to_string()).collect()
    }

    #[getter]
    fn target(&self) -> PyPermutation {
        PyPermutation(self.0.target().clone())
    }

    /// Lexicographically smallest single-row witness, or None.
    #[pyo3(signature = (prune = true, budget = None))]
    fn decide_k1(&self, prune: bool, budget: Option<u64>) -> PyResult<Option<Vec<u64>>> {
        gdlp::decide_k1(&self.0, &options(prune, budget))
            .map(|w| w.map(|w| w.rows()[0].clone()))
            .map_err(err)
    }

    /// Whether the `k` exponent rows multiply out to the target.
    fn verify(&self, rows: Vec<Vec<u64>>) -> PyResult<bool> {
        let w = gdlp::Witness::new(rows).map_err(err)?;
        gdlp::verify_witness(&self.0, &w).map_err(err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

fn parse_stage(stage: &str) -> PyResult<Stage> {
    stage.parse().map_err(PyValueError::new_err)
}

/// Run the reduction up to `stage`; returns the instance and the stage
/// report as text.
#[pyfunction]
#[pyo3(signature = (sat, stage = "tethered"))]
fn reduce_sat(sat: &PySat, stage: &str) -> PyResult<(PyGdlp, String)> {
    let (inst, report) = reduce::full_chain(&sat.0, parse_stage(stage)?).map_err(err)?;
    Ok((PyGdlp(inst), report.to_text()))
}

type GadgetRow = (String, Vec<String>, Vec<String>);

/// Name, observed outcomes and expected outcomes of every gadget.
#[pyfunction]
fn gadget_check() -> PyResult<Vec<GadgetRow>> {
    let show = |s: &BTreeSet<gdlp::Permutation>| s.iter().map(|p| p.format_cycles()).collect();
    reduce::gadget_cases()
        .map_err(err)?
        .into_iter()
        .map(|c| {
            let got = c.outcomes().map_err(err)?;
            Ok((c.name.clone(), show(&got), show(&c.expected)))
        })
        .collect()
}

/// Switch settings routing `target` through the Benes network of its degree.
#[pyfunction]
fn benes_route(target: &PyPermutation) -> PyResult<Vec<bool>> {
    let net = BenesNetwork::build(target.0.degree()).map_err(err)?;
    net.route(&target.0).map(|s| s.bits().to_vec()).map_err(err)
}

#[pyfunction]
fn benes_realize(size: usize, settings: Vec<bool>) -> PyResult<PyPermutation> {
    let net = BenesNetwork::build(size).map_err(err)?;
    net.realize(&gdlp::benes::Settings::new(settings))
        .map(PyPermutation)
        .map_err(err)
}

/// Compile a 3-GDLP instance to a routing instance and solve it. Returns
/// the routing instance text and the paths, if any.
#[pyfunction]
#[pyo3(signature = (inst, budget = None))]
fn solve_routing(inst: &PyGdlp, budget: Option<u64>) -> PyResult<(String, Option<Vec<Vec<usize>>>)> {
    let r = graphroute::gdlp3_to_routing(&inst.0).map_err(err)?;
    let paths = graphroute::solve_routing(&r, &options(true, budget)).map_err(err)?;
    Ok((r.to_text(), paths.map(|p| p.paths)))
}

#[pymodule]
#[pyo3(name = "gdlp")]
fn gdlp_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPermutation>()?;
    m.add_class::<PySat>()?;
    m.add_class::<PyGdlp>()?;
    m.add_function(wrap_pyfunction!(reduce_sat, m)?)?;
    m.add_function(wrap_pyfunction!(gadget_check, m)?)?;
    m.add_function(wrap_pyfunction!(benes_route, m)?)?;
    m.add_function(wrap_pyfunction!(benes_realize, m)?)?;
    m.add_function(wrap_pyfunction!(solve_routing, m)?)?;
    Ok(())
}
