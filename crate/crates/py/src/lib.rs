//! Python bindings for `tropcurve`.

use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use tropcurve::divisors::{jacobian_group, spanning_tree_count};
use tropcurve::homology::{canonical_cycle_basis, period_matrix};
use tropcurve::io::{graph_to_dot, graph_to_value, parse_graph, to_json_text};
use tropcurve::iso::{canonical_code, find_isomorphism};
use tropcurve::moduli::{enumerate_stable_graphs, expand_to_maximal, stratum_dimension};
use tropcurve::strata::{codimension_one_elements, support_poset};
use tropcurve::torelli::{c1_sets, jacobians_isomorphic_tropical, jacobians_isomorphic_weighted};
use tropcurve::{Length, MetricGraph, TropicalCurve, WeightedGraph};

fn err(e: tropcurve::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Graph", module = "tropcurve_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: WeightedGraph,
}

#[pymethods]
impl PyGraph {
    /// `vertices`: [(id, weight)], `edges`: [(id, end, end)]
    #[new]
    fn new(vertices: Vec<(String, u32)>, edges: Vec<(String, String, String)>) -> PyResult<Self> {
        WeightedGraph::new(vertices, edges).map(|inner| PyGraph { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_graph(text).map(|d| PyGraph { inner: d.graph }).map_err(err)
    }

    fn to_json(&self) -> String {
        to_json_text(&graph_to_value(&self.inner, None))
    }

    fn to_dot(&self) -> String {
        graph_to_dot(&self.inner, None)
    }

    #[getter]
    fn vertex_ids(&self) -> Vec<String> {
        self.inner.vertices().iter().map(|v| v.id.clone()).collect()
    }

    #[getter]
    fn edge_ids(&self) -> Vec<String> {
        self.inner.edges().iter().map(|e| e.id.clone()).collect()
    }

    #[getter]
    fn weights(&self) -> Vec<u32> {
        self.inner.weights()
    }

    fn first_betti(&self) -> u64 {
        self.inner.first_betti()
    }

    fn genus(&self) -> PyResult<u64> {
        self.inner.genus().map_err(err)
    }

    fn valency(&self, vertex: &str) -> PyResult<usize> {
        self.inner.valency(vertex).map_err(err)
    }

    fn is_stable(&self) -> PyResult<bool> {
        self.inner.is_stable().map_err(err)
    }

    fn bridges(&self) -> Vec<String> {
        self.inner.bridges()
    }

    fn contract_edge(&self, edge: &str) -> PyResult<Self> {
        self.inner.contract_edge(edge).map(|(inner, _)| PyGraph { inner }).map_err(err)
    }

    fn contract_edge_set(&self, edges: Vec<String>) -> PyResult<Self> {
        self.inner.contract_edge_set(&edges).map(|inner| PyGraph { inner }).map_err(err)
    }

    fn stabilize(&self) -> PyResult<Self> {
        self.inner.stabilize().map(|inner| PyGraph { inner }).map_err(err)
    }

    fn canonical_code<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &canonical_code(&self.inner))
    }

    fn is_isomorphic(&self, other: &PyGraph) -> bool {
        find_isomorphism(&self.inner, &other.inner).is_some()
    }

    fn jacobian_group(&self) -> PyResult<Vec<u64>> {
        jacobian_group(&self.inner).map(|g| g.invariant_factors).map_err(err)
    }

    fn spanning_tree_count(&self) -> PyResult<u128> {
        spanning_tree_count(&self.inner).map_err(err)
    }

    fn stratum_dimension(&self) -> PyResult<usize> {
        stratum_dimension(&self.inner).map_err(err)
    }

    /// (maximal graph, ids of the edges to contract back)
    fn expand_to_maximal(&self) -> PyResult<(Self, Vec<String>)> {
        let (inner, set) = expand_to_maximal(&self.inner).map_err(err)?;
        Ok((PyGraph { inner }, set))
    }

    fn c1_sets(&self) -> PyResult<Vec<Vec<String>>> {
        c1_sets(&self.inner).map(|p| p.block_ids(&self.inner)).map_err(err)
    }

    fn support_poset(&self) -> PyResult<Vec<Vec<String>>> {
        support_poset(&self.inner).map(|p| p.element_ids(&self.inner)).map_err(err)
    }

    fn codimension_one_elements(&self) -> PyResult<Vec<Vec<String>>> {
        codimension_one_elements(&self.inner).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.edge_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(|V|={}, |E|={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

fn length_of(obj: &Bound<'_, PyAny>) -> PyResult<Length> {
    let text = obj.str()?.to_string();
    Length::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Curve", module = "tropcurve_py", frozen)]
struct PyCurve {
    inner: TropicalCurve,
}

#[pymethods]
impl PyCurve {
    /// Lengths in edge order: ints, decimal strings or "p/q".
    #[new]
    fn new(graph: &PyGraph, lengths: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let lengths = lengths.iter().map(length_of).collect::<PyResult<Vec<_>>>()?;
        TropicalCurve::new(graph.inner.clone(), lengths).map(|inner| PyCurve { inner }).map_err(err)
    }

    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph { inner: self.inner.graph().clone() }
    }

    #[getter]
    fn lengths(&self) -> Vec<String> {
        self.inner.lengths().iter().map(ToString::to_string).collect()
    }

    fn genus(&self) -> u64 {
        self.inner.genus()
    }

    fn stabilize(&self) -> PyResult<Self> {
        self.inner.stabilize().map(|inner| PyCurve { inner }).map_err(err)
    }

    /// Gram matrix in the canonical cycle basis, entries as exact strings.
    fn period_matrix(&self) -> PyResult<Vec<Vec<String>>> {
        let basis = canonical_cycle_basis(self.inner.graph()).map_err(err)?;
        let q = period_matrix(self.inner.lengths(), &basis);
        Ok(q.gram.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect())
    }

    fn period_determinant(&self) -> PyResult<String> {
        let basis = canonical_cycle_basis(self.inner.graph()).map_err(err)?;
        let det = period_matrix(self.inner.lengths(), &basis)
            .determinant()
            .expect("finite curve");
        Ok(tropcurve::length::format_rational(&det))
    }

    fn __repr__(&self) -> String {
        format!("Curve(genus={}, lengths={:?})", self.inner.genus(), self.lengths())
    }
}

/// Stable weighted graphs of genus `g`, one per isomorphism class.
#[pyfunction(name = "enumerate_stable_graphs")]
fn py_enumerate_stable_graphs(g: u64) -> PyResult<Vec<PyGraph>> {
    let catalog = enumerate_stable_graphs(g).map_err(err)?;
    Ok(catalog.strata.into_iter().map(|inner| PyGraph { inner }).collect())
}

#[pyfunction]
fn jacobians_isomorphic(c1: &PyCurve, c2: &PyCurve) -> PyResult<bool> {
    jacobians_isomorphic_tropical(&c1.inner, &c2.inner).map(|v| v.verdict).map_err(err)
}

#[pyfunction]
fn weighted_jacobians_isomorphic(g1: &PyGraph, g2: &PyGraph) -> PyResult<bool> {
    jacobians_isomorphic_weighted(&g1.inner, &g2.inner).map(|v| v.verdict).map_err(err)
}

/// Runs the command line in-process: (exit status, stdout, stderr).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    tropcurve::cli::run(std::iter::once("tropcurve".to_string()).chain(args))
}

#[pymodule]
fn tropcurve_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(py_enumerate_stable_graphs, m)?)?;
    m.add_function(wrap_pyfunction!(jacobians_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_jacobians_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
