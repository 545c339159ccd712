//! Tropical curves (finite edge lengths), extended tropical curves
//! (lengths in `(0, ∞]`), and tropicalization of degeneration data.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{stabilize_by, WeightedGraph};
use crate::iso::{self, Isomorphism};
use crate::length::Length;

/// Anything carrying a weighted graph with one length per edge.
pub trait MetricGraph {
    fn graph(&self) -> &WeightedGraph;
    fn lengths(&self) -> &[Length];

    fn length(&self, edge: &str) -> Result<&Length> {
        Ok(&self.lengths()[self.graph().edge_index(edge)?])
    }

    fn is_pure(&self) -> bool {
        self.graph().is_pure()
    }
}

/// A connected weighted graph with finite positive edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalCurve {
    graph: WeightedGraph,
    lengths: Vec<Length>,
}

/// A stable weighted graph with edge lengths in `(0, ∞]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedTropicalCurve {
    graph: WeightedGraph,
    lengths: Vec<Length>,
}

impl MetricGraph for TropicalCurve {
    fn graph(&self) -> &WeightedGraph {
        &self.graph
    }
    fn lengths(&self) -> &[Length] {
        &self.lengths
    }
}

impl MetricGraph for ExtendedTropicalCurve {
    fn graph(&self) -> &WeightedGraph {
        &self.graph
    }
    fn lengths(&self) -> &[Length] {
        &self.lengths
    }
}

fn check_lengths(g: &WeightedGraph, lengths: &[Length], allow_infinite: bool) -> Result<()> {
    if lengths.len() != g.edge_count() {
        return Err(Error::Schema(format!(
            "{} lengths given for {} edges",
            lengths.len(),
            g.edge_count()
        )));
    }
    for (e, l) in g.edges().iter().zip(lengths) {
        let reason = match l {
            Length::Infinite if !allow_infinite => Some("length must be finite"),
            l if !l.is_positive() => Some("length must be positive"),
            _ => None,
        };
        if let Some(reason) = reason {
            return Err(Error::InvalidLength { edge: e.id.clone(), reason: reason.into() });
        }
    }
    Ok(())
}

fn lengths_from_map(g: &WeightedGraph, map: &BTreeMap<String, Length>) -> Result<Vec<Length>> {
    for id in map.keys() {
        g.edge_index(id)?;
    }
    g.edges()
        .iter()
        .map(|e| {
            map.get(&e.id).cloned().ok_or_else(|| Error::InvalidLength {
                edge: e.id.clone(),
                reason: "missing length".into(),
            })
        })
        .collect()
}

impl TropicalCurve {
    /// `lengths` are aligned with `graph.edges()`.
    pub fn new(graph: WeightedGraph, lengths: Vec<Length>) -> Result<Self> {
        check_lengths(&graph, &lengths, false)?;
        graph.require_connected()?;
        Ok(TropicalCurve { graph, lengths })
    }

    pub fn from_map(graph: WeightedGraph, lengths: &BTreeMap<String, Length>) -> Result<Self> {
        let l = lengths_from_map(&graph, lengths)?;
        Self::new(graph, l)
    }

    /// Every edge gets length 1.
    pub fn unit(graph: WeightedGraph) -> Result<Self> {
        let l = vec![Length::integer(1); graph.edge_count()];
        Self::new(graph, l)
    }

    pub fn genus(&self) -> u64 {
        self.graph.genus().expect("tropical curves are connected")
    }

    /// Metric stabilization: pendant edges are dropped, smoothed pairs of
    /// edges merge into one edge carrying the summed length.
    pub fn stabilize(&self) -> Result<TropicalCurve> {
        let (graph, lengths) = stabilize_by(&self.graph, Some(self.lengths.clone()), |_| 0)?;
        Ok(TropicalCurve { graph, lengths: lengths.expect("lengths carried") })
    }

    pub fn into_parts(self) -> (WeightedGraph, Vec<Length>) {
        (self.graph, self.lengths)
    }
}

impl ExtendedTropicalCurve {
    pub fn new(graph: WeightedGraph, lengths: Vec<Length>) -> Result<Self> {
        check_lengths(&graph, &lengths, true)?;
        graph.require_stable()?;
        Ok(ExtendedTropicalCurve { graph, lengths })
    }

    pub fn from_map(graph: WeightedGraph, lengths: &BTreeMap<String, Length>) -> Result<Self> {
        let l = lengths_from_map(&graph, lengths)?;
        Self::new(graph, l)
    }

    pub fn is_finite(&self) -> bool {
        self.lengths.iter().all(|l| !l.is_infinite())
    }

    /// The ordinary tropical curve, when no edge is infinitely long.
    pub fn to_finite(&self) -> Option<TropicalCurve> {
        self.is_finite()
            .then(|| TropicalCurve { graph: self.graph.clone(), lengths: self.lengths.clone() })
    }

    pub fn infinite_edges(&self) -> Vec<String> {
        self.graph
            .edges()
            .iter()
            .zip(&self.lengths)
            .filter(|(_, l)| l.is_infinite())
            .map(|(e, _)| e.id.clone())
            .collect()
    }
}

pub fn stabilize_metric(c: &TropicalCurve) -> Result<TropicalCurve> {
    c.stabilize()
}

pub fn is_pure<C: MetricGraph>(c: &C) -> bool {
    c.is_pure()
}

/// A length- and weight-preserving isomorphism between two metric graphs.
pub fn find_metric_isomorphism<A: MetricGraph, B: MetricGraph>(a: &A, b: &B) -> Option<Isomorphism> {
    iso::find_metric_isomorphism(a.graph(), a.lengths(), b.graph(), b.lengths())
}

/// Dual graph of a special fiber, with the valuation of the local equation
/// `xy = f_e` at each node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationDescriptor {
    pub graph: WeightedGraph,
    /// aligned with `graph.edges()`; `Length::Infinite` for an undeformed node
    pub valuations: Vec<Length>,
}

impl DegenerationDescriptor {
    pub fn new(graph: WeightedGraph, valuations: Vec<Length>) -> Self {
        DegenerationDescriptor { graph, valuations }
    }
}

/// Edge lengths are the node valuations; the curve is finite exactly when
/// every valuation is.
pub fn tropicalize(d: &DegenerationDescriptor) -> Result<ExtendedTropicalCurve> {
    d.graph.require_stable()?;
    if d.valuations.len() != d.graph.edge_count() {
        return Err(Error::Schema("one valuation per edge required".into()));
    }
    for (e, v) in d.graph.edges().iter().zip(&d.valuations) {
        if !v.is_positive() {
            return Err(Error::NonPositiveValuation(e.id.clone()));
        }
    }
    ExtendedTropicalCurve::new(d.graph.clone(), d.valuations.clone())
}
