//! Strata of the moduli space of stable tropical curves of genus `g`: the
//! finite set of stable weighted graphs, their specialization order, and
//! expansion of a stratum to a maximal (trivalent, weightless) one.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex, WeightedGraph};
use crate::iso::{canonical_code, canonical_graph};

/// The stable weighted graphs of one genus, one canonical representative
/// per isomorphism class, sorted by canonical code.
#[derive(Debug, Clone)]
pub struct StratumCatalog {
    pub genus: u64,
    pub strata: Vec<WeightedGraph>,
    pub codes: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl StratumCatalog {
    fn from_map(genus: u64, map: BTreeMap<Vec<u8>, WeightedGraph>) -> Self {
        let (codes, strata): (Vec<_>, Vec<_>) = map.into_iter().unzip();
        let index = codes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        StratumCatalog { genus, strata, codes, index }
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    /// Position of the stratum isomorphic to `g`, if any.
    pub fn index_of(&self, g: &WeightedGraph) -> Option<usize> {
        self.index.get(&canonical_code(g)).copied()
    }

    pub fn with_edges(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.strata[i].edge_count() == k).collect()
    }
}

/// All stable weighted graphs of genus `g` up to isomorphism: the
/// trivalent weightless graphs with `3g − 3` edges, closed under single
/// weighted contractions.
pub fn enumerate_stable_graphs(g: u64) -> Result<StratumCatalog> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let mut all: BTreeMap<Vec<u8>, WeightedGraph> = BTreeMap::new();
    let mut layer = trivalent_graphs(g);
    while !layer.is_empty() {
        let next: BTreeMap<Vec<u8>, WeightedGraph> = layer
            .par_iter()
            .flat_map_iter(|(_, h)| (0..h.edge_count()).map(move |e| h.contract_at(e).0))
            .map(|h| (canonical_code(&h), canonical_graph(&h)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        all.extend(std::mem::take(&mut layer));
        layer = next.into_iter().filter(|(c, _)| !all.contains_key(c)).collect();
    }
    Ok(StratumCatalog::from_map(g, all))
}

/// Connected trivalent weightless multigraphs with `2g − 2` vertices.
fn trivalent_graphs(g: u64) -> BTreeMap<Vec<u8>, WeightedGraph> {
    let n = (2 * g - 2) as usize;
    let mut raw = Vec::new();
    let mut rem = vec![3u32; n];
    let mut edges = Vec::new();
    place_vertex(0, 1, &mut rem, &mut edges, &mut raw);
    raw.par_iter()
        .map(|edges: &Vec<(usize, usize)>| WeightedGraph::from_indexed(&vec![0; n], edges))
        .filter(WeightedGraph::is_connected)
        .map(|h| (canonical_code(&h), canonical_graph(&h)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Vertices carrying a loop come first (any cubic graph can be so ordered).
fn place_vertex(
    i: usize,
    max_loops: u32,
    rem: &mut [u32],
    edges: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if i == rem.len() {
        out.push(edges.clone());
        return;
    }
    for loops in (0..=max_loops.min(rem[i] / 2)).rev() {
        rem[i] -= 2 * loops;
        for _ in 0..loops {
            edges.push((i, i));
        }
        distribute(i, i + 1, loops, rem, edges, out);
        for _ in 0..loops {
            edges.pop();
        }
        rem[i] += 2 * loops;
    }
}

fn distribute(
    i: usize,
    j: usize,
    loops: u32,
    rem: &mut [u32],
    edges: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if rem[i] == 0 {
        place_vertex(i + 1, loops, rem, edges, out);
        return;
    }
    if j == rem.len() {
        return;
    }
    let most = rem[i].min(rem[j]);
    for k in (0..=most).rev() {
        rem[i] -= k;
        rem[j] -= k;
        for _ in 0..k {
            edges.push((i, j));
        }
        distribute(i, j + 1, loops, rem, edges, out);
        for _ in 0..k {
            edges.pop();
        }
        rem[i] += k;
        rem[j] += k;
    }
}

/// Edge count against the `3g − 3` bound and the two structural
/// conditions that hold exactly when the bound is attained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trichotomy {
    pub edges: usize,
    pub bound: usize,
    pub weightless_trivalent: bool,
    pub weightless_with_2g_minus_2_vertices: bool,
}

impl Trichotomy {
    /// The three conditions agree.
    pub fn consistent(&self) -> bool {
        let at_bound = self.edges == self.bound;
        at_bound == self.weightless_trivalent && at_bound == self.weightless_with_2g_minus_2_vertices
    }
}

pub fn max_edge_trichotomy(g: &WeightedGraph) -> Result<Trichotomy> {
    g.require_stable()?;
    let genus = g.genus()? as usize;
    Ok(Trichotomy {
        edges: g.edge_count(),
        bound: 3 * genus - 3,
        weightless_trivalent: g.is_pure() && g.valencies().iter().all(|&d| d == 3),
        weightless_with_2g_minus_2_vertices: g.is_pure() && g.vertex_count() == 2 * genus - 2,
    })
}

pub fn stratum_dimension(g: &WeightedGraph) -> Result<usize> {
    g.require_stable()?;
    Ok(g.edge_count())
}

fn fresh_id(prefix: &str, taken: &mut HashSet<String>) -> String {
    let mut k = 0;
    loop {
        let id = format!("{prefix}{k}");
        if taken.insert(id.clone()) {
            return id;
        }
        k += 1;
    }
}

/// A trivalent weightless graph with `3g − 3` edges that specializes to
/// `g`, together with the ids of the edges whose contraction recovers it.
///
/// Positive weights become that many new loops; then each vertex of
/// valency `N ≥ 4` (first in vertex order) is split by a new edge, its
/// half-edges ordered by (edge, end) and the first `⌊N/2⌋` kept.
pub fn expand_to_maximal(g: &WeightedGraph) -> Result<(WeightedGraph, Vec<String>)> {
    g.require_stable()?;
    let genus = g.genus()?;
    let mut vertices: Vec<Vertex> = g.vertices().to_vec();
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut edge_ids: HashSet<String> = edges.iter().map(|e| e.id.clone()).collect();
    let mut vertex_ids: HashSet<String> = vertices.iter().map(|v| v.id.clone()).collect();
    let mut contract = Vec::new();

    for (v, vertex) in vertices.iter_mut().enumerate() {
        for _ in 0..vertex.weight {
            let id = fresh_id("x", &mut edge_ids);
            edges.push(Edge { id: id.clone(), ends: (v, v) });
            contract.push(id);
        }
        vertex.weight = 0;
    }

    loop {
        let valency = |v: usize, edges: &[Edge]| -> usize {
            edges.iter().map(|e| (e.ends.0 == v) as usize + (e.ends.1 == v) as usize).sum()
        };
        let Some(v) = (0..vertices.len()).find(|&v| valency(v, &edges) >= 4) else {
            break;
        };
        let mut half_edges = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            if e.ends.0 == v {
                half_edges.push((i, 0));
            }
            if e.ends.1 == v {
                half_edges.push((i, 1));
            }
        }
        let keep = half_edges.len() / 2;
        let u2 = vertices.len();
        vertices.push(Vertex { id: fresh_id("y", &mut vertex_ids), weight: 0 });
        for &(i, slot) in &half_edges[keep..] {
            if slot == 0 {
                edges[i].ends.0 = u2;
            } else {
                edges[i].ends.1 = u2;
            }
        }
        let id = fresh_id("x", &mut edge_ids);
        edges.push(Edge { id: id.clone(), ends: (v, u2) });
        contract.push(id);
    }

    let expanded = WeightedGraph::from_parts(vertices, edges);
    if expanded.edge_count() as u64 != 3 * genus - 3 || !expanded.is_stable()? {
        return Err(Error::Internal("expansion did not reach a maximal stratum".into()));
    }
    Ok((expanded, contract))
}

/// Cover relations `(from, to)`: stratum `to` is one contraction of `from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationPoset {
    pub nodes: usize,
    pub covers: Vec<(usize, usize)>,
}

impl SpecializationPoset {
    /// Strata that are no contraction of another (the top-dimensional ones).
    pub fn maximal(&self) -> Vec<usize> {
        let targets: HashSet<usize> = self.covers.iter().map(|c| c.1).collect();
        (0..self.nodes).filter(|i| !targets.contains(i)).collect()
    }

    /// Strata admitting no further contraction.
    pub fn minimal(&self) -> Vec<usize> {
        let sources: HashSet<usize> = self.covers.iter().map(|c| c.0).collect();
        (0..self.nodes).filter(|i| !sources.contains(i)).collect()
    }

    /// Everything reachable from `from` by covers, including `from`.
    pub fn specializations(&self, from: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([from]);
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.covers {
                if a == x && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        seen
    }

    /// Whether stratum `to` lies in the closure of stratum `from`.
    pub fn specializes(&self, from: usize, to: usize) -> bool {
        self.specializations(from).contains(&to)
    }

    pub fn is_acyclic(&self) -> bool {
        (0..self.nodes).all(|i| {
            self.covers
                .iter()
                .filter(|c| c.0 == i)
                .all(|&(_, b)| !self.specializes(b, i))
        })
    }
}

pub fn specialization_poset(catalog: &StratumCatalog) -> Result<SpecializationPoset> {
    let mut covers = BTreeSet::new();
    for (i, g) in catalog.strata.iter().enumerate() {
        for e in 0..g.edge_count() {
            let h = g.contract_at(e).0;
            let j = catalog
                .index_of(&h)
                .ok_or_else(|| Error::Internal("catalog not closed under contraction".into()))?;
            covers.insert((i, j));
        }
    }
    Ok(SpecializationPoset { nodes: catalog.len(), covers: covers.into_iter().collect() })
}
